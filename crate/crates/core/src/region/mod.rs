//! Conjugate-symmetric regions of the extended complex plane.
//!
//! A [`Region`] is a union of [`RegionPrimitive`]s plus a flag for the point
//! at infinity. Every operation returns an *outer* approximation of the exact
//! set and records the approximation slack in [`Region::resolution`], so any
//! distance measured between regions can only under-estimate the true
//! separation.
//!
//! Finite computations are confined to the annulus
//! `1/truncation <= |z| <= truncation`; the origin and infinity are tracked
//! symbolically. Slack is measured inside the window `|z| <= WINDOW`, where
//! margins are read off. Pieces outside the window are still outer but may be
//! coarser.

pub(crate) mod geom;
mod hyperbolic;
mod ops;
mod profile;

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SrgError};

pub use geom::{convex_hull, Piece};
pub use hyperbolic::{h_convex_hull, hyperbolic_hull_with, HullMode};
pub use ops::{
    chord_closure, distance, distance_to_point, intersects, invert, minkowski_product,
    minkowski_sum, radial_hull, Distance,
};

/// Slack bookkeeping window, in gain units.
pub const WINDOW: f64 = 100.0;

/// Resolution and truncation used by region operations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Precision {
    /// Target outer-approximation slack.
    pub resolution: f64,
    /// Radius of the truncation disc; `1/truncation` is the inner radius.
    pub truncation: f64,
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            resolution: 1e-3,
            truncation: 1e6,
        }
    }
}

impl Precision {
    pub fn new(resolution: f64, truncation: f64) -> Self {
        Self {
            resolution,
            truncation,
        }
    }

    pub fn inner_radius(&self) -> f64 {
        1.0 / self.truncation
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `Re z >= c`
    Ge,
    /// `Re z <= c`
    Le,
}

impl Side {
    fn flip(self) -> Side {
        match self {
            Side::Ge => Side::Le,
            Side::Le => Side::Ge,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RegionPrimitive {
    Disc {
        center: C64,
        radius: f64,
    },
    HalfPlaneRe {
        c: f64,
        side: Side,
    },
    Segment {
        a: C64,
        b: C64,
    },
    ConvexPolygon {
        vertices: Vec<C64>,
    },
    /// `{ r·e^{jθ} : ln r ∈ log_modulus, θ ∈ argument }`.
    LogPolarBox {
        log_modulus: (f64, f64),
        argument: (f64, f64),
    },
    PointSet {
        points: Vec<C64>,
        #[serde(default)]
        dilation: f64,
    },
}

impl RegionPrimitive {
    pub fn log_polar_box(r_min: f64, r_max: f64, arg_lo: f64, arg_hi: f64) -> Self {
        RegionPrimitive::LogPolarBox {
            log_modulus: (r_min.ln(), r_max.ln()),
            argument: (arg_lo, arg_hi),
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, RegionPrimitive::HalfPlaneRe { .. })
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(SrgError::InvalidExpr(format!("region primitive: {m}")));
        let finite = |z: &C64| z.re.is_finite() && z.im.is_finite();
        match self {
            RegionPrimitive::Disc { center, radius } => {
                if !finite(center) || !(*radius >= 0.0 && radius.is_finite()) {
                    return bad("disc needs a finite center and nonnegative radius");
                }
            }
            RegionPrimitive::HalfPlaneRe { c, .. } => {
                if !c.is_finite() {
                    return bad("half-plane offset must be finite");
                }
            }
            RegionPrimitive::Segment { a, b } => {
                if !finite(a) || !finite(b) {
                    return bad("segment endpoints must be finite");
                }
            }
            RegionPrimitive::ConvexPolygon { vertices } => {
                if vertices.is_empty() || !vertices.iter().all(finite) {
                    return bad("polygon needs finite vertices");
                }
            }
            RegionPrimitive::LogPolarBox {
                log_modulus: (lo, hi),
                argument: (a, b),
            } => {
                if !(lo <= hi) || !hi.is_finite() || lo.is_nan() {
                    return bad("log-modulus interval must be ordered");
                }
                if !(a <= b) || b - a > 2.0 * PI + 1e-12 || !a.is_finite() || !b.is_finite() {
                    return bad("argument interval must be ordered and at most 2π wide");
                }
            }
            RegionPrimitive::PointSet { points, dilation } => {
                if !points.iter().all(finite) || !(*dilation >= 0.0 && dilation.is_finite()) {
                    return bad("point set needs finite points and nonnegative dilation");
                }
            }
        }
        Ok(())
    }

    fn conj(&self) -> RegionPrimitive {
        use RegionPrimitive::*;
        match self {
            Disc { center, radius } => Disc {
                center: center.conj(),
                radius: *radius,
            },
            HalfPlaneRe { .. } => self.clone(),
            Segment { a, b } => Segment {
                a: a.conj(),
                b: b.conj(),
            },
            ConvexPolygon { vertices } => ConvexPolygon {
                vertices: vertices.iter().rev().map(|z| z.conj()).collect(),
            },
            LogPolarBox {
                log_modulus,
                argument: (a, b),
            } => LogPolarBox {
                log_modulus: *log_modulus,
                argument: (-b, -a),
            },
            PointSet { points, dilation } => PointSet {
                points: points.iter().map(|z| z.conj()).collect(),
                dilation: *dilation,
            },
        }
    }

    /// Bit-level identity used to deduplicate mirrored primitives.
    fn key(&self) -> Vec<u64> {
        use RegionPrimitive::*;
        let bits = |x: f64| (x + 0.0).to_bits();
        let mut k = Vec::new();
        let mut push = |z: C64| k.extend([bits(z.re), bits(z.im)]);
        match self {
            Disc { center, radius } => {
                push(*center);
                push(C64::new(*radius, 0.0));
            }
            HalfPlaneRe { c, side } => push(C64::new(*c, if *side == Side::Ge { 1.0 } else { -1.0 })),
            Segment { a, b } => {
                push(*a);
                push(*b);
            }
            ConvexPolygon { vertices } => vertices.iter().for_each(|&z| push(z)),
            LogPolarBox {
                log_modulus: (l, h),
                argument: (a, b),
            } => {
                push(C64::new(*l, *h));
                push(C64::new(*a, *b));
            }
            PointSet { points, dilation } => {
                push(C64::new(*dilation, 0.0));
                points.iter().for_each(|&z| push(z));
            }
        }
        let tag = std::mem::discriminant(self);
        let mut h = std::collections::hash_map::DefaultHasher::new();
        std::hash::Hash::hash(&tag, &mut h);
        k.push(std::hash::Hasher::finish(&h));
        k
    }

    fn is_self_symmetric(&self) -> bool {
        use RegionPrimitive::*;
        let tol = 1e-12;
        let closed = |pts: &[C64]| {
            if pts.len() > 64 {
                let mut sorted: Vec<C64> = pts.to_vec();
                sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
                return pts.iter().all(|p| {
                    let m = p.conj();
                    let i = sorted.partition_point(|q| q.re < m.re - tol * (1.0 + m.norm()));
                    sorted[i..]
                        .iter()
                        .take_while(|q| q.re <= m.re + tol * (1.0 + m.norm()))
                        .any(|q| (q - m).norm() <= tol * (1.0 + m.norm()))
                });
            }
            pts.iter()
                .all(|p| pts.iter().any(|q| (q - p.conj()).norm() <= tol * (1.0 + p.norm())))
        };
        match self {
            Disc { center, .. } => center.im.abs() <= tol,
            HalfPlaneRe { .. } => true,
            Segment { a, b } => {
                (a.conj() - b).norm() <= tol * (1.0 + a.norm())
                    || (a.im.abs() <= tol && b.im.abs() <= tol)
            }
            ConvexPolygon { vertices } => closed(&geom::convex_hull(vertices)),
            LogPolarBox { argument: (a, b), .. } => {
                (a + b).abs() <= tol || b - a >= 2.0 * PI - tol
            }
            PointSet { points, .. } => closed(points),
        }
    }
}

/// Union of primitives, optionally containing the point at infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RegionDoc", into = "RegionDoc")]
pub struct Region {
    primitives: Vec<RegionPrimitive>,
    contains_infinity: bool,
    resolution: f64,
}

#[derive(Serialize, Deserialize)]
struct RegionDoc {
    #[serde(default = "schema_version")]
    schema_version: u32,
    primitives: Vec<RegionPrimitive>,
    #[serde(default)]
    contains_infinity: bool,
    #[serde(default)]
    resolution: f64,
}

fn schema_version() -> u32 {
    crate::SCHEMA_VERSION
}

impl TryFrom<RegionDoc> for Region {
    type Error = SrgError;

    fn try_from(doc: RegionDoc) -> Result<Self> {
        if doc.schema_version != crate::SCHEMA_VERSION {
            return Err(SrgError::Parse(format!(
                "unsupported region schema_version {}",
                doc.schema_version
            )));
        }
        if !(doc.resolution >= 0.0 && doc.resolution.is_finite()) {
            return Err(SrgError::Parse("resolution must be finite and >= 0".into()));
        }
        for p in &doc.primitives {
            p.validate()?;
        }
        Ok(Region::symmetric(doc.primitives, doc.contains_infinity, doc.resolution))
    }
}

impl From<Region> for RegionDoc {
    fn from(r: Region) -> Self {
        RegionDoc {
            schema_version: crate::SCHEMA_VERSION,
            primitives: r.primitives,
            contains_infinity: r.contains_infinity,
            resolution: r.resolution,
        }
    }
}

impl Region {
    /// Builds a region from primitives that are already closed under conjugation.
    pub(crate) fn from_parts(
        primitives: Vec<RegionPrimitive>,
        contains_infinity: bool,
        resolution: f64,
    ) -> Self {
        Self {
            primitives,
            contains_infinity,
            resolution,
        }
    }

    /// Builds a region, mirroring every primitive that is not its own conjugate.
    pub fn symmetric(
        primitives: Vec<RegionPrimitive>,
        contains_infinity: bool,
        resolution: f64,
    ) -> Self {
        let mut seen: std::collections::HashSet<Vec<u64>> =
            primitives.iter().map(|p| p.key()).collect();
        let mut out = Vec::with_capacity(primitives.len());
        for p in primitives {
            if p.is_self_symmetric() {
                out.push(p);
            } else {
                let m = p.conj();
                out.push(p);
                if seen.insert(m.key()) {
                    out.push(m);
                }
            }
        }
        Self::from_parts(out, contains_infinity, resolution)
    }

    pub fn empty() -> Self {
        Self::from_parts(Vec::new(), false, 0.0)
    }

    pub fn infinity() -> Self {
        Self::from_parts(Vec::new(), true, 0.0)
    }

    pub fn disc(center: C64, radius: f64) -> Self {
        Self::symmetric(vec![RegionPrimitive::Disc { center, radius }], false, 0.0)
    }

    pub fn point(z: C64) -> Self {
        Self::points(&[z])
    }

    pub fn real_point(x: f64) -> Self {
        Self::point(C64::new(x, 0.0))
    }

    pub fn points(zs: &[C64]) -> Self {
        Self::dilated_points(zs, 0.0)
    }

    pub fn dilated_points(zs: &[C64], dilation: f64) -> Self {
        let mut seen = std::collections::HashSet::with_capacity(2 * zs.len());
        let mut pts: Vec<C64> = Vec::with_capacity(2 * zs.len());
        for &z in zs {
            for w in [z, z.conj()] {
                // -0.0 and 0.0 are the same point
                let key = ((w.re + 0.0).to_bits(), (w.im + 0.0).to_bits());
                if seen.insert(key) {
                    pts.push(w);
                }
            }
        }
        Self::from_parts(
            vec![RegionPrimitive::PointSet {
                points: pts,
                dilation,
            }],
            false,
            0.0,
        )
    }

    pub fn half_plane(c: f64, side: Side) -> Self {
        Self::from_parts(vec![RegionPrimitive::HalfPlaneRe { c, side }], false, 0.0)
    }

    pub fn segment(a: C64, b: C64) -> Self {
        Self::symmetric(vec![RegionPrimitive::Segment { a, b }], false, 0.0)
    }

    pub fn polygon(vertices: &[C64]) -> Self {
        let hull = geom::convex_hull(vertices);
        Self::symmetric(vec![hull_to_primitive(hull)], false, 0.0)
    }

    pub fn log_polar_box(r_min: f64, r_max: f64, arg_lo: f64, arg_hi: f64) -> Self {
        Self::symmetric(
            vec![RegionPrimitive::log_polar_box(r_min, r_max, arg_lo, arg_hi)],
            false,
            0.0,
        )
    }

    pub fn with_infinity(mut self, flag: bool) -> Self {
        self.contains_infinity = flag;
        self
    }

    pub fn with_resolution(mut self, resolution: f64) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn primitives(&self) -> &[RegionPrimitive] {
        &self.primitives
    }

    pub fn contains_infinity(&self) -> bool {
        self.contains_infinity
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn is_empty(&self) -> bool {
        self.primitives.is_empty() && !self.contains_infinity
    }

    pub fn is_bounded(&self) -> bool {
        !self.contains_infinity && self.primitives.iter().all(|p| p.is_bounded())
    }

    /// Union of two regions; slack is the larger of the two.
    pub fn union(&self, other: &Region) -> Region {
        let mut prims = self.primitives.clone();
        prims.extend(other.primitives.iter().cloned());
        Region::from_parts(
            prims,
            self.contains_infinity || other.contains_infinity,
            self.resolution.max(other.resolution),
        )
    }

    /// Collapses repeated `{0}` point sets into one.
    pub(crate) fn dedup_origin(&mut self) {
        let zero = RegionPrimitive::PointSet {
            points: vec![C64::new(0.0, 0.0)],
            dilation: 0.0,
        };
        let mut seen = false;
        self.primitives.retain(|p| {
            if *p == zero {
                if seen {
                    return false;
                }
                seen = true;
            }
            true
        });
    }

    /// Flattens the region into geometric pieces at the given precision.
    pub fn pieces(&self, prec: &Precision) -> Vec<Piece> {
        let mut out = Vec::new();
        for p in &self.primitives {
            primitive_pieces(p, prec, &mut out);
        }
        out
    }

    /// Membership test, exact on primitives up to `1e-9` relative tolerance.
    pub fn contains(&self, z: C64) -> bool {
        let tol = 1e-9 * (1.0 + z.norm());
        self.primitives.iter().any(|p| primitive_contains(p, z, tol))
    }

    /// Membership after dilating the region by `delta`.
    pub fn contains_dilated(&self, z: C64, delta: f64) -> bool {
        if self.contains(z) {
            return true;
        }
        let prec = Precision::new(delta.max(1e-9) * 0.25, 1e6);
        self.pieces(&prec)
            .iter()
            .any(|p| p.point_distance(z).0 <= delta + 1e-12)
    }

    /// Index for many membership queries; pieces are built once at `prec`.
    pub fn index(&self, prec: &Precision) -> RegionIndex {
        RegionIndex::new(self, prec)
    }

    /// Largest modulus; infinite for unbounded regions, zero for the empty region.
    pub fn max_modulus(&self) -> f64 {
        if self.contains_infinity {
            return f64::INFINITY;
        }
        self.primitives
            .iter()
            .map(primitive_max_modulus)
            .fold(0.0, f64::max)
    }

    /// Smallest modulus of any point of the region.
    pub fn min_modulus(&self) -> f64 {
        let prec = Precision::default();
        self.pieces(&prec)
            .iter()
            .map(|p| p.min_modulus())
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest `|z|` along the ray `arg z = psi` (zero if the ray misses).
    pub fn radial_extent(&self, psi: f64) -> f64 {
        let prec = Precision::default();
        let dir = C64::from_polar(1.0, psi);
        let mut best: f64 = 0.0;
        for p in &self.primitives {
            if let RegionPrimitive::LogPolarBox {
                log_modulus: (_, hi),
                argument: (a, b),
            } = p
            {
                if arg_in(psi, *a, *b, 1e-12) {
                    best = best.max(hi.exp());
                }
                continue;
            }
            let mut pieces = Vec::new();
            primitive_pieces(p, &prec, &mut pieces);
            for piece in pieces {
                best = best.max(ray_extent(&piece, dir, prec.truncation));
            }
        }
        best
    }

    /// Smallest real part of the region.
    pub fn min_re(&self) -> f64 {
        self.primitives
            .iter()
            .map(|p| primitive_re_extent(p).0)
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest real part of the region.
    pub fn max_re(&self) -> f64 {
        self.primitives
            .iter()
            .map(|p| primitive_re_extent(p).1)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Exact image `{αz}`. Non-real `α` yields `αA ∪ conj(α)A` to stay symmetric.
    pub fn scale(&self, alpha: C64) -> Region {
        if alpha == C64::new(0.0, 0.0) {
            if self.is_empty() {
                return Region::empty();
            }
            return Region::real_point(0.0);
        }
        let mut prims: Vec<RegionPrimitive> = self
            .primitives
            .iter()
            .flat_map(|p| scale_primitive(p, alpha))
            .collect();
        if alpha.im != 0.0 {
            let mirror: Vec<RegionPrimitive> = self
                .primitives
                .iter()
                .flat_map(|p| scale_primitive(p, alpha.conj()))
                .collect();
            prims.extend(mirror);
        }
        Region::from_parts(prims, self.contains_infinity, self.resolution * alpha.norm())
    }

    pub fn neg(&self) -> Region {
        self.scale(C64::new(-1.0, 0.0))
    }

    /// Exact translate by `p` (the result is not mirrored; pair with `conj(p)`).
    pub(crate) fn translate_primitives(&self, p: C64, prec: &Precision) -> Vec<RegionPrimitive> {
        self.primitives
            .iter()
            .flat_map(|q| translate_primitive(q, p, prec))
            .collect()
    }

    /// Outer dilation by `delta`.
    pub fn dilate(&self, delta: f64, prec: &Precision) -> Region {
        if delta <= 0.0 {
            return self.clone();
        }
        let n = geom::polygon_sides(delta, prec.resolution * 0.25);
        let ball = geom::circumscribed_polygon(C64::new(0.0, 0.0), delta, n);
        let slack = geom::circumscribed_slack(delta, n);
        let mut prims = Vec::new();
        for p in &self.primitives {
            match p {
                RegionPrimitive::Disc { center, radius } => prims.push(RegionPrimitive::Disc {
                    center: *center,
                    radius: radius + delta,
                }),
                RegionPrimitive::HalfPlaneRe { c, side } => {
                    let c = match side {
                        Side::Ge => c - delta,
                        Side::Le => c + delta,
                    };
                    prims.push(RegionPrimitive::HalfPlaneRe { c, side: *side })
                }
                RegionPrimitive::PointSet { points, dilation } => {
                    prims.push(RegionPrimitive::PointSet {
                        points: points.clone(),
                        dilation: dilation + delta,
                    })
                }
                other => {
                    let mut pieces = Vec::new();
                    primitive_pieces(other, prec, &mut pieces);
                    for piece in pieces {
                        if let Some((poly, _)) = piece.outer_polygon(prec.resolution * 0.25) {
                            let sums: Vec<C64> = poly
                                .iter()
                                .flat_map(|v| ball.iter().map(move |b| v + b))
                                .collect();
                            prims.push(hull_to_primitive(geom::convex_hull(&sums)));
                        }
                    }
                }
            }
        }
        Region::from_parts(prims, self.contains_infinity, self.resolution + slack)
    }

    /// Uniform-ish random points from the region's bounded primitives.
    /// Half-planes are sampled on a `10 × 20` patch next to their boundary.
    pub fn sample_points<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<C64> {
        if self.primitives.is_empty() {
            return Vec::new();
        }
        (0..n)
            .map(|_| {
                let p = &self.primitives[rng.random_range(0..self.primitives.len())];
                sample_primitive(p, rng)
            })
            .collect()
    }

    /// Checks closure under conjugation on `n` random samples.
    pub fn is_conjugate_symmetric<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> bool {
        self.sample_points(n, rng)
            .into_iter()
            .all(|z| self.contains_dilated(z.conj(), 1e-9 * (1.0 + z.norm())))
    }
}

pub(crate) fn hull_to_primitive(hull: Vec<C64>) -> RegionPrimitive {
    match hull.len() {
        1 => RegionPrimitive::PointSet {
            points: hull,
            dilation: 0.0,
        },
        2 => RegionPrimitive::Segment {
            a: hull[0],
            b: hull[1],
        },
        _ => RegionPrimitive::ConvexPolygon { vertices: hull },
    }
}

/// `θ` lies in `[a, b]` modulo 2π.
pub(crate) fn arg_in(theta: f64, a: f64, b: f64, tol: f64) -> bool {
    if b - a >= 2.0 * PI - tol {
        return true;
    }
    let d = (theta - a).rem_euclid(2.0 * PI);
    d <= b - a + tol || d >= 2.0 * PI - tol
}

/// Nearest-piece lookup over a fixed region.
pub struct RegionIndex {
    /// Built on the first query that is not settled by the buckets.
    grid: std::sync::OnceLock<geom::PieceGrid>,
    prec: Precision,
    /// Log-polar boxes bucketed by argument over `[0, 2π)`.
    buckets: Vec<Vec<usize>>,
    others: Vec<usize>,
    primitives: Vec<RegionPrimitive>,
}

const ARG_BUCKETS: usize = 4096;

impl RegionIndex {
    fn new(region: &Region, prec: &Precision) -> Self {
        let mut buckets = vec![Vec::new(); ARG_BUCKETS];
        let mut others = Vec::new();
        let width = 2.0 * PI / ARG_BUCKETS as f64;
        for (i, p) in region.primitives.iter().enumerate() {
            match p {
                RegionPrimitive::LogPolarBox { argument: (a, b), .. } if b - a < 64.0 * width => {
                    let first = (a.rem_euclid(2.0 * PI) / width).floor() as usize;
                    let span = ((b - a) / width).ceil() as usize + 1;
                    for k in first..=first + span {
                        buckets[k % ARG_BUCKETS].push(i);
                    }
                }
                _ => others.push(i),
            }
        }
        // a long tail of other primitives is left to the grid
        if others.len() > 64 {
            others.clear();
        }
        let primitives = region
            .primitives
            .iter()
            .map(|p| match p {
                RegionPrimitive::ConvexPolygon { vertices } => RegionPrimitive::ConvexPolygon {
                    vertices: geom::convex_hull(vertices),
                },
                p => p.clone(),
            })
            .collect();
        Self {
            grid: std::sync::OnceLock::new(),
            prec: *prec,
            buckets,
            others,
            primitives,
        }
    }

    /// Exact membership in a bucketed box or a few other primitives; the
    /// grid handles the rest.
    fn quick_contains(&self, z: C64) -> bool {
        let tol = 1e-9 * (1.0 + z.norm());
        // polygons were normalised to their hulls at construction
        let hit = |i: usize| match &self.primitives[i] {
            RegionPrimitive::ConvexPolygon { vertices } => geom::point_in_convex(z, vertices, tol),
            p => primitive_contains(p, z, tol),
        };
        if self.others.iter().any(|&i| hit(i)) {
            return true;
        }
        let k = (z.arg().rem_euclid(2.0 * PI) / (2.0 * PI) * ARG_BUCKETS as f64) as usize;
        self.buckets[k.min(ARG_BUCKETS - 1)].iter().any(|&i| hit(i))
    }

    /// Euclidean distance from `z` to the region (zero inside).
    pub fn distance(&self, z: C64) -> f64 {
        if self.quick_contains(z) {
            return 0.0;
        }
        self.grid
            .get_or_init(|| {
                let mut pieces = Vec::new();
                for p in &self.primitives {
                    primitive_pieces(p, &self.prec, &mut pieces);
                }
                geom::PieceGrid::new(pieces)
            })
            .distance(z)
    }

    pub fn contains_dilated(&self, z: C64, delta: f64) -> bool {
        self.distance(z) <= delta + 1e-12
    }
}

fn primitive_pieces(p: &RegionPrimitive, prec: &Precision, out: &mut Vec<Piece>) {
    match p {
        RegionPrimitive::Disc { center, radius } => out.push(Piece::Disc {
            center: *center,
            radius: *radius,
        }),
        RegionPrimitive::HalfPlaneRe { c, side } => out.push(Piece::HalfPlane {
            c: *c,
            side: *side,
        }),
        RegionPrimitive::Segment { a, b } => {
            if a == b {
                out.push(Piece::Convex(vec![*a]))
            } else {
                out.push(Piece::Convex(vec![*a, *b]))
            }
        }
        RegionPrimitive::ConvexPolygon { vertices } => {
            out.push(Piece::Convex(geom::convex_hull(vertices)))
        }
        RegionPrimitive::LogPolarBox {
            log_modulus: (lo, hi),
            argument: (a, b),
        } => {
            let r1 = lo.exp();
            let r2 = hi.exp();
            let inner = if r1 <= prec.inner_radius() * (1.0 + 1e-9) {
                0.0
            } else {
                r1
            };
            let width = b - a;
            // slack is only promised inside the window; beyond it, relative
            let eps = (prec.resolution * 0.25 * (r2 / WINDOW).max(1.0)).max(1e-12);
            // chunk width keeps the outer-arc slack r2 (sec(w/2) − 1) under eps
            let half = (1.0 / (1.0 + eps / r2.max(1e-300))).clamp(-1.0, 1.0).acos();
            let chunks = ((width / (2.0 * half)).ceil() as usize).clamp(1, 4096);
            let chunks = chunks.max((width / (PI / 8.0)).ceil() as usize);
            for k in 0..chunks {
                let t0 = a + width * k as f64 / chunks as f64;
                let t1 = a + width * (k + 1) as f64 / chunks as f64;
                let big = r2 / ((t1 - t0) / 2.0).cos();
                let mut v = Vec::with_capacity(4);
                if inner == 0.0 {
                    v.push(C64::new(0.0, 0.0));
                } else {
                    v.push(C64::from_polar(inner, t0));
                    v.push(C64::from_polar(inner, t1));
                }
                v.push(C64::from_polar(big, t1));
                v.push(C64::from_polar(big, t0));
                out.push(Piece::Convex(geom::convex_hull(&v)));
            }
        }
        RegionPrimitive::PointSet { points, dilation } => {
            for &z in points {
                if *dilation > 0.0 {
                    out.push(Piece::Disc {
                        center: z,
                        radius: *dilation,
                    })
                } else {
                    out.push(Piece::Convex(vec![z]))
                }
            }
        }
    }
}

fn primitive_contains(p: &RegionPrimitive, z: C64, tol: f64) -> bool {
    match p {
        RegionPrimitive::Disc { center, radius } => (z - center).norm() <= radius + tol,
        RegionPrimitive::HalfPlaneRe { c, side } => match side {
            Side::Ge => z.re >= c - tol,
            Side::Le => z.re <= c + tol,
        },
        RegionPrimitive::Segment { a, b } => geom::dist_point_segment(z, *a, *b).0 <= tol,
        RegionPrimitive::ConvexPolygon { vertices } => {
            geom::point_in_convex(z, &geom::convex_hull(vertices), tol)
        }
        RegionPrimitive::LogPolarBox {
            log_modulus: (lo, hi),
            argument: (a, b),
        } => {
            let r = z.norm();
            if r <= tol {
                return lo.exp() <= tol;
            }
            r >= lo.exp() - tol && r <= hi.exp() + tol && arg_in(z.arg(), *a, *b, tol / r)
        }
        RegionPrimitive::PointSet { points, dilation } => {
            points.iter().any(|q| (z - q).norm() <= dilation + tol)
        }
    }
}

fn primitive_max_modulus(p: &RegionPrimitive) -> f64 {
    match p {
        RegionPrimitive::Disc { center, radius } => center.norm() + radius,
        RegionPrimitive::HalfPlaneRe { .. } => f64::INFINITY,
        RegionPrimitive::Segment { a, b } => a.norm().max(b.norm()),
        RegionPrimitive::ConvexPolygon { vertices } => {
            vertices.iter().map(|z| z.norm()).fold(0.0, f64::max)
        }
        RegionPrimitive::LogPolarBox {
            log_modulus: (_, hi),
            ..
        } => hi.exp(),
        RegionPrimitive::PointSet { points, dilation } => {
            points.iter().map(|z| z.norm()).fold(0.0, f64::max) + dilation
        }
    }
}

/// `(min Re, max Re)` of a primitive, exact for annular sectors.
fn primitive_re_extent(p: &RegionPrimitive) -> (f64, f64) {
    match p {
        RegionPrimitive::Disc { center, radius } => (center.re - radius, center.re + radius),
        RegionPrimitive::HalfPlaneRe { c, side } => match side {
            Side::Ge => (*c, f64::INFINITY),
            Side::Le => (f64::NEG_INFINITY, *c),
        },
        RegionPrimitive::Segment { a, b } => (a.re.min(b.re), a.re.max(b.re)),
        RegionPrimitive::ConvexPolygon { vertices } => vertices
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| {
                (lo.min(z.re), hi.max(z.re))
            }),
        RegionPrimitive::LogPolarBox {
            log_modulus: (lo, hi),
            argument: (a, b),
        } => {
            let (r1, r2) = (lo.exp(), hi.exp());
            let mut xs = vec![
                r1 * a.cos(),
                r1 * b.cos(),
                r2 * a.cos(),
                r2 * b.cos(),
            ];
            if arg_in(PI, *a, *b, 0.0) {
                xs.push(-r2);
            }
            if arg_in(0.0, *a, *b, 0.0) {
                xs.push(r2);
            }
            xs.iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)))
        }
        RegionPrimitive::PointSet { points, dilation } => {
            points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), z| {
                (l.min(z.re - dilation), h.max(z.re + dilation))
            })
        }
    }
}

/// Farthest intersection of the ray `t·dir`, `t >= 0`, with a piece.
fn ray_extent(piece: &Piece, dir: C64, truncation: f64) -> f64 {
    match piece {
        Piece::Disc { center, radius } => {
            let p = geom::dot(*center, dir);
            let q = center.norm_sqr() - radius * radius;
            let disc = p * p - q;
            if disc < 0.0 {
                return 0.0;
            }
            let t = p + disc.sqrt();
            if t < 0.0 {
                0.0
            } else {
                t
            }
        }
        Piece::HalfPlane { c, side } => {
            let hit = match side {
                Side::Ge => dir.re > 0.0 || (dir.re == 0.0 && *c <= 0.0),
                Side::Le => dir.re < 0.0 || (dir.re == 0.0 && *c >= 0.0),
            };
            if hit {
                truncation
            } else {
                0.0
            }
        }
        Piece::Convex(v) => {
            // clip a long segment along the ray against the polygon
            let far = dir * (2.0 * truncation);
            let mut seg = vec![C64::new(0.0, 0.0), far];
            if v.len() < 3 {
                // point or segment: test collinearity
                let mut best: f64 = 0.0;
                for &z in v {
                    if geom::cross(dir, z).abs() <= 1e-12 * (1.0 + z.norm()) && geom::dot(dir, z) >= 0.0 {
                        best = best.max(z.norm());
                    }
                }
                return best;
            }
            let n = v.len();
            for i in 0..n {
                let a = v[i];
                let b = v[(i + 1) % n];
                let e = b - a;
                // inside: cross(e, x - a) >= 0  <=>  dot(normal, x) <= offset
                let normal = C64::new(e.im, -e.re);
                seg = geom::clip_halfplane(&seg, normal, geom::dot(normal, a));
                if seg.is_empty() {
                    return 0.0;
                }
            }
            seg.iter().map(|z| z.norm()).fold(0.0, f64::max)
        }
    }
}

fn scale_primitive(p: &RegionPrimitive, alpha: C64) -> Vec<RegionPrimitive> {
    use RegionPrimitive::*;
    let m = alpha.norm();
    match p {
        Disc { center, radius } => vec![Disc {
            center: center * alpha,
            radius: radius * m,
        }],
        HalfPlaneRe { c, side } => {
            if alpha.im == 0.0 {
                let side = if alpha.re > 0.0 { *side } else { side.flip() };
                vec![HalfPlaneRe {
                    c: c * alpha.re,
                    side,
                }]
            } else {
                let prec = Precision::default();
                let (poly, _) = Piece::HalfPlane { c: *c, side: *side }
                    .truncated_polygon(0.0, prec.truncation / m);
                vec![ConvexPolygon {
                    vertices: poly.iter().map(|z| z * alpha).collect(),
                }]
            }
        }
        Segment { a, b } => vec![Segment {
            a: a * alpha,
            b: b * alpha,
        }],
        ConvexPolygon { vertices } => vec![ConvexPolygon {
            vertices: vertices.iter().map(|z| z * alpha).collect(),
        }],
        LogPolarBox {
            log_modulus: (lo, hi),
            argument: (a, b),
        } => {
            let (lm, ph) = (m.ln(), alpha.arg());
            let shift = |x: f64| x + ph;
            let mut a2 = shift(*a);
            let mut b2 = shift(*b);
            // keep the lower end in [-π, π)
            let k = ((a2 + PI) / (2.0 * PI)).floor();
            a2 -= 2.0 * PI * k;
            b2 -= 2.0 * PI * k;
            vec![LogPolarBox {
                log_modulus: (lo + lm, hi + lm),
                argument: (a2, b2),
            }]
        }
        PointSet { points, dilation } => vec![PointSet {
            points: points.iter().map(|z| z * alpha).collect(),
            dilation: dilation * m,
        }],
    }
}

fn translate_primitive(q: &RegionPrimitive, p: C64, prec: &Precision) -> Vec<RegionPrimitive> {
    use RegionPrimitive::*;
    if p == C64::new(0.0, 0.0) {
        return vec![q.clone()];
    }
    match q {
        Disc { center, radius } => vec![Disc {
            center: center + p,
            radius: *radius,
        }],
        HalfPlaneRe { c, side } => vec![HalfPlaneRe {
            c: c + p.re,
            side: *side,
        }],
        Segment { a, b } => vec![Segment { a: a + p, b: b + p }],
        ConvexPolygon { vertices } => vec![ConvexPolygon {
            vertices: vertices.iter().map(|z| z + p).collect(),
        }],
        PointSet { points, dilation } => vec![PointSet {
            points: points.iter().map(|z| z + p).collect(),
            dilation: *dilation,
        }],
        LogPolarBox { .. } => {
            let mut pieces = Vec::new();
            primitive_pieces(q, prec, &mut pieces);
            pieces
                .into_iter()
                .map(|piece| match piece {
                    Piece::Convex(v) => hull_to_primitive(v.iter().map(|z| z + p).collect()),
                    _ => unreachable!("boxes flatten to polygons"),
                })
                .collect()
        }
    }
}

fn sample_primitive<R: Rng + ?Sized>(p: &RegionPrimitive, rng: &mut R) -> C64 {
    match p {
        RegionPrimitive::Disc { center, radius } => {
            let r = radius * rng.random::<f64>().sqrt();
            center + C64::from_polar(r, rng.random_range(0.0..2.0 * PI))
        }
        RegionPrimitive::HalfPlaneRe { c, side } => {
            let dx = rng.random_range(0.0..10.0);
            let y = rng.random_range(-10.0..10.0);
            match side {
                Side::Ge => C64::new(c + dx, y),
                Side::Le => C64::new(c - dx, y),
            }
        }
        RegionPrimitive::Segment { a, b } => a + (b - a) * rng.random::<f64>(),
        RegionPrimitive::ConvexPolygon { vertices } => {
            let h = geom::convex_hull(vertices);
            sample_convex(&h, rng)
        }
        RegionPrimitive::LogPolarBox {
            log_modulus: (lo, hi),
            argument: (a, b),
        } => {
            let r = if hi > lo {
                (lo + (hi - lo) * rng.random::<f64>()).exp()
            } else {
                lo.exp()
            };
            let t = if b > a { rng.random_range(*a..*b) } else { *a };
            C64::from_polar(r, t)
        }
        RegionPrimitive::PointSet { points, dilation } => {
            let z = points[rng.random_range(0..points.len())];
            if *dilation > 0.0 {
                let r = dilation * rng.random::<f64>().sqrt();
                z + C64::from_polar(r, rng.random_range(0.0..2.0 * PI))
            } else {
                z
            }
        }
    }
}

fn sample_convex<R: Rng + ?Sized>(h: &[C64], rng: &mut R) -> C64 {
    match h.len() {
        0 => C64::new(0.0, 0.0),
        1 => h[0],
        2 => h[0] + (h[1] - h[0]) * rng.random::<f64>(),
        n => {
            // area-weighted fan triangle, then uniform barycentric point
            let areas: Vec<f64> = (1..n - 1)
                .map(|i| geom::cross(h[i] - h[0], h[i + 1] - h[0]).abs())
                .collect();
            let total: f64 = areas.iter().sum();
            let mut pick = rng.random::<f64>() * total;
            let mut i = 0;
            while i + 1 < areas.len() && pick > areas[i] {
                pick -= areas[i];
                i += 1;
            }
            let (mut s, mut t) = (rng.random::<f64>(), rng.random::<f64>());
            if s + t > 1.0 {
                s = 1.0 - s;
                t = 1.0 - t;
            }
            h[0] + (h[i + 1] - h[0]) * s + (h[i + 2] - h[0]) * t
        }
    }
}
