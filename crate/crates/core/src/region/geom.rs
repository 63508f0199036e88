//! Planar kernels: convex hulls, clipping, distances between convex pieces.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::Side;

/// A flattened geometric piece. Every region is a union of pieces.
#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    Disc { center: C64, radius: f64 },
    HalfPlane { c: f64, side: Side },
    /// Counter-clockwise convex polygon; one vertex is a point, two a segment.
    Convex(Vec<C64>),
}

#[inline]
pub fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

#[inline]
pub fn dot(a: C64, b: C64) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Andrew's monotone chain. Returns the hull counter-clockwise without
/// collinear vertices; one or two points for degenerate input.
pub fn convex_hull(points: &[C64]) -> Vec<C64> {
    let idx = convex_hull_indices(points);
    idx.into_iter().map(|i| points[i]).collect()
}

pub fn convex_hull_indices(points: &[C64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len())
        .filter(|&i| points[i].re.is_finite() && points[i].im.is_finite())
        .collect();
    idx.sort_by(|&a, &b| {
        let (p, q) = (points[a], points[b]);
        p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im))
    });
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() <= 2 {
        return idx;
    }
    let turn = |o: usize, a: usize, b: usize| cross(points[a] - points[o], points[b] - points[o]);
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], i) <= 0.0 {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], i) <= 0.0 {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    lower
}

/// Vertex count for a circumscribed polygon whose slack over a disc of
/// radius `r` is at most `eps`.
pub fn polygon_sides(r: f64, eps: f64) -> usize {
    if r <= 0.0 {
        return 1;
    }
    let eps = eps.max(1e-12);
    // r (sec(π/n) − 1) ≤ eps
    let t = (1.0 / (1.0 + eps / r)).clamp(-1.0, 1.0).acos();
    let n = (PI / t).ceil();
    (n as usize).clamp(8, 4096)
}

/// Regular polygon circumscribing the disc (outer approximation).
pub fn circumscribed_polygon(center: C64, r: f64, n: usize) -> Vec<C64> {
    if r <= 0.0 {
        return vec![center];
    }
    let big = r / (PI / n as f64).cos();
    (0..n)
        .map(|k| center + C64::from_polar(big, 2.0 * PI * k as f64 / n as f64))
        .collect()
}

/// Slack of a circumscribed `n`-gon over its disc.
pub fn circumscribed_slack(r: f64, n: usize) -> f64 {
    if n < 3 {
        return 0.0;
    }
    r * (1.0 / (PI / n as f64).cos() - 1.0)
}

pub fn dist_point_segment(p: C64, a: C64, b: C64) -> (f64, C64) {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    let q = if len2 == 0.0 {
        a
    } else {
        let t = (dot(p - a, ab) / len2).clamp(0.0, 1.0);
        a + ab * t
    };
    ((p - q).norm(), q)
}

/// Point inside (or on) a counter-clockwise convex polygon.
pub fn point_in_convex(p: C64, poly: &[C64], tol: f64) -> bool {
    match poly.len() {
        0 => false,
        1 => (p - poly[0]).norm() <= tol,
        2 => dist_point_segment(p, poly[0], poly[1]).0 <= tol,
        n => (0..n).all(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            let e = b - a;
            let len = e.norm();
            len == 0.0 || cross(e, p - a) >= -tol * len
        }),
    }
}

/// Distance from `p` to a convex polygon and the closest polygon point.
pub fn dist_point_convex(p: C64, poly: &[C64]) -> (f64, C64) {
    if poly.len() >= 3 && point_in_convex(p, poly, 0.0) {
        return (0.0, p);
    }
    boundary_distance(p, poly)
}

fn boundary_distance(p: C64, poly: &[C64]) -> (f64, C64) {
    match poly.len() {
        0 => (f64::INFINITY, p),
        1 => ((p - poly[0]).norm(), poly[0]),
        n => {
            let mut best = (f64::INFINITY, poly[0]);
            let edges = if n == 2 { 1 } else { n };
            for i in 0..edges {
                let d = dist_point_segment(p, poly[i], poly[(i + 1) % n]);
                if d.0 < best.0 {
                    best = d;
                }
            }
            best
        }
    }
}

fn segments_intersect(a: C64, b: C64, c: C64, d: C64) -> Option<C64> {
    let r = b - a;
    let s = d - c;
    let denom = cross(r, s);
    if denom.abs() < 1e-300 {
        return None;
    }
    let t = cross(c - a, s) / denom;
    let u = cross(c - a, r) / denom;
    if (-1e-12..=1.0 + 1e-12).contains(&t) && (-1e-12..=1.0 + 1e-12).contains(&u) {
        Some(a + r * t)
    } else {
        None
    }
}

fn edges(poly: &[C64]) -> Vec<(C64, C64)> {
    match poly.len() {
        0 | 1 => Vec::new(),
        2 => vec![(poly[0], poly[1])],
        n => (0..n).map(|i| (poly[i], poly[(i + 1) % n])).collect(),
    }
}

/// Distance between two convex polygons with witness points (zero when they meet).
pub fn convex_distance(a: &[C64], b: &[C64]) -> (f64, C64, C64) {
    for &v in a {
        if point_in_convex(v, b, 1e-12) {
            return (0.0, v, v);
        }
    }
    for &v in b {
        if point_in_convex(v, a, 1e-12) {
            return (0.0, v, v);
        }
    }
    let ea = edges(a);
    let eb = edges(b);
    for &(p, q) in &ea {
        for &(r, s) in &eb {
            if let Some(x) = segments_intersect(p, q, r, s) {
                return (0.0, x, x);
            }
        }
    }
    let mut best = (f64::INFINITY, a[0], b[0]);
    for &v in a {
        let (d, q) = boundary_distance(v, b);
        if d < best.0 {
            best = (d, v, q);
        }
    }
    for &v in b {
        let (d, q) = boundary_distance(v, a);
        if d < best.0 {
            best = (d, q, v);
        }
    }
    best
}

/// Distance between convex polygons already known to be separated along the
/// unit direction `u` (`a` on the positive side). Only edges that can hold
/// the closest pair are examined.
pub fn separated_convex_distance(a: &[C64], b: &[C64], u: C64) -> (f64, C64, C64) {
    let proj = |z: &C64| dot(*z, u);
    let (ia, lo_a) = a
        .iter()
        .map(proj)
        .enumerate()
        .fold((0, f64::INFINITY), |m, (i, v)| if v < m.1 { (i, v) } else { m });
    let (ib, hi_b) = b
        .iter()
        .map(proj)
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |m, (i, v)| if v > m.1 { (i, v) } else { m });
    let ub = (a[ia] - b[ib]).norm();
    let near = |poly: &[C64], keep: &dyn Fn(f64) -> bool| -> Vec<(C64, C64)> {
        edges_or_point(poly)
            .into_iter()
            .filter(|(p, q)| keep(proj(p)) || keep(proj(q)))
            .collect()
    };
    let ea = near(a, &|v| v <= hi_b + ub);
    let eb = near(b, &|v| v >= lo_a - ub);
    let mut best = (ub, a[ia], b[ib]);
    for &(p, q) in &ea {
        for &(r, s) in &eb {
            for (x, (y, w)) in [(p, (r, s)), (q, (r, s))] {
                let (d, z) = dist_point_segment(x, y, w);
                if d < best.0 {
                    best = (d, x, z);
                }
            }
            for (x, (y, w)) in [(r, (p, q)), (s, (p, q))] {
                let (d, z) = dist_point_segment(x, y, w);
                if d < best.0 {
                    best = (d, z, x);
                }
            }
        }
    }
    best
}

fn edges_or_point(poly: &[C64]) -> Vec<(C64, C64)> {
    if poly.len() == 1 {
        vec![(poly[0], poly[0])]
    } else {
        edges(poly)
    }
}

/// Keeps the part of a convex polygon with `dot(n, x) <= offset`.
pub fn clip_halfplane(poly: &[C64], n: C64, offset: f64) -> Vec<C64> {
    let inside = |p: C64| dot(n, p) <= offset;
    match poly.len() {
        0 => Vec::new(),
        1 => {
            if inside(poly[0]) {
                poly.to_vec()
            } else {
                Vec::new()
            }
        }
        _ => {
            let mut out = Vec::with_capacity(poly.len() + 2);
            let m = poly.len();
            if m == 2 {
                // segment
                let (a, b) = (poly[0], poly[1]);
                let (ia, ib) = (inside(a), inside(b));
                let cut = || {
                    let da = dot(n, a) - offset;
                    let db = dot(n, b) - offset;
                    a + (b - a) * (da / (da - db))
                };
                return match (ia, ib) {
                    (true, true) => vec![a, b],
                    (false, false) => Vec::new(),
                    (true, false) => vec![a, cut()],
                    (false, true) => vec![cut(), b],
                };
            }
            for i in 0..m {
                let a = poly[i];
                let b = poly[(i + 1) % m];
                let (ia, ib) = (inside(a), inside(b));
                if ia {
                    out.push(a);
                }
                if ia != ib {
                    let da = dot(n, a) - offset;
                    let db = dot(n, b) - offset;
                    out.push(a + (b - a) * (da / (da - db)));
                }
            }
            out
        }
    }
}

/// Clips a convex polygon to the wedge of arguments `[t0, t1]`, `t1 - t0 < π`.
pub fn clip_wedge(poly: &[C64], t0: f64, t1: f64) -> Vec<C64> {
    // cross(e0, p) >= 0  <=>  dot(n0, p) <= 0 with n0 = (sin t0, -cos t0)
    let n0 = C64::new(t0.sin(), -t0.cos());
    let n1 = C64::new(-t1.sin(), t1.cos());
    let once = clip_halfplane(poly, n0, 0.0);
    clip_halfplane(&once, n1, 0.0)
}

impl Piece {
    pub fn is_bounded(&self) -> bool {
        !matches!(self, Piece::HalfPlane { .. })
    }

    pub fn contains(&self, z: C64, tol: f64) -> bool {
        match self {
            Piece::Disc { center, radius } => (z - center).norm() <= radius + tol,
            Piece::HalfPlane { c, side } => match side {
                Side::Ge => z.re >= c - tol,
                Side::Le => z.re <= c + tol,
            },
            Piece::Convex(v) => point_in_convex(z, v, tol),
        }
    }

    /// Distance from a point to the piece, with the closest piece point.
    pub fn point_distance(&self, z: C64) -> (f64, C64) {
        match self {
            Piece::Disc { center, radius } => {
                let d = (z - center).norm();
                if d <= *radius {
                    (0.0, z)
                } else {
                    (d - radius, center + (z - center) * (radius / d))
                }
            }
            Piece::HalfPlane { c, side } => {
                let gap = match side {
                    Side::Ge => c - z.re,
                    Side::Le => z.re - c,
                };
                if gap <= 0.0 {
                    (0.0, z)
                } else {
                    (gap, C64::new(*c, z.im))
                }
            }
            Piece::Convex(v) => dist_point_convex(z, v),
        }
    }

    pub fn max_modulus(&self) -> f64 {
        match self {
            Piece::Disc { center, radius } => center.norm() + radius,
            Piece::HalfPlane { .. } => f64::INFINITY,
            Piece::Convex(v) => v.iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }

    pub fn min_modulus(&self) -> f64 {
        self.point_distance(C64::new(0.0, 0.0)).0
    }

    /// Axis-aligned bounding box `(xmin, xmax, ymin, ymax)`.
    pub fn bbox(&self) -> (f64, f64, f64, f64) {
        match self {
            Piece::Disc { center, radius } => (
                center.re - radius,
                center.re + radius,
                center.im - radius,
                center.im + radius,
            ),
            Piece::HalfPlane { c, side } => match side {
                Side::Ge => (*c, f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY),
                Side::Le => (f64::NEG_INFINITY, *c, f64::NEG_INFINITY, f64::INFINITY),
            },
            Piece::Convex(v) => v.iter().fold(
                (
                    f64::INFINITY,
                    f64::NEG_INFINITY,
                    f64::INFINITY,
                    f64::NEG_INFINITY,
                ),
                |(a, b, c, d), z| (a.min(z.re), b.max(z.re), c.min(z.im), d.max(z.im)),
            ),
        }
    }

    /// Outer convex polygon of a bounded piece.
    pub fn outer_polygon(&self, eps: f64) -> Option<(Vec<C64>, f64)> {
        match self {
            Piece::Disc { center, radius } => {
                let n = polygon_sides(*radius, eps);
                Some((
                    circumscribed_polygon(*center, *radius, n),
                    circumscribed_slack(*radius, n),
                ))
            }
            Piece::HalfPlane { .. } => None,
            Piece::Convex(v) => Some((v.clone(), 0.0)),
        }
    }

    /// Polygon restricted to the square `[-t, t]²`. Half-planes become boxes.
    pub fn truncated_polygon(&self, eps: f64, t: f64) -> (Vec<C64>, f64) {
        match self {
            Piece::HalfPlane { c, side } => {
                let (lo, hi) = match side {
                    Side::Ge => (c.max(-t), t),
                    Side::Le => (-t, c.min(t)),
                };
                if lo > hi {
                    return (Vec::new(), 0.0);
                }
                (
                    vec![
                        C64::new(lo, -t),
                        C64::new(hi, -t),
                        C64::new(hi, t),
                        C64::new(lo, t),
                    ],
                    0.0,
                )
            }
            _ => self.outer_polygon(eps).unwrap(),
        }
    }

    pub fn max_re(&self) -> f64 {
        match self {
            Piece::Disc { center, radius } => center.re + radius,
            Piece::HalfPlane { c, side } => match side {
                Side::Ge => f64::INFINITY,
                Side::Le => *c,
            },
            Piece::Convex(v) => v.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn min_re(&self) -> f64 {
        match self {
            Piece::Disc { center, radius } => center.re - radius,
            Piece::HalfPlane { c, side } => match side {
                Side::Ge => *c,
                Side::Le => f64::NEG_INFINITY,
            },
            Piece::Convex(v) => v.iter().map(|z| z.re).fold(f64::INFINITY, f64::min),
        }
    }
}

/// Distance between two pieces with witness points.
pub fn piece_distance(a: &Piece, b: &Piece) -> (f64, C64, C64) {
    use Piece::*;
    match (a, b) {
        (Disc { center: c1, radius: r1 }, Disc { center: c2, radius: r2 }) => {
            let d = (c2 - c1).norm();
            if d <= r1 + r2 {
                let w = if d == 0.0 { *c1 } else { c1 + (c2 - c1) * (r1 / d).min(1.0) };
                (0.0, w, w)
            } else {
                let u = (c2 - c1) / d;
                (d - r1 - r2, c1 + u * *r1, c2 - u * *r2)
            }
        }
        (Disc { center, radius }, Convex(v)) => {
            let (d, q) = dist_point_convex(*center, v);
            if d <= *radius {
                (0.0, q, q)
            } else {
                (d - radius, center + (q - center) * (radius / d), q)
            }
        }
        (Convex(_), Disc { .. }) => {
            let (d, p, q) = piece_distance(b, a);
            (d, q, p)
        }
        (HalfPlane { c: c1, side: s1 }, HalfPlane { c: c2, side: s2 }) => {
            let gap = match (s1, s2) {
                (Side::Ge, Side::Le) => c1 - c2,
                (Side::Le, Side::Ge) => c2 - c1,
                _ => 0.0,
            };
            let p = C64::new(*c1, 0.0);
            let q = C64::new(*c2, 0.0);
            if gap <= 0.0 {
                let w = match (s1, s2) {
                    (Side::Ge, Side::Ge) => C64::new(c1.max(*c2), 0.0),
                    (Side::Le, Side::Le) => C64::new(c1.min(*c2), 0.0),
                    _ => p,
                };
                (0.0, w, w)
            } else {
                (gap, p, q)
            }
        }
        (HalfPlane { c, side }, other) => {
            let (extreme, gap) = match side {
                Side::Ge => {
                    let m = other.max_re();
                    (m, c - m)
                }
                Side::Le => {
                    let m = other.min_re();
                    (m, m - c)
                }
            };
            let q = extreme_point(other, *side == Side::Ge);
            debug_assert!((q.re - extreme).abs() <= 1e-9 * (1.0 + extreme.abs()));
            if gap <= 0.0 {
                (0.0, q, q)
            } else {
                (gap, C64::new(*c, q.im), q)
            }
        }
        (_, HalfPlane { .. }) => {
            let (d, p, q) = piece_distance(b, a);
            (d, q, p)
        }
        (Convex(u), Convex(v)) => convex_distance(u, v),
    }
}

/// Rightmost (or leftmost) point of a bounded piece.
fn extreme_point(p: &Piece, rightmost: bool) -> C64 {
    match p {
        Piece::Disc { center, radius } => {
            if rightmost {
                center + radius
            } else {
                center - radius
            }
        }
        Piece::Convex(v) => {
            let mut best = v[0];
            for &z in v {
                if (rightmost && z.re > best.re) || (!rightmost && z.re < best.re) {
                    best = z;
                }
            }
            best
        }
        Piece::HalfPlane { c, .. } => C64::new(*c, 0.0),
    }
}

/// Lower bound on the distance between two bounding boxes.
pub fn bbox_gap(a: (f64, f64, f64, f64), b: (f64, f64, f64, f64)) -> f64 {
    let dx = (b.0 - a.1).max(a.0 - b.1).max(0.0);
    let dy = (b.2 - a.3).max(a.2 - b.3).max(0.0);
    if dx.is_nan() || dy.is_nan() {
        return 0.0;
    }
    dx.hypot(dy)
}

/// Horizontal extent of a convex polygon's boundary within `lo <= y <= hi`.
fn strip_x_range(v: &[C64], lo: f64, hi: f64) -> Option<(f64, f64)> {
    let mut range: Option<(f64, f64)> = None;
    let mut add = |x: f64| {
        range = Some(range.map_or((x, x), |(a, b)| (a.min(x), b.max(x))));
    };
    for i in 0..v.len() {
        let (a, b) = (v[i], v[(i + 1) % v.len()]);
        let dy = b.im - a.im;
        if dy == 0.0 {
            if a.im >= lo && a.im <= hi {
                add(a.re);
                add(b.re);
            }
            continue;
        }
        let t0 = ((lo - a.im) / dy).clamp(0.0, 1.0);
        let t1 = ((hi - a.im) / dy).clamp(0.0, 1.0);
        let (t0, t1) = (t0.min(t1), t0.max(t1));
        let y = a.im + dy * 0.5 * (t0 + t1);
        if y >= lo - 1e-12 && y <= hi + 1e-12 {
            add(a.re + (b.re - a.re) * t0);
            add(a.re + (b.re - a.re) * t1);
        }
    }
    range
}

/// Uniform grid over bounded pieces for nearest-piece queries.
pub struct PieceGrid {
    pieces: Vec<Piece>,
    boxes: Vec<(f64, f64, f64, f64)>,
    unbounded: Vec<usize>,
    origin: C64,
    cell: f64,
    size: usize,
    cells: Vec<Vec<usize>>,
}

impl PieceGrid {
    pub fn new(pieces: Vec<Piece>) -> Self {
        let boxes: Vec<_> = pieces.iter().map(|p| p.bbox()).collect();
        let finite = |b: &(f64, f64, f64, f64)| b.0.is_finite() && b.1.is_finite() && b.2.is_finite() && b.3.is_finite();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for b in boxes.iter().filter(|b| finite(b)) {
            x0 = x0.min(b.0);
            x1 = x1.max(b.1);
            y0 = y0.min(b.2);
            y1 = y1.max(b.3);
        }
        let size = ((pieces.len() as f64).sqrt().ceil() as usize).clamp(1, 256);
        let span = (x1 - x0).max(y1 - y0).max(1e-12);
        let unbounded = (0..boxes.len()).filter(|&i| !finite(&boxes[i])).collect();
        let mut grid = Self {
            pieces,
            boxes,
            unbounded,
            origin: C64::new(x0, y0),
            cell: span / size as f64,
            size,
            cells: vec![Vec::new(); size * size],
        };
        if !x0.is_finite() {
            grid.size = 0;
            return grid;
        }
        for (i, b) in grid.boxes.iter().enumerate() {
            if !finite(b) {
                continue;
            }
            let (c0, r0) = grid.cell_of(C64::new(b.0, b.2));
            let (c1, r1) = grid.cell_of(C64::new(b.1, b.3));
            for r in r0..=r1 {
                // thin slanted polygons only touch a few cells per row
                let (lo, hi) = match &grid.pieces[i] {
                    Piece::Convex(v) if v.len() >= 3 && r1 > r0 => {
                        let y0 = grid.origin.im + grid.cell * r as f64;
                        let Some((x0, x1)) = strip_x_range(v, y0, y0 + grid.cell) else {
                            continue;
                        };
                        (grid.cell_of(C64::new(x0, y0)).0, grid.cell_of(C64::new(x1, y0)).0)
                    }
                    _ => (c0, c1),
                };
                for c in lo..=hi {
                    grid.cells[r * grid.size + c].push(i);
                }
            }
        }
        grid
    }

    fn cell_of(&self, z: C64) -> (usize, usize) {
        let clamp = |v: f64| (v.floor().max(0.0) as usize).min(self.size - 1);
        (
            clamp((z.re - self.origin.re) / self.cell),
            clamp((z.im - self.origin.im) / self.cell),
        )
    }

    fn point_box_gap(b: &(f64, f64, f64, f64), z: C64) -> f64 {
        let dx = (b.0 - z.re).max(z.re - b.1).max(0.0);
        let dy = (b.2 - z.im).max(z.im - b.3).max(0.0);
        dx.hypot(dy)
    }

    /// Distance from `z` to the union of the pieces.
    pub fn distance(&self, z: C64) -> f64 {
        let mut best = f64::INFINITY;
        // unbounded pieces are not in the grid
        for &i in &self.unbounded {
            best = best.min(self.pieces[i].point_distance(z).0);
        }
        if self.size == 0 {
            return best;
        }
        let (c, r) = self.cell_of(z);
        // distance from z to the grid's extent; rings closer than this are empty
        let ext = (
            self.origin.re,
            self.origin.re + self.cell * self.size as f64,
            self.origin.im,
            self.origin.im + self.cell * self.size as f64,
        );
        let outside = Self::point_box_gap(&ext, z);
        for ring in 0..self.size {
            if outside.max((ring as f64 - 1.0) * self.cell) > best {
                break;
            }
            let (rlo, rhi) = (r.saturating_sub(ring), (r + ring).min(self.size - 1));
            let (clo, chi) = (c.saturating_sub(ring), (c + ring).min(self.size - 1));
            for rr in rlo..=rhi {
                for cc in clo..=chi {
                    let on_ring = rr == rlo || rr == rhi || cc == clo || cc == chi;
                    if !on_ring {
                        continue;
                    }
                    for &i in &self.cells[rr * self.size + cc] {
                        if Self::point_box_gap(&self.boxes[i], z) >= best {
                            continue;
                        }
                        best = best.min(self.pieces[i].point_distance(z).0);
                        if best == 0.0 {
                            return 0.0;
                        }
                    }
                }
            }
        }
        best
    }
}
