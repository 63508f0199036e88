//! Region algebra: Minkowski sum and product, inversion, radial and chord
//! closures, and distances.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::geom::{self, bbox_gap, convex_hull, piece_distance, Piece};
use super::profile::Profile;
use super::{
    hull_to_primitive, scale_primitive, Precision, Region, RegionPrimitive,
    Side, WINDOW,
};
use crate::error::{Result, SrgError};

const MAX_BINS: usize = 1 << 15;

/// Minimum distance between two regions with its error bar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distance {
    pub value: f64,
    /// `res(A) + res(B)`: the true distance lies in `[value, value + error]`.
    pub error: f64,
    /// Closest points `(a, b)`, absent when the regions meet at infinity.
    pub witness: Option<(C64, C64)>,
}

/// Finite points of a region made only of undilated point sets.
fn as_point_set(r: &Region) -> Option<Vec<C64>> {
    if r.contains_infinity() {
        return None;
    }
    let mut pts = Vec::new();
    for p in r.primitives() {
        match p {
            RegionPrimitive::PointSet { points, dilation } if *dilation == 0.0 => {
                pts.extend_from_slice(points)
            }
            _ => return None,
        }
    }
    Some(pts)
}

fn windowed(m: f64) -> f64 {
    if m.is_finite() {
        m.min(WINDOW)
    } else {
        WINDOW
    }
}

fn bins_for(scale: f64, prec: &Precision) -> usize {
    let want = (2.0 * std::f64::consts::PI * 8.0 * scale / prec.resolution.max(1e-12)).ceil();
    let n = if want.is_finite() { want as usize } else { MAX_BINS };
    (n.clamp(256, MAX_BINS) + 1) & !1
}

/// `{a + b}`; at most one operand may be unbounded.
pub fn minkowski_sum(a: &Region, b: &Region, prec: &Precision) -> Result<Region> {
    if a.is_empty() || b.is_empty() {
        return Ok(Region::empty());
    }
    if !a.is_bounded() && !b.is_bounded() {
        return Err(SrgError::UnsupportedGeometry(
            "Minkowski sum of two unbounded regions".into(),
        ));
    }
    let inf = a.contains_infinity() || b.contains_infinity();
    let res = a.resolution() + b.resolution();
    for (pts, other) in [(as_point_set(a), b), (as_point_set(b), a)] {
        if let Some(pts) = pts {
            let prims: Vec<RegionPrimitive> = pts
                .iter()
                .flat_map(|&p| other.translate_primitives(p, prec))
                .collect();
            return Ok(Region::from_parts(prims, inf, res));
        }
    }
    let eps = prec.resolution * 0.25;
    let pa = a.pieces(prec);
    let pb = b.pieces(prec);
    let results: Vec<Result<(RegionPrimitive, f64)>> = pa
        .par_iter()
        .flat_map_iter(|x| pb.iter().map(move |y| piece_sum(x, y, eps)))
        .collect();
    let mut prims = Vec::with_capacity(results.len());
    let mut slack: f64 = 0.0;
    for r in results {
        let (p, s) = r?;
        slack = slack.max(s);
        prims.push(p);
    }
    Ok(Region::from_parts(prims, inf, res + slack))
}

fn piece_sum(x: &Piece, y: &Piece, eps: f64) -> Result<(RegionPrimitive, f64)> {
    use Piece::*;
    Ok(match (x, y) {
        (Disc { center: c1, radius: r1 }, Disc { center: c2, radius: r2 }) => (
            RegionPrimitive::Disc {
                center: c1 + c2,
                radius: r1 + r2,
            },
            0.0,
        ),
        (HalfPlane { c: c1, side: s1 }, HalfPlane { c: c2, side: s2 }) => {
            if s1 != s2 {
                return Err(SrgError::UnsupportedGeometry(
                    "sum of opposite half-planes covers the plane".into(),
                ));
            }
            (
                RegionPrimitive::HalfPlaneRe {
                    c: c1 + c2,
                    side: *s1,
                },
                0.0,
            )
        }
        (HalfPlane { c, side }, other) | (other, HalfPlane { c, side }) => {
            let shift = match side {
                Side::Ge => other.min_re(),
                Side::Le => other.max_re(),
            };
            (
                RegionPrimitive::HalfPlaneRe {
                    c: c + shift,
                    side: *side,
                },
                0.0,
            )
        }
        _ => {
            let (u, s1) = x.outer_polygon(eps).expect("bounded piece");
            let (v, s2) = y.outer_polygon(eps).expect("bounded piece");
            let sums: Vec<C64> = u.iter().flat_map(|p| v.iter().map(move |q| p + q)).collect();
            (hull_to_primitive(convex_hull(&sums)), s1 + s2)
        }
    })
}

/// `{a·b}`, via exact sector products on angular profiles.
pub fn minkowski_product(a: &Region, b: &Region, prec: &Precision) -> Result<Region> {
    if a.is_empty() || b.is_empty() {
        return Ok(Region::empty());
    }
    let zero = C64::new(0.0, 0.0);
    if (!a.is_bounded() && b.contains(zero)) || (!b.is_bounded() && a.contains(zero)) {
        return Err(SrgError::IndeterminateProduct(
            "an unbounded operand meets an operand containing 0".into(),
        ));
    }
    let inf = a.contains_infinity() || b.contains_infinity();
    for (pts, other, own) in [(as_point_set(a), b, a), (as_point_set(b), a, b)] {
        if let Some(pts) = pts {
            let m = pts.iter().map(|p| p.norm()).fold(0.0, f64::max);
            let mut prims = Vec::new();
            let mut has_zero = false;
            for &p in &pts {
                if p == zero {
                    has_zero = true;
                } else {
                    prims.extend(other.primitives().iter().flat_map(|q| scale_primitive(q, p)));
                }
            }
            if has_zero {
                prims.push(RegionPrimitive::PointSet {
                    points: vec![zero],
                    dilation: 0.0,
                });
            }
            let res = other.resolution() * m + own.resolution() * windowed(other.max_modulus());
            let inf = other.contains_infinity() && pts.iter().any(|&p| p != zero);
            return Ok(Region::from_parts(prims, inf, res));
        }
    }
    let ma = windowed(a.max_modulus());
    let mb = windowed(b.max_modulus());
    let scale = (ma * mb).min(WINDOW);
    let n = bins_for(scale, prec);
    let eps = prec.resolution / 16.0;
    let pa = Profile::of(a, n, eps, prec);
    let pb = Profile::of(b, n, eps, prec);
    let mut out = pa.product(&pb);
    out.symmetrize();
    let (prims, cut) = out.to_primitives(prec);
    let res = a.resolution() * mb
        + b.resolution() * ma
        + pa.slack * mb
        + pb.slack * ma
        + 3.0 * out.width() * scale;
    Ok(Region::from_parts(prims, inf || cut, res))
}

/// `{1/z}` with `1/0 = ∞` and `1/∞ = 0`.
pub fn invert(a: &Region, prec: &Precision) -> Region {
    if a.is_empty() {
        return Region::empty();
    }
    let zero = C64::new(0.0, 0.0);
    let mut prims = Vec::new();
    let mut inf = false;
    let mut via_profile = Vec::new();
    let mut slack: f64 = 0.0;
    for p in a.primitives() {
        match p {
            RegionPrimitive::PointSet { points, dilation } if *dilation == 0.0 => {
                let mut pts = Vec::new();
                for &z in points {
                    if z == zero {
                        inf = true;
                    } else {
                        pts.push(1.0 / z);
                    }
                }
                if !pts.is_empty() {
                    prims.push(RegionPrimitive::PointSet {
                        points: pts,
                        dilation: 0.0,
                    });
                }
            }
            RegionPrimitive::PointSet { points, dilation } => {
                for &z in points {
                    invert_disc(z, *dilation, &mut prims, &mut inf, &mut via_profile);
                }
            }
            RegionPrimitive::Disc { center, radius } => {
                invert_disc(*center, *radius, &mut prims, &mut inf, &mut via_profile)
            }
            RegionPrimitive::HalfPlaneRe { c, side } => {
                let (c, flip) = match side {
                    Side::Ge => (*c, false),
                    Side::Le => (-c, true),
                };
                let mut local = Vec::new();
                if c > 0.0 {
                    local.push(RegionPrimitive::Disc {
                        center: C64::new(0.5 / c, 0.0),
                        radius: 0.5 / c,
                    });
                } else if c == 0.0 {
                    local.push(RegionPrimitive::HalfPlaneRe { c: 0.0, side: Side::Ge });
                    inf = true;
                } else {
                    inf = true;
                    let region = Region::from_parts(
                        vec![RegionPrimitive::HalfPlaneRe { c, side: Side::Ge }],
                        false,
                        0.0,
                    );
                    let (ps, s) = profile_invert(&region, prec);
                    slack = slack.max(s);
                    local.extend(ps);
                }
                if flip {
                    prims.extend(local.iter().flat_map(|q| scale_primitive(q, C64::new(-1.0, 0.0))));
                } else {
                    prims.extend(local);
                }
            }
            RegionPrimitive::LogPolarBox {
                log_modulus: (lo, hi),
                argument: (x, y),
            } => {
                let inner = prec.inner_radius();
                let outer_ln = prec.truncation.ln();
                if lo.exp() <= inner * (1.0 + 1e-9) {
                    inf = true;
                }
                prims.push(RegionPrimitive::LogPolarBox {
                    log_modulus: (-hi, (-lo).min(outer_ln)),
                    argument: (-y, -x),
                });
            }
            RegionPrimitive::Segment { .. } | RegionPrimitive::ConvexPolygon { .. } => {
                via_profile.push(p.clone())
            }
        }
    }
    if !via_profile.is_empty() {
        let region = Region::from_parts(via_profile, false, 0.0);
        let (ps, s) = profile_invert(&region, prec);
        slack = slack.max(s);
        if region.contains(zero) {
            inf = true;
        }
        prims.extend(ps);
    }
    if a.contains_infinity() {
        prims.push(RegionPrimitive::PointSet {
            points: vec![zero],
            dilation: 0.0,
        });
    }
    // slack of the operand is stretched by |d(1/z)/dz| = 1/|z|²
    let m = a.min_modulus().max(1.0 / WINDOW);
    let res = a.resolution() / (m * m) + slack;
    let mut out = Region::symmetric(prims, inf, res);
    out.dedup_origin();
    out
}

fn invert_disc(
    c: C64,
    r: f64,
    prims: &mut Vec<RegionPrimitive>,
    inf: &mut bool,
    via_profile: &mut Vec<RegionPrimitive>,
) {
    let m2 = c.norm_sqr();
    let tol = 1e-12 * (1.0 + c.norm());
    if r == 0.0 {
        if c == C64::new(0.0, 0.0) {
            *inf = true;
        } else {
            prims.push(RegionPrimitive::PointSet {
                points: vec![1.0 / c],
                dilation: 0.0,
            });
        }
        return;
    }
    let d = c.norm() - r;
    if d > tol {
        let k = m2 - r * r;
        prims.push(RegionPrimitive::Disc {
            center: c.conj() / k,
            radius: r / k,
        });
    } else if d.abs() <= tol {
        // circle through the origin maps to the line Re(c·w) = 1/2
        *inf = true;
        if c.im == 0.0 {
            let side = if c.re > 0.0 { Side::Ge } else { Side::Le };
            prims.push(RegionPrimitive::HalfPlaneRe {
                c: 0.5 / c.re,
                side,
            });
        } else {
            let hp = RegionPrimitive::HalfPlaneRe {
                c: 0.5,
                side: Side::Ge,
            };
            prims.extend(scale_primitive(&hp, 1.0 / c));
        }
    } else {
        *inf = true;
        via_profile.push(RegionPrimitive::Disc {
            center: c,
            radius: r,
        });
    }
}

/// Inverts a region through its angular profile and measures the slack of
/// every resulting sector against the exact image.
fn profile_invert(region: &Region, prec: &Precision) -> (Vec<RegionPrimitive>, f64) {
    let m = region.min_modulus();
    let scale = if m > 0.0 { (1.0 / m).min(WINDOW) } else { WINDOW };
    let n = bins_for(scale, prec);
    let p = Profile::of(region, n, prec.resolution / 16.0, prec);
    let (prims, _) = p.inverted().to_primitives(prec);
    let grid = geom::PieceGrid::new(region.pieces(prec));
    let slack = prims
        .par_iter()
        .map(|q| sector_slack(q, &grid))
        .reduce(|| 0.0, f64::max);
    (prims, slack)
}

/// Largest distance from sample points of an image sector to the exact image
/// of `pieces`, measured inside the window.
fn sector_slack(q: &RegionPrimitive, grid: &geom::PieceGrid) -> f64 {
    let RegionPrimitive::LogPolarBox {
        log_modulus: (lo, hi),
        argument: (a, b),
    } = q
    else {
        return 0.0;
    };
    let r0 = lo.exp();
    let r1 = hi.exp().min(WINDOW);
    if r0 > WINDOW {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for rr in [r0, 0.5 * (r0 + r1), r1] {
        for t in [*a, 0.5 * (a + b), *b] {
            let w = C64::from_polar(rr, t);
            if w.norm() == 0.0 {
                continue;
            }
            let z = 1.0 / w;
            let d = grid.distance(z);
            let s = w.norm_sqr();
            worst = worst.max(d * s * (1.0 + d * w.norm()));
        }
    }
    worst
}

/// Outer cover of `⋃_{τ∈(0,1]} τA`.
pub fn radial_hull(a: &Region, prec: &Precision) -> Region {
    if a.is_empty() {
        return Region::empty();
    }
    let zero = C64::new(0.0, 0.0);
    let mut prims = Vec::new();
    let mut slack: f64 = 0.0;
    let eps = prec.resolution * 0.25;
    for p in a.primitives() {
        match p {
            RegionPrimitive::Disc { center, radius } => {
                if center.norm() <= *radius {
                    prims.push(p.clone());
                } else {
                    let n = geom::polygon_sides(*radius, eps);
                    let mut v = geom::circumscribed_polygon(*center, *radius, n);
                    slack = slack.max(geom::circumscribed_slack(*radius, n));
                    v.push(zero);
                    prims.push(hull_to_primitive(convex_hull(&v)));
                }
            }
            RegionPrimitive::HalfPlaneRe { c, side } => {
                let holds_origin = match side {
                    Side::Ge => *c <= 0.0,
                    Side::Le => *c >= 0.0,
                };
                prims.push(RegionPrimitive::HalfPlaneRe {
                    c: if holds_origin { *c } else { 0.0 },
                    side: *side,
                });
            }
            RegionPrimitive::Segment { a: x, b: y } => {
                prims.push(hull_to_primitive(convex_hull(&[*x, *y, zero])))
            }
            RegionPrimitive::ConvexPolygon { vertices } => {
                let mut v = vertices.clone();
                v.push(zero);
                prims.push(hull_to_primitive(convex_hull(&v)));
            }
            RegionPrimitive::LogPolarBox {
                log_modulus: (_, hi),
                argument,
            } => prims.push(RegionPrimitive::LogPolarBox {
                log_modulus: (prec.inner_radius().ln(), *hi),
                argument: *argument,
            }),
            RegionPrimitive::PointSet { points, dilation } => {
                for &z in points {
                    if *dilation == 0.0 {
                        prims.push(hull_to_primitive(convex_hull(&[z, zero])));
                    } else if z.norm() <= *dilation {
                        prims.push(RegionPrimitive::Disc {
                            center: z,
                            radius: *dilation,
                        });
                    } else {
                        let n = geom::polygon_sides(*dilation, eps);
                        let mut v = geom::circumscribed_polygon(z, *dilation, n);
                        slack = slack.max(geom::circumscribed_slack(*dilation, n));
                        v.push(zero);
                        prims.push(hull_to_primitive(convex_hull(&v)));
                    }
                }
            }
        }
    }
    prims.push(RegionPrimitive::PointSet {
        points: vec![zero],
        dilation: 0.0,
    });
    let mut out = Region::from_parts(prims, a.contains_infinity(), a.resolution() + slack);
    out.dedup_origin();
    out
}

/// Convex hull of a bounded region.
pub fn chord_closure(a: &Region, prec: &Precision) -> Result<Region> {
    if a.is_empty() {
        return Ok(Region::empty());
    }
    if !a.is_bounded() {
        return Err(SrgError::UnsupportedGeometry(
            "chord closure of an unbounded region".into(),
        ));
    }
    if let [single] = a.primitives() {
        let convex = match single {
            RegionPrimitive::Disc { .. }
            | RegionPrimitive::Segment { .. }
            | RegionPrimitive::ConvexPolygon { .. } => true,
            RegionPrimitive::PointSet { points, .. } => points.len() == 1,
            _ => false,
        };
        if convex {
            return Ok(a.clone());
        }
    }
    let eps = prec.resolution * 0.25;
    let mut pts = Vec::new();
    let mut slack: f64 = 0.0;
    for piece in a.pieces(prec) {
        let (poly, s) = piece.outer_polygon(eps).expect("bounded piece");
        slack = slack.max(s);
        pts.extend(poly);
    }
    let hull = convex_hull(&pts);
    Ok(Region::from_parts(
        vec![hull_to_primitive(hull)],
        false,
        a.resolution() + slack,
    ))
}

/// Minimum distance between two regions; `+∞` if either is empty.
pub fn distance(a: &Region, b: &Region, prec: &Precision) -> Distance {
    let error = a.resolution() + b.resolution();
    if a.is_empty() || b.is_empty() {
        return Distance {
            value: f64::INFINITY,
            error,
            witness: None,
        };
    }
    if a.contains_infinity() && b.contains_infinity() {
        return Distance {
            value: 0.0,
            error,
            witness: None,
        };
    }
    let pa = a.pieces(prec);
    let pb = b.pieces(prec);
    if pa.is_empty() || pb.is_empty() {
        return Distance {
            value: f64::INFINITY,
            error,
            witness: None,
        };
    }
    let ba: Vec<_> = pa.iter().map(|p| p.bbox()).collect();
    let bb: Vec<_> = pb.iter().map(|p| p.bbox()).collect();
    let sb: Vec<_> = pb.iter().map(supports).collect();
    // lower bound per piece of `a`, then a best-first scan with pruning
    let mut order: Vec<(f64, usize)> = ba
        .iter()
        .enumerate()
        .map(|(i, x)| (bb.iter().map(|y| bbox_gap(*x, *y)).fold(f64::INFINITY, f64::min), i))
        .collect();
    order.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut best = (f64::INFINITY, C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    let mut row: Vec<(f64, usize)> = Vec::with_capacity(bb.len());
    'outer: for (lower, i) in order {
        if lower >= best.0 {
            break;
        }
        row.clear();
        row.extend(bb.iter().enumerate().map(|(j, y)| (bbox_gap(ba[i], *y), j)));
        row.sort_by(|x, y| x.0.total_cmp(&y.0));
        let sa = supports(&pa[i]);
        for &(gap, j) in &row {
            if gap >= best.0 {
                break;
            }
            let (sep, k) = separation(&sa, &sb[j]);
            if sep >= best.0 {
                continue;
            }
            let d = match (&pa[i], &pb[j]) {
                (Piece::Convex(u), Piece::Convex(v)) if sep > 0.0 && !u.is_empty() && !v.is_empty() => {
                    geom::separated_convex_distance(u, v, support_dir(k))
                }
                _ => piece_distance(&pa[i], &pb[j]),
            };
            if d.0 < best.0 {
                best = d;
                if best.0 == 0.0 {
                    break 'outer;
                }
            }
        }
    }
    Distance {
        value: best.0,
        error,
        witness: Some((best.1, best.2)),
    }
}

const SUPPORT_DIRS: usize = 32;

fn support_dir(k: usize) -> C64 {
    C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / SUPPORT_DIRS as f64)
}

/// Support function sampled on evenly spaced directions.
fn supports(p: &Piece) -> [f64; SUPPORT_DIRS] {
    std::array::from_fn(|k| {
        let u = support_dir(k);
        match p {
            Piece::Disc { center, radius } => center.re * u.re + center.im * u.im + radius,
            Piece::Convex(v) => v
                .iter()
                .map(|z| z.re * u.re + z.im * u.im)
                .fold(f64::NEG_INFINITY, f64::max),
            Piece::HalfPlane { .. } => f64::INFINITY,
        }
    })
}

/// Separating-axis lower bound on the distance between two convex pieces,
/// with the direction that attains it.
fn separation(a: &[f64; SUPPORT_DIRS], b: &[f64; SUPPORT_DIRS]) -> (f64, usize) {
    (0..SUPPORT_DIRS)
        .map(|k| (-(a[(k + SUPPORT_DIRS / 2) % SUPPORT_DIRS] + b[k]), k))
        .filter(|g| !g.0.is_nan())
        .fold((0.0, 0), |m, g| if g.0 > m.0 { g } else { m })
}

pub fn distance_to_point(a: &Region, z: C64, prec: &Precision) -> Distance {
    distance(a, &Region::point(z), prec)
}

pub fn intersects(a: &Region, b: &Region, prec: &Precision) -> bool {
    distance(a, b, prec).value <= 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn disc_sum_is_exact() {
        let s = minkowski_sum(
            &Region::disc(c(1., 0.), 1.),
            &Region::disc(c(2., 0.), 0.5),
            &prec(),
        )
        .unwrap();
        assert_eq!(
            s.primitives(),
            &[RegionPrimitive::Disc {
                center: c(3., 0.),
                radius: 1.5
            }]
        );
    }

    #[test]
    fn two_unbounded_operands_are_rejected() {
        let h = Region::half_plane(1.0, Side::Ge);
        assert!(matches!(
            minkowski_sum(&h, &h, &prec()),
            Err(SrgError::UnsupportedGeometry(_))
        ));
    }

    #[test]
    fn product_identity_and_box_scaling() {
        let b = Region::log_polar_box(1.0, 2.0, 0.0, PI / 4.0);
        let one = Region::real_point(1.0);
        assert_eq!(minkowski_product(&b, &one, &prec()).unwrap(), b);
        let two = minkowski_product(&b, &Region::real_point(2.0), &prec()).unwrap();
        assert_eq!(two, Region::log_polar_box(2.0, 4.0, 0.0, PI / 4.0));
    }

    #[test]
    fn cardioid_extremes() {
        let d = Region::disc(c(0.5, 0.), 0.5);
        let card = minkowski_product(&d, &d, &prec()).unwrap();
        assert!((card.max_modulus() - 1.0).abs() < 1e-3);
        assert!((card.min_re() + 0.125).abs() < 1e-3, "{}", card.min_re());
        assert!(card.resolution() < 1e-3);
    }

    #[test]
    fn inversion_of_discs_and_half_planes() {
        let d = Region::disc(c(0.5, 0.), 0.5);
        let inv = invert(&d, &prec());
        assert!(inv.contains_infinity());
        assert_eq!(
            inv.primitives(),
            &[RegionPrimitive::HalfPlaneRe { c: 1.0, side: Side::Ge }]
        );
        let back = invert(&inv, &prec());
        assert!(back.contains(c(0.5, 0.5)) && back.contains(c(0., 0.)));
        assert!(!back.contains(c(1.01, 0.)));
        let away = invert(&Region::disc(c(1.5, 0.), 0.5), &prec());
        assert_eq!(
            away.primitives(),
            &[RegionPrimitive::Disc {
                center: c(0.75, 0.),
                radius: 0.25
            }]
        );
    }

    #[test]
    fn radial_and_chord_closures() {
        let p = prec();
        let r = radial_hull(&Region::real_point(1.0), &p);
        assert!(r.contains(c(0.5, 0.)) && r.contains(c(0., 0.)));
        let s = chord_closure(&Region::points(&[c(-1., 0.), c(1., 0.)]), &p).unwrap();
        assert_eq!(
            s.primitives(),
            &[RegionPrimitive::Segment {
                a: c(-1., 0.),
                b: c(1., 0.)
            }]
        );
    }

    #[test]
    fn distances() {
        let p = prec();
        let d = distance(
            &Region::disc(c(0., 0.), 1.),
            &Region::disc(c(4., 0.), 1.),
            &p,
        );
        assert!((d.value - 2.0).abs() < 1e-12);
        let o = distance(
            &Region::disc(c(0., 0.), 1.),
            &Region::disc(c(1., 0.), 1.),
            &p,
        );
        assert_eq!(o.value, 0.0);
        assert!(distance(&Region::empty(), &Region::real_point(1.), &p)
            .value
            .is_infinite());
    }
}
