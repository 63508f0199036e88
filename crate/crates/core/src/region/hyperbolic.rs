//! Hyperbolic convex hulls in the upper half-plane.
//!
//! Hull vertices are selected in the Klein model, where geodesics are chords,
//! and the boundary is rebuilt in the half-plane from the original points so
//! that no precision is lost in the round trip. The region is cut into
//! vertical strips (an h-convex set meets every vertical geodesic in a
//! segment), and each strip becomes one convex polygon: the chord under the
//! lower arc and a tangent polygon above the upper arc.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::geom::{convex_hull, convex_hull_indices, cross};
use super::{hull_to_primitive, Precision, Region, RegionPrimitive, WINDOW};

/// How the upper-half hull is completed to a conjugate-symmetric region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullMode {
    /// Hull plus its mirror image.
    Mirror,
    /// Everything between the hull's upper boundary and its mirror image.
    Fill,
}

#[derive(Debug, Clone, Copy)]
enum Geodesic {
    Vertical,
    Arc { c: f64, rho: f64 },
}

impl Geodesic {
    fn through(a: C64, b: C64) -> Geodesic {
        let dx = b.re - a.re;
        if dx.abs() <= 1e-13 * (1.0 + a.re.abs().max(b.re.abs())) {
            return Geodesic::Vertical;
        }
        let c = (b.norm_sqr() - a.norm_sqr()) / (2.0 * dx);
        let rho = 0.5 * ((a - c).norm() + (b - c).norm());
        Geodesic::Arc { c, rho }
    }

    fn y_at(&self, x: f64) -> f64 {
        match *self {
            Geodesic::Vertical => 0.0,
            Geodesic::Arc { c, rho } => (rho * rho - (x - c) * (x - c)).max(0.0).sqrt(),
        }
    }

    fn phi_at(&self, x: f64) -> f64 {
        match *self {
            Geodesic::Vertical => PI / 2.0,
            Geodesic::Arc { c, rho } => ((x - c) / rho).clamp(-1.0, 1.0).acos(),
        }
    }
}

fn to_klein(z: C64) -> C64 {
    let i = C64::i();
    let w = (z - i) / (z + i);
    w * (2.0 / (1.0 + w.norm_sqr()))
}

/// Slack allowed for boundary pieces near `z`.
fn local_eps(prec: &Precision, z: C64) -> f64 {
    (prec.resolution * 0.25).max(1e-12) * (z.norm() / WINDOW).max(1.0)
}

/// Arc angles from `phi_hi` down to `phi_lo` with steps sized for the slack.
fn arc_breaks(c: f64, rho: f64, phi_hi: f64, phi_lo: f64, prec: &Precision) -> Vec<f64> {
    let mut out = vec![phi_hi];
    let mut phi = phi_hi;
    let mut guard = 0;
    while phi > phi_lo && guard < 200_000 {
        let z = C64::new(c + rho * phi.cos(), rho * phi.sin());
        let step = (8.0 * local_eps(prec, z) / rho).sqrt().min(PI / 8.0);
        phi = (phi - step).max(phi_lo);
        out.push(phi);
        guard += 1;
    }
    if *out.last().unwrap() > phi_lo {
        out.push(phi_lo);
    }
    out
}

fn tangent_apex(c: f64, rho: f64, p0: f64, p1: f64) -> C64 {
    let half = 0.5 * (p0 - p1).abs();
    C64::new(c, 0.0) + C64::from_polar(rho / half.cos(), 0.5 * (p0 + p1))
}

/// h-convex hull of `points`, mirrored across the real axis.
pub fn h_convex_hull(points: &[C64], prec: &Precision) -> Region {
    hyperbolic_hull_with(points, HullMode::Mirror, prec)
}

pub fn hyperbolic_hull_with(points: &[C64], mode: HullMode, prec: &Precision) -> Region {
    let mut pts: Vec<C64> = Vec::with_capacity(points.len());
    for &z in points {
        if !(z.re.is_finite() && z.im.is_finite()) {
            continue;
        }
        let mut w = if z.im < 0.0 { z.conj() } else { z };
        if w.im <= 1e-12 * (1.0 + w.re.abs()) {
            w.im = 0.0;
        }
        pts.push(w);
    }
    if pts.is_empty() {
        return Region::empty();
    }
    let res = prec.resolution * 0.25;
    let klein: Vec<C64> = pts.iter().map(|&z| to_klein(z)).collect();
    let idx = convex_hull_indices(&klein);
    let hull: Vec<C64> = idx.iter().map(|&i| pts[i]).collect();

    let degenerate = match idx.len() {
        0..=2 => true,
        _ => {
            let k: Vec<C64> = idx.iter().map(|&i| klein[i]).collect();
            let area: f64 = (1..k.len() - 1)
                .map(|i| cross(k[i] - k[0], k[i + 1] - k[0]))
                .sum::<f64>()
                .abs();
            area <= 1e-14
        }
    };

    let prims = if degenerate {
        let (a, b) = farthest_pair(&idx, &klein, &pts);
        if (a - b).norm() <= 1e-15 * (1.0 + a.norm()) {
            return Region::points(&[a]);
        }
        geodesic_pieces(a, b, mode, prec)
    } else {
        strip_pieces(&hull, mode, prec)
    };
    match mode {
        HullMode::Mirror => {
            // pieces lie in the closed upper half-plane, so mirrors never repeat
            let mirrored: Vec<RegionPrimitive> = prims
                .iter()
                .filter(|p| !p.is_self_symmetric())
                .map(|p| p.conj())
                .collect();
            let mut all = prims;
            all.extend(mirrored);
            Region::from_parts(all, false, res)
        }
        HullMode::Fill => Region::from_parts(prims, false, res),
    }
}

fn farthest_pair(idx: &[usize], klein: &[C64], pts: &[C64]) -> (C64, C64) {
    let cand: Vec<usize> = if idx.is_empty() {
        (0..pts.len()).collect()
    } else {
        idx.to_vec()
    };
    let (mut bi, mut bj, mut best) = (cand[0], cand[0], -1.0);
    for (n, &i) in cand.iter().enumerate() {
        for &j in &cand[n..] {
            let d = (klein[i] - klein[j]).norm();
            if d > best {
                best = d;
                bi = i;
                bj = j;
            }
        }
    }
    (pts[bi], pts[bj])
}

/// Thin convex pieces covering the geodesic segment from `a` to `b`.
fn geodesic_pieces(a: C64, b: C64, mode: HullMode, prec: &Precision) -> Vec<RegionPrimitive> {
    let fill = |v: Vec<C64>| -> RegionPrimitive {
        if mode == HullMode::Fill {
            let mut all = v.clone();
            all.extend(v.iter().map(|z| z.conj()));
            hull_to_primitive(convex_hull(&all))
        } else {
            hull_to_primitive(convex_hull(&v))
        }
    };
    match Geodesic::through(a, b) {
        Geodesic::Vertical => vec![fill(vec![a, b])],
        Geodesic::Arc { c, rho } => {
            let pa = Geodesic::Arc { c, rho }.phi_at(a.re);
            let pb = Geodesic::Arc { c, rho }.phi_at(b.re);
            let breaks = arc_breaks(c, rho, pa.max(pb), pa.min(pb), prec);
            let at = |phi: f64| C64::new(c + rho * phi.cos(), rho * phi.sin());
            breaks
                .windows(2)
                .map(|w| fill(vec![at(w[0]), at(w[1]), tangent_apex(c, rho, w[0], w[1])]))
                .collect()
        }
    }
}

struct Edge {
    x0: f64,
    x1: f64,
    geo: Geodesic,
}

fn strip_pieces(hull: &[C64], mode: HullMode, prec: &Precision) -> Vec<RegionPrimitive> {
    let n = hull.len();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for i in 0..n {
        let a = hull[i];
        let b = hull[(i + 1) % n];
        let geo = Geodesic::through(a, b);
        if matches!(geo, Geodesic::Vertical) {
            continue;
        }
        let e = Edge {
            x0: a.re.min(b.re),
            x1: a.re.max(b.re),
            geo,
        };
        // counterclockwise traversal: leftward edges bound the region from above
        if b.re < a.re {
            upper.push(e);
        } else {
            lower.push(e);
        }
    }
    let mut xs: Vec<f64> = hull.iter().map(|z| z.re).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();

    // boundary chains are x-monotone, so their edges tile the x-axis in order
    upper.sort_by(|a, b| a.x0.total_cmp(&b.x0));
    lower.sort_by(|a, b| a.x0.total_cmp(&b.x0));
    let find = |edges: &[Edge], xm: f64| -> Option<Geodesic> {
        let i = edges.partition_point(|e| e.x1 < xm);
        edges
            .get(i)
            .filter(|e| e.x0 <= xm && xm <= e.x1)
            .map(|e| e.geo)
    };

    let mut out = Vec::new();
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let xm = 0.5 * (x0 + x1);
        let Some(up) = find(&upper, xm) else { continue };
        let lo = if mode == HullMode::Fill {
            None
        } else {
            find(&lower, xm)
        };
        let mut cuts = vec![x0, x1];
        for g in [Some(up), lo].into_iter().flatten() {
            if let Geodesic::Arc { c, rho } = g {
                let phis = arc_breaks(c, rho, g.phi_at(x0), g.phi_at(x1), prec);
                cuts.extend(phis.iter().map(|p| (c + rho * p.cos()).clamp(x0, x1)));
            }
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * (1.0 + a.abs()));

        let Geodesic::Arc { c, rho } = up else { continue };
        for s in cuts.windows(2) {
            let (a, b) = (s[0], s[1]);
            let ua = C64::new(a, up.y_at(a));
            let ub = C64::new(b, up.y_at(b));
            let apex = tangent_apex(c, rho, up.phi_at(a), up.phi_at(b));
            let mut v = vec![ua, ub, apex];
            match lo {
                Some(g) => {
                    v.push(C64::new(a, g.y_at(a)));
                    v.push(C64::new(b, g.y_at(b)));
                }
                None if mode == HullMode::Fill => {
                    v.extend([ua.conj(), ub.conj(), apex.conj()]);
                }
                None => {
                    v.push(C64::new(a, 0.0));
                    v.push(C64::new(b, 0.0));
                }
            }
            out.push(hull_to_primitive(convex_hull(&v)));
        }
    }
    out
}
