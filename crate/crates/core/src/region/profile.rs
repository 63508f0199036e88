//! Angular profiles: one annular sector per argument bin.
//!
//! A profile covers a region by `n` sectors `[lo_k, hi_k] × [θ_k, θ_{k+1}]`
//! with `θ_k = −π + 2πk/n`. Products and inverses of sectors are sectors, so
//! both operations are exact on profiles; all slack comes from building the
//! profile and from the bin width.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::geom::{clip_wedge, dist_point_convex, point_in_convex};
use super::{primitive_pieces, Precision, Region, RegionPrimitive};

const EMPTY: f64 = -1.0;

#[derive(Debug, Clone)]
pub(crate) struct Profile {
    pub n: usize,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// The origin belongs to the covered set.
    pub origin: bool,
    /// Some part of the set was cut at the truncation radius.
    pub truncated: bool,
    /// Polygonization slack introduced while building the profile.
    pub slack: f64,
}

impl Profile {
    pub fn empty(n: usize) -> Self {
        let n = n.max(4) & !1;
        Self {
            n,
            lo: vec![f64::INFINITY; n],
            hi: vec![EMPTY; n],
            origin: false,
            truncated: false,
            slack: 0.0,
        }
    }

    pub fn width(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn edge(&self, k: usize) -> f64 {
        -PI + self.width() * k as f64
    }

    pub fn occupied(&self, k: usize) -> bool {
        self.hi[k] >= 0.0
    }

    fn put(&mut self, k: usize, lo: f64, hi: f64) {
        self.lo[k] = self.lo[k].min(lo);
        self.hi[k] = self.hi[k].max(hi);
    }

    /// Profile of a region's finite part. `eps` bounds polygonization slack.
    pub fn of(region: &Region, n: usize, eps: f64, prec: &Precision) -> Self {
        let mut p = Profile::empty(n);
        let inner = prec.inner_radius();
        for prim in region.primitives() {
            match prim {
                RegionPrimitive::LogPolarBox {
                    log_modulus: (l, h),
                    argument: (a, b),
                } => {
                    let r1 = l.exp();
                    let r1 = if r1 <= inner * (1.0 + 1e-9) { 0.0 } else { r1 };
                    if r1 == 0.0 {
                        p.origin = true;
                    }
                    p.add_box(r1, h.exp(), *a, *b);
                }
                RegionPrimitive::Disc { center, radius } => p.add_disc(*center, *radius),
                RegionPrimitive::PointSet { points, dilation } if *dilation > 0.0 => {
                    for &z in points {
                        p.add_disc(z, *dilation);
                    }
                }
                RegionPrimitive::HalfPlaneRe { .. } => {
                    let mut pieces = Vec::new();
                    primitive_pieces(prim, prec, &mut pieces);
                    for piece in pieces {
                        let (poly, _) = piece.truncated_polygon(eps, prec.truncation);
                        p.truncated = true;
                        p.add_polygon(&poly);
                    }
                }
                _ => {
                    let mut pieces = Vec::new();
                    primitive_pieces(prim, prec, &mut pieces);
                    for piece in pieces {
                        if let Some((poly, s)) = piece.outer_polygon(eps) {
                            p.slack = p.slack.max(s);
                            p.add_polygon(&poly);
                        }
                    }
                }
            }
        }
        p
    }

    fn bins_between(&self, a: f64, b: f64) -> Vec<usize> {
        let n = self.n;
        if b - a >= 2.0 * PI - 1e-12 {
            return (0..n).collect();
        }
        let w = self.width();
        let start = ((a + PI) / w).floor() as i64;
        let mut end = ((b + PI) / w).ceil() as i64 - 1;
        if end < start {
            end = start;
        }
        (start..=end)
            .map(|k| k.rem_euclid(n as i64) as usize)
            .collect()
    }

    fn add_box(&mut self, r1: f64, r2: f64, a: f64, b: f64) {
        for k in self.bins_between(a, b) {
            self.put(k, r1, r2);
        }
    }

    /// Exact sector bounds of a disc: extremes of `|z|` over disc ∩ wedge sit
    /// on the ray through the centre or on the wedge edges.
    fn add_disc(&mut self, c: C64, r: f64) {
        let m = c.norm();
        let has_origin = m <= r;
        if has_origin {
            self.origin = true;
        }
        let bins = if has_origin {
            (0..self.n).collect()
        } else {
            let spread = (r / m).asin();
            self.bins_between(c.arg() - spread, c.arg() + spread)
        };
        // distances along the ray at angle t where it crosses the circle
        let crossings = |t: f64| -> Option<(f64, f64)> {
            let b = c.re * t.cos() + c.im * t.sin();
            let disc = b * b - (m * m - r * r);
            if disc < 0.0 {
                return None;
            }
            let s = disc.sqrt();
            let far = b + s;
            (far >= 0.0).then_some(((b - s).max(0.0), far))
        };
        for k in bins {
            let (t0, t1) = (self.edge(k), self.edge(k + 1));
            let mut lo = f64::INFINITY;
            let mut hi = EMPTY;
            if m > 0.0 && super::arg_in(c.arg(), t0, t1, 0.0) {
                lo = (m - r).max(0.0);
                hi = m + r;
            }
            for t in [t0, t1] {
                if let Some((near, far)) = crossings(t) {
                    lo = lo.min(near);
                    hi = hi.max(far);
                }
            }
            if m == 0.0 {
                lo = 0.0;
                hi = r;
            }
            if has_origin {
                lo = 0.0;
            }
            if hi >= 0.0 {
                self.put(k, lo, hi);
            }
        }
    }

    fn add_polygon(&mut self, poly: &[C64]) {
        if poly.is_empty() {
            return;
        }
        let zero = C64::new(0.0, 0.0);
        let has_origin = point_in_convex(zero, poly, 1e-15);
        if has_origin {
            self.origin = true;
        }
        let centroid = poly.iter().sum::<C64>() / poly.len() as f64;
        // an origin on the boundary still leaves the polygon within a half-plane
        let interior = has_origin && dist_point_convex_boundary(zero, poly) > 1e-12 * (1.0 + centroid.norm());
        let bins = if interior || centroid.norm() == 0.0 {
            (0..self.n).collect()
        } else {
            let ref_arg = centroid.arg();
            let (mut a, mut b) = (f64::INFINITY, f64::NEG_INFINITY);
            for z in poly.iter().filter(|z| z.norm() > 1e-300) {
                let rel = (z.arg() - ref_arg + PI).rem_euclid(2.0 * PI) - PI;
                a = a.min(rel);
                b = b.max(rel);
            }
            self.bins_between(ref_arg + a, ref_arg + b)
        };
        for k in bins {
            let (t0, t1) = (self.edge(k), self.edge(k + 1));
            let part = clip_wedge(poly, t0, t1);
            if part.is_empty() {
                continue;
            }
            let hi = part.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let lo = dist_point_convex(zero, &part).0;
            self.put(k, lo, hi);
        }
    }

    /// Makes the profile closed under conjugation.
    pub fn symmetrize(&mut self) {
        let n = self.n;
        for k in 0..n / 2 {
            let m = n - 1 - k;
            let lo = self.lo[k].min(self.lo[m]);
            let hi = self.hi[k].max(self.hi[m]);
            self.lo[k] = lo;
            self.lo[m] = lo;
            self.hi[k] = hi;
            self.hi[m] = hi;
        }
    }

    /// Exact product of the two sector covers, widened by one bin.
    pub fn product(&self, other: &Profile) -> Profile {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let half = n / 2;
        // occupied runs of `self`, and `other` tiled three times so the
        // partner index never wraps; empty bins poison the max/min as ±∞
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for i in 0..n {
            if self.occupied(i) {
                match runs.last_mut() {
                    Some((_, end)) if *end == i => *end = i + 1,
                    _ => runs.push((i, i + 1)),
                }
            }
        }
        let tile = |v: &[f64], empty: f64| -> Vec<f64> {
            (0..3 * n)
                .map(|t| {
                    let j = t % n;
                    if other.occupied(j) {
                        v[j]
                    } else {
                        empty
                    }
                })
                .collect()
        };
        let hb = tile(&other.hi, f64::NEG_INFINITY);
        let lb = tile(&other.lo, f64::INFINITY);
        // split runs into chunks of about √n bins and prune with
        // range-extreme bounds: a chunk is scanned only if its bound can
        // still beat the current extreme
        const SUB: usize = 16;
        let chunk = ((n as f64).sqrt() as usize / SUB).max(4) * SUB;
        // extremes over aligned blocks of SUB bins
        let sub_hi: Vec<f64> = (0..n.div_ceil(SUB))
            .map(|s| self.hi[s * SUB..((s + 1) * SUB).min(n)].iter().copied().fold(0.0, f64::max))
            .collect();
        let sub_lo: Vec<f64> = (0..n.div_ceil(SUB))
            .map(|s| self.lo[s * SUB..((s + 1) * SUB).min(n)].iter().copied().fold(f64::INFINITY, f64::min))
            .collect();
        let chunks: Vec<(usize, usize, f64, f64)> = runs
            .iter()
            .flat_map(|&(a, b)| (a..b).step_by(chunk).map(move |c| (c, (c + chunk).min(b))))
            .map(|(c0, c1)| {
                let ha = self.hi[c0..c1].iter().copied().fold(0.0, f64::max);
                let la = self.lo[c0..c1].iter().copied().fold(f64::INFINITY, f64::min);
                (c0, c1, ha, la)
            })
            .collect();
        // most ranges have width `chunk` or SUB; read those from flat tables
        let wide = (sliding(&hb, chunk, f64::max), sliding(&lb, chunk, f64::min));
        let narrow = (sliding(&hb, SUB, f64::max), sliding(&lb, SUB, f64::min));
        let range_hi = |a: usize, b: usize| match b - a {
            w if w == chunk => wide.0[a],
            SUB => narrow.0[a],
            _ => hb[a..b].iter().copied().fold(f64::NEG_INFINITY, f64::max),
        };
        let range_lo = |a: usize, b: usize| match b - a {
            w if w == chunk => wide.1[a],
            SUB => narrow.1[a],
            _ => lb[a..b].iter().copied().fold(f64::INFINITY, f64::min),
        };
        // inside a chunk, sub-chunks are pruned the same way; 0 · ∞ bounds
        // (empty partner ranges) are NaN and never scanned
        let scan_hi = |c: usize, jk: usize, best: &mut (f64, usize)| {
            let (i0, i1, _, _) = chunks[c];
            for blk in i0 / SUB..=(i1 - 1) / SUB {
                let (s0, s1) = ((blk * SUB).max(i0), ((blk + 1) * SUB).min(i1));
                if !(sub_hi[blk] * range_hi(jk + 1 - s1, jk + 1 - s0) > best.0) {
                    continue;
                }
                for i in s0..s1 {
                    let v = self.hi[i] * hb[jk - i];
                    if v > best.0 {
                        *best = (v, i);
                    }
                }
            }
        };
        let scan_lo = |c: usize, jk: usize, best: &mut (f64, usize)| {
            let (i0, i1, _, _) = chunks[c];
            for blk in i0 / SUB..=(i1 - 1) / SUB {
                let (s0, s1) = ((blk * SUB).max(i0), ((blk + 1) * SUB).min(i1));
                if !(sub_lo[blk] * range_lo(jk + 1 - s1, jk + 1 - s0) < best.0) {
                    continue;
                }
                for i in s0..s1 {
                    let v = self.lo[i] * lb[jk - i];
                    if v < best.0 {
                        *best = (v, i);
                    }
                }
            }
        };
        // bin i + bin j covers [θ_k, θ_{k+2}] with k = (i + j + n/2) mod n.
        // Consecutive k are warm-started from the previous optimal pair.
        const BLOCK: usize = 512;
        let base: Vec<(f64, f64)> = (0..n.div_ceil(BLOCK))
            .into_par_iter()
            .flat_map_iter(|blk| {
                let mut prev: Option<(usize, usize)> = None;
                (blk * BLOCK..((blk + 1) * BLOCK).min(n))
                    .map(|k| {
                        let jk = k + 2 * n - half;
                        let mut hi = (f64::NEG_INFINITY, 0);
                        let mut lo = (f64::INFINITY, 0);
                        if let Some((ih, il)) = prev {
                            for i in [ih, ih + 1] {
                                if i < n && self.occupied(i) && self.hi[i] * hb[jk - i] > hi.0 {
                                    hi = (self.hi[i] * hb[jk - i], i);
                                }
                            }
                            for i in [il, il + 1] {
                                if i < n && self.occupied(i) && self.lo[i] * lb[jk - i] < lo.0 {
                                    lo = (self.lo[i] * lb[jk - i], i);
                                }
                            }
                        }
                        for (c, &(i0, i1, ha, la)) in chunks.iter().enumerate() {
                            let (j0, j1) = (jk + 1 - i1, jk + 1 - i0);
                            if ha * range_hi(j0, j1) > hi.0 {
                                scan_hi(c, jk, &mut hi);
                            }
                            if la * range_lo(j0, j1) < lo.0 {
                                scan_lo(c, jk, &mut lo);
                            }
                        }
                        if hi.0.is_finite() && hi.0 >= 0.0 {
                            prev = Some((hi.1, lo.1));
                            (lo.0, hi.0)
                        } else {
                            prev = None;
                            (f64::INFINITY, EMPTY)
                        }
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        let a_bins = runs.iter().map(|(a, b)| b - a).sum::<usize>();
        let mut out = Profile::empty(n);
        for k in 0..n {
            let (l0, h0) = base[k];
            let (l1, h1) = base[(k + n - 1) % n];
            out.lo[k] = l0.min(l1);
            out.hi[k] = h0.max(h1);
        }
        let a_nonempty = a_bins > 0 || self.origin;
        let b_nonempty = other.hi.iter().any(|&h| h >= 0.0) || other.origin;
        out.origin = (self.origin && b_nonempty) || (other.origin && a_nonempty);
        out.truncated = self.truncated || other.truncated;
        out
    }

    /// Sector-wise `1/z`. Bins holding only the origin are dropped.
    pub fn inverted(&self) -> Profile {
        let n = self.n;
        let mut out = Profile::empty(n);
        for k in 0..n {
            if !self.occupied(k) || self.hi[k] == 0.0 {
                continue;
            }
            let m = n - 1 - k;
            let hi = if self.lo[k] > 0.0 {
                1.0 / self.lo[k]
            } else {
                f64::INFINITY
            };
            out.put(m, 1.0 / self.hi[k], hi);
        }
        out
    }

    /// Sectors as log-polar boxes clipped to the truncation annulus. The flag
    /// reports whether anything was cut at the outer radius.
    pub fn to_primitives(&self, prec: &Precision) -> (Vec<RegionPrimitive>, bool) {
        let inner = prec.inner_radius();
        let outer = prec.truncation;
        let mut out = Vec::new();
        let mut cut = self.truncated;
        let mut k = 0;
        while k < self.n {
            if !self.occupied(k) {
                k += 1;
                continue;
            }
            let (lo, hi) = (self.lo[k], self.hi[k]);
            let mut end = k + 1;
            while end < self.n && self.lo[end] == lo && self.hi[end] == hi {
                end += 1;
            }
            if hi > outer {
                cut = true;
            }
            if lo <= outer && hi > 0.0 {
                out.push(RegionPrimitive::LogPolarBox {
                    log_modulus: (lo.max(inner).min(outer).ln(), hi.min(outer).max(inner).ln()),
                    argument: (self.edge(k), self.edge(end)),
                });
            }
            k = end;
        }
        if self.origin {
            out.push(RegionPrimitive::PointSet {
                points: vec![C64::new(0.0, 0.0)],
                dilation: 0.0,
            });
        }
        (out, cut)
    }
}

fn dist_point_convex_boundary(z: C64, poly: &[C64]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| super::geom::dist_point_segment(z, poly[i], poly[(i + 1) % n]).0)
        .fold(f64::INFINITY, f64::min)
}

/// Range-extreme queries on a fixed array.
/// Extremes of every window of width `w` of `v`, indexed by start
/// (van Herk / Gil–Werman).
fn sliding(v: &[f64], w: usize, op: fn(f64, f64) -> f64) -> Vec<f64> {
    let n = v.len();
    if w == 0 || w > n {
        return Vec::new();
    }
    let mut pre = v.to_vec();
    let mut suf = v.to_vec();
    for i in 1..n {
        if i % w != 0 {
            pre[i] = op(pre[i - 1], v[i]);
        }
    }
    for i in (0..n - 1).rev() {
        if (i + 1) % w != 0 {
            suf[i] = op(suf[i + 1], v[i]);
        }
    }
    (0..=n - w).map(|a| op(suf[a], pre[a + w - 1])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_profile_round_trips() {
        let prec = Precision::default();
        let r = Region::log_polar_box(1.0, 2.0, 0.0, PI / 4.0);
        let p = Profile::of(&r, 64, 1e-4, &prec);
        let (prims, cut) = p.to_primitives(&prec);
        assert!(!cut);
        let back = Region::from_parts(prims, false, 0.0);
        assert!(back.contains(C64::from_polar(1.5, 0.5)));
        assert!(back.contains(C64::from_polar(1.5, -0.5)));
        assert!(!back.contains(C64::from_polar(2.5, 0.5)));
    }

    #[test]
    fn disc_through_origin_flags_origin() {
        let prec = Precision::default();
        let r = Region::disc(C64::new(0.5, 0.0), 0.5);
        let p = Profile::of(&r, 256, 1e-4, &prec);
        assert!(p.origin);
        let k = 128; // argument just above zero
        assert!((p.hi[k] - 1.0).abs() < 1e-3);
        assert_eq!(p.lo[k], 0.0);
        assert!(p.hi[0] < 1e-4);
    }
}
