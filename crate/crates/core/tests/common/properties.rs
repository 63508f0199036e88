use std::f64::consts::PI;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, RngSeed, TestRunner};
use srg_core::region::{
    h_convex_hull, invert, minkowski_product, minkowski_sum, Precision, RegionIndex,
};
use srg_core::signal::rng_for;
use srg_core::{Complex64 as C64, Region};

const SAMPLES: usize = 10_000;

fn config() -> Config {
    Config {
        cases: 100,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(0x5e6),
        failure_persistence: None,
        ..Config::default()
    }
}

fn prec() -> Precision {
    Precision::default()
}

fn disc() -> impl Strategy<Value = Region> {
    (-2.0..2.0f64, -2.0..2.0f64, 0.05..1.5f64).prop_map(|(x, y, r)| Region::disc(C64::new(x, y), r))
}

fn log_box() -> impl Strategy<Value = Region> {
    (0.2..1.0f64, 1.2..3.0f64, -PI..PI, 0.1..1.5f64)
        .prop_map(|(r, k, a, w)| Region::log_polar_box(r, r * k, a, a + w))
}

fn polygon() -> impl Strategy<Value = Region> {
    (
        -2.0..2.0f64,
        -2.0..2.0f64,
        proptest::collection::vec((0.0..1.0f64, -PI..PI), 3..8),
    )
        .prop_map(|(x, y, pts)| {
            let v: Vec<C64> = pts
                .iter()
                .map(|&(r, t)| C64::new(x, y) + C64::from_polar(0.1 + r, t))
                .collect();
            Region::polygon(&v)
        })
}

fn region() -> impl Strategy<Value = Region> {
    prop_oneof![disc(), log_box(), polygon()]
}

/// Regions kept away from the origin so inversion stays in the window.
fn away_from_origin() -> impl Strategy<Value = Region> {
    (0.3..2.0f64, -PI..PI, 0.05..1.0f64).prop_map(|(gap, t, r)| {
        Region::disc(C64::from_polar(r + gap, t), r)
    })
}

fn index(r: &Region) -> RegionIndex {
    r.index(&Precision::new(1e-5, 1e6))
}

/// Largest distance from `n` sampled points of `a` to `b`.
fn one_sided(a: &Region, b: &Region, n: usize, seed: u64) -> f64 {
    let ib = index(b);
    let mut rng = rng_for(seed, 7);
    a.sample_points(n, &mut rng)
        .into_iter()
        .map(|z| ib.distance(z))
        .fold(0.0, f64::max)
}

fn hausdorff(a: &Region, b: &Region, n: usize, seed: u64) -> f64 {
    one_sided(a, b, n, seed).max(one_sided(b, a, n, seed + 1))
}

/// Points on the hyperbolic geodesic between two upper-half-plane points.
fn geodesic(z1: C64, z2: C64, n: usize) -> Vec<C64> {
    if (z1.re - z2.re).abs() < 1e-12 {
        return (0..=n)
            .map(|k| {
                let t = k as f64 / n as f64;
                C64::new(z1.re, z1.im * (z2.im / z1.im).powf(t))
            })
            .collect();
    }
    let c = (z2.norm_sqr() - z1.norm_sqr()) / (2.0 * (z2.re - z1.re));
    let rad = (z1 - c).norm();
    let (t1, t2) = ((z1 - c).arg(), (z2 - c).arg());
    (0..=n)
        .map(|k| {
            let t = t1 + (t2 - t1) * k as f64 / n as f64;
            C64::new(c, 0.0) + C64::from_polar(rad, t)
        })
        .collect()
}

fn upper_points() -> impl Strategy<Value = Vec<C64>> {
    proptest::collection::vec((-3.0..3.0f64, 0.05..3.0f64), 2..8)
        .prop_map(|v| v.into_iter().map(|(x, y)| C64::new(x, y)).collect())
}

fn with_conjugates(p: &[C64]) -> Vec<C64> {
    p.iter().flat_map(|z| [*z, z.conj()]).collect()
}

fn run<S: Strategy>(strategy: S, case: impl Fn(S::Value) -> Result<(), TestCaseError>)
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(config());
    if let Err(e) = runner.run(&strategy, case) {
        panic!("{e}");
    }
}

pub fn sum_is_outer_sound() {
    run((region(), region(), 0u64..1000), |(a, b, seed)| {
        let s = minkowski_sum(&a, &b, &prec()).unwrap();
        let idx = index(&s);
        let tol = s.resolution() + 1e-9;
        let mut rng = rng_for(seed, 1);
        let xs = a.sample_points(SAMPLES, &mut rng);
        let ys = b.sample_points(SAMPLES, &mut rng);
        for (x, y) in xs.iter().zip(&ys) {
            prop_assert!(idx.contains_dilated(x + y, tol), "{x} + {y}");
        }
        Ok(())
    });
}

pub fn product_is_outer_sound() {
    run((region(), region(), 0u64..1000), |(a, b, seed)| {
        let p = minkowski_product(&a, &b, &prec()).unwrap();
        let idx = index(&p);
        let tol = p.resolution() + 1e-9;
        let mut rng = rng_for(seed, 2);
        let xs = a.sample_points(SAMPLES, &mut rng);
        let ys = b.sample_points(SAMPLES, &mut rng);
        for (x, y) in xs.iter().zip(&ys) {
            prop_assert!(idx.contains_dilated(x * y, tol * (1.0 + (x * y).norm())), "{x} · {y}");
        }
        Ok(())
    });
}

pub fn invert_is_outer_sound() {
    run((region(), 0u64..1000), |(a, seed)| {
        let inv = invert(&a, &prec());
        let idx = index(&inv);
        let mut rng = rng_for(seed, 3);
        for z in a.sample_points(SAMPLES, &mut rng) {
            if z.norm() < 1e-3 {
                continue;
            }
            let w = z.inv();
            prop_assert!(
                idx.contains_dilated(w, inv.resolution() * (1.0 + w.norm()) + 1e-9),
                "1/{z}"
            );
        }
        Ok(())
    });
}

pub fn invert_is_an_involution() {
    run((away_from_origin(), 0u64..1000), |(a, seed)| {
        let p = prec();
        let back = invert(&invert(&a, &p), &p);
        let h = hausdorff(&a, &back, 2000, seed);
        prop_assert!(h <= 2.0 * p.resolution, "hausdorff {h}");
        Ok(())
    });
}

pub fn zero_and_one_are_identities() {
    run((region(), 0u64..1000), |(a, seed)| {
        let p = prec();
        let s = minkowski_sum(&a, &Region::real_point(0.0), &p).unwrap();
        prop_assert!(hausdorff(&a, &s, 2000, seed) <= p.resolution);
        let m = minkowski_product(&a, &Region::real_point(1.0), &p).unwrap();
        prop_assert!(hausdorff(&a, &m, 2000, seed) <= p.resolution * (1.0 + a.max_modulus()));
        Ok(())
    });
}

pub fn sum_and_product_commute() {
    run((region(), region(), 0u64..1000), |(a, b, seed)| {
        let p = prec();
        let ab = minkowski_sum(&a, &b, &p).unwrap();
        let ba = minkowski_sum(&b, &a, &p).unwrap();
        prop_assert!(hausdorff(&ab, &ba, 2000, seed) <= 2.0 * p.resolution);
        let ab = minkowski_product(&a, &b, &p).unwrap();
        let ba = minkowski_product(&b, &a, &p).unwrap();
        let scale = 1.0 + ab.max_modulus();
        prop_assert!(hausdorff(&ab, &ba, 2000, seed) <= 2.0 * p.resolution * scale);
        Ok(())
    });
}

pub fn hull_contains_geodesics() {
    run(upper_points(), |pts| {
        let h = h_convex_hull(&with_conjugates(&pts), &prec());
        let idx = index(&h);
        let tol = h.resolution() + 1e-9;
        for (i, &z1) in pts.iter().enumerate() {
            for &z2 in &pts[i + 1..] {
                for z in geodesic(z1, z2, 50) {
                    prop_assert!(idx.contains_dilated(z, tol * (1.0 + z.norm())), "{z} on {z1}–{z2}");
                    prop_assert!(idx.contains_dilated(z.conj(), tol * (1.0 + z.norm())));
                }
            }
        }
        Ok(())
    });
}

pub fn hull_is_idempotent() {
    run((upper_points(), 0u64..1000), |(pts, seed)| {
        let p = prec();
        let h = h_convex_hull(&with_conjugates(&pts), &p);
        let mut rng = rng_for(seed, 4);
        let mut more = with_conjugates(&pts);
        more.extend(h.sample_points(200, &mut rng));
        let hh = h_convex_hull(&more, &p);
        prop_assert!(one_sided(&hh, &h, 2000, seed) <= 2.0 * p.resolution * (1.0 + h.max_modulus()));
        Ok(())
    });
}

pub fn hull_is_monotone() {
    run((upper_points(), upper_points(), 0u64..1000), |(pts, extra, seed)| {
        let p = prec();
        let small = h_convex_hull(&with_conjugates(&pts), &p);
        let mut all = pts.clone();
        all.extend(extra);
        let big = h_convex_hull(&with_conjugates(&all), &p);
        prop_assert!(one_sided(&small, &big, 2000, seed) <= 2.0 * p.resolution * (1.0 + big.max_modulus()));
        Ok(())
    });
}

pub const ALL: [(&str, fn()); 9] = [
    ("sum_is_outer_sound", sum_is_outer_sound),
    ("product_is_outer_sound", product_is_outer_sound),
    ("invert_is_outer_sound", invert_is_outer_sound),
    ("invert_is_an_involution", invert_is_an_involution),
    ("zero_and_one_are_identities", zero_and_one_are_identities),
    ("sum_and_product_commute", sum_and_product_commute),
    ("hull_contains_geodesics", hull_contains_geodesics),
    ("hull_is_idempotent", hull_is_idempotent),
    ("hull_is_monotone", hull_is_monotone),
];
