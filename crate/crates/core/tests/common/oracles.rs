use rand::Rng;
use srg_core::operators::{chord_slope_bounds, hh_potassium, static_eval, HhParams, StaticKind, SystemExpr};
use srg_core::region::Precision;
use srg_core::sampling::{coverage_at, sample_srg, sample_srg_about, z_point, ZPoint};
use srg_core::signal::rng_for;
use srg_core::srg::{srg_of_lti, srg_of_normal_matrix, srg_of_sector, SrgOptions};
use std::f64::consts::PI;
use srg_core::{Complex64 as C64, Region, Signal, SignalClass};

pub const STATICS: [StaticKind; 3] = [
    StaticKind::Saturation { limit: 1.0 },
    StaticKind::Relu,
    StaticKind::Deadzone { width: 1.0 },
];

pub fn scalar_chord_slopes_stay_in_the_sector_disc() {
    let mut rng = rng_for(21, 0);
    for kind in STATICS {
        let s = chord_slope_bounds(&kind, None).unwrap();
        let disc = srg_of_sector(&s).region;
        for _ in 0..10_000 {
            let a: f64 = rng.random_range(-5.0..5.0);
            let b: f64 = rng.random_range(-5.0..5.0);
            if (a - b).abs() < 1e-9 {
                continue;
            }
            let slope = (static_eval(&kind, a) - static_eval(&kind, b)) / (a - b);
            assert!(slope >= s.mu - 1e-12 && slope <= s.lambda + 1e-12, "{kind:?}: {slope}");
            assert!(disc.contains_dilated(C64::new(slope, 0.0), 1e-6));
        }
    }
}

pub fn signal_pairs_stay_in_the_sector_disc() {
    let class = SignalClass::default().with_horizon(5.0, 1e-2);
    for kind in STATICS {
        let disc = srg_of_sector(&chord_slope_bounds(&kind, None).unwrap()).region;
        let sample = sample_srg(&SystemExpr::static_nl(kind), &class, 600, 4).unwrap();
        assert!(sample.points.len() >= 1000, "{kind:?}: {} points", sample.points.len());
        let cov = coverage_at(&sample, &disc, 1e-6);
        assert_eq!(cov.fraction_inside, 1.0, "{kind:?}: {:?}", cov.worst.first());
    }
}

fn vector(rng: &mut impl Rng) -> Vec<C64> {
    (0..2)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

pub fn normal_matrix_points_lie_on_the_circle() {
    let diag = [1.0, 2.0];
    let apply = |x: &[C64]| -> Signal {
        Signal::new(x.iter().zip(diag).map(|(v, d)| v * d).collect(), 1.0).unwrap()
    };
    let mut rng = rng_for(5, 0);
    let mut count = 0;
    while count < 10_000 {
        let (x, y) = (vector(&mut rng), vector(&mut rng));
        let (u1, u2) = (Signal::new(x.clone(), 1.0).unwrap(), Signal::new(y.clone(), 1.0).unwrap());
        if let ZPoint::Pair(a, b) = z_point(&u1, &u2, &apply(&x), &apply(&y)).unwrap() {
            for z in [a, b] {
                assert!(((z - C64::new(1.5, 0.0)).norm() - 0.5).abs() < 1e-9, "{z}");
                count += 1;
            }
        }
    }
    let bound = srg_of_normal_matrix(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0)], &SrgOptions::default()).unwrap();
    let eps = Precision::default().resolution;
    for k in 0..=360 {
        let z = C64::new(1.5, 0.0) + C64::from_polar(0.5, std::f64::consts::TAU * k as f64 / 360.0);
        assert!(bound.region.contains_dilated(z, eps), "{z} not covered");
    }
    for z in bound.region.sample_points(2000, &mut rng) {
        assert!(((z - C64::new(1.5, 0.0)).norm() - 0.5).abs() <= eps, "{z} off the circle");
    }
}

pub fn simulated_lag_stays_in_its_bound() {
    let opts = SrgOptions::default();
    let class = SignalClass::default();
    let bound = srg_of_lti(&[1.0], &[1.0, 1.0], &class, &opts).unwrap();
    let sample = sample_srg(&SystemExpr::lti(&[1.0], &[1.0, 1.0]), &class, 500, 9).unwrap();
    assert!(sample.points.len() >= 1000);
    let cov = coverage_at(&sample, &bound.region, 1e-2);
    assert_eq!(cov.fraction_inside, 1.0, "{:?}", cov.worst.first());
}

fn hh_class() -> SignalClass {
    SignalClass::default().with_amplitude(10.0).with_horizon(20.0, 0.01)
}

pub fn hh_holds_its_fixed_point() {
    let p = HhParams::default();
    for v in [-80.0, -65.0, -40.0, 0.0] {
        let out = hh_potassium(&Signal::constant(v, 2000, 0.01).unwrap(), &p).unwrap();
        let n = srg_core::operators::hh::n_inf(v);
        let expected = p.g_k * n.powi(4) * (v - p.e_k);
        for y in out.real_parts() {
            assert!((y - expected).abs() < 1e-6 * (1.0 + expected.abs()), "V = {v}: {y} vs {expected}");
        }
    }
}

pub fn hh_has_no_current_at_reversal() {
    let p = HhParams::default();
    let out = hh_potassium(&Signal::constant(p.e_k, 2000, 0.01).unwrap(), &p).unwrap();
    assert!(out.real_parts().iter().all(|y| y.abs() < 1e-6));
}

pub fn hh_sampling_is_reproducible() {
    let hh = SystemExpr::HhPotassium {
        params: HhParams::default(),
    };
    let a = sample_srg_about(&hh, &hh_class(), 200, 17, -65.0).unwrap();
    let b = sample_srg_about(&hh, &hh_class(), 200, 17, -65.0).unwrap();
    assert!(!a.points.is_empty());
    let bits = |s: &srg_core::SrgSample| -> Vec<(u64, u64)> {
        s.points.iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect()
    };
    assert_eq!(bits(&a), bits(&b));
    let c = sample_srg_about(&hh, &hh_class(), 200, 18, -65.0).unwrap();
    assert_ne!(bits(&a), bits(&c));
}

/// The region covers the disc boundary and sampled region points stay within
/// `tol` of the disc.
pub fn assert_close_to_disc(r: &Region, center: C64, radius: f64, tol: f64) {
    for k in 0..720 {
        let z = center + C64::from_polar(radius, 2.0 * PI * k as f64 / 720.0);
        assert!(r.contains_dilated(z, tol), "boundary point {z} not covered");
    }
    let mut rng = rng_for(1, 0);
    for z in r.sample_points(4000, &mut rng) {
        assert!((z - center).norm() <= radius + tol, "{z} outside the disc");
    }
}

pub fn lag_is_the_half_disc() {
    let b = srg_of_lti(&[1.0], &[1.0, 1.0], &SignalClass::default(), &SrgOptions::default()).unwrap();
    assert_close_to_disc(&b.region, C64::new(0.5, 0.0), 0.5, 1e-3);
}
