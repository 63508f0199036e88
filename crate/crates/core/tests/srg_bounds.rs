use std::f64::consts::PI;

use srg_core::operators::{LoopSignal, SectorBounds, StaticKind, SystemExpr};
use srg_core::region::{h_convex_hull, Precision, Side};
use srg_core::signal::rng_for;
use srg_core::srg::{
    srg_of_expr, srg_of_lti, srg_of_normal_matrix, srg_of_sector, srg_of_static, Exactness,
    SrgOptions,
};
use srg_core::{Complex64 as C64, Region, RegionPrimitive, SignalClass, SrgError};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Two-sided check against a disc: the disc boundary is covered and sampled
/// region points stay within `tol` of the disc.
fn assert_close_to_disc(r: &Region, center: C64, radius: f64, tol: f64) {
    for k in 0..720 {
        let z = center + C64::from_polar(radius, 2.0 * PI * k as f64 / 720.0);
        assert!(r.contains_dilated(z, tol), "boundary point {z} not covered");
    }
    let mut rng = rng_for(1, 0);
    for z in r.sample_points(4000, &mut rng) {
        assert!((z - center).norm() <= radius + tol, "{z} outside the disc");
    }
}

#[test]
fn lag_gives_half_unit_disc() {
    let b = srg_of_lti(&[1.0], &[1.0, 1.0], &SignalClass::default(), &SrgOptions::default()).unwrap();
    assert_eq!(b.exactness, Exactness::Outer);
    assert_close_to_disc(&b.region, c(0.5, 0.0), 0.5, 1e-3);
}

#[test]
fn lead_gives_vertical_line() {
    let b = srg_of_lti(&[1.0, 1.0], &[1.0], &SignalClass::default(), &SrgOptions::default()).unwrap();
    for y in [-50.0, -1.0, 0.0, 2.0, 300.0] {
        assert!(b.region.contains_dilated(c(1.0, y), 1e-3), "1+{y}j");
    }
    assert!(!b.region.contains_dilated(c(1.1, 0.5), 1e-3));
    assert!(!b.region.contains_dilated(c(0.9, 0.5), 1e-3));
}

#[test]
fn bandlimited_lag_is_half_circle() {
    let k = 0.1;
    let class = SignalClass::default().with_band(0.0, 10.0);
    let b = srg_of_lti(&[1.0], &[1.0, k], &class, &SrgOptions::default()).unwrap();
    // the arc from 1 to 0.5 − 0.5j is covered, points past 90° are not
    for i in 0..=90 {
        let w = 10.0 * i as f64 / 90.0;
        let g = C64::new(1.0, 0.0) / c(1.0, k * w);
        assert!(b.region.contains_dilated(g, 1e-3), "{g}");
    }
    let beyond = C64::new(1.0, 0.0) / c(1.0, 2.0);
    assert!(!b.region.contains_dilated(beyond, 1e-2));
}

#[test]
fn static_gain_is_a_point_in_any_band() {
    for class in [SignalClass::default(), SignalClass::default().with_band(1.0, 3.0)] {
        let b = srg_of_lti(&[3.0], &[1.5], &class, &SrgOptions::default()).unwrap();
        assert_eq!(b.region, Region::real_point(2.0));
    }
}

#[test]
fn band_monotone() {
    let opts = SrgOptions::default();
    let narrow = srg_of_lti(&[1.0], &[1.0, 1.0, 1.0], &SignalClass::default().with_band(0.0, 1.0), &opts).unwrap();
    let wide = srg_of_lti(&[1.0], &[1.0, 1.0, 1.0], &SignalClass::default().with_band(0.0, 5.0), &opts).unwrap();
    let mut rng = rng_for(3, 0);
    for z in narrow.region.sample_points(2000, &mut rng) {
        assert!(wide.region.contains_dilated(z, 2e-3), "{z}");
    }
}

#[test]
fn imaginary_axis_pole_is_reported() {
    match srg_of_lti(&[1.0], &[1.0, 0.0, 1.0], &SignalClass::default(), &SrgOptions::default()) {
        Err(SrgError::UnboundedNyquist { omega }) => assert!((omega - 1.0).abs() < 1e-9),
        other => panic!("{other:?}"),
    }
    // outside the band the pole is harmless
    let class = SignalClass::default().with_band(0.0, 0.5);
    assert!(srg_of_lti(&[1.0], &[1.0, 0.0, 1.0], &class, &SrgOptions::default()).is_ok());
}

#[test]
fn sector_discs() {
    let d = srg_of_sector(&SectorBounds::new(0.0, 1.0).unwrap());
    assert_eq!(d.region, Region::disc(c(0.5, 0.0), 0.5));
    let d = srg_of_sector(&SectorBounds::new(-1.0, 1.0).unwrap());
    assert_eq!(d.region, Region::disc(c(0.0, 0.0), 1.0));
    let p = srg_of_sector(&SectorBounds::new(2.0, 2.0).unwrap());
    assert_eq!(p.region, Region::real_point(2.0));
    assert_eq!(p.exactness, Exactness::Exact);
}

#[test]
fn saturation_depends_on_amplitude() {
    let sat = StaticKind::Saturation { limit: 1.0 };
    let opts = SrgOptions::default();
    let free = srg_of_static(&sat, &SignalClass::default(), &opts).unwrap();
    assert_eq!(free.region, Region::disc(c(0.5, 0.0), 0.5));
    let small = srg_of_static(&sat, &SignalClass::default().with_amplitude(0.5), &opts).unwrap();
    assert_eq!(small.region, Region::real_point(1.0));
    let two = srg_of_static(&sat, &SignalClass::default().with_amplitude(2.0), &opts).unwrap();
    assert_eq!(two.region, Region::disc(c(0.5, 0.0), 0.5));
    assert!(two.refinement.is_none());
}

#[test]
fn trusted_refinement_is_recorded() {
    let sat = StaticKind::Saturation { limit: 1.0 };
    let class = SignalClass::default().with_amplitude(2.0).with_horizon(2.0, 0.01);
    let opts = SrgOptions {
        trust_sampled: true,
        ..SrgOptions::default()
    };
    let b = srg_of_static(&sat, &class, &opts).unwrap();
    let refined = b.refinement.clone().unwrap();
    assert_eq!(b.region, refined);
    assert!(b.rule_trace[0].contains("sampled"));
}

#[test]
fn normal_matrices() {
    let opts = SrgOptions::default();
    let id = srg_of_normal_matrix(&[c(1.0, 0.0)], &opts).unwrap();
    assert_eq!(id.region, Region::real_point(1.0));

    let two = srg_of_normal_matrix(&[c(1.0, 0.0), c(2.0, 0.0)], &opts).unwrap();
    for k in 0..360 {
        let z = c(1.5, 0.0) + C64::from_polar(0.5, 2.0 * PI * k as f64 / 360.0);
        assert!(two.region.contains_dilated(z, 1e-3));
    }
    assert!(!two.region.contains_dilated(c(1.5, 0.0), 0.1));

    let three = srg_of_normal_matrix(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)], &opts).unwrap();
    let hull = h_convex_hull(&[c(1.0, 0.0), c(3.0, 0.0)], &Precision::default());
    let mut rng = rng_for(9, 0);
    for z in two.region.sample_points(500, &mut rng) {
        assert!(three.region.contains_dilated(z, 2e-3), "{z}");
    }
    for z in hull.sample_points(500, &mut rng) {
        assert!(three.region.contains_dilated(z, 2e-3), "{z}");
    }
}

#[test]
fn lag_after_saturation_is_a_cardioid() {
    let e = SystemExpr::compose(SystemExpr::lti(&[1.0], &[1.0, 1.0]), SystemExpr::saturation(1.0));
    let b = srg_of_expr(&e, &SignalClass::default(), &SrgOptions::default()).unwrap();
    assert_eq!(b.rule_trace.len(), e.node_count());
    assert!((b.region.max_modulus() - 1.0).abs() < 1e-3);
    assert!((b.region.min_re() + 0.125).abs() < 1e-3);
    for k in 0..720 {
        let psi = -PI + 2.0 * PI * k as f64 / 720.0;
        let r = (psi / 2.0).cos().powi(2);
        assert!((b.region.radial_extent(psi) - r).abs() < 1e-3, "ψ={psi}");
    }
}

#[test]
fn inverse_of_lag_is_half_plane() {
    let e = SystemExpr::inverse(SystemExpr::lti(&[1.0], &[1.0, 1.0]));
    let b = srg_of_expr(&e, &SignalClass::default(), &SrgOptions::default()).unwrap();
    assert_eq!(b.rule_trace.len(), 2);
    assert!(b.region.primitives().iter().any(|p| matches!(
        p,
        RegionPrimitive::HalfPlaneRe { c, side: Side::Ge } if (c - 1.0).abs() < 1e-3
    )));
    assert!(b.region.contains(c(1.0, 0.0)) && b.region.contains(c(5.0, -3.0)));
    assert!(!b.region.contains(c(0.9, 0.0)));
}

#[test]
fn scaled_saturation() {
    let e = SystemExpr::scale(2.0, SystemExpr::saturation(1.0));
    let b = srg_of_expr(&e, &SignalClass::default(), &SrgOptions::default()).unwrap();
    assert_close_to_disc(&b.region, c(1.0, 0.0), 1.0, 1e-9);
}

#[test]
fn lti_subtrees_are_folded() {
    // s · 1/(s(s+1)) folds to the lag before its Nyquist curve is sampled
    let e = SystemExpr::compose(
        SystemExpr::lti(&[0.0, 1.0], &[1.0]),
        SystemExpr::lti(&[1.0], &[0.0, 1.0, 1.0]),
    );
    let b = srg_of_expr(&e, &SignalClass::default(), &SrgOptions::default()).unwrap();
    assert_eq!(b.rule_trace.len(), 3);
    assert_close_to_disc(&b.region, c(0.5, 0.0), 0.5, 1e-3);
}

#[test]
fn hh_has_no_analytic_bound() {
    let e = SystemExpr::HhPotassium {
        params: Default::default(),
    };
    assert!(matches!(
        srg_of_expr(&e, &SignalClass::default(), &SrgOptions::default()),
        Err(SrgError::NoAnalyticBound(_))
    ));
}

#[test]
fn feedback_of_gains() {
    // k/(1+k) for the output, 1/(1+k) for the error
    let y = SystemExpr::feedback(SystemExpr::gain(3.0), SystemExpr::gain(1.0), LoopSignal::Y);
    let e = SystemExpr::feedback(SystemExpr::gain(3.0), SystemExpr::gain(1.0), LoopSignal::E);
    let opts = SrgOptions::default();
    let by = srg_of_expr(&y, &SignalClass::default(), &opts).unwrap();
    let be = srg_of_expr(&e, &SignalClass::default(), &opts).unwrap();
    assert!(by.region.contains_dilated(c(0.75, 0.0), 1e-9));
    assert!(be.region.contains_dilated(c(0.25, 0.0), 1e-9));
    assert_eq!(by.rule_trace.len(), y.node_count());
}

#[test]
fn bound_json_carries_metadata() {
    let b = srg_of_sector(&SectorBounds::new(0.0, 1.0).unwrap());
    let v = serde_json::to_value(&b).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["primitives"][0]["type"], "disc");
    assert_eq!(v["exactness"], "outer");
    assert!(v["rule_trace"].is_array());
    let back: srg_core::SrgBound = serde_json::from_value(v).unwrap();
    assert_eq!(back, b);
}
