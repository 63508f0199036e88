//! Acceptance suite: one PASS/FAIL line per criterion, each with its time budget.

mod common;

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{oracles, properties};
use srg_core::analysis::{empirical_gain, robustness_margin, sensitivity_margin, sensitivity_srg};
use srg_core::operators::{LoopSignal, SystemExpr};
use srg_core::region::{minkowski_product, Precision};
use srg_core::srg::srg_of_lti;
use srg_core::{Complex64 as C64, Region, SignalClass, SrgOptions};

fn pbar() -> SystemExpr {
    SystemExpr::lti(&[1.0], &[0.0, 1.0, 1.0])
}

fn lag_saturation() -> SystemExpr {
    SystemExpr::compose(SystemExpr::lti(&[1.0], &[1.0, 1.0]), SystemExpr::saturation(1.0))
}

fn controller(num: &[f64], den: &[f64]) -> SystemExpr {
    SystemExpr::compose(SystemExpr::lti(num, den), pbar())
}

fn example_one_margin() {
    let r = robustness_margin(
        &controller(&[0.0, 1.0], &[1.0]),
        &lag_saturation(),
        &SignalClass::default(),
        &SrgOptions::default(),
    )
    .unwrap();
    let rm = r.r_m.unwrap();
    println!("    r_m = {rm:.5}, bound = {:.5}", r.bound);
    assert!(r.separated);
    assert!((rm - 0.875).abs() <= 0.875 * 0.02, "r_m = {rm}");
    assert!((r.bound - 8.0 / 7.0).abs() <= 8.0 / 7.0 * 0.02, "bound = {}", r.bound);
}

fn example_one_instability() {
    let class = SignalClass::default();
    let opts = SrgOptions::default();
    let c0 = robustness_margin(&controller(&[1.0], &[1.0]), &lag_saturation(), &class, &opts).unwrap();
    let c1 = robustness_margin(
        &controller(&[0.0, 1.0, 1.0], &[1.0, 1.0, 1.0]),
        &lag_saturation(),
        &class,
        &opts,
    )
    .unwrap();
    println!("    C0 separated = {}, C1 separated = {} (r_m = {:?})", c0.separated, c1.separated, c1.r_m);
    assert!(!c0.separated);
    assert!(c1.separated);
}

fn empirical_conservatism() {
    let lp = SystemExpr::feedback(lag_saturation(), controller(&[0.0, 1.0], &[1.0]), LoopSignal::U);
    let (g, pair) = empirical_gain(&lp, &SignalClass::default(), 500, 2024).unwrap();
    println!("    empirical gain r→u = {g:.5} (pair {pair}), limit {:.5}", 8.0 / 7.0 + 0.02);
    assert!(g <= 8.0 / 7.0 + 0.02);
}

fn sector_containment() {
    oracles::scalar_chord_slopes_stay_in_the_sector_disc();
    oracles::signal_pairs_stay_in_the_sector_disc();
}

fn lag_desk_check() {
    oracles::lag_is_the_half_disc();
    oracles::simulated_lag_stays_in_its_bound();
}

fn cardioid() {
    let d = Region::disc(C64::new(0.5, 0.0), 0.5);
    let p = minkowski_product(&d, &d, &Precision::default()).unwrap();
    let worst = (0..720)
        .map(|k| {
            let psi = -PI + 2.0 * PI * k as f64 / 720.0;
            (p.radial_extent(psi) - (psi / 2.0).cos().powi(2)).abs()
        })
        .fold(0.0, f64::max);
    println!(
        "    boundary error {worst:.2e}, max modulus {:.6}, leftmost {:.6}",
        p.max_modulus(),
        p.min_re()
    );
    assert!(worst <= 1e-3);
    assert!((p.max_modulus() - 1.0).abs() <= 1e-3);
    assert!((p.min_re() + 0.125).abs() <= 1e-3);
}

fn normal_matrix() {
    oracles::normal_matrix_points_lie_on_the_circle();
}

fn property_suite() {
    for (name, case) in properties::ALL {
        let t = Instant::now();
        case();
        println!("    {name}: ok ({:.1} s)", t.elapsed().as_secs_f64());
    }
}

fn sensitivity_coherence() {
    let class = SignalClass::default();
    let opts = SrgOptions::default();
    let lag = SystemExpr::lti(&[1.0], &[1.0, 1.0]);
    let one = SystemExpr::gain(1.0);
    let sm = sensitivity_margin(&lag, &one, &class, &opts).unwrap().s_m.unwrap();
    let s = sensitivity_srg(&lag, &one, &class, &opts).unwrap();
    println!("    s_m = {sm:.6}, max modulus = {:.6}", s.region.max_modulus());
    assert!((sm - 1.0).abs() <= 1e-3);
    assert!((s.region.max_modulus() - 1.0 / sm).abs() <= 1e-3);
    oracles::assert_close_to_disc(&s.region, C64::new(0.75, 0.0), 0.25, 1e-3);
}

const K: f64 = 0.1;
const OMEGA0: f64 = 10.0;

fn example_two_class() -> SignalClass {
    SignalClass::default().with_band(0.0, OMEGA0).with_amplitude(2.0)
}

/// Central angle (degrees) of the Nyquist circle of the lag covered by `r`,
/// walking from the DC point 1 towards the origin.
fn covered_arc(r: &Region) -> f64 {
    let center = C64::new(0.5, 0.0);
    let mut deg = 0.0;
    while deg < 180.0 {
        let next = deg + 0.01;
        let z = center + C64::from_polar(0.5, -next * PI / 180.0);
        if !r.contains_dilated(z, 1e-3) {
            break;
        }
        deg = next;
    }
    deg
}

fn example_two() {
    let class = example_two_class();
    let opts = SrgOptions::default();
    let c = srg_of_lti(&[1.0], &[1.0, K], &class, &opts).unwrap();
    let arc = covered_arc(&c.region);
    let lag = SystemExpr::lti(&[1.0], &[1.0, K]);
    let plant = SystemExpr::saturation(1.0);
    let m = sensitivity_margin(&plant, &lag, &class, &opts).unwrap();
    let sm = m.s_m.unwrap();
    let lp = SystemExpr::feedback(plant, lag, LoopSignal::E);
    let (g, pair) = empirical_gain(&lp, &class, 200, 77).unwrap();
    println!(
        "    arc {arc:.2}°, s_m = {sm:.5}, empirical sensitivity {g:.5} (pair {pair}), limit {:.5}",
        1.0 / sm + 0.05
    );
    assert!((arc - 90.0).abs() <= 1.0, "arc {arc}");
    assert!(m.separated);
    assert!(g <= 1.0 / sm + 0.05);
}

fn hodgkin_huxley() {
    oracles::hh_holds_its_fixed_point();
    oracles::hh_has_no_current_at_reversal();
    oracles::hh_sampling_is_reproducible();
}

fn main() {
    let criteria: [(&str, u64, fn()); 11] = [
        ("example 1 margin (C2: r_m 0.875, bound 8/7)", 5, example_one_margin),
        ("example 1 instability detection (C0 unseparated, C1 separated)", 10, example_one_instability),
        ("empirical conservatism (500 pairs, gain <= 8/7 + 0.02)", 60, empirical_conservatism),
        ("sector containment for saturation, relu, deadzone", 10, sector_containment),
        ("lag desk check (Disc(0.5, 0.5) and simulated pairs)", 20, lag_desk_check),
        ("cardioid product", 5, cardioid),
        ("normal matrix oracle", 5, normal_matrix),
        ("region algebra property suite (100 cases)", 60, property_suite),
        ("sensitivity coherence (s_m = 1, Disc(0.75, 0.25))", 5, sensitivity_coherence),
        ("example 2 (half-circle arc, empirical sensitivity)", 90, example_two),
        ("hodgkin-huxley sampling", 60, hodgkin_huxley),
    ];
    panic::set_hook(Box::new(|info| println!("    {info}")));
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let t = Instant::now();
        let ok = panic::catch_unwind(AssertUnwindSafe(check)).is_ok();
        let elapsed = t.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let verdict = if ok && in_time { "PASS" } else { "FAIL" };
        let late = if in_time { "" } else { ", over budget" };
        println!("{verdict} {name} ({:.2} s of {budget} s{late})", elapsed.as_secs_f64());
        if verdict == "FAIL" {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
