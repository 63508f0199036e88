//! Shared inputs for the kernel benchmarks.

use srg_core::{Complex64 as C64, Region, SystemExpr};

pub fn half_disc() -> Region {
    Region::disc(C64::new(0.5, 0.0), 0.5)
}

pub fn log_box() -> Region {
    Region::log_polar_box(0.5, 2.0, -0.4, 0.9)
}

/// Upper-half-plane points and their conjugates, on a spiral.
pub fn hull_points(n: usize) -> Vec<C64> {
    (0..n)
        .flat_map(|k| {
            let t = k as f64 / n as f64;
            let z = C64::new(3.0 * (6.0 * t).cos(), 0.1 + 2.0 * t);
            [z, z.conj()]
        })
        .collect()
}

pub fn lag_saturation() -> SystemExpr {
    SystemExpr::compose(SystemExpr::lti(&[1.0], &[1.0, 1.0]), SystemExpr::saturation(1.0))
}

/// `s · 1/(s(s+1))`, the derivative controller on the double integrator plant.
pub fn derivative_controller() -> SystemExpr {
    SystemExpr::compose(
        SystemExpr::lti(&[0.0, 1.0], &[1.0]),
        SystemExpr::lti(&[1.0], &[0.0, 1.0, 1.0]),
    )
}
