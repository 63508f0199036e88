//! Hodgkin–Huxley potassium conductance.
//!
//! Voltages in mV, time in ms, conductance in mS/cm², current in µA/cm².
//! Rate constants are the standard squid-axon fit shifted to a −65 mV rest.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SrgError};
use crate::signal::Signal;

/// Largest step (ms) for which the gate integration is considered reliable.
pub const MAX_STABLE_DT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HhParams {
    /// Maximal potassium conductance ḡ_K (mS/cm²).
    pub g_k: f64,
    /// Potassium reversal potential E_K (mV).
    pub e_k: f64,
}

impl Default for HhParams {
    fn default() -> Self {
        Self {
            g_k: 36.0,
            e_k: -77.0,
        }
    }
}

impl HhParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.g_k >= 0.0 && self.g_k.is_finite() && self.e_k.is_finite()) {
            return Err(SrgError::InvalidExpr(
                "hh_potassium needs finite g_k >= 0 and finite e_k".into(),
            ));
        }
        Ok(())
    }
}

pub fn alpha_n(v: f64) -> f64 {
    let x = v + 55.0;
    if x.abs() < 1e-7 {
        // removable singularity: limit of 0.01 x / (1 − e^{−x/10})
        0.1 + 0.005 * x
    } else {
        0.01 * x / (1.0 - (-x / 10.0).exp())
    }
}

pub fn beta_n(v: f64) -> f64 {
    0.125 * (-(v + 65.0) / 80.0).exp()
}

/// Steady-state gate value at a fixed voltage.
pub fn n_inf(v: f64) -> f64 {
    let a = alpha_n(v);
    a / (a + beta_n(v))
}

fn dn(v: f64, n: f64) -> f64 {
    alpha_n(v) * (1.0 - n) - beta_n(v) * n
}

/// One RK4 step of the gate equation with the voltage held over the step.
pub(crate) fn gate_step(v: f64, n: f64, dt: f64) -> f64 {
    let k1 = dn(v, n);
    let k2 = dn(v, n + 0.5 * dt * k1);
    let k3 = dn(v, n + 0.5 * dt * k2);
    let k4 = dn(v, n + dt * k3);
    n + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

pub(crate) fn current(p: &HhParams, n: f64, v: f64) -> f64 {
    p.g_k * n.powi(4) * (v - p.e_k)
}

pub(crate) fn check_dt(dt: f64) {
    if dt > MAX_STABLE_DT {
        log::warn!(
            "hh_potassium: dt = {dt} ms exceeds {MAX_STABLE_DT} ms; gate integration may be inaccurate"
        );
    }
}

/// Potassium current `ḡ_K n⁴ (V − E_K)` for a voltage trace, starting from the
/// steady state at `V(0)`.
pub fn hh_potassium(v: &Signal, params: &HhParams) -> Result<Signal> {
    params.validate()?;
    if !v.is_real() {
        return Err(SrgError::InvalidExpr(
            "hh_potassium needs a real-valued voltage".into(),
        ));
    }
    check_dt(v.dt());
    let vs = v.real_parts();
    let mut n = n_inf(vs[0]);
    let out = vs
        .iter()
        .map(|&vk| {
            let i = current(params, n, vk);
            n = gate_step(vk, n, v.dt());
            Complex64::new(i, 0.0)
        })
        .collect();
    Ok(v.with_samples(out))
}

/// Gate trajectory for a voltage trace (same initialisation as [`hh_potassium`]).
pub fn gate_trajectory(v: &Signal) -> Vec<f64> {
    let vs = v.real_parts();
    let mut n = n_inf(vs[0]);
    vs.iter()
        .map(|&vk| {
            let now = n;
            n = gate_step(vk, n, v.dt());
            now
        })
        .collect()
}
