//! Graphical stability, robustness and sensitivity margins.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, SrgError};
use crate::operators::SystemExpr;
use crate::region::{
    chord_closure, distance, distance_to_point, intersects, invert, minkowski_sum, radial_hull,
    Distance, Region,
};
use crate::signal::SignalClass;
use crate::srg::{srg_of_expr, Exactness, SrgBound, SrgOptions};

pub use crate::sampling::empirical_gain;

/// Largest truncation radius tried when a witness sits on the truncation boundary.
const MAX_TRUNCATION: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginKind {
    /// Distance between `SRG(L⁻¹)` and `−SRG(plant)`.
    Robustness,
    /// Distance from `SRG(PC)` to `−1`.
    Sensitivity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    pub schema_version: u32,
    pub kind: MarginKind,
    pub separated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_m: Option<f64>,
    /// Resolution error bar already subtracted from the margin.
    pub margin_error: f64,
    /// Incremental gain bound `1/margin`; `null` in JSON when unbounded.
    #[serde(serialize_with = "ser_bound", deserialize_with = "de_bound")]
    pub bound: f64,
    pub witness: Option<(C64, C64)>,
    pub tau_certificate: String,
    /// Margin obtained with sampled static refinements, for comparison only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refined_margin: Option<f64>,
    pub truncation: f64,
    pub trace: Vec<String>,
}

fn ser_bound<S: Serializer>(b: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if b.is_finite() {
        s.serialize_f64(*b)
    } else {
        s.serialize_none()
    }
}

fn de_bound<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

impl MarginReport {
    pub fn margin(&self) -> f64 {
        self.r_m.or(self.s_m).unwrap_or(0.0)
    }
}

fn bound_of(margin: f64) -> f64 {
    if margin > 0.0 {
        1.0 / margin
    } else {
        f64::INFINITY
    }
}

/// Pessimistic margin: the distance minus its error bar.
fn pessimistic(d: &Distance) -> f64 {
    if d.value.is_finite() {
        (d.value - d.error).max(0.0)
    } else {
        d.value
    }
}

fn at_truncation(d: &Distance, truncation: f64) -> bool {
    d.witness
        .is_some_and(|(a, b)| a.norm().max(b.norm()) >= 0.5 * truncation)
}

fn prefixed(prefix: &str, trace: &[String]) -> Vec<String> {
    trace.iter().map(|t| format!("{prefix}: {t}")).collect()
}

/// Small-gain style margin for the loop `e = r − y`, `u = C(e)`, `y = P(u)`.
///
/// `controller` is the LTI part `L` whose inverse is drawn; `plant` is the
/// (possibly nonlinear) remainder. Separation is checked against the radial
/// hull of `−SRG(plant)`, which covers every `τ ∈ (0, 1]` at once.
pub fn robustness_margin(
    controller: &SystemExpr,
    plant: &SystemExpr,
    class: &SignalClass,
    opts: &SrgOptions,
) -> Result<MarginReport> {
    let inv = SystemExpr::inverse(controller.clone());
    let mut opts = *opts;
    loop {
        let prec = opts.precision;
        let a = srg_of_expr(&inv, class, &opts)?;
        let b = srg_of_expr(plant, class, &opts)?;
        let closed = chord_closure(&b.region, &prec).map_err(|e| {
            SrgError::UnsupportedGeometry(format!(
                "{e}; the plant SRG must be bounded (try a smaller truncation box or an amplitude bound)"
            ))
        })?;
        let neg = closed.neg();
        let touches = intersects(&a.region, &radial_hull(&neg, &prec), &prec);
        let d = distance(&a.region, &neg, &prec);
        if at_truncation(&d, prec.truncation) && prec.truncation * 10.0 <= MAX_TRUNCATION {
            opts.precision.truncation *= 10.0;
            continue;
        }
        let margin = pessimistic(&d);
        let separated = !touches && d.value > 0.0;
        let tau_certificate = if separated {
            "SRG(L⁻¹) is disjoint from τ·(−SRG(plant)) for all τ ∈ (0, 1] (radial hull check)".to_string()
        } else {
            "SRG(L⁻¹) meets τ·(−SRG(plant)) for some τ ∈ (0, 1] (radial hull check)".to_string()
        };
        let mut trace = prefixed("L⁻¹", &a.rule_trace);
        trace.extend(prefixed("plant", &b.rule_trace));
        trace.push("plant: chord closure (convex hull)".into());
        return Ok(MarginReport {
            schema_version: crate::SCHEMA_VERSION,
            kind: MarginKind::Robustness,
            separated,
            r_m: Some(margin),
            s_m: None,
            margin_error: d.error,
            bound: bound_of(margin),
            witness: d.witness,
            tau_certificate,
            refined_margin: None,
            truncation: prec.truncation,
            trace,
        });
    }
}

fn has_static(expr: &SystemExpr) -> bool {
    match expr {
        SystemExpr::Static { .. } => true,
        SystemExpr::Sum { children } => children.iter().any(has_static),
        SystemExpr::Compose { outer, inner } => has_static(outer) || has_static(inner),
        SystemExpr::Inverse { child } | SystemExpr::Scale { child, .. } => has_static(child),
        SystemExpr::Feedback {
            plant, controller, ..
        } => has_static(plant) || has_static(controller),
        _ => false,
    }
}

fn loop_gain(plant: &SystemExpr, controller: &SystemExpr) -> SystemExpr {
    SystemExpr::compose(plant.clone(), controller.clone())
}

fn sensitivity_distance(pc: &SrgBound, opts: &SrgOptions) -> Distance {
    distance_to_point(&pc.region, C64::new(-1.0, 0.0), &opts.precision)
}

/// Distance `s_m` from `SRG(PC)` to `−1`; the peak incremental sensitivity
/// is bounded by `1/s_m`.
pub fn sensitivity_margin(
    plant: &SystemExpr,
    controller: &SystemExpr,
    class: &SignalClass,
    opts: &SrgOptions,
) -> Result<MarginReport> {
    let pc_expr = loop_gain(plant, controller);
    let pc = srg_of_expr(&pc_expr, class, opts)?;
    let d = sensitivity_distance(&pc, opts);
    let inside = pc.region.contains(C64::new(-1.0, 0.0)) || d.value <= 0.0;
    let margin = if inside { 0.0 } else { pessimistic(&d) };
    let refined_margin = if has_static(&pc_expr) && !opts.trust_sampled {
        let trusted = SrgOptions {
            trust_sampled: true,
            ..*opts
        };
        let r = srg_of_expr(&pc_expr, class, &trusted)?;
        Some(pessimistic(&sensitivity_distance(&r, opts)))
    } else {
        None
    };
    Ok(MarginReport {
        schema_version: crate::SCHEMA_VERSION,
        kind: MarginKind::Sensitivity,
        separated: !inside,
        r_m: None,
        s_m: Some(margin),
        margin_error: d.error,
        bound: bound_of(margin),
        witness: if inside { None } else { d.witness },
        tau_certificate: if inside {
            "−1 lies in SRG(PC)".into()
        } else {
            "−1 lies outside SRG(PC)".into()
        },
        refined_margin,
        truncation: opts.precision.truncation,
        trace: pc.rule_trace,
    })
}

/// Bound on the SRG of the sensitivity `(I + PC)⁻¹`.
pub fn sensitivity_srg(
    plant: &SystemExpr,
    controller: &SystemExpr,
    class: &SignalClass,
    opts: &SrgOptions,
) -> Result<SrgBound> {
    let prec = &opts.precision;
    let pc = srg_of_expr(&loop_gain(plant, controller), class, opts)?;
    let shifted = minkowski_sum(&Region::real_point(1.0), &pc.region, prec)?;
    let region = invert(&shifted, prec);
    let mut rule_trace = pc.rule_trace;
    rule_trace.push("I + PC: translation by 1".into());
    rule_trace.push("(I + PC)⁻¹: region inversion".into());
    Ok(SrgBound {
        region,
        class: *class,
        exactness: if pc.exactness == Exactness::Exact {
            Exactness::Exact
        } else {
            Exactness::Outer
        },
        rule_trace,
        refinement: None,
    })
}
