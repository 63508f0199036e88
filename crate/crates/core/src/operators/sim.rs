//! Fixed-step time-domain simulation of expression trees.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::expr::{LoopSignal, StaticKind, SystemExpr};
use super::hh::{self, HhParams};
use super::poly;
use crate::error::{Result, SrgError};
use crate::signal::Signal;

/// Causal discrete-time system. `output` reads the current output for the
/// current input without changing state; `advance` moves one step forward.
trait Stepper: Send {
    fn output(&mut self, u: C64) -> C64;
    fn advance(&mut self, u: C64);
    /// The current output does not depend on the current input.
    fn strictly_proper(&self) -> bool;
}

/// Zero-order-hold discretization of a proper transfer function in
/// controllable canonical form.
pub(crate) struct LtiStepper {
    ad: DMatrix<f64>,
    bd: Vec<f64>,
    c: Vec<f64>,
    d: f64,
    x: Vec<C64>,
}

impl LtiStepper {
    pub(crate) fn new(num: &[f64], den: &[f64], dt: f64) -> std::result::Result<Self, String> {
        let num = poly::trim(num);
        let den = poly::trim(den);
        if poly::is_zero(&den) {
            return Err("denominator is identically zero".into());
        }
        let n = den.len() - 1;
        if num.len() > n + 1 {
            return Err(format!(
                "improper transfer function (numerator degree {} > denominator degree {n})",
                num.len() - 1
            ));
        }
        let lead = den[n];
        let a: Vec<f64> = den.iter().map(|x| x / lead).collect();
        let d = if num.len() == n + 1 { num[n] / lead } else { 0.0 };
        let c: Vec<f64> = (0..n)
            .map(|i| num.get(i).copied().unwrap_or(0.0) / lead - d * a[i])
            .collect();
        let mut m = DMatrix::<f64>::zeros(n + 1, n + 1);
        for i in 0..n.saturating_sub(1) {
            m[(i, i + 1)] = dt;
        }
        if n > 0 {
            for j in 0..n {
                m[(n - 1, j)] = -a[j] * dt;
            }
            m[(n - 1, n)] = dt;
        }
        let e = m.exp();
        let ad = e.view((0, 0), (n, n)).into_owned();
        let bd = (0..n).map(|i| e[(i, n)]).collect();
        Ok(Self {
            ad,
            bd,
            c,
            d,
            x: vec![C64::new(0.0, 0.0); n],
        })
    }
}

impl Stepper for LtiStepper {
    fn output(&mut self, u: C64) -> C64 {
        let mut y = u * self.d;
        for (ci, xi) in self.c.iter().zip(&self.x) {
            y += xi * ci;
        }
        y
    }

    fn advance(&mut self, u: C64) {
        let n = self.x.len();
        let mut next = vec![C64::new(0.0, 0.0); n];
        for (i, slot) in next.iter_mut().enumerate() {
            let mut acc = u * self.bd[i];
            for j in 0..n {
                acc += self.x[j] * self.ad[(i, j)];
            }
            *slot = acc;
        }
        self.x = next;
    }

    fn strictly_proper(&self) -> bool {
        self.d == 0.0
    }
}

struct StaticStepper(StaticKind);

impl Stepper for StaticStepper {
    fn output(&mut self, u: C64) -> C64 {
        // real systems act on the real and imaginary parts independently
        C64::new(self.0.eval(u.re), if u.im == 0.0 { 0.0 } else { self.0.eval(u.im) })
    }
    fn advance(&mut self, _: C64) {}
    fn strictly_proper(&self) -> bool {
        false
    }
}

struct SumStepper(Vec<Box<dyn Stepper>>);

impl Stepper for SumStepper {
    fn output(&mut self, u: C64) -> C64 {
        self.0.iter_mut().map(|s| s.output(u)).sum()
    }
    fn advance(&mut self, u: C64) {
        self.0.iter_mut().for_each(|s| s.advance(u));
    }
    fn strictly_proper(&self) -> bool {
        self.0.iter().all(|s| s.strictly_proper())
    }
}

struct ComposeStepper {
    outer: Box<dyn Stepper>,
    inner: Box<dyn Stepper>,
}

impl Stepper for ComposeStepper {
    fn output(&mut self, u: C64) -> C64 {
        let v = self.inner.output(u);
        self.outer.output(v)
    }
    fn advance(&mut self, u: C64) {
        let v = self.inner.output(u);
        self.outer.advance(v);
        self.inner.advance(u);
    }
    fn strictly_proper(&self) -> bool {
        self.outer.strictly_proper() || self.inner.strictly_proper()
    }
}

struct ScaleStepper {
    alpha: C64,
    child: Box<dyn Stepper>,
}

impl Stepper for ScaleStepper {
    fn output(&mut self, u: C64) -> C64 {
        self.alpha * self.child.output(u)
    }
    fn advance(&mut self, u: C64) {
        self.child.advance(u)
    }
    fn strictly_proper(&self) -> bool {
        self.child.strictly_proper()
    }
}

struct HhStepper {
    params: HhParams,
    dt: f64,
    n: Option<f64>,
}

impl HhStepper {
    fn gate(&mut self, v: f64) -> f64 {
        *self.n.get_or_insert_with(|| hh::n_inf(v))
    }
}

impl Stepper for HhStepper {
    fn output(&mut self, u: C64) -> C64 {
        let n = self.gate(u.re);
        C64::new(hh::current(&self.params, n, u.re), 0.0)
    }
    fn advance(&mut self, u: C64) {
        let n = self.gate(u.re);
        self.n = Some(hh::gate_step(u.re, n, self.dt));
    }
    fn strictly_proper(&self) -> bool {
        false
    }
}

/// Loop `e = r − y`, `u = C(e)`, `y = P(u)`.
struct FeedbackStepper {
    plant: Box<dyn Stepper>,
    controller: Box<dyn Stepper>,
    output: LoopSignal,
    last_y: C64,
    warned: bool,
}

impl FeedbackStepper {
    /// Loop signals `(e, u, y)` for the current reference.
    fn solve(&mut self, r: C64) -> (C64, C64, C64) {
        if self.controller.strictly_proper() {
            let u = self.controller.output(C64::new(0.0, 0.0));
            let y = self.plant.output(u);
            return (r - y, u, y);
        }
        if self.plant.strictly_proper() {
            let y = self.plant.output(C64::new(0.0, 0.0));
            let e = r - y;
            return (e, self.controller.output(e), y);
        }
        // algebraic loop: secant iteration on g(e) = r − P(C(e)) − e
        let g = |this: &mut Self, e: C64| {
            let u = this.controller.output(e);
            let y = this.plant.output(u);
            (r - y - e, u, y)
        };
        let tol = 1e-10 * (1.0 + r.norm());
        let mut e0 = r - self.last_y;
        let (mut g0, u, y) = g(self, e0);
        if g0.norm() <= tol {
            return (e0, u, y);
        }
        let mut e1 = e0 + g0 * 0.5;
        for _ in 0..100 {
            let (g1, u, y) = g(self, e1);
            if g1.norm() <= tol {
                return (e1, u, y);
            }
            let slope = (g1 - g0) / (e1 - e0);
            let next = if slope.norm() > 1e-12 && slope.is_finite() {
                e1 - g1 / slope
            } else {
                e1 + g1 * 0.5
            };
            (e0, g0, e1) = (e1, g1, next);
            if (e1 - e0).norm() == 0.0 {
                break;
            }
        }
        if !self.warned {
            log::warn!("feedback: algebraic loop did not converge; falling back to a one-step delay");
            self.warned = true;
        }
        let y = self.last_y;
        let e = r - y;
        (e, self.controller.output(e), y)
    }
}

impl Stepper for FeedbackStepper {
    fn output(&mut self, r: C64) -> C64 {
        let (e, u, y) = self.solve(r);
        match self.output {
            LoopSignal::E => e,
            LoopSignal::U => u,
            LoopSignal::Y => y,
        }
    }
    fn advance(&mut self, r: C64) {
        let (e, u, y) = self.solve(r);
        self.controller.advance(e);
        self.plant.advance(u);
        self.last_y = y;
    }
    fn strictly_proper(&self) -> bool {
        match self.output {
            LoopSignal::E => false,
            LoopSignal::U => self.controller.strictly_proper(),
            LoopSignal::Y => self.controller.strictly_proper() || self.plant.strictly_proper(),
        }
    }
}

fn not_simulable(path: &str, expr: &SystemExpr, reason: impl Into<String>) -> SrgError {
    SrgError::NotSimulable {
        node: format!("{path}{}", expr.label()),
        reason: reason.into(),
    }
}

fn build(expr: &SystemExpr, dt: f64, path: &str) -> Result<Box<dyn Stepper>> {
    let child = |name: &str| format!("{path}{name}/");
    let lti_tree = matches!(
        expr,
        SystemExpr::Sum { .. } | SystemExpr::Compose { .. } | SystemExpr::Scale { .. }
    );
    if lti_tree {
        // improper factors may cancel once the subtree is one transfer function
        if let Some((n, d)) = expr.fold_lti() {
            return Ok(Box::new(
                LtiStepper::new(&n, &d, dt).map_err(|r| not_simulable(path, expr, r))?,
            ));
        }
    }
    Ok(match expr {
        SystemExpr::Lti { num, den } => {
            Box::new(LtiStepper::new(num, den, dt).map_err(|r| not_simulable(path, expr, r))?)
        }
        SystemExpr::Static { kind } => Box::new(StaticStepper(*kind)),
        SystemExpr::NormalMatrix { .. } => {
            return Err(not_simulable(
                path,
                expr,
                "matrix operators act on vectors, not scalar signals",
            ))
        }
        SystemExpr::Sum { children } => Box::new(SumStepper(
            children
                .iter()
                .enumerate()
                .map(|(i, c)| build(c, dt, &child(&format!("sum[{i}]"))))
                .collect::<Result<_>>()?,
        )),
        SystemExpr::Compose { outer, inner } => Box::new(ComposeStepper {
            outer: build(outer, dt, &child("outer"))?,
            inner: build(inner, dt, &child("inner"))?,
        }),
        SystemExpr::Inverse { child: c } => {
            let Some((n, d)) = c.fold_lti() else {
                return Err(not_simulable(
                    path,
                    expr,
                    "only inverses of biproper LTI systems can be simulated",
                ));
            };
            if poly::degree(&n) != poly::degree(&d) {
                return Err(not_simulable(
                    path,
                    expr,
                    "inverse of a non-biproper transfer function is improper",
                ));
            }
            Box::new(LtiStepper::new(&d, &n, dt).map_err(|r| not_simulable(path, expr, r))?)
        }
        SystemExpr::Scale { alpha, child: c } => Box::new(ScaleStepper {
            alpha: *alpha,
            child: build(c, dt, &child("scale"))?,
        }),
        SystemExpr::Feedback {
            plant,
            controller,
            output,
        } => Box::new(FeedbackStepper {
            plant: build(plant, dt, &child("plant"))?,
            controller: build(controller, dt, &child("controller"))?,
            output: *output,
            last_y: C64::new(0.0, 0.0),
            warned: false,
        }),
        SystemExpr::HhPotassium { params } => {
            hh::check_dt(dt);
            Box::new(HhStepper {
                params: *params,
                dt,
                n: None,
            })
        }
    })
}

/// Applies an expression to a signal from zero initial state.
pub fn simulate(expr: &SystemExpr, u: &Signal) -> Result<Signal> {
    expr.validate()?;
    if matches!(expr, SystemExpr::HhPotassium { .. }) && !u.is_real() {
        return Err(SrgError::InvalidExpr(
            "hh_potassium needs a real-valued voltage".into(),
        ));
    }
    let mut s = build(expr, u.dt(), "")?;
    let out = u
        .samples()
        .iter()
        .map(|&x| {
            let y = s.output(x);
            s.advance(x);
            y
        })
        .collect();
    Ok(u.with_samples(out))
}
