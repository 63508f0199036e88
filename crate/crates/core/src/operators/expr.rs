use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::hh::HhParams;
use super::poly;
use crate::error::{Result, SrgError};

/// Operator expression tree shared by the library, CLI and HTTP API.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SystemExpr {
    /// Rational transfer function, coefficients in ascending powers of `s`.
    Lti { num: Vec<f64>, den: Vec<f64> },
    Static {
        #[serde(flatten)]
        kind: StaticKind,
    },
    /// Normal matrix given by its spectrum.
    NormalMatrix {
        #[serde(with = "cnum::list")]
        eigenvalues: Vec<C64>,
    },
    Sum { children: Vec<SystemExpr> },
    /// `outer ∘ inner`.
    Compose {
        outer: Box<SystemExpr>,
        inner: Box<SystemExpr>,
    },
    /// Relational inverse.
    Inverse { child: Box<SystemExpr> },
    Scale {
        #[serde(with = "cnum")]
        alpha: C64,
        child: Box<SystemExpr>,
    },
    /// Negative feedback loop `e = r − y`, `u = C(e)`, `y = P(u)`.
    Feedback {
        plant: Box<SystemExpr>,
        controller: Box<SystemExpr>,
        #[serde(default)]
        output: LoopSignal,
    },
    /// Hodgkin–Huxley potassium current driven by a membrane voltage (mV, ms).
    HhPotassium {
        #[serde(default)]
        params: HhParams,
    },
}

/// Which loop signal a [`SystemExpr::Feedback`] node outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopSignal {
    E,
    U,
    #[default]
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StaticKind {
    Saturation { limit: f64 },
    Deadzone { width: f64 },
    Relu,
    /// Piecewise-linear map with slope `lambda` for `x >= 0` and `mu` below.
    SectorCustom { mu: f64, lambda: f64 },
}

/// Incremental chord-slope bounds `μ ≤ (f(a) − f(b))/(a − b) ≤ λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorBounds {
    pub mu: f64,
    pub lambda: f64,
}

impl SectorBounds {
    pub fn new(mu: f64, lambda: f64) -> Result<Self> {
        let b = Self { mu, lambda };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu.is_finite() && self.lambda.is_finite()) || self.mu > self.lambda {
            return Err(SrgError::InvalidExpr(format!(
                "sector bounds need finite mu <= lambda, got ({}, {})",
                self.mu, self.lambda
            )));
        }
        Ok(())
    }
}

impl StaticKind {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            StaticKind::Saturation { limit } => x.clamp(-limit, limit),
            StaticKind::Deadzone { width } => x.signum() * (x.abs() - width).max(0.0),
            StaticKind::Relu => x.max(0.0),
            StaticKind::SectorCustom { mu, lambda } => {
                if x >= 0.0 {
                    lambda * x
                } else {
                    mu * x
                }
            }
        }
    }

    /// Exact chord-slope bounds over `[−a, a]` (the whole line if `None`).
    pub fn chord_slope_bounds(&self, amplitude: Option<f64>) -> Result<SectorBounds> {
        if let Some(a) = amplitude {
            if !(a > 0.0 && a.is_finite()) {
                return Err(SrgError::InvalidClass(format!(
                    "amplitude must be positive, got {a}"
                )));
            }
        }
        let a = amplitude.unwrap_or(f64::INFINITY);
        let b = match *self {
            StaticKind::Saturation { limit } => {
                if a <= limit {
                    (1.0, 1.0)
                } else {
                    (0.0, 1.0)
                }
            }
            StaticKind::Deadzone { width } => {
                if a <= width {
                    (0.0, 0.0)
                } else if width == 0.0 {
                    (1.0, 1.0)
                } else {
                    (0.0, 1.0)
                }
            }
            StaticKind::Relu => (0.0, 1.0),
            StaticKind::SectorCustom { mu, lambda } => (mu, lambda),
        };
        Ok(SectorBounds {
            mu: b.0,
            lambda: b.1,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SrgError::InvalidExpr(m));
        match *self {
            StaticKind::Saturation { limit } if !(limit > 0.0 && limit.is_finite()) => {
                bad(format!("saturation limit must be positive, got {limit}"))
            }
            StaticKind::Deadzone { width } if !(width >= 0.0 && width.is_finite()) => {
                bad(format!("deadzone width must be nonnegative, got {width}"))
            }
            StaticKind::SectorCustom { mu, lambda } => SectorBounds { mu, lambda }.validate(),
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            StaticKind::Saturation { limit } => format!("saturation({limit})"),
            StaticKind::Deadzone { width } => format!("deadzone({width})"),
            StaticKind::Relu => "relu".into(),
            StaticKind::SectorCustom { mu, lambda } => format!("sector_custom({mu}, {lambda})"),
        }
    }
}

/// Pointwise value of a static nonlinearity.
pub fn static_eval(kind: &StaticKind, x: f64) -> f64 {
    kind.eval(x)
}

pub fn chord_slope_bounds(kind: &StaticKind, amplitude: Option<f64>) -> Result<SectorBounds> {
    kind.chord_slope_bounds(amplitude)
}

impl SystemExpr {
    pub fn lti(num: &[f64], den: &[f64]) -> Self {
        SystemExpr::Lti {
            num: num.to_vec(),
            den: den.to_vec(),
        }
    }

    pub fn gain(k: f64) -> Self {
        Self::lti(&[k], &[1.0])
    }

    pub fn saturation(limit: f64) -> Self {
        SystemExpr::Static {
            kind: StaticKind::Saturation { limit },
        }
    }

    pub fn static_nl(kind: StaticKind) -> Self {
        SystemExpr::Static { kind }
    }

    pub fn compose(outer: SystemExpr, inner: SystemExpr) -> Self {
        SystemExpr::Compose {
            outer: Box::new(outer),
            inner: Box::new(inner),
        }
    }

    pub fn inverse(child: SystemExpr) -> Self {
        SystemExpr::Inverse {
            child: Box::new(child),
        }
    }

    pub fn scale(alpha: f64, child: SystemExpr) -> Self {
        SystemExpr::Scale {
            alpha: C64::new(alpha, 0.0),
            child: Box::new(child),
        }
    }

    pub fn feedback(plant: SystemExpr, controller: SystemExpr, output: LoopSignal) -> Self {
        SystemExpr::Feedback {
            plant: Box::new(plant),
            controller: Box::new(controller),
            output,
        }
    }

    /// Parses a JSON document, checking `schema_version` when present.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| SrgError::Parse(e.to_string()))?;
        Self::from_value(value)
    }

    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        if let Some(v) = value.get("schema_version") {
            if v.as_u64() != Some(crate::SCHEMA_VERSION as u64) {
                return Err(SrgError::Parse(format!("unsupported schema_version {v}")));
            }
        }
        let expr: SystemExpr =
            serde_json::from_value(value).map_err(|e| SrgError::Parse(e.to_string()))?;
        expr.validate()?;
        Ok(expr)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SystemExpr::Lti { num, den } => {
                if num.is_empty() || den.is_empty() {
                    return Err(SrgError::InvalidExpr("lti needs num and den".into()));
                }
                if !num.iter().chain(den).all(|c| c.is_finite()) {
                    return Err(SrgError::InvalidExpr("lti coefficients must be finite".into()));
                }
                if poly::is_zero(den) {
                    return Err(SrgError::InvalidExpr("lti denominator is identically zero".into()));
                }
                Ok(())
            }
            SystemExpr::Static { kind } => kind.validate(),
            SystemExpr::NormalMatrix { eigenvalues } => {
                if eigenvalues.is_empty() {
                    return Err(SrgError::InvalidExpr("normal matrix needs eigenvalues".into()));
                }
                Ok(())
            }
            SystemExpr::Sum { children } => {
                if children.is_empty() {
                    return Err(SrgError::InvalidExpr("sum needs at least one child".into()));
                }
                children.iter().try_for_each(|c| c.validate())
            }
            SystemExpr::Compose { outer, inner } => {
                outer.validate()?;
                inner.validate()
            }
            SystemExpr::Inverse { child } => child.validate(),
            SystemExpr::Scale { alpha, child } => {
                if !(alpha.re.is_finite() && alpha.im.is_finite()) {
                    return Err(SrgError::InvalidExpr("scale factor must be finite".into()));
                }
                child.validate()
            }
            SystemExpr::Feedback {
                plant, controller, ..
            } => {
                plant.validate()?;
                controller.validate()
            }
            SystemExpr::HhPotassium { params } => params.validate(),
        }
    }

    /// Number of nodes in the tree.
    pub fn node_count(&self) -> usize {
        1 + match self {
            SystemExpr::Sum { children } => children.iter().map(|c| c.node_count()).sum(),
            SystemExpr::Compose { outer, inner } => outer.node_count() + inner.node_count(),
            SystemExpr::Inverse { child } | SystemExpr::Scale { child, .. } => child.node_count(),
            SystemExpr::Feedback {
                plant, controller, ..
            } => plant.node_count() + controller.node_count(),
            _ => 0,
        }
    }

    /// Short human-readable name of the node.
    pub fn label(&self) -> String {
        match self {
            SystemExpr::Lti { num, den } => format!("lti(num={num:?}, den={den:?})"),
            SystemExpr::Static { kind } => kind.label(),
            SystemExpr::NormalMatrix { eigenvalues } => {
                format!("normal_matrix({} eigenvalues)", eigenvalues.len())
            }
            SystemExpr::Sum { children } => format!("sum({} children)", children.len()),
            SystemExpr::Compose { .. } => "compose".into(),
            SystemExpr::Inverse { .. } => "inverse".into(),
            SystemExpr::Scale { alpha, .. } => format!("scale({alpha})"),
            SystemExpr::Feedback { .. } => "feedback".into(),
            SystemExpr::HhPotassium { .. } => "hh_potassium".into(),
        }
    }

    /// Collapses LTI-only subtrees into one transfer function with common
    /// roots cancelled. Returns `None` if the subtree is not LTI.
    pub fn fold_lti(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let (n, d) = match self {
            SystemExpr::Lti { num, den } => (poly::trim(num), poly::trim(den)),
            SystemExpr::Compose { outer, inner } => {
                let (n1, d1) = outer.fold_lti()?;
                let (n2, d2) = inner.fold_lti()?;
                (poly::mul(&n1, &n2), poly::mul(&d1, &d2))
            }
            SystemExpr::Sum { children } => {
                let mut acc = (vec![0.0], vec![1.0]);
                for c in children {
                    let (n, d) = c.fold_lti()?;
                    acc = (
                        poly::add(&poly::mul(&acc.0, &d), &poly::mul(&n, &acc.1)),
                        poly::mul(&acc.1, &d),
                    );
                }
                acc
            }
            SystemExpr::Scale { alpha, child } if alpha.im == 0.0 => {
                let (n, d) = child.fold_lti()?;
                (poly::scale(&n, alpha.re), d)
            }
            SystemExpr::Inverse { child } => {
                let (n, d) = child.fold_lti()?;
                if poly::is_zero(&n) {
                    return None;
                }
                (d, n)
            }
            _ => return None,
        };
        Some(poly::cancel(&n, &d))
    }
}

/// Serde helpers accepting a complex number as `x`, `[re, im]` or `{re, im}`.
mod cnum {
    use num_complex::Complex64 as C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Real(f64),
        Pair([f64; 2]),
        Obj {
            re: f64,
            #[serde(default)]
            im: f64,
        },
    }

    impl From<Repr> for C64 {
        fn from(r: Repr) -> C64 {
            match r {
                Repr::Real(x) => C64::new(x, 0.0),
                Repr::Pair([a, b]) => C64::new(a, b),
                Repr::Obj { re, im } => C64::new(re, im),
            }
        }
    }

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        Repr::deserialize(d).map(C64::from)
    }

    pub mod list {
        use super::*;

        pub fn serialize<S: Serializer>(zs: &[C64], s: S) -> Result<S::Ok, S::Error> {
            zs.iter()
                .map(|z| [z.re, z.im])
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
            Vec::<Repr>::deserialize(d).map(|v| v.into_iter().map(C64::from).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shapes() {
        let e = SystemExpr::compose(SystemExpr::lti(&[1.0], &[1.0, 1.0]), SystemExpr::saturation(1.0));
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(
            s,
            r#"{"type":"compose","outer":{"type":"lti","num":[1.0],"den":[1.0,1.0]},"inner":{"type":"static","kind":"saturation","limit":1.0}}"#
        );
        assert_eq!(SystemExpr::from_json(&s).unwrap(), e);
        let m = SystemExpr::from_json(r#"{"type":"normal_matrix","eigenvalues":[1,[2,0.5]]}"#).unwrap();
        assert_eq!(
            m,
            SystemExpr::NormalMatrix {
                eigenvalues: vec![C64::new(1., 0.), C64::new(2., 0.5)]
            }
        );
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(SystemExpr::from_json(r#"{"type":"lti","num":[1],"den":[0,0]}"#).is_err());
        assert!(SystemExpr::from_json(r#"{"type":"static","kind":"sector_custom","mu":2,"lambda":1}"#).is_err());
        assert!(SystemExpr::from_json(r#"{"schema_version":7,"type":"static","kind":"relu"}"#).is_err());
        assert!(SystemExpr::from_json(r#"{"type":"warp"}"#).is_err());
    }

    #[test]
    fn static_values() {
        let sat = StaticKind::Saturation { limit: 1.0 };
        assert_eq!(static_eval(&sat, 0.3), 0.3);
        assert_eq!(static_eval(&sat, -7.0), -1.0);
        assert_eq!(static_eval(&StaticKind::Deadzone { width: 1.0 }, 1.5), 0.5);
        let b = chord_slope_bounds(&sat, Some(0.5)).unwrap();
        assert_eq!((b.mu, b.lambda), (1.0, 1.0));
        let b = chord_slope_bounds(&sat, None).unwrap();
        assert_eq!((b.mu, b.lambda), (0.0, 1.0));
    }

    #[test]
    fn folds_loop_transfer_functions() {
        // C2 = s on 1/(s(s+1)) gives 1/(s+1); its inverse is s + 1
        let l = SystemExpr::compose(SystemExpr::lti(&[0., 1.], &[1.]), SystemExpr::lti(&[1.], &[0., 1., 1.]));
        let (n, d) = SystemExpr::inverse(l).fold_lti().unwrap();
        assert_eq!(n.len(), 2);
        assert!((n[0] - 1.0).abs() < 1e-9 && (n[1] - 1.0).abs() < 1e-9);
        assert!((d[0] - 1.0).abs() < 1e-9 && d.len() == 1);
        assert!(SystemExpr::inverse(SystemExpr::saturation(1.0)).fold_lti().is_none());
        assert_eq!(SystemExpr::inverse(SystemExpr::saturation(1.0)).node_count(), 2);
    }
}
