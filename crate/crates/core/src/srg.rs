//! Analytic SRG bounds for primitive systems and expression trees.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SrgError};
use crate::operators::{poly, SectorBounds, StaticKind, SystemExpr};
use crate::region::{
    chord_closure, h_convex_hull, hyperbolic_hull_with, invert, minkowski_product, minkowski_sum,
    HullMode, Precision, Region, WINDOW,
};
use crate::sampling;
use crate::signal::SignalClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    Outer,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SrgOptions {
    pub precision: Precision,
    /// Frequency grid density before adaptive refinement.
    pub points_per_decade: usize,
    /// Use sampled refinements of static nonlinearities in place of their
    /// certified sector discs.
    pub trust_sampled: bool,
    /// Pairs used when a sampled refinement is computed.
    pub refine_pairs: usize,
    pub seed: u64,
}

impl Default for SrgOptions {
    fn default() -> Self {
        Self {
            precision: Precision::default(),
            points_per_decade: 2000,
            trust_sampled: false,
            refine_pairs: 200,
            seed: 0,
        }
    }
}

impl SrgOptions {
    pub fn with_resolution(mut self, resolution: f64) -> Self {
        self.precision.resolution = resolution;
        self
    }
}

/// An outer bound on the SRG of a system over a signal class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SrgBound {
    #[serde(flatten)]
    pub region: Region,
    pub class: SignalClass,
    pub exactness: Exactness,
    /// One entry per expression node, in pre-order.
    pub rule_trace: Vec<String>,
    /// Sampled (uncertified) refinement, when one was computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refinement: Option<Region>,
}

impl SrgBound {
    fn leaf(region: Region, class: SignalClass, exactness: Exactness, rule: String) -> Self {
        Self {
            region,
            class,
            exactness,
            rule_trace: vec![rule],
            refinement: None,
        }
    }
}

/// Frequencies at which the imaginary axis meets a pole, restricted to `band`.
fn axis_poles(den: &[f64], band: Option<(f64, f64)>) -> Option<f64> {
    poly::roots(den).into_iter().find_map(|p| {
        let on_axis = p.re.abs() <= 1e-9 * (1.0 + p.norm());
        let w = p.im.abs();
        let inside = band.is_none_or(|(lo, hi)| w >= lo - 1e-12 && w <= hi + 1e-12);
        (on_axis && inside).then_some(w)
    })
}

struct Nyquist<'a> {
    num: &'a [f64],
    den: &'a [f64],
}

impl Nyquist<'_> {
    fn at(&self, w: f64) -> C64 {
        let s = C64::new(0.0, w);
        poly::eval(self.num, s) / poly::eval(self.den, s)
    }

    /// Value at `ω = ∞` for proper systems.
    fn at_infinity(&self) -> Option<C64> {
        let n = self.num.len();
        let d = self.den.len();
        match n.cmp(&d) {
            std::cmp::Ordering::Less => Some(C64::new(0.0, 0.0)),
            std::cmp::Ordering::Equal => Some(C64::new(self.num[n - 1] / self.den[d - 1], 0.0)),
            std::cmp::Ordering::Greater => None,
        }
    }
}

fn tolerance(z: C64, res: f64) -> f64 {
    res * 0.125 * (z.norm() / WINDOW).max(1.0)
}

/// Sampled Nyquist curve: a log grid refined until consecutive samples turn
/// by at most 2° and the curve stays within tolerance of the chords.
/// Returns the samples and the largest uncovered tail deviation.
fn nyquist_samples(
    g: &Nyquist,
    band: Option<(f64, f64)>,
    per_decade: usize,
    prec: &Precision,
) -> (Vec<C64>, f64) {
    let res = prec.resolution;
    let roots: Vec<f64> = poly::roots(g.num)
        .into_iter()
        .chain(poly::roots(g.den))
        .map(|r| r.norm())
        .filter(|&m| m > 0.0)
        .collect();
    let rmin = roots.iter().copied().fold(f64::INFINITY, f64::min);
    let rmax = roots.iter().copied().fold(0.0, f64::max);
    let (lo, hi) = band.unwrap_or((0.0, f64::INFINITY));

    let mut tail: f64 = 0.0;
    let mut a = if lo > 0.0 {
        lo
    } else {
        let mut a = (0.01 * rmin).min(1e-3);
        let g0 = g.at(0.0);
        while a > 1e-12 && (g.at(a) - g0).norm() > tolerance(g0, res) {
            a *= 0.1;
        }
        a.min(hi * 0.1)
    };
    let b = if hi.is_finite() {
        hi
    } else {
        let mut b = (100.0 * rmax).max(1e3);
        match g.at_infinity() {
            Some(ginf) => {
                while b < 1e12 && (g.at(b) - ginf).norm() > tolerance(ginf, res) {
                    b *= 10.0;
                }
                tail = (g.at(b) - ginf).norm();
            }
            None => {
                while b < 1e12 && g.at(b).norm() < prec.truncation {
                    b *= 10.0;
                }
            }
        }
        b
    };
    if a >= b {
        a = b * 0.1;
    }

    let decades = (b / a).log10().max(1e-3);
    let n = ((decades * per_decade as f64).ceil() as usize).max(64);
    let mut ws: Vec<f64> = (0..=n)
        .map(|i| a * (b / a).powf(i as f64 / n as f64))
        .collect();
    ws[n] = b;
    if lo == 0.0 {
        ws.insert(0, 0.0);
    }

    let mut pts: Vec<(f64, C64)> = ws.par_iter().map(|&w| (w, g.at(w))).collect();
    // adaptive bisection, breadth-first so the merge stays ordered
    for _ in 0..20 {
        let mids: Vec<Option<(f64, C64)>> = pts
            .par_windows(2)
            .map(|pair| {
                let (w0, z0) = pair[0];
                let (w1, z1) = pair[1];
                let wm = if w0 == 0.0 { 0.5 * w1 } else { (w0 * w1).sqrt() };
                let zm = g.at(wm);
                let dev = crate::region::geom::dist_point_segment(zm, z0, z1).0;
                let turn = ((zm - z0) * (z1 - zm).conj()).arg().abs();
                let bad = dev > tolerance(zm, res)
                    || (turn > 2f64.to_radians() && (z1 - z0).norm() > tolerance(zm, res));
                (bad && wm > w0 && wm < w1).then_some((wm, zm))
            })
            .collect();
        if mids.iter().all(Option::is_none) {
            break;
        }
        let mut next = Vec::with_capacity(pts.len() * 2);
        for (i, p) in pts.iter().enumerate() {
            next.push(*p);
            if let Some(Some(m)) = mids.get(i) {
                next.push(*m);
            }
        }
        pts = next;
    }
    let mut out: Vec<C64> = pts.into_iter().map(|(_, z)| z).collect();
    if !hi.is_finite() {
        if let Some(ginf) = g.at_infinity() {
            out.push(ginf);
        }
    }
    (out, tail)
}

/// Bound from the Nyquist curve `G(jω)` restricted to the class band.
///
/// Proper systems without right-half-plane poles are filled between the
/// upper curve and its mirror image; others use the plain h-convex hull.
pub fn srg_of_lti(num: &[f64], den: &[f64], class: &SignalClass, opts: &SrgOptions) -> Result<SrgBound> {
    SystemExpr::lti(num, den).validate()?;
    let (num, den) = poly::cancel(num, den);
    let label = format!("lti(num={num:?}, den={den:?})");
    if poly::degree(&num) == 0 && poly::degree(&den) == 0 {
        let k = num[0] / den[0];
        return Ok(SrgBound::leaf(
            Region::real_point(k),
            *class,
            Exactness::Exact,
            format!("{label}: static gain"),
        ));
    }
    if let Some(omega) = axis_poles(&den, class.band) {
        return Err(SrgError::UnboundedNyquist { omega });
    }
    let proper = num.len() <= den.len();
    let hurwitz = poly::roots(&den).iter().all(|p| p.re < 0.0);
    if first_order_disc(&num, &den, class) {
        // first order: the Nyquist curve is the circle on the diameter [G(0), G(∞)]
        let g0 = num[0] / den[0];
        let ginf = num.get(1).copied().unwrap_or(0.0) / den[1];
        return Ok(SrgBound::leaf(
            Region::disc(C64::new(0.5 * (g0 + ginf), 0.0), 0.5 * (g0 - ginf).abs()),
            *class,
            Exactness::Outer,
            format!("{label}: disc bounded by the first-order Nyquist circle"),
        ));
    }
    let prec = &opts.precision;
    let g = Nyquist {
        num: &num,
        den: &den,
    };
    let (pts, tail) = nyquist_samples(&g, class.band, opts.points_per_decade, prec);
    let mode = if proper && hurwitz {
        HullMode::Fill
    } else {
        HullMode::Mirror
    };
    let hull = hyperbolic_hull_with(&pts, mode, prec);
    let res = hull.resolution() + prec.resolution * 0.25 + tail;
    let region = hull.with_resolution(res).with_infinity(!proper);
    Ok(SrgBound::leaf(
        region,
        *class,
        Exactness::Outer,
        format!("{label}: Nyquist h-convex hull over {} samples", pts.len()),
    ))
}

/// Disc with diameter `[μ, λ]` on the real axis.
pub fn srg_of_sector(b: &SectorBounds) -> SrgBound {
    sector_bound(b, &SignalClass::default())
}

fn sector_bound(b: &SectorBounds, class: &SignalClass) -> SrgBound {
    let label = format!("sector({}, {})", b.mu, b.lambda);
    if b.mu == b.lambda {
        return SrgBound::leaf(
            Region::real_point(b.mu),
            *class,
            Exactness::Exact,
            format!("{label}: linear gain"),
        );
    }
    // the radius is half the sector width, whatever the order of printing
    let center = 0.5 * (b.mu + b.lambda);
    let radius = 0.5 * (b.lambda - b.mu).abs();
    SrgBound::leaf(
        Region::disc(C64::new(center, 0.0), radius),
        *class,
        Exactness::Outer,
        format!("{label}: sector disc"),
    )
}

/// Sector disc from the chord slopes of `kind` over the class amplitude.
/// With `trust_sampled` the sampled refinement replaces the disc.
pub fn srg_of_static(kind: &StaticKind, class: &SignalClass, opts: &SrgOptions) -> Result<SrgBound> {
    kind.validate()?;
    let b = kind.chord_slope_bounds(class.amplitude)?;
    let mut bound = sector_bound(&b, class);
    bound.rule_trace[0] = format!("{}: {}", kind.label(), bound.rule_trace[0]);
    if opts.trust_sampled && bound.exactness == Exactness::Outer {
        let refined = static_refinement(kind, class, opts)?;
        bound.rule_trace[0].push_str(" replaced by trusted sampled refinement");
        bound.region = refined.clone();
        bound.refinement = Some(refined);
    }
    Ok(bound)
}

/// Convex hull of sampled z-points of a static nonlinearity, dilated by the
/// resolution. Not a certified bound.
pub fn static_refinement(kind: &StaticKind, class: &SignalClass, opts: &SrgOptions) -> Result<Region> {
    let op = SystemExpr::static_nl(*kind);
    let sample = sampling::sample_srg(&op, class, opts.refine_pairs.max(1), opts.seed)?;
    let prec = &opts.precision;
    let hull = chord_closure(&Region::points(&sample.points), prec)?;
    Ok(hull.dilate(prec.resolution, prec))
}

/// h-convex hull of the spectrum (closed under conjugation).
pub fn srg_of_normal_matrix(eigenvalues: &[C64], opts: &SrgOptions) -> Result<SrgBound> {
    SystemExpr::NormalMatrix {
        eigenvalues: eigenvalues.to_vec(),
    }
    .validate()?;
    let first = eigenvalues[0];
    let single = eigenvalues
        .iter()
        .all(|z| (z - first).norm() == 0.0 || (z - first.conj()).norm() == 0.0);
    let region = if single {
        Region::point(first)
    } else {
        let mut pts = eigenvalues.to_vec();
        pts.extend(eigenvalues.iter().map(|z| z.conj()));
        h_convex_hull(&pts, &opts.precision)
    };
    Ok(SrgBound::leaf(
        region,
        SignalClass::default(),
        Exactness::Exact,
        format!("normal_matrix({} eigenvalues): h-convex hull of the spectrum", eigenvalues.len()),
    ))
}

fn children(expr: &SystemExpr) -> Vec<&SystemExpr> {
    match expr {
        SystemExpr::Sum { children } => children.iter().collect(),
        SystemExpr::Compose { outer, inner } => vec![outer, inner],
        SystemExpr::Inverse { child } | SystemExpr::Scale { child, .. } => vec![child],
        SystemExpr::Feedback {
            plant, controller, ..
        } => vec![plant, controller],
        _ => Vec::new(),
    }
}

fn absorbed(expr: &SystemExpr, trace: &mut Vec<String>) {
    for c in children(expr) {
        trace.push(format!("{}: folded into parent transfer function", c.label()));
        absorbed(c, trace);
    }
}

fn first_order_disc(num: &[f64], den: &[f64], class: &SignalClass) -> bool {
    class.band.is_none()
        && den.len() == 2
        && num.len() <= 2
        && poly::roots(den).iter().all(|p| p.re < 0.0)
}

/// True when `Inverse(child)` is better drawn from the inverse transfer
/// function than by inverting the child's region.
fn invert_directly(child: &SystemExpr, class: &SignalClass) -> bool {
    let Some((n, d)) = child.fold_lti() else {
        return false;
    };
    let (n, d) = poly::cancel(&n, &d);
    if n.iter().all(|c| *c == 0.0) || first_order_disc(&n, &d, class) {
        return false;
    }
    axis_poles(&n, class.band).is_none()
}

struct Walker<'a> {
    class: &'a SignalClass,
    opts: &'a SrgOptions,
    trace: Vec<String>,
}

impl Walker<'_> {
    fn folded(&mut self, expr: &SystemExpr, num: &[f64], den: &[f64]) -> Result<(Region, Exactness)> {
        let b = srg_of_lti(num, den, self.class, self.opts)?;
        self.trace
            .push(format!("{}: folded LTI subtree, {}", expr.label(), b.rule_trace[0]));
        absorbed(expr, &mut self.trace);
        Ok((b.region, b.exactness))
    }

    fn visit(&mut self, expr: &SystemExpr) -> Result<(Region, Exactness)> {
        let prec = &self.opts.precision;
        let label = expr.label();
        match expr {
            SystemExpr::Lti { num, den } => {
                let b = srg_of_lti(num, den, self.class, self.opts)?;
                self.trace.extend(b.rule_trace);
                Ok((b.region, b.exactness))
            }
            SystemExpr::Static { kind } => {
                let b = srg_of_static(kind, self.class, self.opts)?;
                self.trace.extend(b.rule_trace);
                Ok((b.region, b.exactness))
            }
            SystemExpr::NormalMatrix { eigenvalues } => {
                let b = srg_of_normal_matrix(eigenvalues, self.opts)?;
                self.trace.extend(b.rule_trace);
                Ok((b.region, b.exactness))
            }
            SystemExpr::HhPotassium { .. } => Err(SrgError::NoAnalyticBound(format!(
                "{label} has no analytic SRG; sample it instead"
            ))),
            SystemExpr::Inverse { child } if invert_directly(child, self.class) => {
                let (n, d) = expr.fold_lti().expect("checked");
                self.folded(expr, &n, &d)
            }
            SystemExpr::Inverse { child } => {
                let mark = self.trace.len();
                self.trace.push(String::new());
                match self.visit(child) {
                    Ok((r, ex)) => {
                        self.trace[mark] = format!("{label}: SRG(R⁻¹) = SRG(R)⁻¹");
                        Ok((invert(&r, prec), ex))
                    }
                    Err(SrgError::UnboundedNyquist { omega }) => {
                        // the child's Nyquist curve is unbounded but the inverse may not be
                        let Some((n, d)) = expr.fold_lti() else {
                            return Err(SrgError::UnboundedNyquist { omega });
                        };
                        self.trace.truncate(mark);
                        self.folded(expr, &n, &d)
                    }
                    Err(e) => Err(e),
                }
            }
            _ if !children(expr).is_empty() && expr.fold_lti().is_some() => {
                let (n, d) = expr.fold_lti().expect("checked");
                self.folded(expr, &n, &d)
            }
            SystemExpr::Sum { children } => {
                self.trace.push(format!("{label}: SRG(A+B) ⊆ SRG(A)+SRG(B)"));
                let mut acc: Option<Region> = None;
                for c in children {
                    let (r, _) = self.visit(c)?;
                    acc = Some(match acc {
                        None => r,
                        Some(a) => minkowski_sum(&a, &r, prec)?,
                    });
                }
                Ok((acc.expect("nonempty sum"), Exactness::Outer))
            }
            SystemExpr::Compose { outer, inner } => {
                self.trace.push(format!("{label}: SRG(AB) ⊆ SRG(A)·SRG(B)"));
                let (a, _) = self.visit(outer)?;
                let (b, _) = self.visit(inner)?;
                Ok((minkowski_product(&a, &b, prec)?, Exactness::Outer))
            }
            SystemExpr::Scale { alpha, child } => {
                self.trace.push(format!("{label}: SRG(αR) = α·SRG(R)"));
                let (r, ex) = self.visit(child)?;
                Ok((r.scale(*alpha), ex))
            }
            SystemExpr::Feedback {
                plant,
                controller,
                output,
            } => {
                use crate::operators::LoopSignal;
                self.trace.push(format!(
                    "{label}: (I+PC)⁻¹ via sum, product and inversion rules, output {output:?}"
                ));
                let (p, _) = self.visit(plant)?;
                let (c, _) = self.visit(controller)?;
                let pc = minkowski_product(&p, &c, prec)?;
                let s = invert(&minkowski_sum(&Region::real_point(1.0), &pc, prec)?, prec);
                let r = match output {
                    LoopSignal::E => s,
                    LoopSignal::U => minkowski_product(&c, &s, prec)?,
                    LoopSignal::Y => minkowski_product(&pc, &s, prec)?,
                };
                Ok((r, Exactness::Outer))
            }
        }
    }
}

/// Recursive bound via the interconnection rules. LTI-only subtrees are
/// folded into a single transfer function first.
pub fn srg_of_expr(expr: &SystemExpr, class: &SignalClass, opts: &SrgOptions) -> Result<SrgBound> {
    expr.validate()?;
    class.validate()?;
    let mut w = Walker {
        class,
        opts,
        trace: Vec::new(),
    };
    let (region, exactness) = w.visit(expr)?;
    Ok(SrgBound {
        region,
        class: *class,
        exactness,
        rule_trace: w.trace,
        refinement: None,
    })
}
