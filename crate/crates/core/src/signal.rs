//! Finite-horizon sampled signals.
//!
//! A [`Signal`] is a uniformly sampled complex trajectory on `[t0, t0 + n·dt)`.
//! Inner products use the left-endpoint Riemann sum, so `⟨u, y⟩ = Σ u·conj(y)·dt`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SrgError};

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_HORIZON: f64 = 20.0;

/// Maximum number of sinusoidal components in a generated multisine.
const MAX_TONES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<Complex64>,
    dt: f64,
    t0: f64,
}

impl Signal {
    pub fn new(samples: Vec<Complex64>, dt: f64) -> Result<Self> {
        Self::with_start(samples, dt, 0.0)
    }

    pub fn with_start(samples: Vec<Complex64>, dt: f64, t0: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(SrgError::Dimension(format!("dt must be positive, got {dt}")));
        }
        if samples.is_empty() {
            return Err(SrgError::Dimension("signal has no samples".into()));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SrgError::Dimension("signal contains non-finite samples".into()));
        }
        if !t0.is_finite() {
            return Err(SrgError::Dimension("t0 must be finite".into()));
        }
        Ok(Self { samples, dt, t0 })
    }

    pub fn from_real(samples: &[f64], dt: f64) -> Result<Self> {
        Self::new(samples.iter().map(|&x| Complex64::new(x, 0.0)).collect(), dt)
    }

    pub fn constant(value: f64, n: usize, dt: f64) -> Result<Self> {
        Self::new(vec![Complex64::new(value, 0.0); n], dt)
    }

    /// Samples `f(t)` at `t = k·dt`, `k = 0..n`.
    pub fn from_fn(n: usize, dt: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            (0..n).map(|k| Complex64::new(f(k as f64 * dt), 0.0)).collect(),
            dt,
        )
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.samples.iter().all(|z| z.im == 0.0)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.re).collect()
    }

    /// Same grid, new samples. Used by simulators that preserve length and step.
    pub(crate) fn with_samples(&self, samples: Vec<Complex64>) -> Signal {
        debug_assert_eq!(samples.len(), self.samples.len());
        Signal {
            samples,
            dt: self.dt,
            t0: self.t0,
        }
    }

    fn check_compatible(&self, other: &Signal) -> Result<()> {
        if self.len() != other.len() {
            return Err(SrgError::Dimension(format!(
                "length mismatch: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        if (self.dt - other.dt).abs() > 1e-12 * self.dt.max(other.dt) {
            return Err(SrgError::Dimension(format!(
                "step mismatch: {} vs {}",
                self.dt, other.dt
            )));
        }
        Ok(())
    }

    pub fn inner_product(&self, other: &Signal) -> Result<Complex64> {
        self.check_compatible(other)?;
        let s: Complex64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(u, y)| u * y.conj())
            .sum();
        Ok(s * self.dt)
    }

    pub fn norm(&self) -> f64 {
        (self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dt).sqrt()
    }

    /// Angle `acos(Re⟨u, y⟩ / (‖u‖‖y‖))` in `[0, π]`.
    pub fn angle(&self, other: &Signal) -> Result<f64> {
        let ip = self.inner_product(other)?;
        let nu = self.norm();
        let ny = other.norm();
        if nu == 0.0 || ny == 0.0 {
            return Err(SrgError::DegenerateSignal(
                "angle is undefined for a zero-norm signal".into(),
            ));
        }
        Ok((ip.re / (nu * ny)).clamp(-1.0, 1.0).acos())
    }

    pub fn sub(&self, other: &Signal) -> Result<Signal> {
        self.check_compatible(other)?;
        Ok(self.with_samples(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn add(&self, other: &Signal) -> Result<Signal> {
        self.check_compatible(other)?;
        Ok(self.with_samples(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn scale(&self, alpha: Complex64) -> Signal {
        self.with_samples(self.samples.iter().map(|z| z * alpha).collect())
    }

    pub fn offset(&self, c: f64) -> Signal {
        self.with_samples(self.samples.iter().map(|z| z + c).collect())
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Fraction of energy outside `[lo, hi]` rad/s, measured with the DFT of the samples.
    pub fn out_of_band_energy_ratio(&self, lo: f64, hi: f64) -> f64 {
        let n = self.len();
        let mut buf = self.samples.clone();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let df = 2.0 * PI / (n as f64 * self.dt);
        let (mut total, mut outside) = (0.0, 0.0);
        for (k, z) in buf.iter().enumerate() {
            let e = z.norm_sqr();
            total += e;
            let w = k.min(n - k) as f64 * df;
            if w < lo - 1e-9 * df || w > hi + 1e-9 * df {
                outside += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            outside / total
        }
    }

    /// Columnar text: `dt=<v> t0=<v> n=<v>` header then one `re,im` pair per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("dt={} t0={} n={}\n", self.dt, self.t0, self.len());
        for z in &self.samples {
            let _ = writeln!(out, "{},{}", z.re, z.im);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Signal> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| SrgError::Parse("missing header".into()))?;
        let (mut dt, mut t0, mut n) = (None, 0.0, None);
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| SrgError::Parse(format!("bad header field `{field}`")))?;
            let bad = || SrgError::Parse(format!("bad value in `{field}`"));
            match key {
                "dt" => dt = Some(value.parse::<f64>().map_err(|_| bad())?),
                "t0" => t0 = value.parse::<f64>().map_err(|_| bad())?,
                "n" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
                _ => return Err(SrgError::Parse(format!("unknown header key `{key}`"))),
            }
        }
        let dt = dt.ok_or_else(|| SrgError::Parse("header lacks dt".into()))?;
        let n = n.ok_or_else(|| SrgError::Parse("header lacks n".into()))?;
        let mut samples = Vec::with_capacity(n);
        for line in lines {
            let (re, im) = line
                .split_once(',')
                .ok_or_else(|| SrgError::Parse(format!("bad sample line `{line}`")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| SrgError::Parse(format!("bad number `{s}`")))
            };
            samples.push(Complex64::new(parse(re)?, parse(im)?));
        }
        if samples.len() != n {
            return Err(SrgError::Parse(format!(
                "header says n={n} but found {} samples",
                samples.len()
            )));
        }
        Signal::with_start(samples, dt, t0)
    }
}

/// Restriction of the input set: optional frequency band, optional amplitude
/// bound, horizon and step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalClass {
    #[serde(default)]
    pub band: Option<(f64, f64)>,
    #[serde(default)]
    pub amplitude: Option<f64>,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
}

fn default_horizon() -> f64 {
    DEFAULT_HORIZON
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

impl Default for SignalClass {
    fn default() -> Self {
        Self {
            band: None,
            amplitude: None,
            horizon: DEFAULT_HORIZON,
            dt: DEFAULT_DT,
        }
    }
}

impl SignalClass {
    pub fn with_band(mut self, lo: f64, hi: f64) -> Self {
        self.band = Some((lo, hi));
        self
    }

    pub fn with_amplitude(mut self, a: f64) -> Self {
        self.amplitude = Some(a);
        self
    }

    pub fn with_horizon(mut self, horizon: f64, dt: f64) -> Self {
        self.horizon = horizon;
        self.dt = dt;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SrgError::InvalidClass(m));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return bad(format!("horizon must be positive, got {}", self.horizon));
        }
        if self.horizon < self.dt {
            return bad("horizon shorter than one step".into());
        }
        if let Some(a) = self.amplitude {
            if !(a > 0.0 && a.is_finite()) {
                return bad(format!("amplitude must be positive, got {a}"));
            }
        }
        if let Some((lo, hi)) = self.band {
            if !(lo >= 0.0 && lo < hi && hi.is_finite()) {
                return bad(format!("band must satisfy 0 <= lo < hi, got [{lo}, {hi}]"));
            }
            if self.dt > PI / hi * (1.0 + 1e-12) {
                return bad(format!(
                    "dt = {} violates Nyquist sampling for band edge {hi} rad/s",
                    self.dt
                ));
            }
        }
        Ok(())
    }

    pub fn n_samples(&self) -> usize {
        ((self.horizon / self.dt).round() as usize).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalKind {
    Multisine,
    Step,
    FilteredNoise,
}

/// Counter-based generator keyed by `(seed, stream)`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generates a class-feasible signal, deterministic in `seed`.
pub fn gen_signal(class: &SignalClass, kind: SignalKind, seed: u64) -> Result<Signal> {
    gen_signal_stream(class, kind, seed, 0)
}

pub fn gen_signal_stream(
    class: &SignalClass,
    kind: SignalKind,
    seed: u64,
    stream: u64,
) -> Result<Signal> {
    class.validate()?;
    let mut rng = rng_for(seed, stream);
    let n = class.n_samples();
    let samples = match kind {
        SignalKind::Step => {
            if let Some((lo, _)) = class.band {
                if lo > 0.0 {
                    return Err(SrgError::InvalidClass(
                        "a step has its energy at 0 rad/s, outside the band".into(),
                    ));
                }
            }
            vec![class.amplitude.unwrap_or(1.0); n]
        }
        SignalKind::Multisine => multisine(class, n, &mut rng)?,
        SignalKind::FilteredNoise => filtered_noise(class, n, &mut rng)?,
    };
    Signal::new(
        samples.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        class.dt,
    )
}

/// DFT bins whose frequency lies in the class band (full Nyquist range when absent).
fn band_bins(class: &SignalClass, n: usize) -> Vec<usize> {
    let df = 2.0 * PI / (n as f64 * class.dt);
    let (lo, hi) = class.band.unwrap_or((0.0, PI / class.dt));
    (0..=(n - 1) / 2)
        .filter(|&k| {
            let w = k as f64 * df;
            w >= lo && w <= hi
        })
        .collect()
}

fn multisine(class: &SignalClass, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let mut bins = band_bins(class, n);
    if bins.is_empty() {
        return Err(SrgError::InvalidClass(
            "band is narrower than the frequency resolution of the horizon".into(),
        ));
    }
    if bins.len() > MAX_TONES {
        // partial Fisher-Yates: keep a random subset of tones
        for i in 0..MAX_TONES {
            let j = rng.random_range(i..bins.len());
            bins.swap(i, j);
        }
        bins.truncate(MAX_TONES);
        bins.sort_unstable();
    }
    // tones sit on DFT bins, so Σ a·cos(ωt + φ) is the real part of an inverse FFT
    let mut spectrum = vec![Complex64::new(0.0, 0.0); n];
    for &k in &bins {
        let amp: f64 = rng.random_range(0.2..1.0);
        let phase: f64 = rng.random_range(0.0..2.0 * PI);
        spectrum[k] = Complex64::from_polar(amp, phase);
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut spectrum);
    let x: Vec<f64> = spectrum.iter().map(|z| z.re).collect();
    Ok(rescale(x, class, rng))
}

fn filtered_noise(class: &SignalClass, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let keep = band_bins(class, n);
    if keep.is_empty() {
        return Err(SrgError::InvalidClass(
            "band is narrower than the frequency resolution of the horizon".into(),
        ));
    }
    let mut buf: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.sample::<f64, _>(StandardNormal), 0.0))
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let mut mask = vec![false; n];
    for &k in &keep {
        mask[k] = true;
        mask[(n - k) % n] = true;
    }
    for (z, m) in buf.iter_mut().zip(&mask) {
        if !m {
            *z = Complex64::new(0.0, 0.0);
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let x = buf.iter().map(|z| z.re / n as f64).collect();
    Ok(rescale(x, class, rng))
}

/// Peak scaled to a random fraction of the amplitude bound, or unit RMS without one.
fn rescale(mut x: Vec<f64>, class: &SignalClass, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let target = match class.amplitude {
        Some(a) => {
            let peak = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            if peak == 0.0 {
                return x;
            }
            a * rng.random_range(0.1..1.0) / peak
        }
        None => {
            let rms = (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt();
            if rms == 0.0 {
                return x;
            }
            1.0 / rms
        }
    };
    for v in &mut x {
        *v *= target;
    }
    x
}
