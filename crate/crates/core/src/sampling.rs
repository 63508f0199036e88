//! Empirical SRGs from simulated input pairs.

use num_complex::Complex64 as C64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SrgError};
use crate::operators::Operator;
use crate::region::{Precision, Region, RegionPrimitive};
use crate::signal::{gen_signal_stream, rng_for, Signal, SignalClass, SignalKind};
use crate::srg::SrgBound;

/// Outcome of the z-formula for one input pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZPoint {
    /// `z` and its conjugate.
    Pair(C64, C64),
    /// Equal inputs, different outputs.
    Infinity,
    /// Equal inputs and outputs.
    Empty,
}

/// `(‖Δy‖/‖Δu‖)·e^{±j∠(Δu, Δy)}`.
pub fn z_point(u1: &Signal, u2: &Signal, y1: &Signal, y2: &Signal) -> Result<ZPoint> {
    let du = u1.sub(u2)?;
    let dy = y1.sub(y2)?;
    let nu = du.norm();
    let ny = dy.norm();
    if nu == 0.0 {
        return Ok(if ny == 0.0 {
            ZPoint::Empty
        } else {
            ZPoint::Infinity
        });
    }
    let gain = ny / nu;
    let theta = if ny == 0.0 { 0.0 } else { du.angle(&dy)? };
    let z = C64::from_polar(gain, theta);
    Ok(ZPoint::Pair(z, z.conj()))
}

/// Sampled SRG: a conjugation-closed point cloud tagged with pair indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SampleDoc", try_from = "SampleDoc")]
pub struct SrgSample {
    pub points: Vec<C64>,
    /// Index of the pair that produced each point.
    pub pair_ids: Vec<usize>,
    pub pair_count: usize,
    pub class: SignalClass,
    pub seed: u64,
    /// Pairs with equal inputs but different outputs.
    pub infinity_markers: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SampleDoc {
    #[serde(flatten)]
    region: Region,
    pair_ids: Vec<usize>,
    pair_count: usize,
    class: SignalClass,
    seed: u64,
    #[serde(default)]
    infinity_markers: Vec<usize>,
}

impl From<SrgSample> for SampleDoc {
    fn from(s: SrgSample) -> Self {
        let region = Region::from_parts(
            vec![RegionPrimitive::PointSet {
                points: s.points,
                dilation: 0.0,
            }],
            !s.infinity_markers.is_empty(),
            0.0,
        );
        SampleDoc {
            region,
            pair_ids: s.pair_ids,
            pair_count: s.pair_count,
            class: s.class,
            seed: s.seed,
            infinity_markers: s.infinity_markers,
        }
    }
}

impl TryFrom<SampleDoc> for SrgSample {
    type Error = SrgError;

    fn try_from(d: SampleDoc) -> Result<Self> {
        let points: Vec<C64> = d
            .region
            .primitives()
            .iter()
            .flat_map(|p| match p {
                RegionPrimitive::PointSet { points, .. } => points.clone(),
                _ => Vec::new(),
            })
            .collect();
        if points.len() != d.pair_ids.len() {
            return Err(SrgError::Parse(format!(
                "{} points but {} pair ids",
                points.len(),
                d.pair_ids.len()
            )));
        }
        Ok(SrgSample {
            points,
            pair_ids: d.pair_ids,
            pair_count: d.pair_count,
            class: d.class,
            seed: d.seed,
            infinity_markers: d.infinity_markers,
        })
    }
}

impl SrgSample {
    /// The points as an undilated point-set region.
    pub fn region(&self) -> Region {
        Region::points(&self.points)
    }

    /// `re,im,pair_id` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,pair_id\n");
        for (z, id) in self.points.iter().zip(&self.pair_ids) {
            out.push_str(&format!("{},{},{}\n", z.re, z.im, id));
        }
        out
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Which probing strategy pair `i` uses: half independent multisines, 30%
/// a signal with a small perturbation, 20% constant or scaled pairs.
fn pair_kind(i: usize) -> usize {
    match i % 10 {
        0..=4 => 0,
        5..=7 => 1,
        _ => 2,
    }
}

/// The `i`-th input pair for `seed`, offset by `bias`.
pub fn input_pair(class: &SignalClass, seed: u64, i: usize, bias: f64) -> Result<(Signal, Signal)> {
    let stream = 4 * i as u64;
    let ms = |k: u64| gen_signal_stream(class, SignalKind::Multisine, seed, stream + k);
    let (u1, u2) = match pair_kind(i) {
        0 => (ms(0)?, ms(1)?),
        1 => {
            let base = ms(0)?.scale(C64::new(0.9, 0.0));
            let bump = ms(1)?.scale(C64::new(0.05, 0.0));
            let other = base.add(&bump)?;
            (base, other)
        }
        _ => {
            let mut rng = rng_for(seed, stream + 2);
            let a = class.amplitude.unwrap_or(1.0);
            let c1 = rng.random_range(-a..=a);
            let c2 = rng.random_range(-a..=a);
            if class.band.is_some_and(|(lo, _)| lo > 0.0) {
                // constants are outside the band; scale a multisine instead
                let u = ms(0)?;
                (u.scale(C64::new(c1 / a, 0.0)), u.scale(C64::new(c2 / a, 0.0)))
            } else {
                let n = class.n_samples();
                (
                    Signal::constant(c1, n, class.dt)?,
                    Signal::constant(c2, n, class.dt)?,
                )
            }
        }
    };
    Ok((u1.offset(bias), u2.offset(bias)))
}

fn run_pair<O: Operator + ?Sized>(
    op: &O,
    class: &SignalClass,
    seed: u64,
    i: usize,
    bias: f64,
) -> Result<(Signal, Signal, Signal, Signal)> {
    let wrap = |e: SrgError| SrgError::PairFailed {
        pair: i,
        source: Box::new(e),
    };
    let (u1, u2) = input_pair(class, seed, i, bias).map_err(wrap)?;
    let y1 = op.apply(&u1).map_err(wrap)?;
    let y2 = op.apply(&u2).map_err(wrap)?;
    Ok((u1, u2, y1, y2))
}

/// Samples the SRG of `op` over `n_pairs` class-feasible input pairs.
pub fn sample_srg<O: Operator + ?Sized>(
    op: &O,
    class: &SignalClass,
    n_pairs: usize,
    seed: u64,
) -> Result<SrgSample> {
    sample_srg_about(op, class, n_pairs, seed, 0.0)
}

/// Like [`sample_srg`] with every input shifted by `bias` (e.g. a resting
/// membrane voltage).
pub fn sample_srg_about<O: Operator + ?Sized>(
    op: &O,
    class: &SignalClass,
    n_pairs: usize,
    seed: u64,
    bias: f64,
) -> Result<SrgSample> {
    if n_pairs == 0 {
        return Err(SrgError::InvalidClass("n_pairs must be at least 1".into()));
    }
    class.validate()?;
    let zs: Vec<ZPoint> = (0..n_pairs)
        .into_par_iter()
        .map(|i| {
            let (u1, u2, y1, y2) = run_pair(op, class, seed, i, bias)?;
            z_point(&u1, &u2, &y1, &y2).map_err(|e| SrgError::PairFailed {
                pair: i,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    let mut out = SrgSample {
        points: Vec::with_capacity(2 * n_pairs),
        pair_ids: Vec::with_capacity(2 * n_pairs),
        pair_count: n_pairs,
        class: *class,
        seed,
        infinity_markers: Vec::new(),
    };
    for (i, z) in zs.into_iter().enumerate() {
        match z {
            ZPoint::Pair(a, b) => {
                out.points.extend([a, b]);
                out.pair_ids.extend([i, i]);
            }
            ZPoint::Infinity => out.infinity_markers.push(i),
            ZPoint::Empty => {}
        }
    }
    Ok(out)
}

/// Largest `‖Δy‖/‖Δu‖` over the pairs, with the pair attaining it.
pub fn empirical_gain<O: Operator + ?Sized>(
    op: &O,
    class: &SignalClass,
    n_pairs: usize,
    seed: u64,
) -> Result<(f64, usize)> {
    if n_pairs == 0 {
        return Err(SrgError::InvalidClass("n_pairs must be at least 1".into()));
    }
    class.validate()?;
    let gains: Vec<f64> = (0..n_pairs)
        .into_par_iter()
        .map(|i| {
            let (u1, u2, y1, y2) = run_pair(op, class, seed, i, 0.0)?;
            let nu = u1.sub(&u2)?.norm();
            let ny = y1.sub(&y2)?.norm();
            Ok(if nu == 0.0 { 0.0 } else { ny / nu })
        })
        .collect::<Result<_>>()?;
    Ok(gains
        .iter()
        .enumerate()
        .fold((0.0, 0), |best, (i, &g)| if g > best.0 { (g, i) } else { best }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Offender {
    pub point: C64,
    pub pair_id: usize,
    pub seed: u64,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub fraction_inside: f64,
    pub max_violation: f64,
    pub dilation: f64,
    /// Up to ten points farthest outside, worst first.
    pub worst: Vec<Offender>,
    pub infinity_markers: usize,
}

/// Coverage of `sample` by the bound's region dilated by its resolution.
pub fn coverage_report(sample: &SrgSample, bound: &SrgBound) -> CoverageReport {
    coverage_at(sample, &bound.region, bound.region.resolution())
}

pub fn coverage_at(sample: &SrgSample, region: &Region, dilation: f64) -> CoverageReport {
    let index = region.index(&Precision::new((dilation * 0.25).max(1e-9), 1e6));
    let mut worst: Vec<Offender> = sample
        .points
        .par_iter()
        .zip(&sample.pair_ids)
        .filter(|(z, _)| !region.contains(**z) && !index.contains_dilated(**z, dilation))
        .map(|(&z, &id)| Offender {
            point: z,
            pair_id: id,
            seed: sample.seed,
            violation: (index.distance(z) - dilation).max(0.0),
        })
        .collect();
    worst.sort_by(|a, b| b.violation.total_cmp(&a.violation));
    let total = sample.points.len();
    let outside = worst.len();
    let max_violation = worst.first().map_or(0.0, |o| o.violation);
    worst.truncate(10);
    CoverageReport {
        fraction_inside: if total == 0 {
            1.0
        } else {
            (total - outside) as f64 / total as f64
        },
        max_violation,
        dilation,
        worst,
        infinity_markers: sample.infinity_markers.len(),
    }
}
