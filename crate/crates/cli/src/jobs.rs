//! Request and response types shared by the command line and the HTTP API.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use srg_core::analysis::{robustness_margin, sensitivity_margin, sensitivity_srg};
use srg_core::sampling::sample_srg;
use srg_core::srg::srg_of_expr;
use srg_core::{MarginReport, SignalClass, SrgBound, SrgError, SrgOptions, SrgSample, SystemExpr};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JobError {
    /// Malformed input: bad JSON, schema violations, missing files.
    #[error("{0}")]
    Validation(String),
    /// The input was well formed but the computation could not be carried out.
    #[error("{0}")]
    Numeric(String),
}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Validation(_) => 2,
            JobError::Numeric(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            JobError::Validation(_) => "validation",
            JobError::Numeric(_) => "numeric",
        }
    }

    /// Machine-readable form, one line.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": { "kind": self.kind(), "message": self.to_string() } }).to_string()
    }
}

impl From<SrgError> for JobError {
    fn from(e: SrgError) -> Self {
        if e.is_validation() {
            JobError::Validation(e.to_string())
        } else {
            JobError::Numeric(e.to_string())
        }
    }
}

impl From<serde_json::Error> for JobError {
    fn from(e: serde_json::Error) -> Self {
        JobError::Validation(format!("invalid JSON: {e}"))
    }
}

pub type JobResult<T> = Result<T, JobError>;

/// Canonical JSON rendering used for every command and endpoint.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("responses serialize");
    s.push('\n');
    s
}

pub fn parse<T: DeserializeOwned>(text: &str) -> JobResult<T> {
    Ok(serde_json::from_str(text)?)
}

fn options(resolution: Option<f64>, trust_sampled: bool, seed: u64) -> JobResult<SrgOptions> {
    let mut opts = SrgOptions {
        trust_sampled,
        seed,
        ..SrgOptions::default()
    };
    if let Some(r) = resolution {
        if !(r.is_finite() && r > 0.0) {
            return Err(JobError::Validation(format!("resolution must be positive, got {r}")));
        }
        opts = opts.with_resolution(r);
    }
    Ok(opts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SrgRequest {
    pub system: SystemExpr,
    #[serde(default)]
    pub class: SignalClass,
    #[serde(default)]
    pub resolution: Option<f64>,
    #[serde(default)]
    pub trust_sampled: bool,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopRequest {
    pub plant: SystemExpr,
    pub controller: SystemExpr,
    #[serde(default)]
    pub class: SignalClass,
    #[serde(default)]
    pub resolution: Option<f64>,
    #[serde(default)]
    pub trust_sampled: bool,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRequest {
    pub system: SystemExpr,
    #[serde(default)]
    pub class: SignalClass,
    #[serde(default = "default_pairs")]
    pub n_pairs: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_pairs() -> usize {
    200
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityResponse {
    pub margin: MarginReport,
    pub region: SrgBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub version: String,
    pub schema_version: u32,
}

pub fn health() -> Health {
    Health {
        status: "ok".into(),
        version: srg_core::VERSION.into(),
        schema_version: srg_core::SCHEMA_VERSION,
    }
}

pub fn bound(req: &SrgRequest) -> JobResult<SrgBound> {
    let opts = options(req.resolution, req.trust_sampled, req.seed)?;
    Ok(srg_of_expr(&req.system, &req.class, &opts)?)
}

pub fn margin(req: &LoopRequest) -> JobResult<MarginReport> {
    let opts = options(req.resolution, req.trust_sampled, req.seed)?;
    let report = robustness_margin(&req.controller, &req.plant, &req.class, &opts)?;
    if report.witness.is_some_and(|(a, b)| {
        a.norm() >= report.truncation * 0.99 || b.norm() >= report.truncation * 0.99
    }) {
        log::warn!("the minimum-distance witness touches the truncation boundary");
    }
    Ok(report)
}

pub fn sensitivity(req: &LoopRequest) -> JobResult<SensitivityResponse> {
    let opts = options(req.resolution, req.trust_sampled, req.seed)?;
    Ok(SensitivityResponse {
        margin: sensitivity_margin(&req.plant, &req.controller, &req.class, &opts)?,
        region: sensitivity_srg(&req.plant, &req.controller, &req.class, &opts)?,
    })
}

pub fn sample(req: &SampleRequest) -> JobResult<SrgSample> {
    Ok(sample_srg(&req.system, &req.class, req.n_pairs, req.seed)?)
}
