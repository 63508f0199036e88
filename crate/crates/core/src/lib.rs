//! Scaled relative graph (SRG) toolkit.
//!
//! Computes outer bounds on the SRGs of interconnected operators, measures
//! graphical separation margins between them and samples SRGs empirically
//! from simulated input/output pairs.
//!
//! The main entry points are [`srg::srg_of_expr`] for bounds,
//! [`analysis::robustness_margin`] / [`analysis::sensitivity_margin`] for
//! margins and [`sampling::sample_srg`] for empirical point clouds.

pub mod analysis;
pub mod error;
pub mod operators;
pub mod region;
pub mod sampling;
pub mod signal;
pub mod srg;

pub use num_complex::Complex64;

pub use analysis::{MarginKind, MarginReport};
pub use error::{Result, SrgError};
pub use operators::{Operator, SectorBounds, StaticKind, SystemExpr};
pub use region::{Precision, Region, RegionPrimitive};
pub use sampling::SrgSample;
pub use signal::{Signal, SignalClass, SignalKind};
pub use srg::{Exactness, SrgBound, SrgOptions};

/// Version string reported by the CLI and the HTTP health endpoint.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Version tag carried by every serialized document.
pub const SCHEMA_VERSION: u32 = 1;
