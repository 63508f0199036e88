//! Operator expressions, static nonlinearities and time-domain simulation.

mod expr;
pub mod hh;
pub mod poly;
mod sim;

pub use expr::{chord_slope_bounds, static_eval, LoopSignal, SectorBounds, StaticKind, SystemExpr};
pub use hh::{hh_potassium, HhParams};
pub use sim::simulate;

use crate::error::Result;
use crate::signal::Signal;

/// Anything that maps one signal to another.
pub trait Operator: Sync {
    fn name(&self) -> String;
    fn apply(&self, u: &Signal) -> Result<Signal>;
}

impl Operator for SystemExpr {
    fn name(&self) -> String {
        self.label()
    }

    fn apply(&self, u: &Signal) -> Result<Signal> {
        simulate(self, u)
    }
}
