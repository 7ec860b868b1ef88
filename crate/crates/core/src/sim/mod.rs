// SPDX-License-Identifier: Apache-2.0

//! Switch-level simulation: component partitioning, steady-state settling,
//! event-driven transients with an RC delay per transition, and hazard
//! detection on settled vectors.

mod ccc;
mod hazards;
mod solve;
mod stimulus;
mod trace;
mod transient;

pub use ccc::{partition_ccc, Ccc, Topology};
pub use hazards::{detect_hazards, hazards_of, Hazard, HazardKind};
pub use solve::{settle, settle_from, solve_ccc, Settled};
pub use stimulus::{Stimulus, Vector};
pub use trace::{format_ps, Trace};
pub use transient::run_transient;

/// Femtoseconds per nanosecond; simulation time is kept in integer fs.
pub const FS_PER_NS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("internal error: no steady state after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("internal error: event limit of {0} exceeded")]
    EventLimit(usize),
    #[error("expected {expected} input values, found {found}")]
    InputArity { expected: usize, found: usize },
    #[error("stimulus does not drive input `{0}`")]
    MissingInput(String),
    #[error("stimulus column `{0}` is not an input of the design")]
    UnknownInput(String),
    #[error("stimulus line {line}: {message}")]
    Stimulus { line: usize, message: String },
    #[error("stimulus has no vectors")]
    EmptyStimulus,
}

impl SimError {
    /// Errors caused by a stimulus that does not fit the design.
    pub fn is_stimulus_error(&self) -> bool {
        matches!(
            self,
            SimError::MissingInput(_)
                | SimError::UnknownInput(_)
                | SimError::Stimulus { .. }
                | SimError::EmptyStimulus
                | SimError::InputArity { .. }
        )
    }
}
