// SPDX-License-Identifier: Apache-2.0

//! Independent checks: a brute-force path-enumeration solver, the
//! per-vector truth-table verifier, and Boolean identity checks.

mod enumerate;
mod identities;
mod verify;

pub use enumerate::{path_enumerate, MAX_DEVICES, MAX_UNKNOWN};
pub use identities::{check_identities, IdentityCheck};
pub use verify::{
    all_vectors, verify_cell, verify_flat, Status, VerifyError, VerifyReport, VerifyRow, EXPECTATION_HEADER,
    HAZARD_HEADER,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("expected {expected} input values, found {found}")]
    InputCount { expected: usize, found: usize },
    #[error("no fixpoint after {0} iterations")]
    NoFixpoint(usize),
}
