// SPDX-License-Identifier: Apache-2.0

//! Switch-level simulation and comparison of small MOS full-adder cells.
//!
//! Netlists are parsed and flattened ([`netlist`]), solved over a
//! level/strength signal algebra ([`strength`], [`sim`]), cross-checked by a
//! brute-force solver ([`oracle`]) and measured ([`metrics`]). [`cells`]
//! holds the built-in corpus.

pub mod cells;
pub mod metrics;
pub mod netlist;
pub mod oracle;
pub mod sim;
pub mod strength;
