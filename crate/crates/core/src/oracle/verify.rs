// SPDX-License-Identifier: Apache-2.0

use std::fmt::{self, Write};

use crate::cells::{cell_spec, UnknownCell};
use crate::metrics::ModelParams;
use crate::netlist::{flatten, FlatNetlist};
use crate::sim::{hazards_of, settle, Hazard, SimError};
use crate::strength::{Signal, Strength};

/// Outcome of one output on one vector, least severe first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    StrongCorrect,
    WeakCorrect,
    ChargedCorrect,
    Floating,
    Conflict,
    WrongLevel,
}

impl Status {
    pub const ALL: [Status; 6] = [
        Status::StrongCorrect,
        Status::WeakCorrect,
        Status::ChargedCorrect,
        Status::Floating,
        Status::Conflict,
        Status::WrongLevel,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Status::StrongCorrect => "strong-correct",
            Status::WeakCorrect => "weak-correct",
            Status::ChargedCorrect => "charged-correct",
            Status::Floating => "floating",
            Status::Conflict => "conflict",
            Status::WrongLevel => "wrong-level",
        }
    }

    pub fn from_token(s: &str) -> Option<Status> {
        Status::ALL.into_iter().find(|st| st.token() == s)
    }

    /// The observed level matches, whatever its strength.
    pub fn is_level_correct(self) -> bool {
        self <= Status::ChargedCorrect
    }

    pub fn classify(expected: bool, observed: Signal) -> Status {
        match (observed.level.as_bool(), observed.strength) {
            (None, Strength::Floating | Strength::Charged) => Status::Floating,
            (None, _) => Status::Conflict,
            (Some(level), _) if level != expected => Status::WrongLevel,
            (Some(_), Strength::Strong) => Status::StrongCorrect,
            (Some(_), Strength::Weak) => Status::WeakCorrect,
            (Some(_), Strength::Charged) => Status::ChargedCorrect,
            (Some(_), Strength::Floating) => Status::Floating,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub inputs: Vec<bool>,
    pub expected: Vec<bool>,
    pub observed: Vec<Signal>,
    /// Per output, in output order.
    pub statuses: Vec<Status>,
    pub hazards: Vec<Hazard>,
}

impl VerifyRow {
    /// Worst status over the outputs.
    pub fn status(&self) -> Status {
        self.statuses.iter().copied().max().unwrap_or(Status::StrongCorrect)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub cell: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub rows: Vec<VerifyRow>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    UnknownCell(#[from] UnknownCell),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("cell does not build: {0}")]
    Build(String),
    #[error("design has no output `{0}`")]
    MissingOutput(String),
}

pub const EXPECTATION_HEADER: &str = "cell,a,b,c,sum_signal,carry_signal,status";
pub const HAZARD_HEADER: &str = "cell,a,b,c,kind,net";

fn bit(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

impl VerifyReport {
    pub fn all_levels_correct(&self) -> bool {
        self.rows.iter().all(|r| r.status().is_level_correct())
    }

    /// Three input columns and two output columns; cells with fewer leave
    /// the spare columns empty.
    fn input_fields(row: &VerifyRow) -> [&'static str; 3] {
        let mut f = [""; 3];
        for (slot, &v) in f.iter_mut().zip(&row.inputs) {
            *slot = bit(v);
        }
        f
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{EXPECTATION_HEADER}\n");
        for row in &self.rows {
            let [a, b, c] = Self::input_fields(row);
            let sum = row.observed.first().map(Signal::to_string).unwrap_or_default();
            let carry = row.observed.get(1).map(Signal::to_string).unwrap_or_default();
            writeln!(out, "{},{a},{b},{c},{sum},{carry},{}", self.cell, row.status()).unwrap();
        }
        out
    }

    pub fn hazards_csv(&self) -> String {
        let mut out = format!("{HAZARD_HEADER}\n");
        for row in &self.rows {
            let [a, b, c] = Self::input_fields(row);
            for h in &row.hazards {
                writeln!(out, "{},{a},{b},{c},{},{}", self.cell, h.kind, h.net).unwrap();
            }
        }
        out
    }

    /// Human-readable table for the terminal.
    pub fn render(&self) -> String {
        let mut out = format!("cell {}\n", self.cell);
        let head: Vec<String> = self
            .inputs
            .iter()
            .cloned()
            .chain(self.outputs.iter().map(|o| format!("{o} (exp)")))
            .collect();
        writeln!(out, "{}  status  hazards", head.join("  ")).unwrap();
        for row in &self.rows {
            let mut cols: Vec<String> = row.inputs.iter().map(|&v| bit(v).to_string()).collect();
            for (obs, &exp) in row.observed.iter().zip(&row.expected) {
                cols.push(format!("{obs} ({})", bit(exp)));
            }
            let hazards: Vec<String> = row.hazards.iter().map(|h| format!("{}:{}", h.kind, h.net)).collect();
            writeln!(
                out,
                "{}  {}  {}",
                cols.join("  "),
                row.status(),
                if hazards.is_empty() { "-".to_string() } else { hazards.join(" ") }
            )
            .unwrap();
        }
        let bad = self.rows.iter().filter(|r| !r.status().is_level_correct()).count();
        writeln!(out, "{} vectors, {} with incorrect levels", self.rows.len(), bad).unwrap();
        out
    }
}

/// All assignments of `n` bits, first bit most significant.
pub fn all_vectors(n: usize) -> Vec<Vec<bool>> {
    (0..1u32 << n)
        .map(|k| (0..n).map(|i| k >> (n - 1 - i) & 1 == 1).collect())
        .collect()
}

/// Settles every input vector from power-on and compares the named outputs
/// against `reference`.
pub fn verify_flat(
    cell: &str,
    flat: &FlatNetlist,
    outputs: &[&str],
    reference: &dyn Fn(&[bool]) -> Vec<bool>,
    params: &ModelParams,
) -> Result<VerifyReport, VerifyError> {
    let out_nets = outputs
        .iter()
        .map(|o| flat.net(o).ok_or_else(|| VerifyError::MissingOutput(o.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let inputs = flat.inputs();
    let mut rows = Vec::new();
    for vector in all_vectors(inputs.len()) {
        let signals: Vec<Signal> = vector.iter().map(|&b| Signal::driven(b)).collect();
        let settled = settle(flat, &signals, params)?;
        let expected = reference(&vector);
        let observed: Vec<Signal> = out_nets.iter().map(|&n| settled.signals[n]).collect();
        let statuses = expected.iter().zip(&observed).map(|(&e, &o)| Status::classify(e, o)).collect();
        rows.push(VerifyRow {
            hazards: hazards_of(flat, &settled),
            inputs: vector,
            expected,
            observed,
            statuses,
        });
    }
    Ok(VerifyReport {
        cell: cell.to_string(),
        inputs: inputs.iter().map(|&n| flat.net_name(n).to_string()).collect(),
        outputs: outputs.iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

pub fn verify_cell(name: &str, params: &ModelParams) -> Result<VerifyReport, VerifyError> {
    let spec = cell_spec(name).ok_or_else(|| UnknownCell(name.to_string()))?;
    let flat = flatten(&spec.build()).map_err(|e| VerifyError::Build(e.to_string()))?;
    verify_flat(name, &flat, spec.outputs, &|v| spec.reference(v), params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        let s = |t: &str| t.parse::<Signal>().unwrap();
        assert_eq!(Status::classify(true, s("1")), Status::StrongCorrect);
        assert_eq!(Status::classify(true, s("1w")), Status::WeakCorrect);
        assert_eq!(Status::classify(false, s("0c")), Status::ChargedCorrect);
        assert_eq!(Status::classify(false, s("Z")), Status::Floating);
        assert_eq!(Status::classify(false, s("Xc")), Status::Floating);
        assert_eq!(Status::classify(false, s("0z")), Status::Floating);
        assert_eq!(Status::classify(true, s("Xw")), Status::Conflict);
        assert_eq!(Status::classify(true, s("0w")), Status::WrongLevel);
        assert_eq!(Status::classify(true, s("0z")), Status::WrongLevel);
        assert!(Status::WrongLevel > Status::Conflict && Status::Conflict > Status::Floating);
        for st in Status::ALL {
            assert_eq!(Status::from_token(st.token()), Some(st));
        }
    }

    #[test]
    fn vector_order() {
        let v = all_vectors(2);
        assert_eq!(v, vec![vec![false, false], vec![false, true], vec![true, false], vec![true, true]]);
    }

    #[test]
    fn conv28_is_all_strong() {
        let r = verify_cell("conv28", &ModelParams::default()).unwrap();
        assert_eq!(r.rows.len(), 8);
        assert!(r.rows.iter().all(|row| row.status() == Status::StrongCorrect));
        assert!(r.rows.iter().all(|row| row.hazards.is_empty()));
    }

    #[test]
    fn unknown_cell() {
        assert!(matches!(verify_cell("p7", &ModelParams::default()), Err(VerifyError::UnknownCell(_))));
    }
}
