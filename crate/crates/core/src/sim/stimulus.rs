// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;

use crate::netlist::FlatNetlist;
use crate::strength::Signal;

use super::{SimError, FS_PER_NS};

/// One row of input values and the time it is applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector {
    pub time_fs: u64,
    pub values: Vec<bool>,
}

/// Timed input vectors, columns named after design inputs.
///
/// Two CSV layouts are accepted: with a leading `time_ns` column giving
/// the application time of every row, or without it, one row per period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stimulus {
    pub inputs: Vec<String>,
    pub rows: Vec<Vector>,
    pub period_fs: u64,
}

fn stim_err(line: usize, message: impl Into<String>) -> SimError {
    SimError::Stimulus {
        line,
        message: message.into(),
    }
}

impl Stimulus {
    /// Binary counting sequence over `inputs`, first input most significant,
    /// one vector per period.
    pub fn counting(inputs: &[&str], period_fs: u64) -> Self {
        let n = inputs.len();
        let rows = (0..1u64 << n)
            .map(|k| Vector {
                time_fs: k * period_fs,
                values: (0..n).map(|i| k >> (n - 1 - i) & 1 == 1).collect(),
            })
            .collect();
        Stimulus {
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            rows,
            period_fs,
        }
    }

    pub fn parse_csv(text: &str, period_fs: u64) -> Result<Self, SimError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| stim_err(1, e.to_string()))?
            .clone();
        let timed = headers.get(0) == Some("time_ns");
        let inputs: Vec<String> = headers
            .iter()
            .skip(usize::from(timed))
            .map(str::to_string)
            .collect();
        if inputs.is_empty() {
            return Err(stim_err(1, "no input columns"));
        }
        for (i, name) in inputs.iter().enumerate() {
            if name.is_empty() || inputs[..i].contains(name) {
                return Err(stim_err(1, format!("bad or repeated column `{name}`")));
            }
        }
        let mut rows: Vec<Vector> = Vec::new();
        for (k, record) in reader.records().enumerate() {
            let line = k + 2;
            let record = record.map_err(|e| stim_err(line, e.to_string()))?;
            if record.len() != headers.len() {
                return Err(stim_err(line, format!("expected {} fields", headers.len())));
            }
            let time_fs = if timed {
                let ns: f64 = record[0]
                    .parse()
                    .ok()
                    .filter(|t: &f64| t.is_finite() && *t >= 0.0)
                    .ok_or_else(|| stim_err(line, format!("bad time `{}`", &record[0])))?;
                (ns * FS_PER_NS as f64).round() as u64
            } else {
                k as u64 * period_fs
            };
            if let Some(prev) = rows.last() {
                if time_fs <= prev.time_fs {
                    return Err(stim_err(line, "times must increase"));
                }
            }
            let values = record
                .iter()
                .skip(usize::from(timed))
                .map(|v| match v {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    other => Err(stim_err(line, format!("value `{other}` is not 0 or 1"))),
                })
                .collect::<Result<_, _>>()?;
            rows.push(Vector { time_fs, values });
        }
        if rows.is_empty() {
            return Err(SimError::EmptyStimulus);
        }
        Ok(Stimulus {
            inputs,
            rows,
            period_fs,
        })
    }

    /// `time_ns` layout.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time_ns");
        for name in &self.inputs {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for row in &self.rows {
            let t = row.time_fs as f64 / FS_PER_NS as f64;
            write!(out, "{t}").unwrap();
            for &v in &row.values {
                out.push_str(if v { ",1" } else { ",0" });
            }
            out.push('\n');
        }
        out
    }

    /// The same vectors played `times` times back to back.
    pub fn repeated(&self, times: usize) -> Self {
        let span = self.duration_fs();
        let rows = (0..times as u64)
            .flat_map(|k| {
                self.rows.iter().map(move |r| Vector {
                    time_fs: r.time_fs + k * span,
                    values: r.values.clone(),
                })
            })
            .collect();
        Stimulus {
            inputs: self.inputs.clone(),
            rows,
            period_fs: self.period_fs,
        }
    }

    /// Last application time plus one period.
    pub fn duration_fs(&self) -> u64 {
        self.rows.last().map_or(0, |r| r.time_fs) + self.period_fs
    }

    /// Per-row input signals in [`FlatNetlist::inputs`] order.
    pub fn bind(&self, flat: &FlatNetlist) -> Result<Vec<Vec<Signal>>, SimError> {
        if self.rows.is_empty() {
            return Err(SimError::EmptyStimulus);
        }
        for name in &self.inputs {
            match flat.net(name) {
                Some(n) if flat.inputs().contains(&n) => {}
                _ => return Err(SimError::UnknownInput(name.clone())),
            }
        }
        let columns = flat
            .inputs()
            .into_iter()
            .map(|net| {
                let name = flat.net_name(net);
                self.inputs
                    .iter()
                    .position(|c| c == name)
                    .ok_or_else(|| SimError::MissingInput(name.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self
            .rows
            .iter()
            .map(|r| columns.iter().map(|&c| Signal::driven(r.values[c])).collect())
            .collect())
    }
}
