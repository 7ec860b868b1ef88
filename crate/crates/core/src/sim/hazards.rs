// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use crate::metrics::ModelParams;
use crate::netlist::FlatNetlist;
use crate::strength::{gate_state, Level, Signal, Strength, SwitchState};

use super::{settle, SimError, Settled};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HazardKind {
    /// Conducting paths reach the net from both a strong 1 and a strong 0.
    StaticPath,
    /// An output held only by charge, or by nothing.
    Floating,
    /// An output driven through a threshold drop.
    Weak,
}

impl HazardKind {
    pub fn token(self) -> &'static str {
        match self {
            HazardKind::StaticPath => "static-path",
            HazardKind::Floating => "floating",
            HazardKind::Weak => "weak",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        [HazardKind::StaticPath, HazardKind::Floating, HazardKind::Weak]
            .into_iter()
            .find(|k| k.token() == s)
    }
}

impl fmt::Display for HazardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hazard {
    pub kind: HazardKind,
    pub net: String,
}

/// Settles `inputs` from power-on and reports hazards of the result.
pub fn detect_hazards(
    flat: &FlatNetlist,
    inputs: &[Signal],
    params: &ModelParams,
) -> Result<Vec<Hazard>, SimError> {
    Ok(hazards_of(flat, &settle(flat, inputs, params)?))
}

/// Hazards of a settled state, ordered by kind and then net index.
pub fn hazards_of(flat: &FlatNetlist, settled: &Settled) -> Vec<Hazard> {
    let values = &settled.signals;
    let n = flat.nets.len();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for d in &flat.devices {
        if gate_state(d.kind, values[d.gate]) == SwitchState::On && d.drain != d.source {
            adjacency[d.drain].push(d.source);
            adjacency[d.source].push(d.drain);
        }
    }
    let mut found: Vec<(HazardKind, usize)> = Vec::new();
    let mut seen = vec![false; n];
    for start in (0..n).filter(|&i| !flat.is_source(i)) {
        if seen[start] {
            continue;
        }
        // Region of non-source nets joined by conducting devices.
        let mut region = vec![start];
        let (mut high, mut low) = (false, false);
        seen[start] = true;
        let mut k = 0;
        while k < region.len() {
            for &next in &adjacency[region[k]] {
                if flat.is_source(next) {
                    let v = values[next];
                    if v.strength == Strength::Strong {
                        high |= v.level == Level::L1;
                        low |= v.level == Level::L0;
                    }
                } else if !seen[next] {
                    seen[next] = true;
                    region.push(next);
                }
            }
            k += 1;
        }
        if high && low {
            found.extend(region.into_iter().map(|i| (HazardKind::StaticPath, i)));
        }
    }
    for out in flat.outputs() {
        match values[out].strength {
            Strength::Floating | Strength::Charged => found.push((HazardKind::Floating, out)),
            Strength::Weak => found.push((HazardKind::Weak, out)),
            Strength::Strong => {}
        }
    }
    found.sort();
    found
        .into_iter()
        .map(|(kind, i)| Hazard {
            kind,
            net: flat.net_name(i).to_string(),
        })
        .collect()
}
