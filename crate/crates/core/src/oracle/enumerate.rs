// SPDX-License-Identifier: Apache-2.0

//! Brute-force reference solver. Shares nothing with the simulator beyond
//! the signal algebra: every conduction assignment of the unknown-gate
//! devices is tried globally, and every simple conducting path is walked.

use crate::netlist::{FlatNetlist, NetKind};
use crate::strength::{conduct, gate_state, merge_hypotheses, resolve, Signal, SwitchState};

use super::OracleError;

pub const MAX_DEVICES: usize = 32;
pub const MAX_UNKNOWN: usize = 16;

/// Steady state from power-on, in net order. `inputs` follows
/// [`FlatNetlist::inputs`].
pub fn path_enumerate(flat: &FlatNetlist, inputs: &[Signal]) -> Result<Vec<Signal>, OracleError> {
    if flat.devices.len() > MAX_DEVICES {
        return Err(OracleError::Budget(format!(
            "{} devices exceed the limit of {MAX_DEVICES}",
            flat.devices.len()
        )));
    }
    let input_nets = flat.inputs();
    if input_nets.len() != inputs.len() {
        return Err(OracleError::InputCount {
            expected: input_nets.len(),
            found: inputs.len(),
        });
    }
    let n = flat.nets.len();
    // Power-on charge is Z everywhere, so charge retention contributes nothing
    // definite; it is kept explicit to mirror the model.
    let charge = vec![Signal::POWER_ON.retained(); n];
    let mut values = vec![Signal::POWER_ON; n];
    for (i, net) in flat.nets.iter().enumerate() {
        match net.kind {
            NetKind::SupplyHigh => values[i] = Signal::STRONG_1,
            NetKind::SupplyLow => values[i] = Signal::STRONG_0,
            _ => {}
        }
    }
    for (&net, &sig) in input_nets.iter().zip(inputs) {
        values[net] = sig;
    }

    let limit = n * 4 * 3 + 1;
    for _ in 0..limit {
        let next = step(flat, &values, &charge)?;
        if next == values {
            return Ok(values);
        }
        values = next;
    }
    Err(OracleError::NoFixpoint(limit))
}

fn step(flat: &FlatNetlist, values: &[Signal], charge: &[Signal]) -> Result<Vec<Signal>, OracleError> {
    let mut fixed_on = vec![false; flat.devices.len()];
    let mut unknown = Vec::new();
    for (i, d) in flat.devices.iter().enumerate() {
        match gate_state(d.kind, values[d.gate]) {
            SwitchState::On => fixed_on[i] = true,
            SwitchState::Off => {}
            SwitchState::Unknown => unknown.push(i),
        }
    }
    if unknown.len() > MAX_UNKNOWN {
        return Err(OracleError::Budget(format!(
            "{} unknown-gate devices exceed the limit of {MAX_UNKNOWN}",
            unknown.len()
        )));
    }
    let mut merged: Option<Vec<Signal>> = None;
    for mask in 0u32..1 << unknown.len() {
        let mut on = fixed_on.clone();
        for (bit, &i) in unknown.iter().enumerate() {
            on[i] = mask >> bit & 1 == 1;
        }
        let result = solve_assignment(flat, values, charge, &on);
        merged = Some(match merged {
            None => result,
            Some(acc) => acc.into_iter().zip(result).map(|(a, b)| merge_hypotheses(a, b)).collect(),
        });
    }
    Ok(merged.expect("one assignment at least"))
}

fn solve_assignment(flat: &FlatNetlist, values: &[Signal], charge: &[Signal], on: &[bool]) -> Vec<Signal> {
    let n = flat.nets.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, d) in flat.devices.iter().enumerate() {
        if on[i] && d.drain != d.source {
            adj[d.drain].push(i);
            adj[d.source].push(i);
        }
    }
    (0..n)
        .map(|net| {
            if flat.is_source(net) {
                return values[net];
            }
            let mut acc = charge[net];
            let mut visited = vec![false; n];
            visited[net] = true;
            walk(flat, &adj, values, charge, net, &mut visited, &mut Vec::new(), &mut acc);
            acc
        })
        .collect()
}

/// Depth-first over simple paths leaving `at`; `path` holds the devices
/// crossed so far. Every net reached contributes its charge (or, for a
/// source, its value) carried back across the whole path.
#[allow(clippy::too_many_arguments)]
fn walk(
    flat: &FlatNetlist,
    adj: &[Vec<usize>],
    values: &[Signal],
    charge: &[Signal],
    at: usize,
    visited: &mut [bool],
    path: &mut Vec<usize>,
    acc: &mut Signal,
) {
    for &di in &adj[at] {
        let d = &flat.devices[di];
        let next = if d.drain == at { d.source } else { d.drain };
        if visited[next] {
            continue;
        }
        path.push(di);
        let origin = if flat.is_source(next) { values[next] } else { charge[next] };
        let carried = path.iter().fold(origin, |s, &k| {
            let dev = &flat.devices[k];
            conduct(dev.kind, dev.is_ratioed(), s)
        });
        *acc = resolve(*acc, carried);
        if !flat.is_source(next) {
            visited[next] = true;
            walk(flat, adj, values, charge, next, visited, path, acc);
            visited[next] = false;
        }
        path.pop();
    }
}
