// SPDX-License-Identifier: Apache-2.0

//! Steady-state solving.
//!
//! A net's value is the join, under [`resolve`], of every signal that can
//! reach it along a conducting path: supplies and inputs at their imposed
//! value, and every non-source net's retained charge, each degraded by the
//! devices it crosses. Because degradation is a per-device cap, the set of
//! signals reaching a net is propagated rather than a single joined value;
//! joining early would let an `X` mask a definite level that a different
//! path delivers at higher strength.
//!
//! A device with an unknown gate is solved both ways and the two outcomes
//! merged with [`merge_hypotheses`]. The gate states themselves come from a
//! fixpoint that starts with every computed net at `X`.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::metrics::ModelParams;
use crate::netlist::{FlatNetlist, NetKind};
use crate::strength::{conduct, gate_state, merge_hypotheses, resolve, Signal, SwitchState};

use super::ccc::{Ccc, Topology};
use super::SimError;

/// Exhaustive hypothesis enumeration is used up to this many unknown
/// devices in one component; beyond it a conservative approximation.
const MAX_EXACT_UNKNOWN: usize = 12;

/// Per-net result of a settle: the value and the series resistance of the
/// cheapest path delivering it (0 for sources and charge-held nets).
#[derive(Debug, Clone, PartialEq)]
pub struct Settled {
    pub signals: Vec<Signal>,
    pub resistance: Vec<f64>,
}

#[derive(Clone, Copy)]
struct Item {
    cost: f64,
    net: usize,
    sig: usize,
}

impl PartialEq for Item {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Item {}
impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then(self.net.cmp(&other.net))
            .then(self.sig.cmp(&other.sig))
    }
}

/// How a device behaves in one hypothesis.
#[derive(Clone, Copy, PartialEq)]
enum Conduction {
    Off,
    On,
    /// Conducts, but whatever crosses it arrives as `X`. Only used by the
    /// approximation for very large unknown sets.
    Smear,
}

/// Solves one component under fixed device conductions.
fn solve_once(
    flat: &FlatNetlist,
    ccc: &Ccc,
    local: &[usize],
    values: &[Signal],
    charges: &[Signal],
    conduction: &[Conduction],
    params: &ModelParams,
) -> Vec<(Signal, f64)> {
    let n = ccc.nets.len();
    let mut dist = vec![f64::INFINITY; n * Signal::COUNT];
    let mut heap = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<Reverse<Item>>, dist: &mut [f64], net, sig: Signal, cost| {
        let slot = net * Signal::COUNT + sig.index();
        if cost < dist[slot] {
            dist[slot] = cost;
            heap.push(Reverse(Item {
                cost,
                net,
                sig: sig.index(),
            }));
        }
    };

    let pass = |di: usize, how: Conduction, s: Signal| -> Signal {
        let d = &flat.devices[di];
        let out = conduct(d.kind, d.is_ratioed(), s);
        match how {
            Conduction::Smear => Signal::new(crate::strength::Level::LX, out.strength),
            _ => out,
        }
    };

    for (li, &net) in ccc.nets.iter().enumerate() {
        push(&mut heap, &mut dist, li, charges[net], 0.0);
    }
    // adjacency inside the component, restricted to conducting devices
    let mut adj: Vec<Vec<(usize, usize, Conduction)>> = vec![Vec::new(); n];
    for (k, &di) in ccc.devices.iter().enumerate() {
        let how = conduction[k];
        if how == Conduction::Off {
            continue;
        }
        let d = &flat.devices[di];
        if d.drain == d.source {
            continue;
        }
        let r = d.resistance(params.rn, params.rp);
        match (flat.is_source(d.drain), flat.is_source(d.source)) {
            (false, false) => {
                let (a, b) = (local[d.drain], local[d.source]);
                adj[a].push((b, di, how));
                adj[b].push((a, di, how));
            }
            (true, false) => {
                let s = pass(di, how, values[d.drain]);
                push(&mut heap, &mut dist, local[d.source], s, r);
            }
            (false, true) => {
                let s = pass(di, how, values[d.source]);
                push(&mut heap, &mut dist, local[d.drain], s, r);
            }
            (true, true) => {}
        }
    }

    while let Some(Reverse(item)) = heap.pop() {
        if item.cost > dist[item.net * Signal::COUNT + item.sig] {
            continue;
        }
        let sig = Signal::from_index(item.sig);
        for &(next, di, how) in &adj[item.net] {
            let r = flat.devices[di].resistance(params.rn, params.rp);
            push(&mut heap, &mut dist, next, pass(di, how, sig), item.cost + r);
        }
    }

    (0..n)
        .map(|li| {
            let row = &dist[li * Signal::COUNT..(li + 1) * Signal::COUNT];
            let value = row
                .iter()
                .enumerate()
                .filter(|(_, d)| d.is_finite())
                .map(|(i, _)| Signal::from_index(i))
                .reduce(resolve)
                .expect("own charge always reaches a net");
            let r = row
                .iter()
                .enumerate()
                .filter(|(i, d)| d.is_finite() && Signal::from_index(*i).strength == value.strength)
                .map(|(_, d)| *d)
                .fold(f64::INFINITY, f64::min);
            (value, r)
        })
        .collect()
}

fn merge_results(acc: &mut [(Signal, f64)], next: &[(Signal, f64)]) {
    for (a, b) in acc.iter_mut().zip(next) {
        let merged = merge_hypotheses(a.0, b.0);
        let ra = if a.0.strength == merged.strength { a.1 } else { f64::INFINITY };
        let rb = if b.0.strength == merged.strength { b.1 } else { f64::INFINITY };
        *a = (merged, ra.min(rb));
    }
}

/// Steady state of one component given the values of everything outside
/// it (gates and source nets are read from `values`) and the charge each of
/// its nets retains. Results come back in `ccc.nets` order.
pub fn solve_ccc(
    flat: &FlatNetlist,
    ccc: &Ccc,
    values: &[Signal],
    charges: &[Signal],
    params: &ModelParams,
) -> Vec<(Signal, f64)> {
    let mut local = vec![usize::MAX; flat.nets.len()];
    for (li, &net) in ccc.nets.iter().enumerate() {
        local[net] = li;
    }
    let mut conduction = Vec::with_capacity(ccc.devices.len());
    let mut unknown = Vec::new();
    for (k, &di) in ccc.devices.iter().enumerate() {
        let d = &flat.devices[di];
        conduction.push(match gate_state(d.kind, values[d.gate]) {
            SwitchState::On => Conduction::On,
            SwitchState::Off => Conduction::Off,
            SwitchState::Unknown => {
                unknown.push(k);
                Conduction::Off
            }
        });
    }
    let run = |c: &[Conduction]| solve_once(flat, ccc, &local, values, charges, c, params);

    if unknown.len() <= MAX_EXACT_UNKNOWN {
        let mut acc: Option<Vec<(Signal, f64)>> = None;
        for mask in 0u32..(1u32 << unknown.len()) {
            for (bit, &k) in unknown.iter().enumerate() {
                conduction[k] = if mask >> bit & 1 == 1 {
                    Conduction::On
                } else {
                    Conduction::Off
                };
            }
            let r = run(&conduction);
            match &mut acc {
                None => acc = Some(r),
                Some(a) => merge_results(a, &r),
            }
        }
        acc.expect("at least one hypothesis")
    } else {
        let mut acc = run(&conduction);
        for &k in &unknown {
            conduction[k] = Conduction::Smear;
        }
        merge_results(&mut acc, &run(&conduction));
        acc
    }
}

/// Values forced by the netlist and the applied inputs, everything else at
/// `fill`.
pub(crate) fn seed_values(flat: &FlatNetlist, inputs: &[Signal], fill: &[Signal]) -> Vec<Signal> {
    let mut next_input = inputs.iter();
    flat.nets
        .iter()
        .enumerate()
        .map(|(i, net)| match net.kind {
            NetKind::SupplyHigh => Signal::STRONG_1,
            NetKind::SupplyLow => Signal::STRONG_0,
            NetKind::Input => *next_input.next().expect("input count checked"),
            _ => fill[i],
        })
        .collect()
}

pub(crate) fn check_inputs(flat: &FlatNetlist, inputs: &[Signal]) -> Result<(), SimError> {
    let expected = flat.inputs().len();
    if inputs.len() != expected {
        return Err(SimError::InputArity {
            expected,
            found: inputs.len(),
        });
    }
    Ok(())
}

/// Steady state from power-on: every computed net starts at `Z`.
pub fn settle(flat: &FlatNetlist, inputs: &[Signal], params: &ModelParams) -> Result<Settled, SimError> {
    let power_on = vec![Signal::POWER_ON; flat.nets.len()];
    settle_from(flat, &power_on, inputs, params)
}

/// Steady state after applying `inputs` to a circuit whose nets held
/// `previous`. `inputs` follows the order of [`FlatNetlist::inputs`].
pub fn settle_from(
    flat: &FlatNetlist,
    previous: &[Signal],
    inputs: &[Signal],
    params: &ModelParams,
) -> Result<Settled, SimError> {
    check_inputs(flat, inputs)?;
    let topo = Topology::new(flat);
    let charges: Vec<Signal> = previous.iter().map(|s| s.retained()).collect();
    let bottom = vec![Signal::POWER_ON; flat.nets.len()];
    let mut values = seed_values(flat, inputs, &bottom);
    let mut resistance = vec![0.0; flat.nets.len()];
    let bound = flat.nets.len() * 4 * 3 + 1;
    for _ in 0..bound {
        let mut next = values.clone();
        for ccc in &topo.cccs {
            for (&net, (sig, r)) in ccc.nets.iter().zip(solve_ccc(flat, ccc, &values, &charges, params)) {
                next[net] = sig;
                resistance[net] = r;
            }
        }
        if next == values {
            return Ok(Settled {
                signals: values,
                resistance,
            });
        }
        values = next;
    }
    Err(SimError::NonConvergence { iterations: bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{flatten, parse};
    use crate::strength::{Level, Strength};

    fn flat(src: &str) -> FlatNetlist {
        flatten(&parse(src).unwrap()).unwrap()
    }

    fn at(f: &FlatNetlist, s: &Settled, name: &str) -> Signal {
        s.signals[f.net(name).unwrap()]
    }

    const INV: &str = ".subckt inv a y\n.inputs a\n.outputs y\nM1 y a vdd p\nM2 y a gnd n\n.ends\n";

    #[test]
    fn inverter() {
        let f = flat(INV);
        let p = ModelParams::default();
        let s = settle(&f, &[Signal::STRONG_1], &p).unwrap();
        assert_eq!(at(&f, &s, "y"), Signal::STRONG_0);
        assert_eq!(s.resistance[f.net("y").unwrap()], 10e3);
        let s = settle(&f, &[Signal::STRONG_0], &p).unwrap();
        assert_eq!(at(&f, &s, "y"), Signal::STRONG_1);
        assert_eq!(s.resistance[f.net("y").unwrap()], 20e3);
        let s = settle(&f, &[Signal::STRONG_X], &p).unwrap();
        assert_eq!(at(&f, &s, "y"), Signal::STRONG_X);
    }

    #[test]
    fn pass_devices_degrade() {
        let f = flat(".subckt t g d y z\n.inputs g d\n.outputs y z\nM1 y g d n\nM2 z y d n\n.ends\n");
        let p = ModelParams::default();
        let s = settle(&f, &[Signal::STRONG_1, Signal::STRONG_1], &p).unwrap();
        assert_eq!(at(&f, &s, "y"), Signal::new(Level::L1, Strength::Weak));
        // weak '1' on a gate still turns the next NMOS on
        assert_eq!(at(&f, &s, "z"), Signal::new(Level::L1, Strength::Weak));
        let s = settle(&f, &[Signal::STRONG_0, Signal::STRONG_1], &p).unwrap();
        assert_eq!(at(&f, &s, "y"), Signal::POWER_ON);
        // z is either pulled to 1w or left floating, depending on the X gate
        assert_eq!(at(&f, &s, "z"), Signal::new(Level::LX, Strength::Weak));
    }

    #[test]
    fn charge_is_retained_from_previous_state() {
        let f = flat(".subckt t g d y\n.inputs g d\n.outputs y\nM1 y g d n\n.ends\n");
        let p = ModelParams::default();
        let first = settle(&f, &[Signal::STRONG_1, Signal::STRONG_0], &p).unwrap();
        assert_eq!(at(&f, &first, "y"), Signal::STRONG_0);
        let second = settle_from(&f, &first.signals, &[Signal::STRONG_0, Signal::STRONG_1], &p).unwrap();
        assert_eq!(at(&f, &second, "y"), Signal::new(Level::L0, Strength::Charged));
    }

    #[test]
    fn unknown_gate_merges_both_outcomes() {
        let f = flat(".subckt t g d y\n.inputs g d\n.outputs y\nM1 y g d n\nM2 y vdd gnd n l=4\n.ends\n");
        let p = ModelParams::default();
        // weak pull-down always on; the pass device may or may not deliver a strong 0
        let s = settle(&f, &[Signal::STRONG_X, Signal::STRONG_0], &p).unwrap();
        assert_eq!(at(&f, &s, "y"), Signal::STRONG_0);
        let s = settle(&f, &[Signal::STRONG_X, Signal::STRONG_1], &p).unwrap();
        assert_eq!(at(&f, &s, "y"), Signal::new(Level::LX, Strength::Weak));
    }

    #[test]
    fn wrong_input_count() {
        let f = flat(INV);
        assert!(matches!(
            settle(&f, &[], &ModelParams::default()),
            Err(SimError::InputArity { expected: 1, found: 0 })
        ));
    }

    #[test]
    fn odd_ring_settles_at_x() {
        let f = flat(
            ".subckt ring\nM1 b a vdd p\nM2 b a gnd n\nM3 c b vdd p\nM4 c b gnd n\nM5 a c vdd p\nM6 a c gnd n\n.ends\n",
        );
        // starts at X everywhere and stays there: X is a fixpoint of an odd ring
        let s = settle(&f, &[], &ModelParams::default()).unwrap();
        assert!(s.signals[2..].iter().all(|s| s.level == Level::LX));
    }
}
