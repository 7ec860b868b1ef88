// SPDX-License-Identifier: Apache-2.0

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use crate::metrics::ModelParams;
use crate::netlist::{FlatNetlist, NetKind};
use crate::strength::Signal;

use super::ccc::Topology;
use super::solve::solve_ccc;
use super::{SimError, Stimulus, Trace};

const EVENT_LIMIT: usize = 1_000_000;

#[derive(Clone, Copy)]
struct Pending {
    seq: u64,
    sig: Signal,
}

struct Engine<'a> {
    flat: &'a FlatNetlist,
    params: &'a ModelParams,
    topo: Topology,
    cap: Vec<f64>,
    values: Vec<Signal>,
    pending: Vec<Option<Pending>>,
    /// (time, net, seq): equal times pop in ascending net order.
    queue: BinaryHeap<Reverse<(u64, usize, u64)>>,
    seq: u64,
    evaluate_all_at: Option<u64>,
    processed: usize,
    trace: Trace,
}

impl Engine<'_> {
    /// Schedules `net` to become `sig` at `time`, replacing whatever was
    /// pending for it. A result equal to the present value cancels a
    /// pending change.
    fn schedule(&mut self, net: usize, sig: Signal, time: u64) {
        let projected = self.pending[net].map_or(self.values[net], |p| p.sig);
        if sig == projected {
            return;
        }
        if sig == self.values[net] {
            self.pending[net] = None;
            return;
        }
        self.seq += 1;
        self.pending[net] = Some(Pending { seq: self.seq, sig });
        self.queue.push(Reverse((time, net, self.seq)));
    }

    fn next_time(&self) -> Option<u64> {
        let queued = self.queue.peek().map(|Reverse((t, _, _))| *t);
        match (queued, self.evaluate_all_at) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Processes every event strictly before `limit`.
    fn run_until(&mut self, limit: u64) -> Result<(), SimError> {
        while let Some(now) = self.next_time().filter(|&t| t < limit) {
            let mut affected = BTreeSet::new();
            if self.evaluate_all_at == Some(now) {
                affected.extend(0..self.topo.cccs.len());
                self.evaluate_all_at = None;
            }
            while let Some(&Reverse((t, net, seq))) = self.queue.peek() {
                if t != now {
                    break;
                }
                self.queue.pop();
                let Some(p) = self.pending[net].filter(|p| p.seq == seq) else {
                    continue;
                };
                self.pending[net] = None;
                self.processed += 1;
                if self.processed > EVENT_LIMIT {
                    return Err(SimError::EventLimit(EVENT_LIMIT));
                }
                if self.values[net] == p.sig {
                    continue;
                }
                self.values[net] = p.sig;
                self.trace.record(now, net, p.sig);
                affected.extend(self.topo.gate_fanout[net].iter().copied());
                if self.flat.is_source(net) {
                    affected.extend(self.topo.source_fanout[net].iter().copied());
                }
            }
            let charges: Vec<Signal> = self.values.iter().map(|s| s.retained()).collect();
            for ci in affected {
                let ccc = &self.topo.cccs[ci];
                let results = solve_ccc(self.flat, ccc, &self.values, &charges, self.params);
                let nets = ccc.nets.clone();
                for (net, (sig, r)) in nets.into_iter().zip(results) {
                    let delay = self.params.delay_fs(r, self.cap[net]);
                    self.schedule(net, sig, now + delay);
                }
            }
        }
        Ok(())
    }
}

/// Event-driven simulation of `stim` from power-on.
///
/// Whenever a net changes, every component it gates (or, for an input, every
/// component its channel feeds) is re-solved; each resulting change lands
/// `R_path * C_node` later, where `R_path` is the series resistance of the
/// winning drive path and `C_node` the summed terminal capacitance of the net.
/// A re-solve that disagrees with a still-pending change replaces it.
pub fn run_transient(
    flat: &FlatNetlist,
    stim: &Stimulus,
    params: &ModelParams,
) -> Result<Trace, SimError> {
    let vectors = stim.bind(flat)?;
    let values: Vec<Signal> = flat
        .nets
        .iter()
        .map(|n| match n.kind {
            NetKind::SupplyHigh => Signal::STRONG_1,
            NetKind::SupplyLow => Signal::STRONG_0,
            _ => Signal::POWER_ON,
        })
        .collect();
    let end = stim.duration_fs();
    let names = flat.nets.iter().map(|n| n.name.clone()).collect();
    let mut engine = Engine {
        flat,
        params,
        topo: Topology::new(flat),
        cap: params.net_capacitance(flat),
        trace: Trace::new(names, values.clone(), 0, end),
        pending: vec![None; flat.nets.len()],
        values,
        queue: BinaryHeap::new(),
        seq: 0,
        evaluate_all_at: stim.rows.first().map(|r| r.time_fs),
        processed: 0,
    };
    let inputs = flat.inputs();
    for (row, signals) in stim.rows.iter().zip(vectors) {
        engine.run_until(row.time_fs)?;
        engine.trace.vector_times.push(row.time_fs);
        for (&net, sig) in inputs.iter().zip(signals) {
            engine.schedule(net, sig, row.time_fs);
        }
    }
    engine.run_until(end)?;
    Ok(engine.trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{flatten, parse};
    use crate::sim::FS_PER_NS;

    const INV: &str = ".subckt inv a y\n.inputs a\n.outputs y\nM1 y a vdd p\nM2 y a gnd n\n.ends\n";

    fn run(src: &str, csv: &str) -> (FlatNetlist, Trace) {
        let f = flatten(&parse(src).unwrap()).unwrap();
        let p = ModelParams::default();
        let stim = Stimulus::parse_csv(csv, p.period_fs()).unwrap();
        let t = run_transient(&f, &stim, &p).unwrap();
        (f, t)
    }

    #[test]
    fn inverter_edge_is_rc_late() {
        // pull-down 10 kOhm into two 1 fF drain terminals
        let (f, t) = run(INV, "time_ns,a\n0,0\n10,1\n");
        let y = f.net("y").unwrap();
        assert_eq!(t.changes[y], vec![(40_000, Signal::STRONG_1), (10 * FS_PER_NS + 20_000, Signal::STRONG_0)]);
    }

    #[test]
    fn repeated_vector_is_quiet() {
        let (_, t) = run(INV, "a\n1\n1\n");
        let second: usize = t
            .changes
            .iter()
            .map(|c| c.iter().filter(|(time, _)| *time >= 10 * FS_PER_NS).count())
            .sum();
        assert_eq!(second, 0);
    }

    #[test]
    fn delays_accumulate_through_stages() {
        let src = ".subckt buf a y\n.inputs a\n.outputs y\n\
                   M1 m a vdd p\nM2 m a gnd n\nM3 y m vdd p\nM4 y m gnd n\n.ends\n";
        let (f, t) = run(src, "a\n0\n1\n");
        let (m, y) = (f.net("m").unwrap(), f.net("y").unwrap());
        let edge = 10 * FS_PER_NS;
        // m: 10k * (2 fF drains + 4 fF gates); y: 20k * 2 fF after m lands
        assert_eq!(t.changes[m].last().unwrap(), &(edge + 60_000, Signal::STRONG_0));
        assert_eq!(t.changes[y].last().unwrap(), &(edge + 60_000 + 40_000, Signal::STRONG_1));
    }

    #[test]
    fn deterministic() {
        let (_, a) = run(INV, "a\n0\n1\n0\n");
        let (_, b) = run(INV, "a\n0\n1\n0\n");
        assert_eq!(a.to_csv(), b.to_csv());
    }
}
