// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;

use crate::strength::Signal;

/// Per-net transitions over a time window. Each net starts the window at
/// `initial[net]`; `changes[net]` lists later values in time order, each
/// different from the one before.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub nets: Vec<String>,
    pub initial: Vec<Signal>,
    pub changes: Vec<Vec<(u64, Signal)>>,
    /// Times at which input vectors were applied.
    pub vector_times: Vec<u64>,
    pub start_fs: u64,
    pub duration_fs: u64,
}

/// Renders integer femtoseconds as picoseconds with three decimals.
pub fn format_ps(fs: u64) -> String {
    format!("{}.{:03}", fs / 1000, fs % 1000)
}

impl Trace {
    pub fn new(nets: Vec<String>, initial: Vec<Signal>, start_fs: u64, duration_fs: u64) -> Self {
        let n = nets.len();
        Trace {
            nets,
            initial,
            changes: vec![Vec::new(); n],
            vector_times: Vec::new(),
            start_fs,
            duration_fs,
        }
    }

    pub fn end_fs(&self) -> u64 {
        self.start_fs + self.duration_fs
    }

    pub fn net(&self, name: &str) -> Option<usize> {
        self.nets.iter().position(|n| n == name)
    }

    /// Appends a transition if it changes the net's value.
    pub fn record(&mut self, time_fs: u64, net: usize, sig: Signal) {
        if self.value_at_end(net) != sig {
            self.changes[net].push((time_fs, sig));
        }
    }

    pub fn value_at_end(&self, net: usize) -> Signal {
        self.changes[net].last().map_or(self.initial[net], |c| c.1)
    }

    /// Value of `net` just after every transition at or before `time_fs`.
    pub fn value_at(&self, net: usize, time_fs: u64) -> Signal {
        self.changes[net]
            .iter()
            .take_while(|(t, _)| *t <= time_fs)
            .last()
            .map_or(self.initial[net], |c| c.1)
    }

    pub fn transition_count(&self) -> usize {
        self.changes.iter().map(Vec::len).sum()
    }

    /// The part of the trace in `[start_fs, end_fs)`, starting from the
    /// values held at `start_fs`.
    pub fn window(&self, start_fs: u64, end_fs: u64) -> Trace {
        let initial = (0..self.nets.len())
            .map(|n| {
                self.changes[n]
                    .iter()
                    .take_while(|(t, _)| *t < start_fs)
                    .last()
                    .map_or(self.initial[n], |c| c.1)
            })
            .collect();
        let changes = self
            .changes
            .iter()
            .map(|c| {
                c.iter()
                    .filter(|(t, _)| (start_fs..end_fs).contains(t))
                    .copied()
                    .collect()
            })
            .collect();
        Trace {
            nets: self.nets.clone(),
            initial,
            changes,
            vector_times: self
                .vector_times
                .iter()
                .copied()
                .filter(|t| (start_fs..end_fs).contains(t))
                .collect(),
            start_fs,
            duration_fs: end_fs.saturating_sub(start_fs),
        }
    }

    /// `time_ps,net,signal`, one row per transition, ordered by time and
    /// then by net index.
    pub fn to_csv(&self) -> String {
        let mut rows: Vec<(u64, usize, Signal)> = self
            .changes
            .iter()
            .enumerate()
            .flat_map(|(n, c)| c.iter().map(move |&(t, s)| (t, n, s)))
            .collect();
        rows.sort_by_key(|&(t, n, _)| (t, n));
        let mut out = String::from("time_ps,net,signal\n");
        for (t, n, s) in rows {
            writeln!(out, "{},{},{}", format_ps(t), self.nets[n], s).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strength::{Level, Strength};

    fn sample() -> Trace {
        let mut t = Trace::new(vec!["a".into(), "y".into()], vec![Signal::POWER_ON; 2], 0, 100_000);
        t.record(0, 0, Signal::STRONG_1);
        t.record(20_000, 1, Signal::STRONG_0);
        t.record(20_000, 1, Signal::STRONG_0);
        t.record(50_000, 0, Signal::STRONG_0);
        t.record(71_500, 1, Signal::new(Level::L1, Strength::Weak));
        t
    }

    #[test]
    fn records_only_changes() {
        let t = sample();
        assert_eq!(t.transition_count(), 4);
        assert_eq!(t.value_at(1, 30_000), Signal::STRONG_0);
        assert_eq!(t.value_at(1, 19_999), Signal::POWER_ON);
    }

    #[test]
    fn csv_layout() {
        assert_eq!(
            sample().to_csv(),
            "time_ps,net,signal\n0.000,a,1\n20.000,y,0\n50.000,a,0\n71.500,y,1w\n"
        );
    }

    #[test]
    fn window_carries_values_in() {
        let w = sample().window(30_000, 60_000);
        assert_eq!(w.initial, vec![Signal::STRONG_1, Signal::STRONG_0]);
        assert_eq!(w.transition_count(), 1);
        assert_eq!(w.duration_fs, 30_000);
    }
}
