// SPDX-License-Identifier: Apache-2.0

use crate::netlist::FlatNetlist;

/// Channel-connected component: nets joined through drain-source channels,
/// together with every device whose channel touches one of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ccc {
    pub nets: Vec<usize>,
    pub devices: Vec<usize>,
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Partitions the non-source nets into channel-connected components.
///
/// Supplies and inputs are ideal drivers, so a channel ending on one never
/// merges the components on either side of it. Components are ordered by
/// their lowest net index; a device whose channel joins two source nets
/// belongs to no component.
pub fn partition_ccc(flat: &FlatNetlist) -> Vec<Ccc> {
    let n = flat.nets.len();
    let mut sets = DisjointSet::new(n);
    for d in &flat.devices {
        if !flat.is_source(d.drain) && !flat.is_source(d.source) {
            sets.union(d.drain, d.source);
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut out: Vec<Ccc> = Vec::new();
    for net in 0..n {
        if flat.is_source(net) {
            continue;
        }
        let root = sets.find(net);
        if slot[root] == usize::MAX {
            slot[root] = out.len();
            out.push(Ccc {
                nets: Vec::new(),
                devices: Vec::new(),
            });
        }
        out[slot[root]].nets.push(net);
    }
    for (i, d) in flat.devices.iter().enumerate() {
        let anchor = [d.drain, d.source].into_iter().find(|&t| !flat.is_source(t));
        if let Some(t) = anchor {
            out[slot[sets.find(t)]].devices.push(i);
        }
    }
    out
}

/// Lookup tables the solvers need around a partition.
#[derive(Debug, Clone)]
pub struct Topology {
    pub cccs: Vec<Ccc>,
    /// Component of each non-source net.
    pub ccc_of_net: Vec<Option<usize>>,
    /// Components with a device gated by the net.
    pub gate_fanout: Vec<Vec<usize>>,
    /// For source nets: components with a channel ending on the net.
    pub source_fanout: Vec<Vec<usize>>,
}

impl Topology {
    pub fn new(flat: &FlatNetlist) -> Self {
        let cccs = partition_ccc(flat);
        let n = flat.nets.len();
        let mut ccc_of_net = vec![None; n];
        let mut gate_fanout = vec![Vec::new(); n];
        let mut source_fanout = vec![Vec::new(); n];
        for (ci, c) in cccs.iter().enumerate() {
            for &net in &c.nets {
                ccc_of_net[net] = Some(ci);
            }
            for &di in &c.devices {
                let d = &flat.devices[di];
                gate_fanout[d.gate].push(ci);
                for t in [d.drain, d.source] {
                    if flat.is_source(t) {
                        source_fanout[t].push(ci);
                    }
                }
            }
        }
        for list in gate_fanout.iter_mut().chain(source_fanout.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        Topology {
            cccs,
            ccc_of_net,
            gate_fanout,
            source_fanout,
        }
    }
}
