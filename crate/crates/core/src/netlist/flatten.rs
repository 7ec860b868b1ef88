// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use super::{Design, DeviceKind, NetlistError, Subckt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NetKind {
    SupplyHigh,
    SupplyLow,
    Input,
    Output,
    Internal,
}

impl NetKind {
    /// Supplies and inputs are ideal drivers: their value is imposed, never
    /// computed, and they do not conduct between the devices touching them.
    pub fn is_source(self) -> bool {
        matches!(self, NetKind::SupplyHigh | NetKind::SupplyLow | NetKind::Input)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatNet {
    pub name: String,
    pub kind: NetKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlatDevice {
    /// Hierarchical name, e.g. `x1.M2`.
    pub name: String,
    pub kind: DeviceKind,
    pub drain: usize,
    pub gate: usize,
    pub source: usize,
    pub bulk: Option<usize>,
    pub width: f64,
    pub length: f64,
    pub line: usize,
}

impl FlatDevice {
    /// Drawn narrower than long: loses any fight against a full-size device.
    pub fn is_ratioed(&self) -> bool {
        self.width < self.length
    }

    /// Channel resistance given the per-square resistance of its kind.
    pub fn resistance(&self, rn: f64, rp: f64) -> f64 {
        let per_square = match self.kind {
            DeviceKind::Nmos => rn,
            DeviceKind::Pmos => rp,
        };
        per_square * self.length / self.width
    }

    /// The channel terminal opposite `net`, if `net` is one of them.
    pub fn other_end(&self, net: usize) -> Option<usize> {
        if self.drain == net {
            Some(self.source)
        } else if self.source == net {
            Some(self.drain)
        } else {
            None
        }
    }
}

/// A design with the hierarchy expanded: nets are indexed, supplies first
/// (`vdd` = 0, `gnd` = 1), then top ports in port order, then internal nets
/// in order of first appearance.
#[derive(Debug, Clone)]
pub struct FlatNetlist {
    pub name: String,
    pub nets: Vec<FlatNet>,
    pub devices: Vec<FlatDevice>,
    index: HashMap<String, usize>,
}

pub const VDD: usize = 0;
pub const GND: usize = 1;

impl FlatNetlist {
    pub fn net(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn net_name(&self, net: usize) -> &str {
        &self.nets[net].name
    }

    pub fn kind(&self, net: usize) -> NetKind {
        self.nets[net].kind
    }

    pub fn is_source(&self, net: usize) -> bool {
        self.nets[net].kind.is_source()
    }

    fn of_kind(&self, kind: NetKind) -> Vec<usize> {
        (0..self.nets.len()).filter(|&n| self.nets[n].kind == kind).collect()
    }

    pub fn inputs(&self) -> Vec<usize> {
        self.of_kind(NetKind::Input)
    }

    pub fn outputs(&self) -> Vec<usize> {
        self.of_kind(NetKind::Output)
    }

    pub fn count_transistors(&self) -> usize {
        self.devices.len()
    }

    fn add_net(&mut self, name: String, kind: NetKind) -> usize {
        let idx = self.nets.len();
        self.index.insert(name.clone(), idx);
        self.nets.push(FlatNet { name, kind });
        idx
    }
}

/// Number of devices in a flattened design.
pub fn count_transistors(flat: &FlatNetlist) -> usize {
    flat.count_transistors()
}

struct Flattener<'a> {
    design: &'a Design,
    flat: FlatNetlist,
}

impl<'a> Flattener<'a> {
    fn check_ports(&self, sub: &Subckt) -> Result<(), NetlistError> {
        let g = &self.design.globals;
        for p in &sub.ports {
            if *p == g.vdd || *p == g.gnd {
                return Err(NetlistError::PortCollision {
                    subckt: sub.name.clone(),
                    message: format!("port `{p}` shadows a global supply"),
                });
            }
        }
        for p in sub.inputs.iter().chain(&sub.outputs) {
            if !sub.ports.contains(p) {
                return Err(NetlistError::PortCollision {
                    subckt: sub.name.clone(),
                    message: format!("direction given for `{p}`, which is not a port"),
                });
            }
        }
        Ok(())
    }

    fn expand(
        &mut self,
        sub: &'a Subckt,
        prefix: &str,
        mut local: HashMap<&'a str, usize>,
    ) -> Result<(), NetlistError> {
        self.check_ports(sub)?;
        let design: &'a Design = self.design;
        let globals = &design.globals;
        let resolve = |name: &'a str,
                       local: &mut HashMap<&'a str, usize>,
                       flat: &mut FlatNetlist|
         -> usize {
            if name == globals.vdd {
                return VDD;
            }
            if name == globals.gnd {
                return GND;
            }
            *local
                .entry(name)
                .or_insert_with(|| flat.add_net(format!("{prefix}{name}"), NetKind::Internal))
        };
        for d in &sub.devices {
            let drain = resolve(&d.drain, &mut local, &mut self.flat);
            let gate = resolve(&d.gate, &mut local, &mut self.flat);
            let source = resolve(&d.source, &mut local, &mut self.flat);
            let bulk = d.bulk.as_deref().map(|b| resolve(b, &mut local, &mut self.flat));
            self.flat.devices.push(FlatDevice {
                name: format!("{prefix}{}", d.id),
                kind: d.kind,
                drain,
                gate,
                source,
                bulk,
                width: d.width,
                length: d.length,
                line: d.line,
            });
        }
        for inst in &sub.instances {
            let child = design.subckts.get(&inst.subckt).ok_or_else(|| {
                NetlistError::UnresolvedInstance {
                    instance: format!("{prefix}{}", inst.id),
                    subckt: inst.subckt.clone(),
                }
            })?;
            if child.ports.len() != inst.bindings.len() {
                return Err(NetlistError::ArityMismatch {
                    line: inst.line,
                    instance: format!("{prefix}{}", inst.id),
                    subckt: inst.subckt.clone(),
                    expected: child.ports.len(),
                    found: inst.bindings.len(),
                });
            }
            let mut child_map = HashMap::new();
            for (port, net) in child.ports.iter().zip(&inst.bindings) {
                child_map.insert(port.as_str(), resolve(net, &mut local, &mut self.flat));
            }
            let child_prefix = format!("{prefix}{}.", inst.id);
            self.expand(child, &child_prefix, child_map)?;
        }
        Ok(())
    }
}

/// Expands the hierarchy under `design.top` into a flat device graph.
///
/// Top ports named by `.inputs`/`.outputs` get that kind. Undeclared top
/// ports are inferred: a port touching only gates is an input, anything
/// else an output.
pub fn flatten(design: &Design) -> Result<FlatNetlist, NetlistError> {
    let top = design.top_subckt().ok_or_else(|| {
        NetlistError::InvalidDesign(format!("top subckt `{}` is not defined", design.top))
    })?;
    let mut flat = FlatNetlist {
        name: top.name.clone(),
        nets: Vec::new(),
        devices: Vec::new(),
        index: HashMap::new(),
    };
    flat.add_net(design.globals.vdd.clone(), NetKind::SupplyHigh);
    flat.add_net(design.globals.gnd.clone(), NetKind::SupplyLow);
    let mut f = Flattener { design, flat };
    f.check_ports(top)?;
    let mut local = HashMap::new();
    let mut undeclared = Vec::new();
    for p in &top.ports {
        let kind = if top.inputs.contains(p) {
            NetKind::Input
        } else if top.outputs.contains(p) {
            NetKind::Output
        } else {
            NetKind::Internal
        };
        let idx = f.flat.add_net(p.clone(), kind);
        if kind == NetKind::Internal {
            undeclared.push(idx);
        }
        local.insert(p.as_str(), idx);
    }
    f.expand(top, "", local)?;
    let mut flat = f.flat;
    for idx in undeclared {
        let on_channel = flat.devices.iter().any(|d| d.drain == idx || d.source == idx);
        flat.nets[idx].kind = if on_channel {
            NetKind::Output
        } else {
            NetKind::Input
        };
    }
    Ok(flat)
}
