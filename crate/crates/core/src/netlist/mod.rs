// SPDX-License-Identifier: Apache-2.0

//! Hierarchical MOS netlists: the data model, a small SPICE-flavoured text
//! dialect, flattening to a device graph, and structural lint.
//!
//! The dialect, one statement per line, `#` starting a comment:
//!
//! ```text
//! .global vdd gnd
//! .top <name>
//! .subckt <name> <ports...>
//! .inputs <ports...>
//! .outputs <ports...>
//! M<id> <drain> <gate> <source> [<bulk>] <n|p> [w=<lambda>] [l=<lambda>]
//! X<id> <nets...> <subckt>
//! .ends [<name>]
//! ```

mod flatten;
mod parse;
mod serialize;
mod validate;

use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexMap;

pub use flatten::{count_transistors, flatten, FlatDevice, FlatNet, FlatNetlist, NetKind, GND, VDD};
pub use parse::parse;
pub use serialize::serialize;
pub use validate::{validate, Diagnostic, Severity};

/// Drawn width and length when a device line gives none, in lambda.
pub const DEFAULT_SIZE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeviceKind {
    Nmos,
    Pmos,
}

impl DeviceKind {
    pub fn token(self) -> &'static str {
        match self {
            DeviceKind::Nmos => "n",
            DeviceKind::Pmos => "p",
        }
    }
}

impl fmt::Display for DeviceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeviceKind::Nmos => "NMOS",
            DeviceKind::Pmos => "PMOS",
        })
    }
}

/// A single MOS transistor. `line` is the source line it came from (0 when
/// built in code) and takes no part in equality.
#[derive(Debug, Clone)]
pub struct Device {
    pub id: String,
    pub kind: DeviceKind,
    pub drain: String,
    pub gate: String,
    pub source: String,
    /// Parsed and carried through, but the switch-level model ignores it.
    pub bulk: Option<String>,
    pub width: f64,
    pub length: f64,
    pub line: usize,
}

impl Device {
    pub fn new(id: &str, kind: DeviceKind, drain: &str, gate: &str, source: &str) -> Self {
        Device {
            id: id.to_string(),
            kind,
            drain: drain.to_string(),
            gate: gate.to_string(),
            source: source.to_string(),
            bulk: None,
            width: DEFAULT_SIZE,
            length: DEFAULT_SIZE,
            line: 0,
        }
    }

    pub fn nmos(id: &str, drain: &str, gate: &str, source: &str) -> Self {
        Device::new(id, DeviceKind::Nmos, drain, gate, source)
    }

    pub fn pmos(id: &str, drain: &str, gate: &str, source: &str) -> Self {
        Device::new(id, DeviceKind::Pmos, drain, gate, source)
    }

    pub fn with_bulk(mut self, bulk: &str) -> Self {
        self.bulk = Some(bulk.to_string());
        self
    }

    pub fn with_size(mut self, width: f64, length: f64) -> Self {
        self.width = width;
        self.length = length;
        self
    }
}

impl PartialEq for Device {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.kind == other.kind
            && self.drain == other.drain
            && self.gate == other.gate
            && self.source == other.source
            && self.bulk == other.bulk
            && self.width == other.width
            && self.length == other.length
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub id: String,
    pub subckt: String,
    /// Parent nets bound to the child's ports, in port order.
    pub bindings: Vec<String>,
    pub line: usize,
}

impl Instance {
    pub fn new(id: &str, subckt: &str, bindings: &[&str]) -> Self {
        Instance {
            id: id.to_string(),
            subckt: subckt.to_string(),
            bindings: bindings.iter().map(|s| s.to_string()).collect(),
            line: 0,
        }
    }
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.subckt == other.subckt && self.bindings == other.bindings
    }
}

#[derive(Debug, Clone, Default)]
pub struct Subckt {
    pub name: String,
    pub ports: Vec<String>,
    /// Ports declared as inputs with `.inputs`.
    pub inputs: Vec<String>,
    /// Ports declared as outputs with `.outputs`.
    pub outputs: Vec<String>,
    pub devices: Vec<Device>,
    pub instances: Vec<Instance>,
    pub line: usize,
}

impl Subckt {
    pub fn new(name: &str, ports: &[&str]) -> Self {
        Subckt {
            name: name.to_string(),
            ports: ports.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn with_directions(mut self, inputs: &[&str], outputs: &[&str]) -> Self {
        self.inputs = inputs.iter().map(|s| s.to_string()).collect();
        self.outputs = outputs.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn device(mut self, d: Device) -> Self {
        self.devices.push(d);
        self
    }

    pub fn instance(mut self, i: Instance) -> Self {
        self.instances.push(i);
        self
    }

    /// Every net name mentioned in this subckt: ports plus anything used by
    /// a device or instance.
    pub fn nets(&self) -> BTreeSet<&str> {
        let mut nets: BTreeSet<&str> = self.ports.iter().map(String::as_str).collect();
        for d in &self.devices {
            nets.extend([d.drain.as_str(), d.gate.as_str(), d.source.as_str()]);
            nets.extend(d.bulk.as_deref());
        }
        for i in &self.instances {
            nets.extend(i.bindings.iter().map(String::as_str));
        }
        nets
    }
}

impl PartialEq for Subckt {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.ports == other.ports
            && self.inputs == other.inputs
            && self.outputs == other.outputs
            && self.devices == other.devices
            && self.instances == other.instances
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Globals {
    pub vdd: String,
    pub gnd: String,
}

impl Default for Globals {
    fn default() -> Self {
        Globals {
            vdd: "vdd".to_string(),
            gnd: "gnd".to_string(),
        }
    }
}

/// Equality compares subckts as a map; definition order only affects how the
/// design is printed.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub subckts: IndexMap<String, Subckt>,
    pub top: String,
    pub globals: Globals,
}

impl Design {
    /// A design whose top is `top`; further subckts are added with [`Design::add`].
    pub fn new(top: Subckt) -> Self {
        let mut subckts = IndexMap::new();
        let name = top.name.clone();
        subckts.insert(name.clone(), top);
        Design {
            subckts,
            top: name,
            globals: Globals::default(),
        }
    }

    /// Adds a subckt definition ahead of the top one.
    pub fn add(mut self, sub: Subckt) -> Self {
        let top = self.subckts.shift_remove(&self.top).expect("top present");
        self.subckts.insert(sub.name.clone(), sub);
        self.subckts.insert(top.name.clone(), top);
        self
    }

    pub fn top_subckt(&self) -> Option<&Subckt> {
        self.subckts.get(&self.top)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetlistError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: unknown subckt `{name}`")]
    UnknownSubckt { line: usize, name: String },
    #[error("line {line}: instance `{instance}` of `{subckt}` binds {found} nets, expected {expected}")]
    ArityMismatch {
        line: usize,
        instance: String,
        subckt: String,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: duplicate {what} `{name}`")]
    Duplicate {
        line: usize,
        what: &'static str,
        name: String,
    },
    #[error("subckt hierarchy has a cycle through `{0}`")]
    Cycle(String),
    #[error("invalid design: {0}")]
    InvalidDesign(String),
    #[error("instance `{instance}` refers to undefined subckt `{subckt}`")]
    UnresolvedInstance { instance: String, subckt: String },
    #[error("net collision in `{subckt}`: {message}")]
    PortCollision { subckt: String, message: String },
}

impl NetlistError {
    /// Source line the error points at, when it has one.
    pub fn line(&self) -> Option<usize> {
        match self {
            NetlistError::Syntax { line, .. }
            | NetlistError::UnknownSubckt { line, .. }
            | NetlistError::ArityMismatch { line, .. }
            | NetlistError::Duplicate { line, .. } => Some(*line),
            _ => None,
        }
    }
}

/// Checks the whole-design invariants shared by the parser and by
/// programmatic builders.
pub fn check_design(design: &Design) -> Result<(), NetlistError> {
    if design.globals.vdd == design.globals.gnd {
        return Err(NetlistError::InvalidDesign(format!(
            "vdd and gnd are both `{}`",
            design.globals.vdd
        )));
    }
    if !design.subckts.contains_key(&design.top) {
        return Err(NetlistError::InvalidDesign(format!(
            "top subckt `{}` is not defined",
            design.top
        )));
    }
    for sub in design.subckts.values() {
        let mut seen = BTreeSet::new();
        for p in &sub.ports {
            if !seen.insert(p.as_str()) {
                return Err(NetlistError::Duplicate {
                    line: sub.line,
                    what: "port",
                    name: p.clone(),
                });
            }
        }
        for inst in &sub.instances {
            let child = design
                .subckts
                .get(&inst.subckt)
                .ok_or_else(|| NetlistError::UnknownSubckt {
                    line: inst.line,
                    name: inst.subckt.clone(),
                })?;
            if child.ports.len() != inst.bindings.len() {
                return Err(NetlistError::ArityMismatch {
                    line: inst.line,
                    instance: inst.id.clone(),
                    subckt: inst.subckt.clone(),
                    expected: child.ports.len(),
                    found: inst.bindings.len(),
                });
            }
        }
        for d in &sub.devices {
            if !(d.width > 0.0 && d.length > 0.0) {
                return Err(NetlistError::InvalidDesign(format!(
                    "device `{}` in `{}` has non-positive size",
                    d.id, sub.name
                )));
            }
        }
    }
    check_acyclic(design)
}

fn check_acyclic(design: &Design) -> Result<(), NetlistError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    fn visit<'a>(
        design: &'a Design,
        name: &'a str,
        marks: &mut IndexMap<&'a str, Mark>,
    ) -> Result<(), NetlistError> {
        match marks.get(name).copied().unwrap_or(Mark::New) {
            Mark::Done => return Ok(()),
            Mark::Active => return Err(NetlistError::Cycle(name.to_string())),
            Mark::New => {}
        }
        marks.insert(name, Mark::Active);
        if let Some(sub) = design.subckts.get(name) {
            for inst in &sub.instances {
                visit(design, &inst.subckt, marks)?;
            }
        }
        marks.insert(name, Mark::Done);
        Ok(())
    }
    let mut marks = IndexMap::new();
    for name in design.subckts.keys() {
        visit(design, name, &mut marks)?;
    }
    Ok(())
}
