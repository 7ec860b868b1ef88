// SPDX-License-Identifier: Apache-2.0

//! The built-in cell corpus: three primitives and seven full adders.
//!
//! Every device is drawn at the default 2/2 size except the ratioed
//! pull-down of the 3-transistor XOR, which is long enough to lose any
//! fight against a pass device.

use crate::netlist::{Design, Device, Instance, Subckt};

/// Static description of a corpus cell.
#[derive(Debug, Clone, Copy)]
pub struct CellSpec {
    pub name: &'static str,
    pub inputs: &'static [&'static str],
    pub outputs: &'static [&'static str],
    pub transistors: usize,
    pub note: &'static str,
    reference: fn(&[bool]) -> Vec<bool>,
}

impl CellSpec {
    /// Expected output levels, in `outputs` order.
    pub fn reference(&self, inputs: &[bool]) -> Vec<bool> {
        (self.reference)(inputs)
    }

    pub fn is_adder(&self) -> bool {
        self.outputs == ADDER_OUTPUTS
    }

    pub fn build(&self) -> Design {
        build_cell(self.name).expect("corpus cells build")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown cell `{0}`")]
pub struct UnknownCell(pub String);

const ADDER_INPUTS: &[&str] = &["a", "b", "c"];
const ADDER_OUTPUTS: &[&str] = &["sum", "cout"];

/// `g'p + gn`.
pub fn gdi_function(g: bool, p: bool, n: bool) -> bool {
    if g {
        n
    } else {
        p
    }
}

/// `(parity, majority)` of three bits.
pub fn reference_adder(a: bool, b: bool, c: bool) -> (bool, bool) {
    (a ^ b ^ c, (a && b) || (b && c) || (a && c))
}

fn adder_ref(v: &[bool]) -> Vec<bool> {
    let (s, c) = reference_adder(v[0], v[1], v[2]);
    vec![s, c]
}

const fn adder(name: &'static str, transistors: usize, note: &'static str) -> CellSpec {
    CellSpec {
        name,
        inputs: ADDER_INPUTS,
        outputs: ADDER_OUTPUTS,
        transistors,
        note,
        reference: adder_ref,
    }
}

/// Full adders in comparison-table order.
pub const ADDERS: [CellSpec; 7] = [
    adder("conv28", 28, "static mirror adder with output inverters"),
    adder("chow8", 8, "two XOR stages, carry mux selecting a or c"),
    adder("serf10", 10, "two 4T XNOR stages, carry mux selecting a or c"),
    adder("p12", 12, "two XOR stages, carry ab + (a^b)c from three GDI cells"),
    adder("p8", 8, "two XOR stages, carry mux selecting b or c"),
    adder("p10", 10, "two XOR stages, ab from a signal-rail inverter, carry mux selecting ab or c"),
    adder("p6", 6, "two 2-PMOS XOR stages, carry mux selecting a or c"),
];

pub const PRIMITIVES: [CellSpec; 3] = [
    CellSpec {
        name: "tsinv",
        inputs: &["in", "rail"],
        outputs: &["out"],
        transistors: 2,
        note: "inverter whose pull-up source is a signal rail",
        reference: |v| vec![v[1] && !v[0]],
    },
    CellSpec {
        name: "xor3",
        inputs: &["a", "b"],
        outputs: &["out"],
        transistors: 3,
        note: "signal-rail inverter on b with ratioed pull-down, plus a pass device from b gated by a",
        reference: |v| vec![v[0] ^ v[1]],
    },
    CellSpec {
        name: "gdi",
        inputs: &["g", "p", "n"],
        outputs: &["out"],
        transistors: 2,
        note: "gate diffusion input cell, out = g'p + gn",
        reference: |v| vec![gdi_function(v[0], v[1], v[2])],
    },
];

/// Every corpus cell, sorted by name.
pub fn corpus() -> Vec<CellSpec> {
    let mut all: Vec<CellSpec> = ADDERS.iter().chain(PRIMITIVES.iter()).copied().collect();
    all.sort_by_key(|c| c.name);
    all
}

pub fn cell_spec(name: &str) -> Option<CellSpec> {
    ADDERS.iter().chain(PRIMITIVES.iter()).find(|c| c.name == name).copied()
}

fn tsinv() -> Subckt {
    Subckt::new("tsinv", &["in", "rail", "out"])
        .with_directions(&["in", "rail"], &["out"])
        .device(Device::pmos("M1", "out", "in", "rail"))
        .device(Device::nmos("M2", "out", "in", "gnd"))
}

fn xor3() -> Subckt {
    Subckt::new("xor3", &["a", "b", "out"])
        .with_directions(&["a", "b"], &["out"])
        .device(Device::pmos("M1", "out", "b", "a"))
        .device(Device::nmos("M2", "out", "b", "gnd").with_size(2.0, 4.0))
        .device(Device::pmos("M3", "out", "a", "b"))
}

fn gdi() -> Subckt {
    Subckt::new("gdi", &["g", "p", "n", "out"])
        .with_directions(&["g", "p", "n"], &["out"])
        .device(Device::pmos("M1", "out", "g", "p").with_bulk("p"))
        .device(Device::nmos("M2", "out", "g", "n").with_bulk("n"))
}

fn adder_top(name: &str) -> Subckt {
    Subckt::new(name, &["a", "b", "c", "sum", "cout"]).with_directions(ADDER_INPUTS, ADDER_OUTPUTS)
}

/// Sum through two 3T XOR stages, leaving `x = a ^ b` for the carry.
fn xor_sum(top: Subckt) -> Subckt {
    top.instance(Instance::new("X1", "xor3", &["a", "b", "x"]))
        .instance(Instance::new("X2", "xor3", &["x", "c", "sum"]))
}

fn p12() -> Design {
    let top = xor_sum(adder_top("p12"))
        .instance(Instance::new("X3", "gdi", &["a", "gnd", "b", "ab"]))
        .instance(Instance::new("X4", "gdi", &["x", "gnd", "c", "xc"]))
        .instance(Instance::new("X5", "gdi", &["ab", "xc", "vdd", "cout"]));
    Design::new(top).add(xor3()).add(gdi())
}

fn p10() -> Design {
    let top = xor_sum(adder_top("p10"))
        .device(Device::pmos("M1", "ab", "x", "b"))
        .device(Device::nmos("M2", "ab", "x", "gnd"))
        .device(Device::pmos("M3", "cout", "x", "ab"))
        .device(Device::nmos("M4", "cout", "x", "c"));
    Design::new(top).add(xor3())
}

fn mux_carry(name: &str, high_source: &str) -> Design {
    let top = xor_sum(adder_top(name))
        .device(Device::pmos("M1", "cout", "x", high_source))
        .device(Device::nmos("M2", "cout", "x", "c"));
    Design::new(top).add(xor3())
}

fn xnor4() -> Subckt {
    Subckt::new("xnor4", &["a", "b", "out"])
        .with_directions(&["a", "b"], &["out"])
        .device(Device::pmos("M1", "n1", "a", "vdd"))
        .device(Device::pmos("M2", "out", "b", "n1"))
        .device(Device::nmos("M3", "out", "a", "b"))
        .device(Device::nmos("M4", "out", "b", "a"))
}

fn serf10() -> Design {
    let top = adder_top("serf10")
        .instance(Instance::new("X1", "xnor4", &["a", "b", "h"]))
        .instance(Instance::new("X2", "xnor4", &["h", "c", "sum"]))
        .device(Device::nmos("M1", "cout", "h", "a"))
        .device(Device::pmos("M2", "cout", "h", "c"));
    Design::new(top).add(xnor4())
}

fn xor2p() -> Subckt {
    Subckt::new("xor2p", &["a", "b", "out"])
        .with_directions(&["a", "b"], &["out"])
        .device(Device::pmos("M1", "out", "a", "b"))
        .device(Device::pmos("M2", "out", "b", "a"))
}

fn p6() -> Design {
    let top = adder_top("p6")
        .instance(Instance::new("X1", "xor2p", &["a", "b", "x"]))
        .instance(Instance::new("X2", "xor2p", &["x", "c", "sum"]))
        .device(Device::pmos("M1", "cout", "x", "a"))
        .device(Device::nmos("M2", "cout", "x", "c"));
    Design::new(top).add(xor2p())
}

fn conv28() -> Design {
    let p = |id: &str, d: &str, g: &str, s: &str| Device::pmos(id, d, g, s);
    let n = |id: &str, d: &str, g: &str, s: &str| Device::nmos(id, d, g, s);
    let top = adder_top("conv28")
        // carry stage, output cob = majority'
        .device(p("MP1", "n1", "a", "vdd"))
        .device(p("MP2", "n1", "b", "vdd"))
        .device(p("MP3", "cob", "c", "n1"))
        .device(p("MP4", "n2", "a", "vdd"))
        .device(p("MP5", "cob", "b", "n2"))
        .device(n("MN1", "n3", "a", "gnd"))
        .device(n("MN2", "n3", "b", "gnd"))
        .device(n("MN3", "cob", "c", "n3"))
        .device(n("MN4", "n4", "a", "gnd"))
        .device(n("MN5", "cob", "b", "n4"))
        // sum stage, output sob = parity'
        .device(p("MP6", "n5", "a", "vdd"))
        .device(p("MP7", "n5", "b", "vdd"))
        .device(p("MP8", "n5", "c", "vdd"))
        .device(p("MP9", "sob", "cob", "n5"))
        .device(p("MP10", "n6", "a", "vdd"))
        .device(p("MP11", "n7", "b", "n6"))
        .device(p("MP12", "sob", "c", "n7"))
        .device(n("MN6", "n8", "a", "gnd"))
        .device(n("MN7", "n8", "b", "gnd"))
        .device(n("MN8", "n8", "c", "gnd"))
        .device(n("MN9", "sob", "cob", "n8"))
        .device(n("MN10", "n9", "a", "gnd"))
        .device(n("MN11", "n10", "b", "n9"))
        .device(n("MN12", "sob", "c", "n10"))
        // output inverters
        .device(p("MP13", "cout", "cob", "vdd"))
        .device(n("MN13", "cout", "cob", "gnd"))
        .device(p("MP14", "sum", "sob", "vdd"))
        .device(n("MN14", "sum", "sob", "gnd"));
    Design::new(top)
}

pub fn build_cell(name: &str) -> Result<Design, UnknownCell> {
    Ok(match name {
        "tsinv" => Design::new(tsinv()),
        "xor3" => Design::new(xor3()),
        "gdi" => Design::new(gdi()),
        "conv28" => conv28(),
        "chow8" => mux_carry("chow8", "a"),
        "serf10" => serf10(),
        "p12" => p12(),
        "p10" => p10(),
        "p8" => mux_carry("p8", "b"),
        "p6" => p6(),
        other => return Err(UnknownCell(other.to_string())),
    })
}
