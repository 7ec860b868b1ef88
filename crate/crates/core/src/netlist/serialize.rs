// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;

use super::{Design, Device, DEFAULT_SIZE};

pub const HEADER: &str = "# addersim netlist";

fn size(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn device_line(d: &Device) -> String {
    let mut line = format!("{} {} {} {}", d.id, d.drain, d.gate, d.source);
    if let Some(b) = &d.bulk {
        line.push(' ');
        line.push_str(b);
    }
    line.push(' ');
    line.push_str(d.kind.token());
    if d.width != DEFAULT_SIZE {
        line.push_str(&format!(" w={}", size(d.width)));
    }
    if d.length != DEFAULT_SIZE {
        line.push_str(&format!(" l={}", size(d.length)));
    }
    line
}

/// Prints a design in the netlist dialect. Subckts appear in definition
/// order; parsing the output gives back an equal design.
pub fn serialize(design: &Design) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, ".global {} {}", design.globals.vdd, design.globals.gnd).unwrap();
    writeln!(out, ".top {}", design.top).unwrap();
    for sub in design.subckts.values() {
        out.push('\n');
        let mut head = format!(".subckt {}", sub.name);
        for p in &sub.ports {
            head.push(' ');
            head.push_str(p);
        }
        writeln!(out, "{head}").unwrap();
        if !sub.inputs.is_empty() {
            writeln!(out, ".inputs {}", sub.inputs.join(" ")).unwrap();
        }
        if !sub.outputs.is_empty() {
            writeln!(out, ".outputs {}", sub.outputs.join(" ")).unwrap();
        }
        for d in &sub.devices {
            writeln!(out, "{}", device_line(d)).unwrap();
        }
        for i in &sub.instances {
            let mut line = i.id.clone();
            for b in &i.bindings {
                line.push(' ');
                line.push_str(b);
            }
            line.push(' ');
            line.push_str(&i.subckt);
            writeln!(out, "{line}").unwrap();
        }
        writeln!(out, ".ends").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{parse, Device, Instance, Subckt};

    #[test]
    fn empty_design_is_header_and_shell() {
        let d = Design::new(Subckt::new("top", &[]));
        assert_eq!(
            serialize(&d),
            "# addersim netlist\n.global vdd gnd\n.top top\n\n.subckt top\n.ends\n"
        );
        assert_eq!(parse(&serialize(&d)).unwrap(), d);
    }

    #[test]
    fn non_default_width_is_emitted() {
        let sub = Subckt::new("s", &["a"])
            .device(Device::nmos("M1", "a", "a", "gnd").with_size(4.0, 2.0))
            .device(Device::pmos("M2", "a", "a", "vdd").with_size(2.0, 2.5));
        let text = serialize(&Design::new(sub));
        assert!(text.contains("M1 a a gnd n w=4\n"), "{text}");
        assert!(text.contains("M2 a a vdd p l=2.5\n"), "{text}");
    }

    #[test]
    fn hierarchy_round_trips() {
        let leaf = Subckt::new("leaf", &["a", "y"])
            .device(Device::nmos("M1", "y", "a", "gnd").with_bulk("gnd"));
        let top = Subckt::new("top", &["i", "o"])
            .with_directions(&["i"], &["o"])
            .instance(Instance::new("X1", "leaf", &["i", "mid"]))
            .instance(Instance::new("X2", "leaf", &["mid", "o"]));
        let d = Design::new(top).add(leaf);
        let text = serialize(&d);
        let back = parse(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(serialize(&back), text);
    }
}
