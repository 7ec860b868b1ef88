// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use super::{FlatNetlist, NetKind, GND, VDD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Source line of the device that exposes the problem, 0 if unknown.
    pub line: usize,
    pub net: Option<String>,
    pub message: String,
}

impl Diagnostic {
    /// `file:line: severity: message`
    pub fn render(&self, file: &str) -> String {
        format!("{file}:{}: {}: {}", self.line, self.severity, self.message)
    }
}

#[derive(Default, Clone, Copy)]
struct Usage {
    gates: usize,
    channels: usize,
    first_line: Option<usize>,
}

/// Structural lint over a flattened netlist. Never fails; an empty list
/// means nothing suspicious was found.
///
/// Reports gates with nothing driving them, outputs with no channel
/// connection, internal nets with a single terminal, and designs that
/// never touch a supply.
pub fn validate(flat: &FlatNetlist) -> Vec<Diagnostic> {
    let mut usage = vec![Usage::default(); flat.nets.len()];
    for d in &flat.devices {
        for (net, is_gate) in [(d.gate, true), (d.drain, false), (d.source, false)] {
            let u = &mut usage[net];
            if is_gate {
                u.gates += 1;
            } else {
                u.channels += 1;
            }
            u.first_line.get_or_insert(d.line);
        }
    }

    let mut out = Vec::new();
    for (idx, net) in flat.nets.iter().enumerate() {
        let u = usage[idx];
        let line = u.first_line.unwrap_or(0);
        match net.kind {
            NetKind::Internal | NetKind::Output if u.gates > 0 && u.channels == 0 => {
                out.push(Diagnostic {
                    severity: Severity::Error,
                    line,
                    net: Some(net.name.clone()),
                    message: format!("floating gate: net `{}` has no driver", net.name),
                });
            }
            NetKind::Output if u.channels == 0 => out.push(Diagnostic {
                severity: Severity::Error,
                line,
                net: Some(net.name.clone()),
                message: format!("output `{}` is not driven", net.name),
            }),
            NetKind::Internal if u.gates + u.channels == 1 => out.push(Diagnostic {
                severity: Severity::Warning,
                line,
                net: Some(net.name.clone()),
                message: format!("dangling net `{}` has a single terminal", net.name),
            }),
            _ => {}
        }
    }

    if !flat.devices.is_empty() && usage[VDD].channels == 0 && usage[GND].channels == 0 {
        out.push(Diagnostic {
            severity: Severity::Warning,
            line: flat.devices[0].line,
            net: None,
            message: format!(
                "no device connects to `{}` or `{}`",
                flat.net_name(VDD),
                flat.net_name(GND)
            ),
        });
    }
    out
}
