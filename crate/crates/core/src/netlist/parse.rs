// SPDX-License-Identifier: Apache-2.0

use std::collections::HashSet;

use indexmap::IndexMap;

use super::{check_design, Design, Device, DeviceKind, Globals, Instance, NetlistError, Subckt};

/// A whitespace-delimited token with its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in code.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &code[s..i],
                    column: code[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &code[s..],
            column: code[..s].chars().count() + 1,
        });
    }
    out
}

struct Parser {
    line: usize,
    subckts: IndexMap<String, Subckt>,
    current: Option<Subckt>,
    globals: Option<Globals>,
    top: Option<String>,
}

impl Parser {
    fn syntax(&self, column: usize, message: impl Into<String>) -> NetlistError {
        NetlistError::Syntax {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn statement(&mut self, tokens: &[Token<'_>]) -> Result<(), NetlistError> {
        let head = tokens[0];
        let keyword = head.text.to_ascii_lowercase();
        match keyword.as_str() {
            ".global" => self.global(tokens),
            ".top" => {
                if tokens.len() != 2 {
                    return Err(self.syntax(head.column, "expected `.top <name>`"));
                }
                if self.top.is_some() {
                    return Err(NetlistError::Duplicate {
                        line: self.line,
                        what: ".top directive",
                        name: tokens[1].text.to_string(),
                    });
                }
                self.top = Some(tokens[1].text.to_string());
                Ok(())
            }
            ".subckt" => self.open_subckt(tokens),
            ".ends" => self.close_subckt(tokens),
            ".inputs" | ".outputs" => self.directions(tokens, keyword == ".inputs"),
            _ if keyword.starts_with('m') => self.device(tokens),
            _ if keyword.starts_with('x') => self.instance(tokens),
            _ => Err(self.syntax(head.column, format!("unknown statement `{}`", head.text))),
        }
    }

    fn global(&mut self, tokens: &[Token<'_>]) -> Result<(), NetlistError> {
        if self.current.is_some() {
            return Err(self.syntax(tokens[0].column, "`.global` inside a subckt"));
        }
        if tokens.len() != 3 {
            return Err(self.syntax(tokens[0].column, "expected `.global <vdd> <gnd>`"));
        }
        if tokens[1].text == tokens[2].text {
            return Err(self.syntax(tokens[2].column, "vdd and gnd must differ"));
        }
        if self.globals.is_some() {
            return Err(NetlistError::Duplicate {
                line: self.line,
                what: ".global directive",
                name: tokens[1].text.to_string(),
            });
        }
        self.globals = Some(Globals {
            vdd: tokens[1].text.to_string(),
            gnd: tokens[2].text.to_string(),
        });
        Ok(())
    }

    fn open_subckt(&mut self, tokens: &[Token<'_>]) -> Result<(), NetlistError> {
        if self.current.is_some() {
            return Err(self.syntax(tokens[0].column, "nested `.subckt`"));
        }
        let Some(name) = tokens.get(1) else {
            return Err(self.syntax(tokens[0].column, "expected `.subckt <name> <ports...>`"));
        };
        if self.subckts.contains_key(name.text) {
            return Err(NetlistError::Duplicate {
                line: self.line,
                what: "subckt",
                name: name.text.to_string(),
            });
        }
        let mut sub = Subckt::new(name.text, &[]);
        sub.line = self.line;
        for port in &tokens[2..] {
            if sub.ports.iter().any(|p| p == port.text) {
                return Err(NetlistError::Duplicate {
                    line: self.line,
                    what: "port",
                    name: port.text.to_string(),
                });
            }
            sub.ports.push(port.text.to_string());
        }
        self.current = Some(sub);
        Ok(())
    }

    fn close_subckt(&mut self, tokens: &[Token<'_>]) -> Result<(), NetlistError> {
        let Some(sub) = self.current.take() else {
            return Err(self.syntax(tokens[0].column, "`.ends` without `.subckt`"));
        };
        if let Some(name) = tokens.get(1) {
            if name.text != sub.name {
                return Err(self.syntax(
                    name.column,
                    format!("`.ends {}` closes subckt `{}`", name.text, sub.name),
                ));
            }
        }
        if tokens.len() > 2 {
            return Err(self.syntax(tokens[2].column, "unexpected token after `.ends`"));
        }
        self.subckts.insert(sub.name.clone(), sub);
        Ok(())
    }

    fn current(&mut self, column: usize, what: &str) -> Result<&mut Subckt, NetlistError> {
        let line = self.line;
        self.current.as_mut().ok_or(NetlistError::Syntax {
            line,
            column,
            message: format!("{what} outside of a subckt"),
        })
    }

    fn directions(&mut self, tokens: &[Token<'_>], inputs: bool) -> Result<(), NetlistError> {
        let line = self.line;
        let sub = self.current(tokens[0].column, tokens[0].text)?;
        for t in &tokens[1..] {
            if !sub.ports.iter().any(|p| p == t.text) {
                return Err(NetlistError::Syntax {
                    line,
                    column: t.column,
                    message: format!("`{}` is not a port of `{}`", t.text, sub.name),
                });
            }
            if sub.inputs.iter().chain(&sub.outputs).any(|p| p == t.text) {
                return Err(NetlistError::Duplicate {
                    line,
                    what: "port direction",
                    name: t.text.to_string(),
                });
            }
            let list = if inputs {
                &mut sub.inputs
            } else {
                &mut sub.outputs
            };
            list.push(t.text.to_string());
        }
        Ok(())
    }

    fn device(&mut self, tokens: &[Token<'_>]) -> Result<(), NetlistError> {
        let head = tokens[0];
        let (positional, attributes): (Vec<Token<'_>>, Vec<Token<'_>>) =
            tokens[1..].iter().partition(|t| !t.text.contains('='));
        if let (Some(attr), Some(pos)) = (attributes.first(), positional.last()) {
            if attr.column < pos.column {
                return Err(self.syntax(pos.column, "terminal after size attribute"));
            }
        }
        if positional.len() < 4 || positional.len() > 5 {
            let column = tokens.last().map_or(head.column, |t| t.column);
            return Err(self.syntax(
                column,
                format!(
                    "`{}`: expected `<drain> <gate> <source> [<bulk>] <n|p>`, found {} field(s)",
                    head.text,
                    positional.len()
                ),
            ));
        }
        let kind_tok = positional[positional.len() - 1];
        let kind = match kind_tok.text.to_ascii_lowercase().as_str() {
            "n" | "nmos" => DeviceKind::Nmos,
            "p" | "pmos" => DeviceKind::Pmos,
            other => {
                return Err(self.syntax(
                    kind_tok.column,
                    format!("expected device kind `n` or `p`, found `{other}`"),
                ))
            }
        };
        let mut device = Device::new(
            head.text,
            kind,
            positional[0].text,
            positional[1].text,
            positional[2].text,
        );
        if positional.len() == 5 {
            device.bulk = Some(positional[3].text.to_string());
        }
        device.line = self.line;
        let mut seen = HashSet::new();
        for attr in attributes {
            let (key, value) = attr.text.split_once('=').expect("partitioned on '='");
            let key = key.to_ascii_lowercase();
            if !seen.insert(key.clone()) {
                return Err(self.syntax(attr.column, format!("repeated attribute `{key}`")));
            }
            let parsed: f64 = value
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite() && *v > 0.0)
                .ok_or_else(|| {
                    self.syntax(attr.column, format!("`{}` is not a positive size", attr.text))
                })?;
            match key.as_str() {
                "w" => device.width = parsed,
                "l" => device.length = parsed,
                _ => return Err(self.syntax(attr.column, format!("unknown attribute `{key}`"))),
            }
        }
        let line = self.line;
        let sub = self.current(head.column, "device")?;
        if sub.devices.iter().any(|d| d.id == device.id) {
            return Err(NetlistError::Duplicate {
                line,
                what: "device",
                name: device.id,
            });
        }
        sub.devices.push(device);
        Ok(())
    }

    fn instance(&mut self, tokens: &[Token<'_>]) -> Result<(), NetlistError> {
        let head = tokens[0];
        if tokens.len() < 2 {
            return Err(self.syntax(head.column, "expected `X<id> <nets...> <subckt>`"));
        }
        if let Some(t) = tokens.iter().find(|t| t.text.contains('=')) {
            return Err(self.syntax(t.column, "instances take no attributes"));
        }
        let subckt = tokens[tokens.len() - 1].text;
        let bindings: Vec<&str> = tokens[1..tokens.len() - 1].iter().map(|t| t.text).collect();
        let mut inst = Instance::new(head.text, subckt, &bindings);
        inst.line = self.line;
        let line = self.line;
        let sub = self.current(head.column, "instance")?;
        if sub.instances.iter().any(|i| i.id == inst.id) {
            return Err(NetlistError::Duplicate {
                line,
                what: "instance",
                name: inst.id,
            });
        }
        sub.instances.push(inst);
        Ok(())
    }
}

/// Parses netlist text into a checked [`Design`].
pub fn parse(text: &str) -> Result<Design, NetlistError> {
    let mut p = Parser {
        line: 0,
        subckts: IndexMap::new(),
        current: None,
        globals: None,
        top: None,
    };
    for (i, raw) in text.lines().enumerate() {
        p.line = i + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        p.statement(&tokens)?;
    }
    if let Some(sub) = &p.current {
        return Err(NetlistError::Syntax {
            line: p.line.max(1),
            column: 1,
            message: format!("subckt `{}` is missing `.ends`", sub.name),
        });
    }
    let top = match p.top {
        Some(t) => t,
        None => p
            .subckts
            .keys()
            .last()
            .cloned()
            .ok_or_else(|| NetlistError::InvalidDesign("no subckt defined".to_string()))?,
    };
    let design = Design {
        subckts: p.subckts,
        top,
        globals: p.globals.unwrap_or_default(),
    };
    check_design(&design)?;
    Ok(design)
}

#[cfg(test)]
mod tests {
    use super::*;

    const INVERTER: &str = "\
# plain inverter
.subckt inv in out
M1 out in vdd p
M2 out in gnd n
.ends
";

    #[test]
    fn inverter_parses() {
        let d = parse(INVERTER).unwrap();
        assert_eq!(d.subckts.len(), 1);
        assert_eq!(d.top, "inv");
        let inv = &d.subckts["inv"];
        assert_eq!(inv.devices.len(), 2);
        assert_eq!(inv.devices[0].kind, DeviceKind::Pmos);
        assert_eq!(inv.devices[1].source, "gnd");
        assert_eq!(inv.devices[1].line, 4);
    }

    #[test]
    fn gdi_cell_has_two_devices() {
        let src = ".subckt gdi g p n out\nMp out g p p p\nMn out g n n n\n.ends\n";
        let d = parse(src).unwrap();
        let gdi = &d.subckts["gdi"];
        assert_eq!(gdi.devices.len(), 2);
        assert_eq!(gdi.devices[0].bulk.as_deref(), Some("p"));
        assert_eq!(gdi.devices[0].gate, gdi.devices[1].gate);
    }

    #[test]
    fn missing_terminal_is_a_syntax_error_on_its_line() {
        let src = ".subckt bad in out\nM0 out in gnd n\nM1 out in vdd\n.ends\n";
        match parse(src) {
            Err(NetlistError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sizes_and_case() {
        let src = ".subckt s a b\nm7 a b gnd N W=4 l=3\n.ends\n";
        let d = parse(src).unwrap();
        let m = &d.subckts["s"].devices[0];
        assert_eq!((m.width, m.length), (4.0, 3.0));
        assert_eq!(m.kind, DeviceKind::Nmos);
    }

    #[test]
    fn bad_sizes_are_rejected() {
        for attr in ["w=0", "w=-1", "l=abc", "w=inf", "q=2", "w=2 w=3"] {
            let src = format!(".subckt s a b\nM1 a b gnd n {attr}\n.ends\n");
            assert!(matches!(parse(&src), Err(NetlistError::Syntax { line: 2, .. })), "{attr}");
        }
    }

    #[test]
    fn unknown_subckt() {
        let src = ".subckt top a\nX1 a nothere\n.ends\n";
        assert!(matches!(
            parse(src),
            Err(NetlistError::UnknownSubckt { line: 2, .. })
        ));
    }

    #[test]
    fn arity_mismatch() {
        let src = ".subckt leaf a b\n.ends\n.subckt top a\nX1 a leaf\n.ends\n";
        assert!(matches!(
            parse(src),
            Err(NetlistError::ArityMismatch {
                line: 4,
                expected: 2,
                found: 1,
                ..
            })
        ));
    }

    #[test]
    fn duplicates() {
        let twice = ".subckt a x\n.ends\n.subckt a x\n.ends\n";
        assert!(matches!(parse(twice), Err(NetlistError::Duplicate { line: 3, .. })));
        let dev = ".subckt a x\nM1 x x gnd n\nM1 x x gnd n\n.ends\n";
        assert!(matches!(parse(dev), Err(NetlistError::Duplicate { line: 3, .. })));
        let port = ".subckt a x x\n.ends\n";
        assert!(matches!(parse(port), Err(NetlistError::Duplicate { line: 1, .. })));
    }

    #[test]
    fn cycles_are_rejected() {
        let src = ".subckt a x\nX1 x b\n.ends\n.subckt b x\nX1 x a\n.ends\n";
        assert!(matches!(parse(src), Err(NetlistError::Cycle(_))));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(parse(""), Err(NetlistError::InvalidDesign(_))));
        assert!(matches!(
            parse(".subckt a x\n"),
            Err(NetlistError::Syntax { .. })
        ));
        assert!(matches!(
            parse(".top zz\n.subckt a x\n.ends\n"),
            Err(NetlistError::InvalidDesign(_))
        ));
        assert!(matches!(
            parse(".global v v\n.subckt a x\n.ends\n"),
            Err(NetlistError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse("R1 a b 10k\n"),
            Err(NetlistError::Syntax { line: 1, column: 1, .. })
        ));
        assert!(matches!(
            parse("M1 a b c n\n"),
            Err(NetlistError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn direction_directives() {
        let src = ".subckt inv in out\n.inputs in\n.outputs out\nM1 out in vdd p\nM2 out in gnd n\n.ends\n";
        let d = parse(src).unwrap();
        assert_eq!(d.subckts["inv"].inputs, vec!["in"]);
        assert_eq!(d.subckts["inv"].outputs, vec!["out"]);
        let bad = ".subckt inv in out\n.inputs nope\n.ends\n";
        assert!(matches!(parse(bad), Err(NetlistError::Syntax { line: 2, column: 9, .. })));
    }

    #[test]
    fn columns_are_reported() {
        let src = ".subckt s a\n  M1 a a gnd q\n.ends\n";
        match parse(src) {
            Err(NetlistError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 14)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
