// SPDX-License-Identifier: Apache-2.0

//! Discrete signal algebra: logic levels, drive strengths, resolution of
//! competing drivers, and threshold degradation through pass devices.

use std::fmt;
use std::str::FromStr;

use crate::netlist::DeviceKind;

/// Logic level carried by a net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    L0,
    L1,
    LX,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::L0, Level::L1, Level::LX];

    pub fn from_bool(b: bool) -> Self {
        if b {
            Level::L1
        } else {
            Level::L0
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Level::L0 => Some(false),
            Level::L1 => Some(true),
            Level::LX => None,
        }
    }

    pub fn is_definite(self) -> bool {
        self != Level::LX
    }
}

/// Drive strength, ordered weakest first.
///
/// `Weak` stands for a level that went through a threshold drop
/// (Vdd - Vtn for a '1' through NMOS, |Vtp| for a '0' through PMOS).
/// `Charged` is a level held only by node capacitance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strength {
    Floating = 0,
    Charged = 1,
    Weak = 2,
    Strong = 3,
}

impl Strength {
    pub const ALL: [Strength; 4] = [
        Strength::Floating,
        Strength::Charged,
        Strength::Weak,
        Strength::Strong,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signal {
    pub level: Level,
    pub strength: Strength,
}

impl Signal {
    pub const fn new(level: Level, strength: Strength) -> Self {
        Signal { level, strength }
    }

    pub const STRONG_0: Signal = Signal::new(Level::L0, Strength::Strong);
    pub const STRONG_1: Signal = Signal::new(Level::L1, Strength::Strong);
    pub const STRONG_X: Signal = Signal::new(Level::LX, Strength::Strong);
    /// Power-on state of every non-supply net.
    pub const POWER_ON: Signal = Signal::new(Level::LX, Strength::Floating);

    /// Ideal input driver for a boolean value.
    pub fn driven(b: bool) -> Self {
        Signal::new(Level::from_bool(b), Strength::Strong)
    }

    /// Every representable signal; the finite domain the lattice laws are
    /// checked over.
    pub fn all() -> impl Iterator<Item = Signal> {
        Level::ALL
            .into_iter()
            .flat_map(|l| Strength::ALL.into_iter().map(move |s| Signal::new(l, s)))
    }

    /// Dense index in `0..Signal::COUNT`.
    pub fn index(self) -> usize {
        self.level as usize * 4 + self.strength as usize
    }

    pub const COUNT: usize = 12;

    pub fn from_index(i: usize) -> Signal {
        Signal::new(Level::ALL[i / 4], Strength::ALL[i % 4])
    }

    /// What the node keeps once every driver lets go of it.
    pub fn retained(self) -> Signal {
        match self.strength {
            Strength::Floating => self,
            _ => Signal::new(self.level, Strength::Charged),
        }
    }

    fn capped(self, cap: Strength) -> Signal {
        Signal::new(self.level, self.strength.min(cap))
    }
}

/// Join of two simultaneous drivers: the stronger wins, equal strengths with
/// different levels collide to `LX`.
pub fn resolve(a: Signal, b: Signal) -> Signal {
    use std::cmp::Ordering::*;
    match a.strength.cmp(&b.strength) {
        Greater => a,
        Less => b,
        Equal if a.level == b.level => a,
        Equal => Signal::new(Level::LX, a.strength),
    }
}

/// Threshold drop across a conducting device: NMOS cannot pass a full '1',
/// PMOS cannot pass a full '0'. One drop is the whole penalty; passing the
/// result through more devices of either kind changes nothing further.
pub fn degrade(kind: DeviceKind, s: Signal) -> Signal {
    match (kind, s.level) {
        (_, Level::LX) => s.capped(Strength::Weak),
        (DeviceKind::Nmos, Level::L1) | (DeviceKind::Pmos, Level::L0) => {
            s.capped(Strength::Weak)
        }
        _ => s,
    }
}

/// Signal seen on the far side of a conducting device. Ratioed devices
/// (drawn with W < L) are always overpowered by a full-size device, so they
/// never deliver more than `Weak`.
pub fn conduct(kind: DeviceKind, ratioed: bool, s: Signal) -> Signal {
    let s = degrade(kind, s);
    if ratioed {
        s.capped(Strength::Weak)
    } else {
        s
    }
}

/// Merge of the results of two conduction hypotheses for a device whose gate
/// is unknown: agreeing levels survive, disagreement becomes `LX`.
pub fn merge_hypotheses(a: Signal, b: Signal) -> Signal {
    let level = if a.level == b.level {
        a.level
    } else {
        Level::LX
    };
    Signal::new(level, a.strength.max(b.strength))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SwitchState {
    On,
    Off,
    Unknown,
}

/// Conduction of a device given its gate signal. Only the level matters: a
/// weak or charged '1' still turns an NMOS on.
pub fn gate_state(kind: DeviceKind, gate: Signal) -> SwitchState {
    match (kind, gate.level) {
        (_, Level::LX) => SwitchState::Unknown,
        (DeviceKind::Nmos, Level::L1) | (DeviceKind::Pmos, Level::L0) => SwitchState::On,
        _ => SwitchState::Off,
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.level {
            Level::L0 => "0",
            Level::L1 => "1",
            Level::LX => "X",
        };
        match (self.level, self.strength) {
            (Level::LX, Strength::Floating) => f.write_str("Z"),
            (_, Strength::Strong) => f.write_str(level),
            (_, Strength::Weak) => write!(f, "{level}w"),
            (_, Strength::Charged) => write!(f, "{level}c"),
            (_, Strength::Floating) => write!(f, "{level}z"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid signal token `{0}`")]
pub struct ParseSignalError(pub String);

impl FromStr for Signal {
    type Err = ParseSignalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "Z" {
            return Ok(Signal::POWER_ON);
        }
        let mut chars = s.chars();
        let level = match chars.next() {
            Some('0') => Level::L0,
            Some('1') => Level::L1,
            Some('X') => Level::LX,
            _ => return Err(ParseSignalError(s.to_string())),
        };
        let strength = match chars.as_str() {
            "" => Strength::Strong,
            "w" => Strength::Weak,
            "c" => Strength::Charged,
            "z" if level != Level::LX => Strength::Floating,
            _ => return Err(ParseSignalError(s.to_string())),
        };
        Ok(Signal::new(level, strength))
    }
}
