// SPDX-License-Identifier: Apache-2.0

//! Area, delay and dynamic-power estimates over simulated traces.

mod report;

pub use report::{build_report, measure_design, DesignMetrics, MetricsReport, ReportRow, CSV_HEADER};

use crate::netlist::{FlatNetlist, NetKind};
use crate::sim::{SimError, Trace, FS_PER_NS};
use crate::strength::{Level, Signal, Strength};

/// Electrical and layout constants used by the estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Supply voltage, V.
    pub vdd: f64,
    pub vtn: f64,
    /// Magnitude of the PMOS threshold, V.
    pub vtp: f64,
    /// NMOS on-resistance per square, ohm.
    pub rn: f64,
    pub rp: f64,
    /// Capacitance per gate terminal, F.
    pub cg: f64,
    /// Capacitance per drain or source terminal, F.
    pub csd: f64,
    /// Operating frequency, Hz. Sets the vector period unless `period_ns` does.
    pub freq: f64,
    pub period_ns: Option<f64>,
    /// Area per unit of W*L, accounting for diffusion and spacing.
    pub k_layout: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            vdd: 1.8,
            vtn: 0.4,
            vtp: 0.4,
            rn: 10e3,
            rp: 20e3,
            cg: 2e-15,
            csd: 1e-15,
            freq: 1e8,
            period_ns: None,
            k_layout: 8.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("trace has zero duration")]
    ZeroDuration,
    #[error("design has no net named `{0}`")]
    MissingNet(String),
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl ModelParams {
    pub fn validate(&self) -> Result<(), MetricsError> {
        let positive = [
            ("vdd", self.vdd),
            ("vtn", self.vtn),
            ("vtp", self.vtp),
            ("rn", self.rn),
            ("rp", self.rp),
            ("cg", self.cg),
            ("csd", self.csd),
            ("freq", self.freq),
            ("k_layout", self.k_layout),
            ("period_ns", self.period_ns.unwrap_or(1.0)),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(MetricsError::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        if self.vtn >= self.vdd || self.vtp >= self.vdd {
            return Err(MetricsError::InvalidParams("thresholds must be below vdd".into()));
        }
        if self.period_fs() == 0 {
            return Err(MetricsError::InvalidParams("vector period rounds to zero".into()));
        }
        Ok(())
    }

    pub fn period_ns(&self) -> f64 {
        self.period_ns.unwrap_or(1e9 / self.freq)
    }

    pub fn period_fs(&self) -> u64 {
        (self.period_ns() * FS_PER_NS as f64).round() as u64
    }

    /// `r * c` rounded to whole femtoseconds.
    pub fn delay_fs(&self, r: f64, c: f64) -> u64 {
        let tau = r * c * 1e15;
        if tau.is_finite() {
            tau.round() as u64
        } else {
            0
        }
    }

    /// Summed terminal capacitance per net. Bulk terminals carry none.
    pub fn net_capacitance(&self, flat: &FlatNetlist) -> Vec<f64> {
        let mut cap = vec![0.0; flat.nets.len()];
        for d in &flat.devices {
            cap[d.gate] += self.cg;
            cap[d.drain] += self.csd;
            cap[d.source] += self.csd;
        }
        cap
    }

    /// Nominal voltage of a definite signal; `None` for `X`.
    pub fn voltage(&self, sig: Signal) -> Option<f64> {
        match (sig.level, sig.strength) {
            (Level::LX, _) => None,
            (Level::L0, Strength::Weak) => Some(self.vtp),
            (Level::L1, Strength::Weak) => Some(self.vdd - self.vtn),
            (Level::L0, _) => Some(0.0),
            (Level::L1, _) => Some(self.vdd),
        }
    }

    /// Voltage swing of one transition; anything touching `X` counts as a
    /// full swing.
    pub fn swing(&self, from: Signal, to: Signal) -> f64 {
        match (self.voltage(from), self.voltage(to)) {
            (Some(a), Some(b)) => (a - b).abs(),
            _ if from == to => 0.0,
            _ => self.vdd,
        }
    }
}

/// Summed capacitance of every net other than the supplies.
pub fn total_capacitance(flat: &FlatNetlist, params: &ModelParams) -> f64 {
    params
        .net_capacitance(flat)
        .iter()
        .zip(&flat.nets)
        .filter(|(_, n)| !matches!(n.kind, NetKind::SupplyHigh | NetKind::SupplyLow))
        .map(|(c, _)| c)
        .sum()
}

/// Switching energy of a trace in joules: half C dV^2 per transition.
pub fn switching_energy(trace: &Trace, flat: &FlatNetlist, params: &ModelParams) -> f64 {
    let cap = params.net_capacitance(flat);
    let mut energy = 0.0;
    for (net, changes) in trace.changes.iter().enumerate() {
        let mut prev = trace.initial[net];
        for &(_, sig) in changes {
            let dv = params.swing(prev, sig);
            energy += 0.5 * cap[net] * dv * dv;
            prev = sig;
        }
    }
    energy
}

/// Average dynamic power over the trace, µW.
pub fn estimate_power(trace: &Trace, flat: &FlatNetlist, params: &ModelParams) -> Result<f64, MetricsError> {
    if trace.duration_fs == 0 {
        return Err(MetricsError::ZeroDuration);
    }
    let seconds = trace.duration_fs as f64 * 1e-15;
    Ok(switching_energy(trace, flat, params) / seconds * 1e6)
}

/// Layout area estimate, λ².
pub fn estimate_area(flat: &FlatNetlist, params: &ModelParams) -> f64 {
    params.k_layout * flat.devices.iter().map(|d| d.width * d.length).sum::<f64>()
}

/// Worst settling time of `cout` after a vector is applied, ns. Periods in
/// which `cout` does not move contribute nothing.
pub fn extract_cout_delay(trace: &Trace) -> Result<f64, MetricsError> {
    let net = trace.net("cout").ok_or_else(|| MetricsError::MissingNet("cout".into()))?;
    let mut worst = 0;
    for (i, &start) in trace.vector_times.iter().enumerate() {
        let end = trace.vector_times.get(i + 1).copied().unwrap_or(trace.end_fs());
        if let Some(&(last, _)) = trace.changes[net].iter().rev().find(|(t, _)| (start..end).contains(t)) {
            worst = worst.max(last - start);
        }
    }
    Ok(worst as f64 / FS_PER_NS as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{flatten, parse};
    use approx::assert_relative_eq;

    fn one_net(cap_ff: u32) -> (FlatNetlist, ModelParams) {
        // `cap_ff` drain terminals on y
        let mut src = String::from(".subckt t a y\n.inputs a\n.outputs y\n");
        for i in 0..cap_ff {
            src.push_str(&format!("M{i} y a y n\n"));
        }
        src.push_str(".ends\n");
        let mut p = ModelParams::default();
        p.cg = 0.0;
        (flatten(&parse(&src).unwrap()).unwrap(), p)
    }

    #[test]
    fn full_swing_toggle_energy() {
        // M y a y: drain and source both on y, so two terminals per device
        let (f, p) = one_net(1);
        let y = f.net("y").unwrap();
        let mut t = Trace::new(f.nets.iter().map(|n| n.name.clone()).collect(), vec![Signal::STRONG_0; f.nets.len()], 0, 10 * FS_PER_NS);
        t.record(1000, y, Signal::STRONG_1);
        // 2 fF, 1.8 V: 3.24 fJ over 10 ns
        assert_relative_eq!(estimate_power(&t, &f, &p).unwrap(), 0.324, max_relative = 1e-12);
        t.duration_fs = 0;
        assert_eq!(estimate_power(&t, &f, &p), Err(MetricsError::ZeroDuration));
    }

    #[test]
    fn swings() {
        let p = ModelParams::default();
        let w1 = "1w".parse().unwrap();
        let w0 = "0w".parse().unwrap();
        assert_relative_eq!(p.swing(Signal::STRONG_0, Signal::STRONG_1), 1.8);
        assert_relative_eq!(p.swing(Signal::STRONG_0, w1), 1.4);
        assert_relative_eq!(p.swing(w0, Signal::STRONG_1), 1.4);
        assert_relative_eq!(p.swing(Signal::POWER_ON, Signal::STRONG_1), 1.8);
        assert_relative_eq!(p.swing(Signal::STRONG_1, "1c".parse().unwrap()), 0.0);
    }

    #[test]
    fn period_and_delay() {
        let p = ModelParams::default();
        assert_eq!(p.period_fs(), 10 * FS_PER_NS);
        assert_eq!(p.delay_fs(10e3, 2e-15), 20_000);
        let q = ModelParams {
            period_ns: Some(4.0),
            ..ModelParams::default()
        };
        assert_eq!(q.period_fs(), 4 * FS_PER_NS);
    }

    #[test]
    fn invalid_params() {
        for p in [
            ModelParams { vtn: 2.0, ..Default::default() },
            ModelParams { vdd: -1.0, ..Default::default() },
            ModelParams { freq: 0.0, ..Default::default() },
            ModelParams { period_ns: Some(f64::NAN), ..Default::default() },
        ] {
            assert!(p.validate().is_err(), "{p:?}");
        }
        assert!(ModelParams::default().validate().is_ok());
    }

    #[test]
    fn area_is_additive() {
        let (one, p) = one_net(1);
        let (two, _) = one_net(2);
        assert_relative_eq!(estimate_area(&two, &p), 2.0 * estimate_area(&one, &p));
        assert_relative_eq!(estimate_area(&one, &p), 32.0);
    }

    #[test]
    fn cout_delay_is_worst_period() {
        let names = vec!["cout".to_string()];
        let mut t = Trace::new(names, vec![Signal::STRONG_0], 0, 30 * FS_PER_NS);
        t.vector_times = vec![0, 10 * FS_PER_NS, 20 * FS_PER_NS];
        t.record(100_000, 0, Signal::STRONG_1);
        t.record(10 * FS_PER_NS + 50_000, 0, Signal::STRONG_0);
        t.record(10 * FS_PER_NS + 120_000, 0, Signal::STRONG_1);
        assert_relative_eq!(extract_cout_delay(&t).unwrap(), 0.12);
        let quiet = Trace::new(vec!["cout".into()], vec![Signal::STRONG_0], 0, 10);
        assert_eq!(extract_cout_delay(&quiet).unwrap(), 0.0);
        let none = Trace::new(vec!["y".into()], vec![Signal::STRONG_0], 0, 10);
        assert!(extract_cout_delay(&none).is_err());
    }
}
