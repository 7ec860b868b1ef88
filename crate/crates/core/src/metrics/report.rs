// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;

use rayon::prelude::*;

use crate::netlist::FlatNetlist;
use crate::sim::{detect_hazards, run_transient, Stimulus};

use super::{estimate_area, estimate_power, extract_cout_delay, MetricsError, ModelParams};

pub const CSV_HEADER: &str = "design,transistors,area_lambda2,cout_delay_ns,avg_power_uw,pdp_uw_ns";

#[derive(Debug, Clone, PartialEq)]
pub struct DesignMetrics {
    pub transistors: usize,
    pub area_lambda2: f64,
    pub cout_delay_ns: f64,
    pub avg_power_uw: f64,
    pub pdp_uw_ns: f64,
    /// Hazards summed over every input vector.
    pub hazards: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub design: String,
    pub result: Result<DesignMetrics, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub rows: Vec<ReportRow>,
}

/// Measures one design under the binary counting sequence over its inputs.
///
/// The sequence is played twice and only the second pass is measured, so
/// power-on transitions do not count.
pub fn measure_design(flat: &FlatNetlist, params: &ModelParams) -> Result<DesignMetrics, MetricsError> {
    params.validate()?;
    let names: Vec<&str> = flat.inputs().into_iter().map(|n| flat.net_name(n)).collect();
    let once = Stimulus::counting(&names, params.period_fs());
    let trace = run_transient(flat, &once.repeated(2), params)?;
    let second = trace.window(once.duration_fs(), trace.end_fs());
    let avg_power_uw = estimate_power(&second, flat, params)?;
    let cout_delay_ns = extract_cout_delay(&second)?;
    let mut hazards = 0;
    for signals in once.bind(flat)? {
        hazards += detect_hazards(flat, &signals, params)?.len();
    }
    Ok(DesignMetrics {
        transistors: flat.count_transistors(),
        area_lambda2: estimate_area(flat, params),
        cout_delay_ns,
        avg_power_uw,
        pdp_uw_ns: avg_power_uw * cout_delay_ns,
        hazards,
    })
}

/// One row per design, in the given order. Designs are measured in
/// parallel; a design that failed to load or simulate keeps its row with
/// the error message.
pub fn build_report(designs: &[(String, Result<FlatNetlist, String>)], params: &ModelParams) -> MetricsReport {
    let rows = designs
        .par_iter()
        .map(|(name, flat)| ReportRow {
            design: name.clone(),
            result: flat
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|f| measure_design(f, params).map_err(|e| e.to_string())),
        })
        .collect();
    MetricsReport { rows }
}

impl MetricsReport {
    pub fn succeeded(&self) -> usize {
        self.rows.iter().filter(|r| r.result.is_ok()).count()
    }

    /// CSV with full-precision numbers; failed rows leave the numeric
    /// fields empty.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER.split(',')).unwrap();
        for row in &self.rows {
            let fields = match &row.result {
                Ok(m) => vec![
                    m.transistors.to_string(),
                    m.area_lambda2.to_string(),
                    m.cout_delay_ns.to_string(),
                    m.avg_power_uw.to_string(),
                    m.pdp_uw_ns.to_string(),
                ],
                Err(_) => vec![String::new(); 5],
            };
            w.write_field(&row.design).unwrap();
            w.write_record(&fields).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from(
            "| design | transistors | area (λ²) | Cout delay (ns) | avg power (µW) | PDP (µW·ns) | hazards |\n\
             |---|---:|---:|---:|---:|---:|---:|\n",
        );
        for row in &self.rows {
            match &row.result {
                Ok(m) => writeln!(
                    out,
                    "| {} | {} | {:.0} | {:.4} | {:.4} | {:.4} | {} |",
                    row.design, m.transistors, m.area_lambda2, m.cout_delay_ns, m.avg_power_uw, m.pdp_uw_ns, m.hazards
                ),
                Err(e) => writeln!(out, "| {} | error: {} | | | | | |", row.design, e.replace('|', "/")),
            }
            .unwrap();
        }
        out.push_str(
            "\nDelay and power are switch-level model estimates (lumped RC delay, \
             half C dV² switching energy over the second pass of the counting sequence), \
             not analog measurements.\n",
        );
        out
    }
}
