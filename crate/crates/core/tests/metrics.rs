// SPDX-License-Identifier: Apache-2.0

use addersim_core::cells::{cell_spec, ADDERS};
use addersim_core::metrics::{
    build_report, estimate_area, estimate_power, measure_design, switching_energy, total_capacitance, ModelParams,
};
use addersim_core::netlist::flatten;
use addersim_core::sim::{run_transient, Stimulus, Trace};
use addersim_core::strength::Signal;
use approx::assert_relative_eq;

fn corpus_report(p: &ModelParams) -> addersim_core::metrics::MetricsReport {
    let designs: Vec<_> = ADDERS
        .iter()
        .map(|s| (s.name.to_string(), flatten(&s.build()).map_err(|e| e.to_string())))
        .collect();
    build_report(&designs, p)
}

#[test]
fn transistor_column() {
    let r = corpus_report(&ModelParams::default());
    let counts: Vec<usize> = r.rows.iter().map(|row| row.result.as_ref().unwrap().transistors).collect();
    assert_eq!(counts, [28, 8, 10, 12, 8, 10, 6]);
}

#[test]
fn pdp_is_power_times_delay() {
    let r = corpus_report(&ModelParams::default());
    for row in &r.rows {
        let m = row.result.as_ref().unwrap();
        assert_relative_eq!(m.pdp_uw_ns, m.avg_power_uw * m.cout_delay_ns, max_relative = 1e-9);
    }
    // and after a round trip through the CSV text
    let text = r.to_csv();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    for rec in reader.records() {
        let rec = rec.unwrap();
        let f = |i: usize| rec[i].parse::<f64>().unwrap();
        assert_relative_eq!(f(5), f(4) * f(3), max_relative = 1e-9);
    }
}

#[test]
fn smallest_cell_has_least_power_and_area() {
    let p = ModelParams::default();
    let r = corpus_report(&p);
    let p6 = r.rows.iter().find(|row| row.design == "p6").unwrap().result.clone().unwrap();
    for row in &r.rows {
        let m = row.result.as_ref().unwrap();
        if row.design != "p6" {
            assert!(p6.avg_power_uw < m.avg_power_uw, "{}", row.design);
            assert!(p6.area_lambda2 < m.area_lambda2, "{}", row.design);
        }
    }
}

#[test]
fn every_proposed_design_has_less_capacitance_than_conv28() {
    let p = ModelParams::default();
    let conv = total_capacitance(&flatten(&cell_spec("conv28").unwrap().build()).unwrap(), &p);
    for name in ["p12", "p10", "p8", "p6"] {
        let c = total_capacitance(&flatten(&cell_spec(name).unwrap().build()).unwrap(), &p);
        assert!(c < conv, "{name}");
    }
}

#[test]
fn conv28_delay_is_in_a_plausible_range() {
    let p = ModelParams::default();
    let m = measure_design(&flatten(&cell_spec("conv28").unwrap().build()).unwrap(), &p).unwrap();
    assert!(m.cout_delay_ns > 0.0366 && m.cout_delay_ns < 3.66, "{}", m.cout_delay_ns);
    assert_eq!(m.hazards, 0);
}

#[test]
fn area_ratio_follows_device_count() {
    let p = ModelParams::default();
    let a = |n: &str| estimate_area(&flatten(&cell_spec(n).unwrap().build()).unwrap(), &p);
    // one long pull-down per XOR stage
    assert_relative_eq!(a("conv28"), 8.0 * 28.0 * 4.0);
    assert_relative_eq!(a("p12"), 8.0 * (12.0 * 4.0 + 2.0 * 4.0));
}

fn p12_trace(p: &ModelParams) -> (addersim_core::netlist::FlatNetlist, Trace) {
    let flat = flatten(&cell_spec("p12").unwrap().build()).unwrap();
    let stim = Stimulus::counting(&["a", "b", "c"], p.period_fs());
    let t = run_transient(&flat, &stim, p).unwrap();
    (flat, t)
}

#[test]
fn energy_is_linear_in_capacitance() {
    let p = ModelParams::default();
    let (flat, trace) = p12_trace(&p);
    let doubled = ModelParams {
        cg: 2.0 * p.cg,
        csd: 2.0 * p.csd,
        ..p.clone()
    };
    assert_relative_eq!(
        switching_energy(&trace, &flat, &doubled),
        2.0 * switching_energy(&trace, &flat, &p),
        max_relative = 1e-12
    );
}

#[test]
fn power_ignores_time_shift() {
    let p = ModelParams::default();
    let (flat, trace) = p12_trace(&p);
    let mut shifted = trace.clone();
    shifted.start_fs += 5_000_000;
    for c in &mut shifted.changes {
        for e in c.iter_mut() {
            e.0 += 5_000_000;
        }
    }
    assert_eq!(estimate_power(&trace, &flat, &p), estimate_power(&shifted, &flat, &p));
}

#[test]
fn power_counts_toggles() {
    let p = ModelParams::default();
    let (flat, _) = p12_trace(&p);
    let names: Vec<String> = flat.nets.iter().map(|n| n.name.clone()).collect();
    let x = flat.net("x").unwrap();
    let toggles = |k: u64| {
        let mut t = Trace::new(names.clone(), vec![Signal::STRONG_0; flat.nets.len()], 0, 100_000_000);
        for i in 0..k {
            t.record(i * 1000 + 1, x, Signal::driven(i % 2 == 0));
        }
        estimate_power(&t, &flat, &p).unwrap()
    };
    assert_eq!(toggles(0), 0.0);
    assert_relative_eq!(toggles(6), 3.0 * toggles(2), max_relative = 1e-12);
}
