// SPDX-License-Identifier: Apache-2.0

use addersim_core::cells::{cell_spec, reference_adder, ADDERS};
use addersim_core::metrics::ModelParams;
use addersim_core::netlist::flatten;
use addersim_core::sim::{run_transient, settle, Stimulus};
use addersim_core::strength::Signal;

fn count8(p: &ModelParams) -> Stimulus {
    Stimulus::counting(&["a", "b", "c"], p.period_fs())
}

#[test]
fn per_period_levels_follow_the_truth_table() {
    let p = ModelParams::default();
    for name in ["conv28", "p12", "p10", "p8", "serf10", "chow8"] {
        let flat = flatten(&cell_spec(name).unwrap().build()).unwrap();
        let stim = count8(&p);
        let trace = run_transient(&flat, &stim, &p).unwrap();
        let (sum, cout) = (trace.net("sum").unwrap(), trace.net("cout").unwrap());
        for row in &stim.rows {
            let end = row.time_fs + p.period_fs() - 1;
            let (s, c) = reference_adder(row.values[0], row.values[1], row.values[2]);
            assert_eq!(trace.value_at(sum, end).level.as_bool(), Some(s), "{name} {:?}", row.values);
            assert_eq!(trace.value_at(cout, end).level.as_bool(), Some(c), "{name} {:?}", row.values);
        }
    }
}

#[test]
fn settled_transient_matches_settle_from_previous_state() {
    let p = ModelParams::default();
    for spec in ADDERS {
        let flat = flatten(&spec.build()).unwrap();
        let stim = count8(&p);
        let trace = run_transient(&flat, &stim, &p).unwrap();
        let bound = stim.bind(&flat).unwrap();
        let mut state = vec![Signal::POWER_ON; flat.nets.len()];
        for (row, inputs) in stim.rows.iter().zip(&bound) {
            state = addersim_core::sim::settle_from(&flat, &state, inputs, &p).unwrap().signals;
            let end = row.time_fs + p.period_fs() - 1;
            for out in flat.outputs() {
                let held = trace.value_at(out, end);
                if spec.name == "p6" {
                    // A floating node that gates its own discharge path keeps
                    // its charge in the transient; settling from X cannot
                    // rule the discharge out. Definite levels must agree.
                    if state[out].level.is_definite() {
                        assert_eq!(held.level, state[out].level, "{:?}", row.values);
                    }
                } else {
                    assert_eq!(held, state[out], "{} {:?}", spec.name, row.values);
                }
            }
        }
    }
}

#[test]
fn repeated_vector_produces_no_events() {
    let p = ModelParams::default();
    for spec in ADDERS {
        let flat = flatten(&spec.build()).unwrap();
        for k in 0..8 {
            let csv = format!(
                "a,b,c\n{0},{1},{2}\n{0},{1},{2}\n",
                k >> 2 & 1,
                k >> 1 & 1,
                k & 1
            );
            let stim = Stimulus::parse_csv(&csv, p.period_fs()).unwrap();
            let trace = run_transient(&flat, &stim, &p).unwrap();
            let late = trace.window(p.period_fs(), trace.end_fs());
            assert_eq!(late.transition_count(), 0, "{} vector {k}", spec.name);
        }
    }
}

#[test]
fn traces_are_deterministic() {
    let p = ModelParams::default();
    let flat = flatten(&cell_spec("p12").unwrap().build()).unwrap();
    let stim = count8(&p).repeated(2);
    let a = run_transient(&flat, &stim, &p).unwrap().to_csv();
    let b = run_transient(&flat, &stim, &p).unwrap().to_csv();
    assert_eq!(a, b);
}

#[test]
fn settle_is_idempotent_on_the_corpus() {
    let p = ModelParams::default();
    for spec in ADDERS {
        let flat = flatten(&spec.build()).unwrap();
        for inputs in count8(&p).bind(&flat).unwrap() {
            let once = settle(&flat, &inputs, &p).unwrap();
            let twice = addersim_core::sim::settle_from(&flat, &once.signals, &inputs, &p).unwrap();
            assert_eq!(once.signals, twice.signals, "{}", spec.name);
        }
    }
}
