// SPDX-License-Identifier: Apache-2.0

use addersim_core::cells::corpus;
use addersim_core::metrics::ModelParams;
use addersim_core::netlist::flatten;
use addersim_core::oracle::{all_vectors, check_identities, path_enumerate, verify_cell, Status};
use addersim_core::sim::settle;
use addersim_core::strength::{Level, Signal, Strength};

#[test]
fn settle_agrees_with_path_enumeration_on_every_net() {
    let p = ModelParams::default();
    let mut compared = 0;
    for spec in corpus() {
        let flat = flatten(&spec.build()).unwrap();
        for v in all_vectors(spec.inputs.len()) {
            let inputs: Vec<Signal> = v.iter().map(|&b| Signal::driven(b)).collect();
            let fast = settle(&flat, &inputs, &p).unwrap().signals;
            let slow = path_enumerate(&flat, &inputs).unwrap();
            assert_eq!(fast, slow, "{} {:?}", spec.name, v);
            compared += 1;
        }
    }
    assert_eq!(compared, 72);
}

#[test]
fn agreement_holds_with_unknown_inputs() {
    let p = ModelParams::default();
    let choices = [Signal::STRONG_0, Signal::STRONG_1, Signal::STRONG_X];
    let mut compared = 0;
    for spec in corpus() {
        let flat = flatten(&spec.build()).unwrap();
        let n = spec.inputs.len();
        for k in 0..3usize.pow(n as u32) {
            let inputs: Vec<Signal> = (0..n).map(|i| choices[k / 3usize.pow(i as u32) % 3]).collect();
            // conv28 with X inputs leaves too many unknown gates to enumerate
            let Ok(slow) = path_enumerate(&flat, &inputs) else {
                continue;
            };
            assert_eq!(settle(&flat, &inputs, &p).unwrap().signals, slow, "{} {inputs:?}", spec.name);
            compared += 1;
        }
    }
    assert!(compared > 200, "{compared}");
}

#[test]
fn p8_carry_degrades_where_expected() {
    let r = verify_cell("p8", &ModelParams::default()).unwrap();
    for row in &r.rows {
        let (a, b, c) = (row.inputs[0], row.inputs[1], row.inputs[2]);
        let carry = row.observed[1];
        if !a && !b {
            assert_eq!(carry, Signal::new(Level::L0, Strength::Weak), "{:?}", row.inputs);
        } else if a != b && c {
            assert_eq!(carry, Signal::new(Level::L1, Strength::Weak), "{:?}", row.inputs);
        } else {
            assert_eq!(carry.strength, Strength::Strong, "{:?}", row.inputs);
        }
    }
}

#[test]
fn p8_passes_a_full_one_through_the_pmos() {
    let r = verify_cell("p8", &ModelParams::default()).unwrap();
    let row = r.rows.iter().find(|r| r.inputs == [true, true, false]).unwrap();
    assert_eq!(row.observed[1], Signal::STRONG_1);
}

#[test]
fn xor_and_inverter_primitives() {
    let p = ModelParams::default();
    let xor = verify_cell("xor3", &p).unwrap();
    assert!(xor.all_levels_correct());
    let tsinv = verify_cell("tsinv", &p).unwrap();
    for row in tsinv.rows.iter().filter(|r| r.inputs[1]) {
        assert_eq!(row.observed[0], Signal::driven(!row.inputs[0]));
    }
}

#[test]
fn gdi_matches_mux_function_in_level() {
    let r = verify_cell("gdi", &ModelParams::default()).unwrap();
    assert!(r.rows.iter().all(|row| row.status() <= Status::WeakCorrect));
    let row = r.rows.iter().find(|r| r.inputs == [true, false, true]).unwrap();
    assert_eq!(row.observed[0].to_string(), "1w");
}

#[test]
fn identities() {
    let checks = check_identities();
    assert!(checks.iter().all(|c| c.passed()));
    let neg = checks.last().unwrap();
    assert!(neg.mismatches.contains(&vec![false, true]));
}
