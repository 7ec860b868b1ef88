// SPDX-License-Identifier: Apache-2.0

mod common;

use addersim_core::cells::{corpus, ADDERS};
use addersim_core::metrics::ModelParams;
use addersim_core::netlist::{parse, serialize};
use addersim_core::oracle::verify_cell;
use addersim_core::sim::{Stimulus, FS_PER_NS};
use common::check_golden;

#[test]
fn cell_netlists_match_builders() {
    for spec in corpus() {
        check_golden(&format!("cells/{}.sp", spec.name), &serialize(&spec.build()));
    }
}

#[test]
fn cell_netlists_round_trip() {
    for spec in corpus() {
        let text = serialize(&spec.build());
        let parsed = parse(&text).unwrap();
        assert_eq!(parsed, spec.build(), "{}", spec.name);
        assert_eq!(serialize(&parsed), text, "{}", spec.name);
    }
}

#[test]
fn counting_stimulus() {
    let s = Stimulus::counting(&["a", "b", "c"], 10 * FS_PER_NS);
    check_golden("stimuli/count8.csv", &s.to_csv());
}

#[test]
fn expectation_tables() {
    let p = ModelParams::default();
    for spec in corpus() {
        let report = verify_cell(spec.name, &p).unwrap();
        check_golden(&format!("goldens/expectations/{}.csv", spec.name), &report.to_csv());
        check_golden(&format!("goldens/hazards/{}.csv", spec.name), &report.hazards_csv());
    }
}

#[test]
fn four_adders_and_serf_are_level_correct() {
    let p = ModelParams::default();
    for spec in ADDERS.iter().filter(|s| s.name != "p6") {
        assert!(verify_cell(spec.name, &p).unwrap().all_levels_correct(), "{}", spec.name);
    }
}
