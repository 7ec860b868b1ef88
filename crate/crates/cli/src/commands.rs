// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::Write;
use std::path::Path;

use addersim_core::cells::{self, cell_spec, reference_adder, CellSpec};
use addersim_core::metrics::{build_report, estimate_power, extract_cout_delay, ModelParams};
use addersim_core::netlist::{self, flatten, parse, serialize, validate, FlatNetlist, Severity};
use addersim_core::oracle::{verify_cell, verify_flat, VerifyError, VerifyReport};
use addersim_core::sim::{run_transient, SimError, Stimulus};

use crate::config::Format;
use crate::Failure;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::io(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::internal(e.to_string())),
    }
}

fn load(path: &Path) -> Result<FlatNetlist, Failure> {
    let text = read(path)?;
    let design = parse(&text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    flatten(&design).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn sim_failure(e: SimError) -> Failure {
    if e.is_stimulus_error() {
        Failure::stimulus(e.to_string())
    } else {
        Failure::internal(e.to_string())
    }
}

pub fn list() -> Result<u8, Failure> {
    let mut out = String::new();
    for c in cells::corpus() {
        out.push_str(&format!("{:<8} {:>3}T  {}\n", c.name, c.transistors, c.note));
    }
    emit(None, &out)?;
    Ok(0)
}

pub fn netlist(cell: &str, output: Option<&Path>) -> Result<u8, Failure> {
    let design = cells::build_cell(cell).map_err(|e| Failure::parse(e.to_string()))?;
    emit(output, &serialize(&design))?;
    Ok(0)
}

/// Reference for a netlist file: the corpus cell of the same name, or the
/// full-adder function for any design with inputs a, b, c and outputs
/// sum, cout.
fn reference_for(flat: &FlatNetlist) -> Option<(Vec<String>, Box<dyn Fn(&[bool]) -> Vec<bool>>)> {
    if let Some(spec) = cell_spec(&flat.name) {
        let names: Vec<&str> = flat.inputs().into_iter().map(|n| flat.net_name(n)).collect();
        if names == spec.inputs {
            let outputs = spec.outputs.iter().map(|s| s.to_string()).collect();
            return Some((outputs, Box::new(move |v: &[bool]| spec.reference(v))));
        }
    }
    let outputs: Vec<&str> = flat.outputs().into_iter().map(|n| flat.net_name(n)).collect();
    if flat.inputs().len() == 3 && outputs.contains(&"sum") && outputs.contains(&"cout") {
        let adder = |v: &[bool]| {
            let (s, c) = reference_adder(v[0], v[1], v[2]);
            vec![s, c]
        };
        return Some((vec!["sum".into(), "cout".into()], Box::new(adder)));
    }
    None
}

fn verify_failure(e: VerifyError) -> Failure {
    match e {
        VerifyError::Sim(s) => sim_failure(s),
        other => Failure::parse(other.to_string()),
    }
}

pub fn verify(target: &str, params: &ModelParams) -> Result<u8, Failure> {
    let report: VerifyReport = if cell_spec(target).is_some() {
        verify_cell(target, params).map_err(verify_failure)?
    } else {
        let flat = load(Path::new(target))?;
        let (outputs, reference) = reference_for(&flat)
            .ok_or_else(|| Failure::parse(format!("{target}: no reference function for design `{}`", flat.name)))?;
        let outputs: Vec<&str> = outputs.iter().map(String::as_str).collect();
        verify_flat(&flat.name, &flat, &outputs, &*reference, params).map_err(verify_failure)?
    };
    emit(None, &report.render())?;
    Ok(if report.all_levels_correct() { 0 } else { 2 })
}

pub fn sim(netlist: &Path, stimulus: &Path, output: Option<&Path>, params: &ModelParams) -> Result<u8, Failure> {
    let flat = load(netlist)?;
    let text = read(stimulus)?;
    let stim = Stimulus::parse_csv(&text, params.period_fs())
        .map_err(|e| Failure::stimulus(format!("{}: {e}", stimulus.display())))?;
    let trace = run_transient(&flat, &stim, params).map_err(sim_failure)?;
    emit(output, &trace.to_csv())?;

    let mut summary = format!("{}: {} transitions over {} vectors\n", flat.name, trace.transition_count(), stim.rows.len());
    for out in flat.outputs() {
        summary.push_str(&format!(
            "  {}: {} transitions, final {}\n",
            flat.net_name(out),
            trace.changes[out].len(),
            trace.value_at_end(out)
        ));
    }
    if let Ok(delay) = extract_cout_delay(&trace) {
        summary.push_str(&format!("  cout delay: {delay} ns\n"));
    }
    if let Ok(power) = estimate_power(&trace, &flat, params) {
        summary.push_str(&format!("  average power: {power} uW\n"));
    }
    if output.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(0)
}

pub fn lint(path: &Path) -> Result<u8, Failure> {
    let flat = load(path)?;
    let diags = validate(&flat);
    let file = path.display().to_string();
    let mut out = String::new();
    for d in &diags {
        out.push_str(&d.render(&file));
        out.push('\n');
    }
    emit(None, &out)?;
    Ok(if diags.iter().any(|d| d.severity == Severity::Error) { 2 } else { 0 })
}

fn compare_entry(name: &str) -> (String, Result<FlatNetlist, String>) {
    if let Some(spec) = cell_spec(name) {
        return (name.to_string(), flatten(&spec.build()).map_err(|e| e.to_string()));
    }
    let path = Path::new(name);
    let loaded = fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|t| parse(&t).map_err(|e| e.to_string()))
        .and_then(|d| netlist::flatten(&d).map_err(|e| e.to_string()));
    let label = match &loaded {
        Ok(f) => f.name.clone(),
        Err(_) => name.to_string(),
    };
    (label, loaded)
}

pub fn compare(
    names: &[String],
    all: bool,
    format: Format,
    output: Option<&Path>,
    params: &ModelParams,
) -> Result<u8, Failure> {
    let designs: Vec<_> = if all {
        cells::ADDERS.iter().map(|s: &CellSpec| compare_entry(s.name)).collect()
    } else {
        names.iter().map(|n| compare_entry(n)).collect()
    };
    let report = build_report(&designs, params);
    let text = match format {
        Format::Md => report.to_markdown(),
        Format::Csv => report.to_csv(),
    };
    emit(output, &text)?;
    for row in &report.rows {
        if let Err(e) = &row.result {
            eprintln!("addersim: {}: {e}", row.design);
        }
    }
    Ok(if report.succeeded() > 0 { 0 } else { 2 })
}
