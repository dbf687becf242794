use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qcrit_core::bounds::{self, BoundReport, ReportOptions};
use qcrit_core::graph::{self, Relation};
use qcrit_core::oracle::{self, OracleConfig, Verification};
use qcrit_core::pauli::{cp_expand_all, OperatorSet, PauliString};
use qcrit_core::states::{self, NamedState, QuantumState};
use qcrit_core::{Error, Partition};

use crate::{
    BoundsArgs, CapArgs, Command, EvalArgs, GenerateArgs, GraphArgs, OracleArgs, VerifyArgs,
};

/// Bad input: parse errors, width mismatches, unreadable files.
pub const EXIT_INPUT: u8 = 2;
/// A size cap was exceeded.
pub const EXIT_CAP: u8 = 3;
/// Soundness violation or internal failure.
pub const EXIT_FAILURE: u8 = 1;

pub struct Output {
    pub text: String,
    pub status: u8,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, status: 0 }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub status: u8,
}

impl CliError {
    fn input(message: String) -> CliError {
        CliError {
            message,
            status: EXIT_INPUT,
        }
    }

    fn from_core(context: &str, e: Error) -> CliError {
        let status = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::Internal(_) => EXIT_FAILURE,
            _ => EXIT_INPUT,
        };
        CliError {
            message: format!("{context}: {e}"),
            status,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(cmd: Command) -> CliResult<Output> {
    match cmd {
        Command::Bounds(a) => cmd_bounds(&a),
        Command::Graph(a) => cmd_graph(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Generate(a) => cmd_generate(&a),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn load_sigma(path: &Path) -> CliResult<OperatorSet> {
    let text = read(path)?;
    OperatorSet::from_text(&text).map_err(|e| CliError::from_core(&path.display().to_string(), e))
}

fn core<T>(context: &str, r: qcrit_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::from_core(context, e))
}

fn oracle_config(a: &OracleArgs) -> OracleConfig {
    OracleConfig {
        restarts: a.restarts,
        max_iterations: a.max_iterations,
        seed: a.seed,
        ..OracleConfig::default()
    }
}

fn report_options(caps: &CapArgs, quantum_upper: bool, prune: bool) -> ReportOptions {
    ReportOptions {
        quantum_upper,
        prune_symmetry: prune,
        clique_cap: caps.clique_cap,
        coloring_cap: caps.coloring_cap,
        bipartition_cap: caps.bipartition_cap,
        symmetry_cap: caps.symmetry_cap,
    }
}

fn join(ops: &[PauliString]) -> String {
    ops.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Oracle verification of every orbit representative in `report`.
fn verify_orbits(
    sigma: &OperatorSet,
    report: &BoundReport,
    cfg: &OracleConfig,
) -> CliResult<Vec<Verification>> {
    report
        .orbit_representatives()
        .iter()
        .map(|p| core("verify", oracle::verify_bound(sigma, p, cfg)))
        .collect()
}

fn render_report(report: &BoundReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "sigma: {} operators on {} qubits, symmetry group order {}",
        report.sigma.len(),
        report.width,
        report.symmetry_group_order
    );
    let w = report
        .partitions
        .iter()
        .map(|e| e.partition.to_string().len())
        .max()
        .unwrap_or(9)
        .max(9);
    let _ = writeln!(
        out,
        "\n{:<w$}  {:<w$}  bound  witness",
        "partition", "orbit"
    );
    for e in &report.partitions {
        let _ = writeln!(
            out,
            "{:<w$}  {:<w$}  {:>5}  {}",
            e.partition.to_string(),
            e.orbit.to_string(),
            e.bound,
            join(&e.witness)
        );
    }
    out.push('\n');
    for (k, v) in &report.class_bounds {
        let _ = writeln!(out, "{k:<22} {v}");
    }
    let _ = writeln!(
        out,
        "{:<22} {}  ({})",
        "quantum_lower",
        report.quantum_lower,
        join(&report.quantum_lower_witness)
    );
    if let Some(u) = report.quantum_upper_coloring {
        let _ = writeln!(out, "{:<22} {u}", "quantum_upper");
    }
    if let Some(v) = &report.verification {
        out.push('\n');
        out.push_str(&render_verification(v));
    }
    out.push('\n');
    for n in &report.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

fn render_verification(rows: &[Verification]) -> String {
    let mut out = String::new();
    let w = rows
        .iter()
        .map(|r| r.partition.to_string().len())
        .max()
        .unwrap_or(9)
        .max(9);
    let _ = writeln!(
        out,
        "{:<w$}  graph_bound  oracle_value  gap        sat",
        "partition"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<w$}  {:>11}  {:>12.6}  {:<9.2e}  {}{}",
            r.partition.to_string(),
            r.graph_bound,
            r.oracle_value,
            r.gap,
            if r.sat { "yes" } else { "no" },
            r.note
                .as_deref()
                .map(|n| format!("  ({n})"))
                .unwrap_or_default()
        );
    }
    out
}

fn violation_status(rows: &[Verification]) -> u8 {
    if rows.iter().any(|r| r.violation) {
        EXIT_FAILURE
    } else {
        0
    }
}

fn cmd_bounds(a: &BoundsArgs) -> CliResult<Output> {
    let sigma = load_sigma(&a.sigma)?;
    let opts = report_options(&a.caps, a.quantum_upper, !a.no_prune);
    let mut report = core("bounds", bounds::criteria_report_with(&sigma, &opts))?;
    let mut status = 0;
    if a.verify {
        let rows = verify_orbits(&sigma, &report, &oracle_config(&a.oracle))?;
        status = violation_status(&rows);
        report.verification = Some(rows);
    }
    let text = if a.json {
        report.to_json() + "\n"
    } else {
        render_report(&report)
    };
    Ok(Output { text, status })
}

fn cmd_graph(a: &GraphArgs) -> CliResult<Output> {
    let sigma = load_sigma(&a.sigma)?;
    let relation: Relation = core("--relation", a.relation.parse())?;
    let part = match &a.cut {
        Some(text) => core("--cut", Partition::parse(text, sigma.width()))?,
        None => core("--cut", Partition::trivial(sigma.width()))?,
    };
    let g = core("graph", graph::build_graph(&sigma, &part, relation))?;
    let text = if a.json {
        serde_json::to_string(&graph::export_json(&g)).expect("graph serializes") + "\n"
    } else {
        graph::export_dot(&g)
    };
    Ok(Output::ok(text))
}

fn load_state(arg: &str, width: usize) -> CliResult<QuantumState> {
    if let Ok(name) = NamedState::parse(arg) {
        return core("--state", states::named_state(&name, width));
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(CliError::input(format!(
            "--state: {arg:?} is neither a known state name nor a file"
        )));
    }
    let state = core(arg, QuantumState::from_json(&read(path)?))?;
    if state.width() != width {
        return Err(CliError::input(format!(
            "{arg}: state has {} qubits but the operator set has {width}",
            state.width()
        )));
    }
    Ok(state)
}

fn cmd_eval(a: &EvalArgs) -> CliResult<Output> {
    let sigma = load_sigma(&a.sigma)?;
    let state = load_state(&a.state, sigma.width())?;
    let q = core("eval", states::evaluate_q(&state, &sigma))?;
    let opts = ReportOptions {
        quantum_upper: a.quantum_upper,
        ..ReportOptions::default()
    };
    let report = core("bounds", bounds::criteria_report_with(&sigma, &opts))?;
    let verdict = core("classify", bounds::classify(q.value, &report))?;
    let text = if a.json {
        let v = serde_json::json!({ "q": q, "verdict": verdict });
        serde_json::to_string_pretty(&v).expect("verdict serializes") + "\n"
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "Q = {:.10}", q.value);
        for c in &q.contributions {
            let _ = writeln!(
                out,
                "  {}  <s> = {:+.10}  <s>^2 = {:.10}",
                c.operator, c.expectation, c.squared
            );
        }
        if verdict.detected.is_empty() {
            let _ = writeln!(out, "no separability class excluded");
        }
        for c in &verdict.detected {
            let _ = writeln!(out, "detected: {} (Q > {})", c.claim, c.threshold);
        }
        for w in &verdict.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    };
    Ok(Output::ok(text))
}

fn cmd_verify(a: &VerifyArgs) -> CliResult<Output> {
    let sigma = load_sigma(&a.sigma)?;
    let report = core("bounds", bounds::criteria_report(&sigma))?;
    let rows = verify_orbits(&sigma, &report, &oracle_config(&a.oracle))?;
    let status = violation_status(&rows);
    let text = if a.json {
        serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n"
    } else {
        render_verification(&rows)
    };
    Ok(Output { text, status })
}

fn cmd_generate(a: &GenerateArgs) -> CliResult<Output> {
    let text = if let Some(list) = &a.source.cp {
        let patterns = list
            .split(',')
            .map(|t| core(&format!("--cp {t:?}"), t.trim().parse::<PauliString>()))
            .collect::<CliResult<Vec<_>>>()?;
        core("--cp", cp_expand_all(&patterns))?.to_text()
    } else if let Some(path) = &a.source.clique_state {
        let sigma = load_sigma(path)?;
        let q = core("clique", bounds::quantum_bounds(&sigma, false))?;
        let state = core("eigenstate", states::common_eigenstate(&q.lower_witness))?;
        state.to_json() + "\n"
    } else {
        unreachable!("clap requires one source");
    };
    match &a.output {
        Some(path) => {
            fs::write(path, &text)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            Ok(Output::ok(String::new()))
        }
        None => Ok(Output::ok(text)),
    }
}
