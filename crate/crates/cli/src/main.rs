//! `qcrit`: entanglement criteria from Pauli operator sets.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "qcrit",
    version,
    about = "Separability bounds for sums of squared Pauli correlations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Separability-class bounds for an operator set.
    Bounds(BoundsArgs),
    /// Emit a (cut-)commutativity graph as DOT or JSON.
    Graph(GraphArgs),
    /// Evaluate Q on a state and classify it.
    Eval(EvalArgs),
    /// Check every bound orbit against the numerical oracle.
    Verify(VerifyArgs),
    /// Write an operator set or a clique eigenstate.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
struct OracleArgs {
    /// Seed for the oracle's random restarts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random restarts per maximization.
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    /// Ascent step budget per restart.
    #[arg(long, default_value_t = 2000)]
    max_iterations: usize,
}

#[derive(Debug, Args)]
struct CapArgs {
    /// Vertex cap for exact clique searches (large values may run long).
    #[arg(long, default_value_t = qcrit_core::graph::CLIQUE_VERTEX_CAP)]
    clique_cap: usize,
    /// Vertex cap for the exact coloring search.
    #[arg(long, default_value_t = qcrit_core::graph::COLORING_VERTEX_CAP)]
    coloring_cap: usize,
    /// Width cap for bipartition enumeration.
    #[arg(long, default_value_t = qcrit_core::cuts::BIPARTITION_WIDTH_CAP)]
    bipartition_cap: usize,
    /// Width cap for the symmetry search.
    #[arg(long, default_value_t = qcrit_core::cuts::SYMMETRY_WIDTH_CAP)]
    symmetry_cap: usize,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// Operator set file: one Pauli string per line, `#` comments allowed.
    sigma: PathBuf,
    /// Stable JSON output instead of a table.
    #[arg(long)]
    json: bool,
    /// Also run the numerical oracle on every partition orbit.
    #[arg(long)]
    verify: bool,
    /// Run the exact coloring search for an upper bound on the quantum maximum.
    #[arg(long)]
    quantum_upper: bool,
    /// Compute every partition separately instead of once per symmetry orbit.
    #[arg(long)]
    no_prune: bool,
    #[command(flatten)]
    oracle: OracleArgs,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Debug, Args)]
struct GraphArgs {
    sigma: PathBuf,
    /// Partition such as `A|BCDE` or `0,2|1,3,4`; omitted means no cut.
    #[arg(long)]
    cut: Option<String>,
    /// Edge relation.
    #[arg(long, default_value = "commute")]
    relation: String,
    /// JSON adjacency `{labels, edges}` instead of DOT.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    sigma: PathBuf,
    /// `ghz`, `w`, `smolin`, `basis:<bits>`, or a state file path.
    #[arg(long)]
    state: String,
    #[arg(long)]
    json: bool,
    /// Include the coloring upper bound in the verdict.
    #[arg(long)]
    quantum_upper: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    sigma: PathBuf,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct GenerateSource {
    /// Comma-separated patterns; writes the union of their cyclic rotations.
    #[arg(long)]
    cp: Option<String>,
    /// Operator set file; writes a common eigenstate of its largest commuting family.
    #[arg(long)]
    clique_state: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(flatten)]
    source: GenerateSource,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("qcrit: {}", e.message);
            ExitCode::from(e.status)
        }
    }
}
