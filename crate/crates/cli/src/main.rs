//! Batch front door: ingest a mesh or sample a builtin field, run the
//! splitting analysis, emit the verdict JSON and a DOT rendering of the
//! (oriented) Reeb graph.
//!
//! Exit codes: 0 the sequence splits, 2 inconclusive local stabilizer,
//! 3 hypotheses not applicable, 4 invalid input or I/O failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use reeb_core::randfield::{random_tree_field_with, RandomFieldConfig};
use reeb_core::surface::{sample_torus, Mesh, TorusFunction};
use reeb_core::verdict::analyze_full;

#[derive(Parser)]
#[command(
    name = "reeb",
    version,
    about = "Kronrod-Reeb graphs of piecewise-linear fields on closed surfaces,\n\
             with the disk-side orientation and splitting check on the torus",
    args_conflicts_with_subcommands = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    analyze: AnalyzeArgs,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Mesh JSON file: `{"triangles": [[i,j,k],...], "values": [...]}`
    #[arg(long, conflicts_with = "builtin")]
    mesh: Option<PathBuf>,
    /// Builtin field: `sinsin | sinsin_scaled[a,b,c,d] | height | twosaddle`
    #[arg(long, requires = "n")]
    builtin: Option<String>,
    /// Grid resolution for --builtin (at least 8, divisible by 4)
    #[arg(long)]
    n: Option<usize>,
    /// Write the verdict JSON here (stdout when omitted)
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write DOT of the Reeb graph here; directed with the sink doubled when
    /// the tree was oriented
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Absolute tolerance for level equality in the symmetry stage
    #[arg(long, default_value_t = 0.0)]
    level_tol: f64,
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a builtin field and write it as mesh JSON
    Export {
        #[arg(long)]
        builtin: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw a seeded random field with a tree Reeb graph and write it as
    /// mesh JSON
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Rejection budget
        #[arg(long, default_value_t = 5000)]
        attempts: usize,
    },
}

const EXIT_INVALID: u8 = 4;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    match cli.command {
        Some(Command::Export { builtin, n, out }) => run_export(&builtin, n, &out),
        Some(Command::Random {
            n,
            seed,
            out,
            attempts,
        }) => run_random(n, seed, &out, attempts),
        None => run_analyze(&cli.analyze),
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("reeb: {msg}");
    ExitCode::from(EXIT_INVALID)
}

fn load_mesh(args: &AnalyzeArgs) -> Result<Mesh, String> {
    match (&args.mesh, &args.builtin) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            Mesh::from_json(&text).map_err(|e| e.to_string())
        }
        (None, Some(id)) => {
            let function: TorusFunction = id.parse().map_err(|e| format!("{e}"))?;
            let n = args.n.ok_or("--builtin requires --n")?;
            sample_torus(&function, n).map_err(|e| e.to_string())
        }
        (None, None) => {
            Err("exactly one input source required: --mesh PATH or --builtin ID --n INT".into())
        }
        (Some(_), Some(_)) => Err("exactly one input source allowed".into()),
    }
}

fn run_analyze(args: &AnalyzeArgs) -> ExitCode {
    if args.level_tol < 0.0 || !args.level_tol.is_finite() {
        return fail("--level-tol must be a finite nonnegative number");
    }
    let mesh = match load_mesh(args) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    if args.verbose {
        eprintln!(
            "reeb: mesh with {} vertices, {} edges, {} triangles",
            mesh.vertex_count(),
            mesh.edge_count(),
            mesh.triangle_count()
        );
    }
    let analysis = analyze_full(&mesh, args.level_tol);
    if args.verbose {
        if let Some(g) = &analysis.graph {
            eprintln!(
                "reeb: graph with {} vertices, {} edges, b1 = {}",
                g.vertex_count(),
                g.edge_count(),
                g.betti_1()
            );
        }
        eprintln!("reeb: {}", analysis.verdict.conclusion);
    }
    let report = analysis.verdict.to_json();
    match &args.report {
        Some(path) => {
            if let Err(e) = fs::write(path, &report) {
                return fail(format!("cannot write {}: {e}", path.display()));
            }
        }
        None => print!("{report}"),
    }
    if let Some(path) = &args.dot {
        let dot = match (&analysis.tree, &analysis.graph) {
            (Some(tree), _) => Some(tree.to_dot()),
            (None, Some(graph)) => Some(graph.to_dot()),
            (None, None) => None,
        };
        if let Some(dot) = dot {
            if let Err(e) = fs::write(path, dot) {
                return fail(format!("cannot write {}: {e}", path.display()));
            }
        } else if args.verbose {
            eprintln!("reeb: no graph was built, skipping {}", path.display());
        }
    }
    ExitCode::from(analysis.verdict.exit_code() as u8)
}

fn run_export(builtin: &str, n: usize, out: &PathBuf) -> ExitCode {
    let function: TorusFunction = match builtin.parse() {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    let mesh = match sample_torus(&function, n) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    match fs::write(out, mesh.to_json()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(format!("cannot write {}: {e}", out.display())),
    }
}

fn run_random(n: usize, seed: u64, out: &PathBuf, attempts: usize) -> ExitCode {
    let config = RandomFieldConfig {
        n,
        max_attempts: attempts,
        ..RandomFieldConfig::default()
    };
    match random_tree_field_with(config, seed) {
        Some((mesh, graph, stats)) => {
            eprintln!(
                "reeb: tree field after {} attempts ({} vertices in the graph)",
                stats.attempts,
                graph.vertex_count()
            );
            match fs::write(out, mesh.to_json()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(format!("cannot write {}: {e}", out.display())),
            }
        }
        None => fail(format!("no tree field found within {attempts} attempts")),
    }
}
