//! Command-line interface for the Ramsey coloring search machinery.
//!
//! Exit codes: 0 success, 1 a SAT witness was found where a refutation was
//! expected, 2 usage error, 3 backend failure, 4 partial or inconclusive
//! result. `solve-dimacs` instead follows SAT-solver conventions (10
//! satisfiable, 20 unsatisfiable) so it can serve as an external backend
//! command itself.

mod commands;

use clap::{Parser, Subcommand};
use ramsey_core::cnf::{Backend, SolverBudget};

#[derive(Parser)]
#[command(name = "ramsey", version, about = "SAT-based search for multicolor Ramsey edge-colorings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, clap::Args)]
struct BackendArgs {
    /// SAT engine: the embedded solver or an external command.
    #[arg(long, default_value = "embedded", value_parser = ["embedded", "external"])]
    backend: String,
    /// External solver command; the DIMACS path is appended as the last
    /// argument. Required with --backend external.
    #[arg(long)]
    external_cmd: Option<String>,
    /// Conflict budget per solver call (embedded backend only).
    #[arg(long)]
    budget: Option<u64>,
    /// Reserved for interface stability; all runs are deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl BackendArgs {
    fn build(&self) -> Result<Backend, String> {
        match self.backend.as_str() {
            "embedded" => {
                let budget = match self.budget {
                    Some(c) => SolverBudget::conflicts(c),
                    None => SolverBudget::unlimited(),
                };
                Ok(Backend::Embedded { budget })
            }
            "external" => match &self.external_cmd {
                Some(cmd) => Ok(Backend::external(cmd.clone())),
                None => Err("--backend external requires --external-cmd".into()),
            },
            other => Err(format!("unknown backend {:?}", other)),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate graphical degree sequences within bounds.
    Degseq {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        min: u32,
        #[arg(long)]
        max: u32,
        /// Output file (one sequence per line); stdout when omitted.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Encode a coloring problem to DIMACS CNF with a variable-map sidecar.
    Encode {
        /// Clique bounds, e.g. 3,3,3 (color c avoids K_{r_c}).
        #[arg(long)]
        problem: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "none", value_parser = ["none", "lex", "dm"])]
        sym_break: String,
        /// Degree-matrix file (required with --sym-break dm).
        #[arg(long)]
        dm_file: Option<std::path::PathBuf>,
        /// Partial coloring whose assigned cells are fixed.
        #[arg(long)]
        partial_file: Option<std::path::PathBuf>,
        /// Add the circulant structure constraint.
        #[arg(long)]
        circulant: bool,
        #[arg(long)]
        out: std::path::PathBuf,
    },
    /// Enumerate all solutions of a coloring problem.
    Enumerate {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "none", value_parser = ["none", "lex", "dm"])]
        sym_break: String,
        #[arg(long)]
        dm_file: Option<std::path::PathBuf>,
        /// Also reduce modulo weak isomorphism and report class count.
        #[arg(long)]
        reduce: bool,
        /// Directory for solution files and the enumeration journal.
        #[arg(long)]
        out_dir: Option<std::path::PathBuf>,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Run the degree-matrix pipeline end to end.
    Pipeline {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        min: u32,
        #[arg(long)]
        max: u32,
        #[arg(long)]
        out_dir: std::path::PathBuf,
        /// Continue a previous run in the same directory.
        #[arg(long)]
        resume: bool,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Stop after this many solver jobs (graceful interruption).
        #[arg(long)]
        stop_after: Option<usize>,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Generate and solve embedding instances for a degree tuple.
    Embed {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        n: usize,
        /// Per-color degrees of the distinguished vertex, e.g. 14,8,7.
        #[arg(long, required_unless_present = "instance_file")]
        degrees: Option<String>,
        /// One directory of component graph files per color, comma
        /// separated.
        #[arg(long, required_unless_present = "instance_file")]
        lib_dirs: Option<String>,
        /// Solve a single partial-coloring instance instead.
        #[arg(long)]
        instance_file: Option<std::path::PathBuf>,
        /// Directory for the manifest and witnesses.
        #[arg(long)]
        out_dir: Option<std::path::PathBuf>,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        stop_after: Option<usize>,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Search for a circulant coloring.
    Circulant {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        n: usize,
        /// Write the found coloring here (stdout otherwise).
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Solve a DIMACS CNF file with the embedded solver (exit 10/20).
    SolveDimacs {
        file: std::path::PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    std::process::exit(code);
}

/// Error carrying the exit code it maps to.
pub(crate) struct CmdError {
    pub code: i32,
    pub message: String,
}

impl CmdError {
    fn usage(msg: impl Into<String>) -> Self {
        CmdError {
            code: 2,
            message: msg.into(),
        }
    }
}

impl From<ramsey_core::Error> for CmdError {
    fn from(e: ramsey_core::Error) -> Self {
        let code = match &e {
            ramsey_core::Error::Backend(_) => 3,
            ramsey_core::Error::BudgetExceeded(_) => 4,
            ramsey_core::Error::OutOfRange(_)
            | ramsey_core::Error::Invalid { .. }
            | ramsey_core::Error::SizeMismatch(_)
            | ramsey_core::Error::Parse { .. } => 2,
            _ => 3,
        };
        CmdError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ramsey_pipeline::Error> for CmdError {
    fn from(e: ramsey_pipeline::Error) -> Self {
        match e {
            ramsey_pipeline::Error::Core(c) => c.into(),
            ramsey_pipeline::Error::Invalid(m) => CmdError::usage(m),
            other => CmdError {
                code: 3,
                message: other.to_string(),
            },
        }
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError {
            code: 3,
            message: e.to_string(),
        }
    }
}

fn run(cli: Cli) -> Result<i32, CmdError> {
    match cli.command {
        Command::Degseq { n, min, max, out } => commands::degseq(n, min, max, out),
        Command::Encode {
            problem,
            n,
            sym_break,
            dm_file,
            partial_file,
            circulant,
            out,
        } => commands::encode(&problem, n, &sym_break, dm_file, partial_file, circulant, out),
        Command::Enumerate {
            problem,
            n,
            sym_break,
            dm_file,
            reduce,
            out_dir,
            backend,
        } => commands::enumerate(&problem, n, &sym_break, dm_file, reduce, out_dir, &backend),
        Command::Pipeline {
            problem,
            n,
            min,
            max,
            out_dir,
            resume,
            workers,
            stop_after,
            backend,
        } => commands::pipeline(&problem, n, min, max, out_dir, resume, workers, stop_after, &backend),
        Command::Embed {
            problem,
            n,
            degrees,
            lib_dirs,
            instance_file,
            out_dir,
            workers,
            stop_after,
            backend,
        } => commands::embed(
            &problem,
            n,
            degrees.as_deref(),
            lib_dirs.as_deref(),
            instance_file,
            out_dir,
            workers,
            stop_after,
            &backend,
        ),
        Command::Circulant {
            problem,
            n,
            out,
            backend,
        } => commands::circulant(&problem, n, out, &backend),
        Command::SolveDimacs { file, budget } => commands::solve_dimacs(file, budget),
    }
}
