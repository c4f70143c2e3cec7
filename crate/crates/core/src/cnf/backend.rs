//! Solving through the embedded solver or an external SAT process.

use super::solver::{Solver, SolverBudget, SolverResult};
use super::{dimacs, CnfFormula, SolveOutcome};
use crate::{Error, Result};
use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};

/// Which SAT engine to use.
#[derive(Clone, Debug)]
pub enum Backend {
    /// In-process CDCL solver, optionally budgeted.
    Embedded { budget: SolverBudget },
    /// External command; the DIMACS path is appended as the last argument.
    /// Output is read MiniSat-style: an `s SATISFIABLE`/`s UNSATISFIABLE`
    /// line (or exit status 10/20) and `v` lines with the model.
    External { command: String },
}

impl Backend {
    pub fn embedded() -> Self {
        Backend::Embedded {
            budget: SolverBudget::unlimited(),
        }
    }

    pub fn embedded_with(budget: SolverBudget) -> Self {
        Backend::Embedded { budget }
    }

    pub fn external(command: impl Into<String>) -> Self {
        Backend::External {
            command: command.into(),
        }
    }
}

/// Solves a formula, re-verifying any model against the clause list before
/// reporting it.
pub fn solve(f: &CnfFormula, backend: &Backend) -> Result<SolveOutcome> {
    match backend {
        Backend::Embedded { budget } => {
            let mut solver = Solver::new(f.var_count());
            for clause in f.clauses() {
                if !solver.add_clause(clause) {
                    return Ok(SolveOutcome::Unsat);
                }
            }
            match solver.solve(budget) {
                SolverResult::Sat => {
                    let mut model = solver.model();
                    model.resize(f.var_count(), false);
                    if !f.satisfied_by(&model) {
                        return Err(Error::Backend(
                            "embedded solver returned an invalid model".into(),
                        ));
                    }
                    Ok(SolveOutcome::Sat(model))
                }
                SolverResult::Unsat => Ok(SolveOutcome::Unsat),
                SolverResult::BudgetExceeded => Ok(SolveOutcome::BudgetExceeded),
            }
        }
        Backend::External { command } => solve_external(f, command),
    }
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

fn temp_cnf_path() -> PathBuf {
    let id = TEMP_COUNTER.fetch_add(1, Ordering::Relaxed);
    std::env::temp_dir().join(format!("ramsey-{}-{}.cnf", std::process::id(), id))
}

fn solve_external(f: &CnfFormula, command: &str) -> Result<SolveOutcome> {
    let mut parts = command.split_whitespace();
    let program = parts
        .next()
        .ok_or_else(|| Error::Backend("empty external command".into()))?;
    let args: Vec<&str> = parts.collect();

    let path = temp_cnf_path();
    {
        let mut file = std::fs::File::create(&path)?;
        dimacs::write_dimacs(f, &mut file)?;
        file.flush()?;
    }
    let output = std::process::Command::new(program)
        .args(&args)
        .arg(&path)
        .output();
    let _ = std::fs::remove_file(&path);
    let output = output.map_err(|e| Error::Backend(format!("failed to run {:?}: {}", program, e)))?;

    let stdout = String::from_utf8_lossy(&output.stdout);
    let mut verdict: Option<bool> = None;
    let mut model_lits: Vec<i32> = Vec::new();
    for line in stdout.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            match rest.trim() {
                "SATISFIABLE" => verdict = Some(true),
                "UNSATISFIABLE" => verdict = Some(false),
                other => {
                    return Err(Error::Backend(format!("unrecognized status line: s {}", other)))
                }
            }
        } else if let Some(rest) = line.strip_prefix("v ") {
            for tok in rest.split_whitespace() {
                let lit: i32 = tok
                    .parse()
                    .map_err(|_| Error::Backend(format!("bad literal in v line: {:?}", tok)))?;
                if lit != 0 {
                    model_lits.push(lit);
                }
            }
        } else if line == "v" {
            // some solvers emit bare "v" continuation lines
        }
    }
    let verdict = verdict.or(match output.status.code() {
        Some(10) => Some(true),
        Some(20) => Some(false),
        _ => None,
    });
    match verdict {
        Some(true) => {
            let mut model = vec![false; f.var_count()];
            for lit in model_lits {
                let v = lit.unsigned_abs() as usize;
                if v >= 1 && v <= f.var_count() {
                    model[v - 1] = lit > 0;
                }
            }
            if !f.satisfied_by(&model) {
                return Err(Error::Backend(
                    "external solver claimed SAT but its model fails verification".into(),
                ));
            }
            Ok(SolveOutcome::Sat(model))
        }
        Some(false) => Ok(SolveOutcome::Unsat),
        None => Err(Error::Backend(format!(
            "external solver produced no verdict (exit status {:?})",
            output.status.code()
        ))),
    }
}
