//! All-solutions enumeration with blocking clauses.
//!
//! After each model, the projection of the model is excluded by a blocking
//! clause and the solver is called again, so every projected assignment is
//! produced exactly once. Blocking clauses can be journaled to a file; a
//! rerun with the same journal resumes where the previous run stopped
//! instead of re-emitting earlier solutions.

use super::backend::{solve, Backend};
use super::solver::{Solver, SolverBudget, SolverResult};
use super::{CnfFormula, SolveOutcome, VarMap};
use crate::graph::ColoredGraph;
use crate::{Error, Result};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

enum Engine {
    Embedded {
        solver: Box<Solver>,
        budget: SolverBudget,
    },
    External {
        base: CnfFormula,
        command: String,
        blocks: Vec<Vec<i32>>,
    },
}

/// Streaming enumeration of projected satisfying assignments.
pub struct AllSolutions {
    engine: Engine,
    projection: Vec<i32>,
    /// When set, blocks only the true literals of the projection. Sound only
    /// when at most one projected assignment extends any set of true
    /// projected variables (e.g. one-hot groups).
    positive_blocking: bool,
    journal: Option<std::fs::File>,
    finished: bool,
    pub resumed_count: usize,
}

impl AllSolutions {
    fn block(&mut self, clause: Vec<i32>) -> Result<()> {
        if let Some(journal) = &mut self.journal {
            let line: Vec<String> = clause.iter().map(|l| l.to_string()).collect();
            writeln!(journal, "{} 0", line.join(" "))?;
            journal.flush()?;
        }
        match &mut self.engine {
            Engine::Embedded { solver, .. } => {
                if !solver.add_clause(&clause) {
                    self.finished = true;
                }
            }
            Engine::External { blocks, .. } => blocks.push(clause),
        }
        Ok(())
    }

    fn solve_once(&mut self) -> Result<SolveOutcome> {
        match &mut self.engine {
            Engine::Embedded { solver, budget } => match solver.solve(budget) {
                SolverResult::Sat => {
                    let mut model = solver.model();
                    model.resize(solver.num_vars(), false);
                    Ok(SolveOutcome::Sat(model))
                }
                SolverResult::Unsat => Ok(SolveOutcome::Unsat),
                SolverResult::BudgetExceeded => Ok(SolveOutcome::BudgetExceeded),
            },
            Engine::External {
                base,
                command,
                blocks,
            } => {
                let mut clauses = base.clauses().to_vec();
                clauses.extend(blocks.iter().cloned());
                let f = CnfFormula::new(base.var_count(), clauses)?;
                solve(&f, &Backend::External {
                    command: command.clone(),
                })
            }
        }
    }
}

impl Iterator for AllSolutions {
    type Item = Result<Vec<i32>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        match self.solve_once() {
            Ok(SolveOutcome::Sat(model)) => {
                let assignment: Vec<i32> = self
                    .projection
                    .iter()
                    .map(|&v| if model[v as usize - 1] { v } else { -v })
                    .collect();
                let blocking: Vec<i32> = if self.positive_blocking {
                    assignment.iter().filter(|&&l| l > 0).map(|&l| -l).collect()
                } else {
                    assignment.iter().map(|&l| -l).collect()
                };
                if blocking.is_empty() {
                    // Nothing left to exclude; the projection admits exactly
                    // this one assignment.
                    self.finished = true;
                } else if let Err(e) = self.block(blocking) {
                    self.finished = true;
                    return Some(Err(e));
                }
                Some(Ok(assignment))
            }
            Ok(SolveOutcome::Unsat) => {
                self.finished = true;
                None
            }
            Ok(SolveOutcome::BudgetExceeded) => {
                self.finished = true;
                Some(Err(Error::BudgetExceeded(
                    "solver budget exhausted during enumeration".into(),
                )))
            }
            Err(e) => {
                self.finished = true;
                Some(Err(e))
            }
        }
    }
}

/// Enumerates every satisfying assignment of `f` projected onto
/// `projection`, each exactly once.
///
/// With a journal path, blocking clauses are persisted after each model and
/// replayed on the next run, making long enumerations resumable.
pub fn all_solutions(
    f: &CnfFormula,
    projection: &[i32],
    backend: &Backend,
    journal: Option<&Path>,
) -> Result<AllSolutions> {
    for &v in projection {
        if v < 1 || v as usize > f.var_count() {
            return Err(Error::OutOfRange(format!(
                "projection variable {} not in 1..={}",
                v,
                f.var_count()
            )));
        }
    }
    build(f, projection.to_vec(), false, backend, journal)
}

/// Specialized enumeration over the edge variables of an encoded coloring
/// model, decoding each assignment to a graph. Blocking uses only the true
/// one-hot literals, which excludes exactly one coloring per clause.
pub fn enumerate_colorings<'a>(
    f: &CnfFormula,
    vm: &'a VarMap,
    backend: &Backend,
    journal: Option<&Path>,
) -> Result<impl Iterator<Item = Result<ColoredGraph>> + 'a> {
    let inner = build(f, vm.projection(), true, backend, journal)?;
    let n = vm.vertex_count();
    let k = vm.color_count();
    Ok(inner.map(move |item| {
        item.and_then(|assignment| {
            let mut model = vec![false; vm.edge_var_count()];
            for lit in assignment {
                if lit > 0 {
                    model[lit as usize - 1] = true;
                }
            }
            super::decode(&model, vm, n, k)
        })
    }))
}

fn build(
    f: &CnfFormula,
    projection: Vec<i32>,
    positive_blocking: bool,
    backend: &Backend,
    journal: Option<&Path>,
) -> Result<AllSolutions> {
    let mut resumed: Vec<Vec<i32>> = Vec::new();
    if let Some(path) = journal {
        if path.exists() {
            resumed = read_journal(path)?;
        }
    }

    let engine = match backend {
        Backend::Embedded { budget } => {
            let mut solver = Box::new(Solver::new(f.var_count()));
            let mut finished_early = false;
            for clause in f.clauses() {
                if !solver.add_clause(clause) {
                    finished_early = true;
                    break;
                }
            }
            if !finished_early {
                for clause in &resumed {
                    if !solver.add_clause(clause) {
                        break;
                    }
                }
            }
            Engine::Embedded {
                solver,
                budget: budget.clone(),
            }
        }
        Backend::External { command } => Engine::External {
            base: f.clone(),
            command: command.clone(),
            blocks: resumed.clone(),
        },
    };

    let journal_file = match journal {
        Some(path) => Some(
            std::fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)?,
        ),
        None => None,
    };

    Ok(AllSolutions {
        engine,
        projection,
        positive_blocking,
        journal: journal_file,
        finished: false,
        resumed_count: resumed.len(),
    })
}

/// Reads a blocking-clause journal: one clause per line, `0`-terminated.
pub fn read_journal(path: &Path) -> Result<Vec<Vec<i32>>> {
    let file = std::fs::File::open(path)?;
    let mut clauses = Vec::new();
    for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut clause: Vec<i32> = Vec::new();
        let mut terminated = false;
        for tok in trimmed.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("bad journal literal {:?}", tok),
            })?;
            if lit == 0 {
                terminated = true;
                break;
            }
            clause.push(lit);
        }
        if !terminated || clause.is_empty() {
            return Err(Error::Parse {
                line: idx + 1,
                msg: "malformed journal clause".into(),
            });
        }
        clauses.push(clause);
    }
    Ok(clauses)
}

/// Convenience: journal path for an enumeration artifact directory.
pub fn journal_path(dir: &Path, stem: &str) -> PathBuf {
    dir.join(format!("{}.blocked", stem))
}
