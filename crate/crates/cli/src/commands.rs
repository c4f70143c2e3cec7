//! Subcommand implementations. Every command prints a machine-parsable
//! `key=value` summary as its final stdout line.

use crate::{BackendArgs, CmdError};
use ramsey_core::cnf::{self, SolveOutcome};
use ramsey_core::degseq;
use ramsey_core::graph::{reduce_mod_weak_iso, ColoredGraph, DegreeMatrix, PartialColoredGraph};
use ramsey_core::model::{self, ColoringProblem};
use ramsey_pipeline::stages::{self, SearchVerdict};
use ramsey_pipeline::{Session, TripleVerdict};
use std::path::PathBuf;

fn parse_problem(problem: &str, n: usize) -> Result<ColoringProblem, CmdError> {
    let bounds: Result<Vec<usize>, _> = problem.split(',').map(|t| t.trim().parse::<usize>()).collect();
    let bounds = bounds.map_err(|_| CmdError::usage(format!("bad problem vector {:?}", problem)))?;
    if bounds.iter().any(|&b| b < 2) {
        return Err(CmdError::usage("clique bounds must be at least 2"));
    }
    ColoringProblem::new(bounds, n).map_err(CmdError::from)
}

fn parse_usize_list(text: &str, what: &str) -> Result<Vec<usize>, CmdError> {
    text.split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CmdError::usage(format!("bad {} {:?}", what, text)))
}

fn default_workers(requested: usize) -> usize {
    if requested > 0 {
        requested
    } else {
        std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1)
    }
}

fn session(args: &BackendArgs, workers: usize, out_dir: Option<PathBuf>) -> Result<Session, CmdError> {
    let backend = args.build().map_err(CmdError::usage)?;
    let mut s = Session::new(backend).with_workers(default_workers(workers));
    if let Some(dir) = out_dir {
        s = s.with_out_dir(dir);
    }
    Ok(s)
}

pub fn degseq(n: usize, min: u32, max: u32, out: Option<PathBuf>) -> Result<i32, CmdError> {
    let seqs = degseq::enum_degree_sequences(n, min, max)?;
    let text = degseq::write_sequences(&seqs);
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{}", text),
    }
    println!("sequences={}", seqs.len());
    Ok(0)
}

struct ModelSpec {
    problem: ColoringProblem,
    matrix: Option<DegreeMatrix>,
}

fn build_model(
    spec: &ModelSpec,
    sym_break: &str,
    partial: Option<&PartialColoredGraph>,
    circulant: bool,
) -> Result<model::ConstraintModel, CmdError> {
    let p = &spec.problem;
    let n = p.vertex_count();
    let k = p.color_count();
    let mut m = model::ramsey_model(p);
    match sym_break {
        "none" => {}
        "lex" => m = m.and(model::sb_lex(n, k)).map_err(CmdError::from)?,
        "dm" => {
            let matrix = spec
                .matrix
                .as_ref()
                .ok_or_else(|| CmdError::usage("--sym-break dm requires --dm-file"))?;
            m = m
                .and(model::degree_matrix_model(matrix)?)
                .map_err(CmdError::from)?
                .and(model::sb_lex_dm(matrix)?)
                .map_err(CmdError::from)?;
        }
        other => return Err(CmdError::usage(format!("unknown sym-break {:?}", other))),
    }
    if let Some(partial) = partial {
        m = model::fix_partial(m, partial).map_err(CmdError::from)?;
    }
    if circulant {
        m = m.and(model::circulant_model(n, k)).map_err(CmdError::from)?;
    }
    Ok(m)
}

fn load_matrix(path: &Option<PathBuf>) -> Result<Option<DegreeMatrix>, CmdError> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            let mats = degseq::parse_matrices(&text)?;
            mats.into_iter()
                .next()
                .map(Some)
                .ok_or_else(|| CmdError::usage("degree-matrix file is empty"))
        }
        None => Ok(None),
    }
}

pub fn encode(
    problem: &str,
    n: usize,
    sym_break: &str,
    dm_file: Option<PathBuf>,
    partial_file: Option<PathBuf>,
    circulant: bool,
    out: PathBuf,
) -> Result<i32, CmdError> {
    let spec = ModelSpec {
        problem: parse_problem(problem, n)?,
        matrix: load_matrix(&dm_file)?,
    };
    let partial = match &partial_file {
        Some(path) => Some(PartialColoredGraph::from_text(&std::fs::read_to_string(path)?)?),
        None => None,
    };
    let m = build_model(&spec, sym_break, partial.as_ref(), circulant)?;
    let (f, vm) = cnf::encode(&m);
    let mut file = std::fs::File::create(&out)?;
    cnf::write_dimacs(&f, &mut file)?;
    let sidecar = out.with_extension("varmap");
    std::fs::write(&sidecar, vm.to_text())?;
    println!("vars={} clauses={} varmap={}", f.var_count(), f.clauses().len(), sidecar.display());
    Ok(0)
}

pub fn enumerate(
    problem: &str,
    n: usize,
    sym_break: &str,
    dm_file: Option<PathBuf>,
    reduce: bool,
    out_dir: Option<PathBuf>,
    backend: &BackendArgs,
) -> Result<i32, CmdError> {
    let spec = ModelSpec {
        problem: parse_problem(problem, n)?,
        matrix: load_matrix(&dm_file)?,
    };
    let m = build_model(&spec, sym_break, None, false)?;
    let (f, vm) = cnf::encode(&m);
    let backend = backend.build().map_err(CmdError::usage)?;

    let (journal, solutions_dir) = match &out_dir {
        Some(dir) => {
            let solutions = dir.join("solutions");
            std::fs::create_dir_all(&solutions)?;
            (Some(dir.join("enumeration.blocked")), Some(solutions))
        }
        None => (None, None),
    };

    let mut raw = Vec::new();
    let stream = cnf::enumerate_colorings(&f, &vm, &backend, journal.as_deref())?;
    let mut budget_hit = false;
    for item in stream {
        match item {
            Ok(g) => {
                if !g.is_ramsey_coloring(spec.problem.bounds()) {
                    return Err(CmdError {
                        code: 3,
                        message: "decoded solution failed verification".into(),
                    });
                }
                if let Some(dir) = &solutions_dir {
                    let path = dir.join(format!("{:06}.graph", raw.len() + 1));
                    std::fs::write(path, g.to_text())?;
                }
                raw.push(g);
            }
            Err(ramsey_core::Error::BudgetExceeded(_)) => {
                budget_hit = true;
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }

    let mut summary = format!("raw={}", raw.len());
    if reduce {
        let classes = reduce_mod_weak_iso(raw);
        if let Some(dir) = &out_dir {
            let classes_dir = dir.join("classes");
            std::fs::create_dir_all(&classes_dir)?;
            for (idx, g) in classes.iter().enumerate() {
                std::fs::write(classes_dir.join(format!("{:06}.graph", idx + 1)), g.to_text())?;
            }
        }
        summary.push_str(&format!(" classes={}", classes.len()));
    }
    if budget_hit {
        summary.push_str(" partial=1");
    }
    println!("{}", summary);
    Ok(if budget_hit { 4 } else { 0 })
}

#[allow(clippy::too_many_arguments)]
pub fn pipeline(
    problem: &str,
    n: usize,
    min: u32,
    max: u32,
    out_dir: PathBuf,
    resume: bool,
    workers: usize,
    stop_after: Option<usize>,
    backend: &BackendArgs,
) -> Result<i32, CmdError> {
    let p = parse_problem(problem, n)?;
    if min > max {
        return Err(CmdError::usage(format!("min {} exceeds max {}", min, max)));
    }
    if out_dir.join("run.meta").exists() && !resume {
        return Err(CmdError::usage(format!(
            "{} already holds a run; pass --resume to continue it",
            out_dir.display()
        )));
    }
    let mut s = session(backend, workers, Some(out_dir))?;
    s.stop_after = stop_after;
    let outcome = stages::run_degree_matrix_pipeline(&s, &p, min, max)?;
    println!(
        "sequences={} feasible_sequences={} matrices={} feasible_matrices={} raw={} classes={} partial={}",
        outcome.sequence_count,
        outcome.feasible_sequences.len(),
        outcome.matrix_count,
        outcome.feasible_matrices.len(),
        outcome.raw_solution_count,
        outcome.classes.len(),
        outcome.partial as u8,
    );
    Ok(if outcome.partial { 4 } else { 0 })
}

fn load_library_dir(dir: &str) -> Result<Vec<ColoredGraph>, CmdError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|x| x == "graph").unwrap_or(false))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CmdError::usage(format!("no .graph files in {}", dir)));
    }
    files
        .iter()
        .map(|p| Ok(ColoredGraph::from_text(&std::fs::read_to_string(p)?)?))
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn embed(
    problem: &str,
    n: usize,
    degrees: Option<&str>,
    lib_dirs: Option<&str>,
    instance_file: Option<PathBuf>,
    out_dir: Option<PathBuf>,
    workers: usize,
    stop_after: Option<usize>,
    backend: &BackendArgs,
) -> Result<i32, CmdError> {
    let p = parse_problem(problem, n)?;

    if let Some(path) = instance_file {
        // Single fixed instance from a partial coloring file.
        let partial = PartialColoredGraph::from_text(&std::fs::read_to_string(path)?)?;
        if partial.vertex_count() != n || partial.color_count() != p.color_count() {
            return Err(CmdError::usage("instance file shape differs from --problem/--n"));
        }
        let m = model::fix_partial(model::ramsey_model(&p), &partial)?;
        let (f, vm) = cnf::encode(&m);
        let backend = backend.build().map_err(CmdError::usage)?;
        return match cnf::solve(&f, &backend)? {
            SolveOutcome::Unsat => {
                println!("instances=1 unsat=1 sat=0 partial=0");
                Ok(0)
            }
            SolveOutcome::Sat(assignment) => {
                let g = cnf::decode(&assignment, &vm, n, p.color_count())?;
                if !g.is_ramsey_coloring(p.bounds()) {
                    return Err(CmdError {
                        code: 3,
                        message: "completion failed verification".into(),
                    });
                }
                if let Some(dir) = &out_dir {
                    std::fs::create_dir_all(dir)?;
                    std::fs::write(dir.join("witness.graph"), g.to_text())?;
                }
                println!("instances=1 unsat=0 sat=1 partial=0");
                Ok(1)
            }
            SolveOutcome::BudgetExceeded => {
                println!("instances=1 unsat=0 sat=0 partial=1");
                Ok(4)
            }
        };
    }

    let degrees = parse_usize_list(degrees.expect("clap enforces"), "degrees")?;
    if degrees.iter().sum::<usize>() != n - 1 {
        return Err(CmdError::usage(format!(
            "degrees {:?} must sum to n-1 = {}",
            degrees,
            n - 1
        )));
    }
    let dirs: Vec<&str> = lib_dirs.expect("clap enforces").split(',').collect();
    if dirs.len() != p.color_count() {
        return Err(CmdError::usage("one library directory per color"));
    }
    let libraries: Vec<Vec<ColoredGraph>> = dirs
        .iter()
        .map(|d| load_library_dir(d))
        .collect::<Result<_, _>>()?;

    let mut s = session(backend, workers, out_dir)?;
    s.stop_after = stop_after;
    let verdict = ramsey_pipeline::embedding::refute_degree_triple(&s, &p, &degrees, &libraries)?;
    match verdict {
        TripleVerdict::AllUnsat { instances } => {
            println!("instances={} unsat={} sat=0 partial=0", instances, instances);
            Ok(0)
        }
        TripleVerdict::Sat { instance_id, witness } => {
            if let Some(dir) = &s.out_dir {
                std::fs::write(dir.join("witness.graph"), witness.to_text())?;
            }
            println!("sat=1 instance={}", instance_id);
            Ok(1)
        }
        TripleVerdict::Partial {
            unsat,
            errors,
            pending,
        } => {
            println!(
                "instances={} unsat={} sat=0 partial={}",
                unsat + errors + pending,
                unsat,
                errors + pending
            );
            Ok(4)
        }
    }
}

pub fn circulant(
    problem: &str,
    n: usize,
    out: Option<PathBuf>,
    backend: &BackendArgs,
) -> Result<i32, CmdError> {
    let p = parse_problem(problem, n)?;
    let s = session(backend, 1, None)?;
    match stages::find_circulant_coloring(&s, &p)? {
        SearchVerdict::Found(g) => {
            match &out {
                Some(path) => std::fs::write(path, g.to_text())?,
                None => print!("{}", g.to_text()),
            }
            println!("sat=1");
            Ok(0)
        }
        SearchVerdict::Unsat => {
            println!("sat=0 unsat=1");
            Ok(0)
        }
        SearchVerdict::Inconclusive => {
            println!("sat=0 unsat=0 partial=1");
            Ok(4)
        }
    }
}

pub fn solve_dimacs(file: PathBuf, budget: Option<u64>) -> Result<i32, CmdError> {
    let text = std::fs::read_to_string(&file)?;
    let f = cnf::read_dimacs_str(&text)?;
    let backend = match budget {
        Some(c) => ramsey_core::cnf::Backend::embedded_with(ramsey_core::cnf::SolverBudget::conflicts(c)),
        None => ramsey_core::cnf::Backend::embedded(),
    };
    match cnf::solve(&f, &backend)? {
        SolveOutcome::Sat(model) => {
            println!("s SATISFIABLE");
            let mut line = String::from("v");
            for (idx, &value) in model.iter().enumerate() {
                let lit = if value { (idx + 1) as i64 } else { -((idx + 1) as i64) };
                line.push_str(&format!(" {}", lit));
                if line.len() > 72 {
                    println!("{}", line);
                    line = String::from("v");
                }
            }
            println!("{} 0", line);
            Ok(10)
        }
        SolveOutcome::Unsat => {
            println!("s UNSATISFIABLE");
            Ok(20)
        }
        SolveOutcome::BudgetExceeded => {
            println!("s UNKNOWN");
            Ok(4)
        }
    }
}
