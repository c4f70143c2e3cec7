//! Embedding instances: a distinguished first vertex with prescribed color
//! degrees, its color neighborhoods fixed to known smaller colorings, and
//! the rest of the matrix left to a SAT solver.

use crate::manifest::{run_jobs, Job, JobStatus};
use crate::session::Session;
use crate::{Error, Result};
use ramsey_core::cnf::{self, SolveOutcome};
use ramsey_core::graph::{ColoredGraph, PartialColoredGraph};
use ramsey_core::model::{self, ColoringProblem};

/// Admissible per-vertex degree tuples: within the per-color bounds, summing
/// to `n - 1`, with ties broken so that colors with equal clique bounds have
/// non-increasing degrees (they are interchangeable).
pub fn degree_tuples(p: &ColoringProblem, per_color: &[(usize, usize)]) -> Vec<Vec<usize>> {
    assert_eq!(per_color.len(), p.color_count());
    let total = p.vertex_count() - 1;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(per_color.len());
    tuples_rec(p.bounds(), per_color, total, &mut cur, &mut out);
    out
}

fn tuples_rec(
    bounds: &[usize],
    per_color: &[(usize, usize)],
    remaining: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let c = cur.len();
    if c == per_color.len() {
        if remaining == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let (lo, hi) = per_color[c];
    // Interchangeable colors take non-increasing degrees.
    let cap = match (0..c).rev().find(|&prev| bounds[prev] == bounds[c]) {
        Some(prev) => hi.min(cur[prev]),
        None => hi,
    };
    for d in (lo..=cap.min(remaining)).rev() {
        cur.push(d);
        tuples_rec(bounds, per_color, remaining - d, cur, out);
        cur.pop();
    }
}

/// Number of embedding instances for the given library sizes.
pub fn embedding_count(library_sizes: &[usize]) -> u64 {
    library_sizes.iter().map(|&s| s as u64).product()
}

/// A partially fixed coloring: vertex 1 with prescribed degrees, each color
/// block filled with a known smaller coloring, cross-block cells open.
#[derive(Clone, Debug)]
pub struct EmbeddingInstance {
    pub problem: ColoringProblem,
    pub degrees: Vec<usize>,
    pub components: Vec<ColoredGraph>,
    pub realized: PartialColoredGraph,
    pub id: String,
}

impl EmbeddingInstance {
    pub fn new(
        problem: &ColoringProblem,
        degrees: &[usize],
        components: Vec<ColoredGraph>,
        id: String,
    ) -> Result<Self> {
        let n = problem.vertex_count();
        let k = problem.color_count();
        if degrees.len() != k || components.len() != k {
            return Err(Error::Invalid("one degree and one component per color".into()));
        }
        if degrees.iter().sum::<usize>() != n - 1 {
            return Err(Error::Invalid(format!(
                "degrees {:?} must sum to {}",
                degrees,
                n - 1
            )));
        }
        for (c0, comp) in components.iter().enumerate() {
            if comp.vertex_count() != degrees[c0] || comp.color_count() != k {
                return Err(Error::Invalid(format!(
                    "component {} has wrong shape",
                    c0 + 1
                )));
            }
            let sub = problem.decrement_bound(c0 + 1, degrees[c0])?;
            if !comp.is_ramsey_coloring(sub.bounds()) {
                return Err(Error::Invalid(format!(
                    "component {} is not a {} coloring",
                    c0 + 1,
                    sub
                )));
            }
        }

        let mut realized = PartialColoredGraph::unassigned(n, k)?;
        let mut start = 2usize; // first vertex of the current block
        for (c0, comp) in components.iter().enumerate() {
            let d = degrees[c0];
            for u in 0..d {
                realized.set(1, start + u, c0 as u8 + 1)?;
                for v in (u + 1)..d {
                    realized.set(start + u, start + v, comp.color(u + 1, v + 1))?;
                }
            }
            start += d;
        }
        Ok(EmbeddingInstance {
            problem: problem.clone(),
            degrees: degrees.to_vec(),
            components,
            realized,
            id,
        })
    }
}

/// Streams the full Cartesian product of library members as embedding
/// instances. Library members are validated once, up front.
pub fn generate_embeddings<'a>(
    p: &ColoringProblem,
    degrees: &'a [usize],
    libraries: &'a [Vec<ColoredGraph>],
) -> Result<impl Iterator<Item = EmbeddingInstance> + 'a> {
    let k = p.color_count();
    if degrees.len() != k || libraries.len() != k {
        return Err(Error::Invalid("one degree and one library per color".into()));
    }
    if degrees.iter().sum::<usize>() != p.vertex_count() - 1 {
        return Err(Error::Invalid(format!(
            "degrees {:?} must sum to {}",
            degrees,
            p.vertex_count() - 1
        )));
    }
    for (c0, lib) in libraries.iter().enumerate() {
        let sub = p.decrement_bound(c0 + 1, degrees[c0])?;
        for member in lib {
            if member.vertex_count() != degrees[c0]
                || member.color_count() != k
                || !member.is_ramsey_coloring(sub.bounds())
            {
                return Err(Error::Invalid(format!(
                    "library {} contains a non-{} member",
                    c0 + 1,
                    sub
                )));
            }
        }
    }

    let problem = p.clone();
    let sizes: Vec<usize> = libraries.iter().map(|l| l.len()).collect();
    let total = embedding_count(&sizes);
    let mut cursor = 0u64;
    Ok(std::iter::from_fn(move || {
        if cursor >= total {
            return None;
        }
        let mut rest = cursor;
        let mut picks = Vec::with_capacity(sizes.len());
        for &s in sizes.iter().rev() {
            picks.push((rest % s as u64) as usize);
            rest /= s as u64;
        }
        picks.reverse();
        cursor += 1;
        let components: Vec<ColoredGraph> = picks
            .iter()
            .enumerate()
            .map(|(c0, &i)| libraries[c0][i].clone())
            .collect();
        let id = format!(
            "d{}_i{}",
            degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("-"),
            picks.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("."),
        );
        Some(
            EmbeddingInstance::new(&problem, degrees, components, id)
                .expect("library members were validated"),
        )
    }))
}

/// Verdict of a refutation batch over one degree tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TripleVerdict {
    /// Every instance is unsatisfiable: no coloring of the problem has a
    /// vertex with these degrees.
    AllUnsat { instances: usize },
    /// Some instance completed; the completed coloring is the witness.
    Sat {
        instance_id: String,
        witness: Box<ColoredGraph>,
    },
    /// Some instances remain undecided (budget or backend failures).
    Partial {
        unsat: usize,
        errors: usize,
        pending: usize,
    },
}

/// Solves the completion problem for every embedding instance of one degree
/// tuple. Progress is recorded in a manifest named after the tuple, so an
/// interrupted batch resumes where it stopped.
pub fn refute_degree_triple(
    session: &Session,
    p: &ColoringProblem,
    degrees: &[usize],
    libraries: &[Vec<ColoredGraph>],
) -> Result<TripleVerdict> {
    let manifest_name = format!(
        "embed_d{}.jsonl",
        degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("-")
    );
    let mut manifest = session.manifest(&manifest_name)?;

    let witness_dir = session.subdir("witnesses")?;
    let mut jobs = Vec::new();
    let mut instance_count = 0usize;
    for instance in generate_embeddings(p, degrees, libraries)? {
        instance_count += 1;
        let backend = session.backend.clone();
        let witness_dir = witness_dir.clone();
        let recipe = format!("{} embedding {}", p, instance.id);
        let id = instance.id.clone();
        jobs.push(Job {
            id,
            recipe,
            run: Box::new(move || solve_instance(&backend, &instance, witness_dir.as_deref())),
        });
    }
    run_jobs(&mut manifest, jobs, session.workers, session.stop_after)?;

    let (sat, unsat, errors, pending) = manifest.tally();
    if sat > 0 {
        // Recover the witness: re-solve the first SAT instance (cheap and
        // deterministic relative to the batch).
        let sat_id = manifest
            .records()
            .find(|r| matches!(r.status, JobStatus::Sat { .. }))
            .map(|r| r.id.clone())
            .expect("tally said sat > 0");
        for instance in generate_embeddings(p, degrees, libraries)? {
            if instance.id == sat_id {
                match solve_instance_full(&session.backend, &instance)? {
                    Some(witness) => {
                        return Ok(TripleVerdict::Sat {
                            instance_id: sat_id,
                            witness: Box::new(witness),
                        })
                    }
                    None => {
                        return Err(Error::Manifest(format!(
                            "instance {} recorded SAT but re-solve disagrees",
                            sat_id
                        )))
                    }
                }
            }
        }
        return Err(Error::Manifest(format!("sat instance {} not regenerated", sat_id)));
    }
    if errors > 0 || pending > 0 {
        Ok(TripleVerdict::Partial {
            unsat,
            errors,
            pending,
        })
    } else {
        Ok(TripleVerdict::AllUnsat {
            instances: instance_count,
        })
    }
}

fn solve_instance(
    backend: &cnf::Backend,
    instance: &EmbeddingInstance,
    witness_dir: Option<&std::path::Path>,
) -> JobStatus {
    match solve_instance_full(backend, instance) {
        Ok(Some(witness)) => {
            let mut result = None;
            if let Some(dir) = witness_dir {
                let path = dir.join(format!("{}.graph", instance.id));
                if std::fs::write(&path, witness.to_text()).is_ok() {
                    result = Some(path.to_string_lossy().into_owned());
                }
            }
            JobStatus::Sat { result }
        }
        Ok(None) => JobStatus::Unsat,
        Err(e) => JobStatus::Error {
            message: e.to_string(),
        },
    }
}

/// Completes one instance. `Ok(Some(g))` is a verified completion,
/// `Ok(None)` is UNSAT, errors cover budget exhaustion and backend failures.
fn solve_instance_full(
    backend: &cnf::Backend,
    instance: &EmbeddingInstance,
) -> Result<Option<ColoredGraph>> {
    let p = &instance.problem;
    let m = model::fix_partial(model::ramsey_model(p), &instance.realized)?;
    let (f, vm) = cnf::encode(&m);
    match cnf::solve(&f, backend)? {
        SolveOutcome::Unsat => Ok(None),
        SolveOutcome::BudgetExceeded => Err(Error::Core(ramsey_core::Error::BudgetExceeded(
            "embedding instance budget".into(),
        ))),
        SolveOutcome::Sat(assignment) => {
            let g = cnf::decode(&assignment, &vm, p.vertex_count(), p.color_count())?;
            if !g.is_ramsey_coloring(p.bounds()) {
                return Err(Error::Core(ramsey_core::Error::EncodingSoundness(
                    "completion is not a valid coloring".into(),
                )));
            }
            for (u, v, c) in instance.realized.assigned_edges() {
                if g.color(u, v) != c {
                    return Err(Error::Core(ramsey_core::Error::EncodingSoundness(
                        "completion contradicts fixed cells".into(),
                    )));
                }
            }
            Ok(Some(g))
        }
    }
}
