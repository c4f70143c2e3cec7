//! The degree-matrix pipeline stages: bounds verification, sequence and
//! matrix filtering by SAT, per-matrix enumeration, and the end-to-end
//! driver that unions per-matrix solutions and reduces them modulo weak
//! isomorphism.

use crate::manifest::{run_jobs, Job, JobStatus};
use crate::session::{parse_graphs, read_if_exists, write_graphs, Session};
use crate::{Error, Result};
use ramsey_core::cnf::{self, Backend, SolveOutcome};
use ramsey_core::degseq::{self, DegreeSequence};
use ramsey_core::graph::{reduce_mod_weak_iso, ColorPerm, ColoredGraph, DegreeMatrix};
use ramsey_core::model::{self, ColoringProblem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundsVerdict {
    Verified,
    Refuted(Box<ColoredGraph>),
    Inconclusive,
}

/// Checks that every vertex degree in every color lies in `[lo, hi]` for
/// every solution of `p`, by solving the violation model once.
pub fn verify_degree_bounds(
    session: &Session,
    p: &ColoringProblem,
    lo: u32,
    hi: u32,
) -> Result<BoundsVerdict> {
    let n = p.vertex_count();
    let mut m = model::degree_bound_violation_model(p, lo, hi);
    if n >= 2 {
        // The violation property is invariant under vertex and color
        // permutations, so the lex-leader break preserves satisfiability.
        m = m.and(model::sb_lex(n, p.color_count()))?;
    }
    let (f, vm) = cnf::encode(&m);
    match cnf::solve(&f, &session.backend)? {
        SolveOutcome::Unsat => Ok(BoundsVerdict::Verified),
        SolveOutcome::BudgetExceeded => Ok(BoundsVerdict::Inconclusive),
        SolveOutcome::Sat(assignment) => {
            let g = cnf::decode(&assignment, &vm, n, p.color_count())?;
            if !g.is_ramsey_coloring(p.bounds()) {
                return Err(Error::Core(ramsey_core::Error::EncodingSoundness(
                    "bounds witness is not a valid coloring".into(),
                )));
            }
            let dm = g.degree_matrix();
            let violated = (1..=n).any(|v| {
                (1..=p.color_count()).any(|c| dm.entry(v, c) < lo || dm.entry(v, c) > hi)
            });
            if !violated {
                return Err(Error::Core(ramsey_core::Error::EncodingSoundness(
                    "bounds witness does not violate the bounds".into(),
                )));
            }
            Ok(BoundsVerdict::Refuted(Box::new(g)))
        }
    }
}

/// Result of a SAT filter over candidate abstractions.
#[derive(Debug, Clone)]
pub struct FilterOutcome<T> {
    pub feasible: Vec<T>,
    pub infeasible: Vec<T>,
    /// Items whose instance exhausted its budget or failed, with the reason.
    /// They are not dropped: callers must treat them as potentially feasible.
    pub undecided: Vec<(T, String)>,
}

impl<T: Clone> FilterOutcome<T> {
    /// Feasible plus undecided: the sound over-approximation to carry
    /// forward.
    pub fn surviving(&self) -> Vec<T> {
        let mut out = self.feasible.clone();
        out.extend(self.undecided.iter().map(|(t, _)| t.clone()));
        out
    }
}

fn sequence_id(s: &DegreeSequence) -> String {
    let parts: Vec<String> = s.values().iter().map(|v| v.to_string()).collect();
    format!("s{}", parts.join("-"))
}

fn matrix_id(m: &DegreeMatrix) -> String {
    let mut parts = Vec::new();
    for v in 1..=m.vertex_count() {
        let row: Vec<String> = m.row(v).iter().map(|x| x.to_string()).collect();
        parts.push(row.join("."));
    }
    format!("m{}", parts.join("-"))
}

fn solve_status(backend: &Backend, m: &model::ConstraintModel) -> JobStatus {
    let (f, _) = cnf::encode(m);
    match cnf::solve(&f, backend) {
        Ok(SolveOutcome::Sat(_)) => JobStatus::Sat { result: None },
        Ok(SolveOutcome::Unsat) => JobStatus::Unsat,
        Ok(SolveOutcome::BudgetExceeded) => JobStatus::Error {
            message: "budget exceeded".into(),
        },
        Err(e) => JobStatus::Error {
            message: e.to_string(),
        },
    }
}

/// Keeps the sequences realizable as the color-1 degree sequence of a
/// solution of `p`. Vertices are pre-ordered by the candidate sequence, and
/// the lex-leader break guarded on equal sequence entries is added (sound:
/// those vertices are interchangeable under the fixed data).
pub fn filter_sequences_sat(
    session: &Session,
    p: &ColoringProblem,
    seqs: &[DegreeSequence],
) -> Result<FilterOutcome<DegreeSequence>> {
    let n = p.vertex_count();
    let k = p.color_count();
    let mut manifest = session.manifest("seq_filter.jsonl")?;
    let jobs: Vec<Job> = seqs
        .iter()
        .map(|s| {
            let id = sequence_id(s);
            let recipe = format!("{} color-1 degrees {}", p, s);
            let backend = session.backend.clone();
            let p = p.clone();
            let s = s.clone();
            Job {
                id,
                recipe,
                run: Box::new(move || {
                    let build = || -> Result<model::ConstraintModel> {
                        let mut m = model::ramsey_model(&p)
                            .and(model::color_degree_model(n, k, 1, s.values())?)?;
                        let pairs: Vec<(usize, usize)> = (1..=n)
                            .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
                            .filter(|&(i, j)| s.values()[i - 1] == s.values()[j - 1])
                            .collect();
                        m = m.and(model::sb_lex_guarded_pairs(n, k, &pairs))?;
                        Ok(m)
                    };
                    match build() {
                        Ok(m) => solve_status(&backend, &m),
                        Err(e) => JobStatus::Error {
                            message: e.to_string(),
                        },
                    }
                }),
            }
        })
        .collect();
    run_jobs(&mut manifest, jobs, session.workers, session.stop_after)?;

    let mut out = FilterOutcome {
        feasible: Vec::new(),
        infeasible: Vec::new(),
        undecided: Vec::new(),
    };
    for s in seqs {
        match manifest.get(&sequence_id(s)).map(|r| &r.status) {
            Some(JobStatus::Sat { .. }) => out.feasible.push(s.clone()),
            Some(JobStatus::Unsat) => out.infeasible.push(s.clone()),
            Some(JobStatus::Error { message }) => out.undecided.push((s.clone(), message.clone())),
            Some(JobStatus::Pending) | None => {
                out.undecided.push((s.clone(), "not yet run".into()))
            }
        }
    }
    Ok(out)
}

/// Keeps the candidate degree matrices that are the abstraction of some
/// solution of `p`.
pub fn filter_matrices_sat(
    session: &Session,
    p: &ColoringProblem,
    mats: &[DegreeMatrix],
) -> Result<FilterOutcome<DegreeMatrix>> {
    // A matrix with a non-graphical column cannot be any coloring's
    // abstraction; reject without solving.
    let (candidates, rejected): (Vec<&DegreeMatrix>, Vec<&DegreeMatrix>) = mats.iter().partition(|m| {
        (1..=m.color_count()).all(|c| {
            degseq::is_graphical(&DegreeSequence::from_unsorted(m.column(c)))
        })
    });

    let mut manifest = session.manifest("mat_filter.jsonl")?;
    let jobs: Vec<Job> = candidates
        .iter()
        .map(|&m| {
            let id = matrix_id(m);
            let recipe = format!("{} degree matrix {}", p, id);
            let backend = session.backend.clone();
            let p = p.clone();
            let m = m.clone();
            Job {
                id,
                recipe,
                run: Box::new(move || {
                    let build = || -> Result<model::ConstraintModel> {
                        Ok(model::ramsey_model(&p)
                            .and(model::degree_matrix_model(&m)?)?
                            .and(model::sb_lex_dm(&m)?)?)
                    };
                    match build() {
                        Ok(model) => solve_status(&backend, &model),
                        Err(e) => JobStatus::Error {
                            message: e.to_string(),
                        },
                    }
                }),
            }
        })
        .collect();
    run_jobs(&mut manifest, jobs, session.workers, session.stop_after)?;

    let mut out = FilterOutcome {
        feasible: Vec::new(),
        infeasible: rejected.into_iter().cloned().collect(),
        undecided: Vec::new(),
    };
    for &m in &candidates {
        match manifest.get(&matrix_id(m)).map(|r| &r.status) {
            Some(JobStatus::Sat { .. }) => out.feasible.push(m.clone()),
            Some(JobStatus::Unsat) => out.infeasible.push(m.clone()),
            Some(JobStatus::Error { message }) => out.undecided.push((m.clone(), message.clone())),
            Some(JobStatus::Pending) | None => {
                out.undecided.push((m.clone(), "not yet run".into()))
            }
        }
    }
    Ok(out)
}

/// Enumerates every solution of `p` with degree matrix exactly `m`, under
/// the guarded lex-leader break. Solutions are verified before being
/// returned. With an artifact directory the enumeration is journaled and
/// resumable; a completed matrix is loaded instead of re-enumerated.
pub fn enumerate_per_matrix(
    session: &Session,
    p: &ColoringProblem,
    m: &DegreeMatrix,
) -> Result<Vec<ColoredGraph>> {
    let mid = matrix_id(m);
    let done_path = session.subdir("solutions")?.map(|d| d.join(format!("{}.done", mid)));
    let graphs_path = session.artifact_path(&format!("solutions/{}.graphs", mid));
    if let Some(done) = &done_path {
        if done.exists() {
            let text = read_if_exists(graphs_path.as_ref().unwrap())?.unwrap_or_default();
            let mut sols = parse_graphs(&text)?;
            sols.sort();
            sols.dedup();
            return Ok(sols);
        }
    }

    let constraint = model::ramsey_model(p)
        .and(model::degree_matrix_model(m)?)?
        .and(model::sb_lex_dm(m)?)?;
    let (f, vm) = cnf::encode(&constraint);

    let journal = session.artifact_path(&format!("solutions/{}.blocked", mid));
    let mut sols: Vec<ColoredGraph> = match &graphs_path {
        Some(path) => parse_graphs(&read_if_exists(path)?.unwrap_or_default())?,
        None => Vec::new(),
    };
    let stream = cnf::enumerate_colorings(&f, &vm, &session.backend, journal.as_deref())?;
    for item in stream {
        let g = item?;
        if !g.is_ramsey_coloring(p.bounds()) || g.degree_matrix() != *m || !g.satisfies_sb_lex_dm(m) {
            return Err(Error::Core(ramsey_core::Error::EncodingSoundness(
                "per-matrix solution failed verification".into(),
            )));
        }
        if let Some(path) = &graphs_path {
            let mut chunk = String::new();
            if !sols.is_empty() || path.exists() {
                chunk.push('\n');
            }
            chunk.push_str(&g.to_text());
            append(path, &chunk)?;
        }
        sols.push(g);
    }
    sols.sort();
    sols.dedup();
    if let Some(done) = &done_path {
        std::fs::write(done, format!("raw={}\n", sols.len()))?;
    }
    Ok(sols)
}

fn append(path: &std::path::Path, text: &str) -> Result<()> {
    use std::io::Write;
    let mut file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    file.write_all(text.as_bytes())?;
    file.flush()?;
    Ok(())
}

/// Outcome of the full degree-matrix pipeline.
#[derive(Debug)]
pub struct PipelineOutcome {
    pub bounds: BoundsVerdict,
    pub sequence_count: usize,
    pub feasible_sequences: Vec<DegreeSequence>,
    pub matrix_count: usize,
    pub feasible_matrices: Vec<DegreeMatrix>,
    pub raw_solution_count: u64,
    pub classes: Vec<ColoredGraph>,
    /// True when any sub-instance was inconclusive; the class set is then a
    /// lower bound, not a completed enumeration.
    pub partial: bool,
}

/// Runs the five approximation steps followed by per-matrix enumeration and
/// weak-isomorphism reduction.
pub fn run_degree_matrix_pipeline(
    session: &Session,
    p: &ColoringProblem,
    lo: u32,
    hi: u32,
) -> Result<PipelineOutcome> {
    let n = p.vertex_count();
    let k = p.color_count();
    session.ensure_out_dir()?;
    check_run_meta(session, p, lo, hi)?;
    let mut partial = false;

    // Step 1: degree bounds.
    let bounds = match load_bounds_artifact(session)? {
        Some(b) => b,
        None => {
            let b = verify_degree_bounds(session, p, lo, hi)?;
            if let BoundsVerdict::Refuted(witness) = &b {
                if let Some(path) = session.artifact_path("bounds_witness.graph") {
                    std::fs::write(path, witness.to_text())?;
                }
                return Err(Error::BoundsRefuted { lo, hi });
            }
            store_bounds_artifact(session, &b)?;
            b
        }
    };
    if bounds == BoundsVerdict::Inconclusive {
        partial = true;
    }

    // Step 2: graphical degree sequences within bounds.
    let sequences = match session.artifact_path("sequences.txt") {
        Some(path) => match read_if_exists(&path)? {
            Some(text) => degseq::parse_sequences(&text)?,
            None => {
                let seqs = degseq::enum_degree_sequences(n, lo, hi)?;
                std::fs::write(&path, degseq::write_sequences(&seqs))?;
                seqs
            }
        },
        None => degseq::enum_degree_sequences(n, lo, hi)?,
    };

    // Step 3: SAT filter on sequences.
    let seq_filter = filter_sequences_sat(session, p, &sequences)?;
    partial |= !seq_filter.undecided.is_empty();
    let surviving_sequences = seq_filter.surviving();
    if let Some(path) = session.artifact_path("feasible_sequences.txt") {
        std::fs::write(&path, degseq::write_sequences(&surviving_sequences))?;
    }

    // Step 4: candidate degree matrices.
    let matrices = match session.artifact_path("matrices.txt") {
        Some(path) => match read_if_exists(&path)? {
            Some(text) => degseq::parse_matrices(&text)?,
            None => {
                let mats = degseq::enum_degree_matrices(n, k, n as u32 - 1, &surviving_sequences)?;
                std::fs::write(&path, degseq::write_matrices(&mats))?;
                mats
            }
        },
        None => degseq::enum_degree_matrices(n, k, n as u32 - 1, &surviving_sequences)?,
    };

    // Step 5: SAT filter on matrices.
    let mat_filter = filter_matrices_sat(session, p, &matrices)?;
    partial |= !mat_filter.undecided.is_empty();
    let surviving_matrices = mat_filter.surviving();
    if let Some(path) = session.artifact_path("feasible_matrices.txt") {
        std::fs::write(&path, degseq::write_matrices(&surviving_matrices))?;
    }

    // Per-matrix enumeration, union, reduction.
    let mut raw = 0u64;
    let mut all_classes: Vec<ColoredGraph> = Vec::new();
    for m in &surviving_matrices {
        match enumerate_per_matrix(session, p, m) {
            Ok(sols) => {
                raw += sols.len() as u64;
                all_classes.extend(reduce_mod_weak_iso(sols));
            }
            Err(Error::Core(ramsey_core::Error::BudgetExceeded(_))) => {
                partial = true;
            }
            Err(e) => return Err(e),
        }
    }
    let classes = reduce_mod_weak_iso(all_classes);
    if let Some(path) = session.artifact_path("classes.txt") {
        std::fs::write(&path, write_graphs(&classes))?;
    }

    Ok(PipelineOutcome {
        bounds,
        sequence_count: sequences.len(),
        feasible_sequences: seq_filter.feasible,
        matrix_count: matrices.len(),
        feasible_matrices: mat_filter.feasible,
        raw_solution_count: raw,
        classes,
        partial,
    })
}

fn check_run_meta(session: &Session, p: &ColoringProblem, lo: u32, hi: u32) -> Result<()> {
    let Some(path) = session.artifact_path("run.meta") else {
        return Ok(());
    };
    let meta = format!("{} lo={} hi={}\n", p, lo, hi);
    match read_if_exists(&path)? {
        Some(existing) if existing != meta => Err(Error::Invalid(format!(
            "artifact directory belongs to a different run: {}",
            existing.trim()
        ))),
        Some(_) => Ok(()),
        None => {
            std::fs::write(&path, meta)?;
            Ok(())
        }
    }
}

fn load_bounds_artifact(session: &Session) -> Result<Option<BoundsVerdict>> {
    let Some(path) = session.artifact_path("bounds.txt") else {
        return Ok(None);
    };
    match read_if_exists(&path)? {
        Some(text) => match text.trim() {
            "verified" => Ok(Some(BoundsVerdict::Verified)),
            "inconclusive" => Ok(Some(BoundsVerdict::Inconclusive)),
            other => Err(Error::Invalid(format!("bad bounds artifact: {}", other))),
        },
        None => Ok(None),
    }
}

fn store_bounds_artifact(session: &Session, b: &BoundsVerdict) -> Result<()> {
    if let Some(path) = session.artifact_path("bounds.txt") {
        let text = match b {
            BoundsVerdict::Verified => "verified\n",
            BoundsVerdict::Inconclusive => "inconclusive\n",
            BoundsVerdict::Refuted(_) => unreachable!("refuted runs abort earlier"),
        };
        std::fs::write(path, text)?;
    }
    Ok(())
}

/// All weak-isomorphism classes of the problem obtained from `p` by
/// decrementing the bound of color `c`, on `d` vertices. Classes are reduced
/// modulo vertex permutations together with the color permutations that
/// stabilize the decremented bound vector.
pub fn subcoloring_library(
    session: &Session,
    p: &ColoringProblem,
    c: usize,
    d: usize,
) -> Result<Vec<ColoredGraph>> {
    let sub = p.decrement_bound(c, d)?;
    session.ensure_out_dir()?;
    let k = sub.color_count();
    let name = format!(
        "library_{}_c{}_d{}.txt",
        p.bounds().iter().map(|b| b.to_string()).collect::<Vec<_>>().join(""),
        c,
        d
    );
    if let Some(path) = session.artifact_path(&name) {
        if let Some(text) = read_if_exists(&path)? {
            return Ok(parse_graphs(&text)?);
        }
    }

    let mut m = model::ramsey_model(&sub);
    if d >= 2 {
        m = m.and(model::sb_lex(d, k))?;
    }
    let (f, vm) = cnf::encode(&m);
    let journal = session.artifact_path(&format!("{}.blocked", name));
    let mut raw: Vec<ColoredGraph> = Vec::new();
    for item in cnf::enumerate_colorings(&f, &vm, &session.backend, journal.as_deref())? {
        let g = item?;
        if !g.is_ramsey_coloring(sub.bounds()) {
            return Err(Error::Core(ramsey_core::Error::EncodingSoundness(
                "library member failed verification".into(),
            )));
        }
        raw.push(g);
    }
    let stabilizer = ColorPerm::stabilizer(sub.bounds());
    let mut classes: Vec<ColoredGraph> = raw
        .into_iter()
        .map(|g| g.canonical_form_under(&stabilizer).0)
        .collect();
    classes.sort();
    classes.dedup();

    if let Some(path) = session.artifact_path(&name) {
        std::fs::write(&path, write_graphs(&classes))?;
    }
    Ok(classes)
}

/// Outcome of a single-solution search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchVerdict {
    Found(Box<ColoredGraph>),
    Unsat,
    Inconclusive,
}

/// Searches for a coloring of `p` whose cell colors depend only on the
/// cyclic vertex distance.
pub fn find_circulant_coloring(session: &Session, p: &ColoringProblem) -> Result<SearchVerdict> {
    let n = p.vertex_count();
    let k = p.color_count();
    let m = model::ramsey_model(p).and(model::circulant_model(n, k))?;
    let (f, vm) = cnf::encode(&m);
    match cnf::solve(&f, &session.backend)? {
        SolveOutcome::Unsat => Ok(SearchVerdict::Unsat),
        SolveOutcome::BudgetExceeded => Ok(SearchVerdict::Inconclusive),
        SolveOutcome::Sat(assignment) => {
            let g = cnf::decode(&assignment, &vm, n, k)?;
            if !g.is_ramsey_coloring(p.bounds()) {
                return Err(Error::Core(ramsey_core::Error::EncodingSoundness(
                    "circulant witness failed verification".into(),
                )));
            }
            Ok(SearchVerdict::Found(Box::new(g)))
        }
    }
}
