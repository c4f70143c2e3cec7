//! Pipeline stages checked against brute-force enumeration on small
//! instances, plus embedding layout and refutation ground-truth tests.

use ramsey_core::cnf::Backend;
use ramsey_core::degseq::{self, DegreeSequence};
use ramsey_core::graph::{enumerate_all_colorings, reduce_mod_weak_iso, ColoredGraph};
use ramsey_core::model::ColoringProblem;
use ramsey_pipeline::stages::{self, BoundsVerdict, SearchVerdict};
use ramsey_pipeline::{degree_tuples, embedding_count, generate_embeddings, Session, TripleVerdict};

fn session() -> Session {
    Session::new(Backend::embedded())
}

fn oracle(n: usize, k: usize, r: &[usize]) -> Vec<ColoredGraph> {
    let r = r.to_vec();
    enumerate_all_colorings(n, k, 1 << 32, move |g| g.is_ramsey_coloring(&r))
        .unwrap()
        .collect()
}

#[test]
fn degree_bounds_33_5() {
    let s = session();
    let p = ColoringProblem::new(vec![3, 3], 5).unwrap();
    assert_eq!(stages::verify_degree_bounds(&s, &p, 2, 2).unwrap(), BoundsVerdict::Verified);
    assert_eq!(stages::verify_degree_bounds(&s, &p, 0, 4).unwrap(), BoundsVerdict::Verified);
    match stages::verify_degree_bounds(&s, &p, 3, 4).unwrap() {
        BoundsVerdict::Refuted(witness) => {
            assert!(witness.is_ramsey_coloring(&[3, 3]));
            let dm = witness.degree_matrix();
            assert!((1..=5).any(|v| (1..=2).any(|c| dm.entry(v, c) < 3)));
        }
        other => panic!("expected refutation, got {:?}", other),
    }
}

#[test]
fn sequence_filter_33_5() {
    let s = session();
    let p = ColoringProblem::new(vec![3, 3], 5).unwrap();
    let bounded = degseq::enum_degree_sequences(5, 2, 2).unwrap();
    let out = stages::filter_sequences_sat(&s, &p, &bounded).unwrap();
    assert!(out.undecided.is_empty());
    assert_eq!(out.feasible, vec![DegreeSequence::new(vec![2, 2, 2, 2, 2]).unwrap()]);

    // Full graphical range: the feasible set must be exactly the color-1
    // degree sequences realized by oracle solutions.
    let all = degseq::enum_degree_sequences(5, 0, 4).unwrap();
    let out = stages::filter_sequences_sat(&s, &p, &all).unwrap();
    let mut want: Vec<DegreeSequence> = oracle(5, 2, &[3, 3])
        .iter()
        .map(|g| DegreeSequence::from_unsorted(g.degree_matrix().column(1)))
        .collect();
    want.sort();
    want.dedup();
    let mut got = out.feasible.clone();
    got.sort();
    assert_eq!(got, want);

    let empty = stages::filter_sequences_sat(&s, &p, &[]).unwrap();
    assert!(empty.feasible.is_empty() && empty.infeasible.is_empty() && empty.undecided.is_empty());
}

#[test]
fn matrix_filter_33_5_matches_oracle_abstractions() {
    let s = session();
    let p = ColoringProblem::new(vec![3, 3], 5).unwrap();
    let seqs = degseq::enum_degree_sequences(5, 0, 4).unwrap();
    let candidates = degseq::enum_degree_matrices(5, 2, 4, &seqs).unwrap();
    let out = stages::filter_matrices_sat(&s, &p, &candidates).unwrap();
    assert!(out.undecided.is_empty());

    let mut want: Vec<_> = oracle(5, 2, &[3, 3])
        .iter()
        .map(|g| degseq::lex_canonical_dm(&g.degree_matrix()))
        .collect();
    want.sort();
    want.dedup();
    let mut got = out.feasible.clone();
    got.sort();
    assert_eq!(got, want);

    // Abstraction soundness: every oracle solution's abstraction is
    // equivalent to some surviving matrix.
    for g in oracle(5, 2, &[3, 3]) {
        let alpha = g.degree_matrix();
        assert!(out
            .surviving()
            .iter()
            .any(|m| degseq::dm_equivalent(&alpha, m)));
    }
}

#[test]
fn per_matrix_enumeration_33_5() {
    let s = session();
    let p = ColoringProblem::new(vec![3, 3], 5).unwrap();
    let m = degseq::lex_canonical_dm(
        &oracle(5, 2, &[3, 3])[0].degree_matrix(),
    );
    let sols = stages::enumerate_per_matrix(&s, &p, &m).unwrap();
    assert!(!sols.is_empty());
    let classes = reduce_mod_weak_iso(sols);
    assert_eq!(classes, reduce_mod_weak_iso(oracle(5, 2, &[3, 3])));

    // An infeasible matrix yields an empty list.
    let bad = ramsey_core::graph::DegreeMatrix::from_rows(&[
        vec![4, 0],
        vec![4, 0],
        vec![4, 0],
        vec![4, 0],
        vec![4, 0],
    ])
    .unwrap();
    assert!(stages::enumerate_per_matrix(&s, &p, &bad).unwrap().is_empty());
}

#[test]
fn pipeline_33_5_and_33_6() {
    let s = session();
    let p5 = ColoringProblem::new(vec![3, 3], 5).unwrap();
    let out = stages::run_degree_matrix_pipeline(&s, &p5, 0, 4).unwrap();
    assert!(!out.partial);
    assert_eq!(out.classes.len(), 1);
    assert_eq!(out.classes, reduce_mod_weak_iso(oracle(5, 2, &[3, 3])));

    let p6 = ColoringProblem::new(vec![3, 3], 6).unwrap();
    let out = stages::run_degree_matrix_pipeline(&s, &p6, 0, 5).unwrap();
    assert!(!out.partial);
    assert_eq!(out.classes.len(), 0);
}

#[test]
fn pipeline_artifacts_resume_identically() {
    let dir = std::env::temp_dir().join(format!("ramsey-pipe-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let p = ColoringProblem::new(vec![3, 3], 5).unwrap();

    let s = session().with_out_dir(&dir);
    let first = stages::run_degree_matrix_pipeline(&s, &p, 0, 4).unwrap();
    let again = stages::run_degree_matrix_pipeline(&s, &p, 0, 4).unwrap();
    assert_eq!(first.classes, again.classes);
    assert_eq!(first.raw_solution_count, again.raw_solution_count);
    assert!(dir.join("classes.txt").exists());
    assert!(dir.join("sequences.txt").exists());

    // A different run signature must be refused.
    let p6 = ColoringProblem::new(vec![3, 3], 6).unwrap();
    assert!(stages::run_degree_matrix_pipeline(&s, &p6, 0, 5).is_err());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn subcoloring_library_small() {
    let s = session();
    // (3,3,3) with color 1 decremented on 2 vertices: one edge, colors
    // {2,3}, reduced modulo the (2,3,3)-stabilizer swap of colors 2 and 3.
    let p = ColoringProblem::new(vec![3, 3, 3], 17).unwrap();
    let lib = stages::subcoloring_library(&s, &p, 1, 2).unwrap();
    assert_eq!(lib.len(), 1);
    assert!(lib[0].color(1, 2) >= 2);

    // (3,3;5)-style: decrementing color 1 of (3,3) on 2 vertices leaves the
    // single color-2 edge.
    let p = ColoringProblem::new(vec![3, 3], 5).unwrap();
    let lib = stages::subcoloring_library(&s, &p, 1, 2).unwrap();
    assert_eq!(lib.len(), 1);
    assert_eq!(lib[0].color(1, 2), 2);
}

#[test]
fn circulant_searches() {
    let s = session();
    let p5 = ColoringProblem::new(vec![3, 3], 5).unwrap();
    match stages::find_circulant_coloring(&s, &p5).unwrap() {
        SearchVerdict::Found(g) => assert!(g.is_ramsey_coloring(&[3, 3])),
        other => panic!("expected a circulant (3,3;5) coloring, got {:?}", other),
    }
    let p6 = ColoringProblem::new(vec![3, 3], 6).unwrap();
    assert_eq!(stages::find_circulant_coloring(&s, &p6).unwrap(), SearchVerdict::Unsat);
}

#[test]
fn embedding_layout_and_counts() {
    let p = ColoringProblem::new(vec![3, 3], 5).unwrap();
    let s = session();
    let lib1 = stages::subcoloring_library(&s, &p, 1, 2).unwrap();
    let lib2 = stages::subcoloring_library(&s, &p, 2, 2).unwrap();
    assert_eq!(embedding_count(&[lib1.len(), lib2.len()]), 1);

    let instances: Vec<_> = generate_embeddings(&p, &[2, 2], &[lib1.clone(), lib2.clone()])
        .unwrap()
        .collect();
    assert_eq!(instances.len(), 1);
    let inst = &instances[0];
    // Row 1: two color-1 edges then two color-2 edges.
    assert_eq!(inst.realized.get(1, 2), Some(1));
    assert_eq!(inst.realized.get(1, 3), Some(1));
    assert_eq!(inst.realized.get(1, 4), Some(2));
    assert_eq!(inst.realized.get(1, 5), Some(2));
    // Diagonal blocks equal the components.
    assert_eq!(inst.realized.get(2, 3), Some(lib1[0].color(1, 2)));
    assert_eq!(inst.realized.get(4, 5), Some(lib2[0].color(1, 2)));
    // Cross-block cells are open.
    assert_eq!(inst.realized.get(2, 4), None);
    assert_eq!(inst.realized.get(3, 5), None);

    // Degree-sum mismatch is rejected.
    assert!(generate_embeddings(&p, &[2, 1], &[lib1, lib2]).is_err());
}

#[test]
fn refute_triple_sat_case_with_witness() {
    // (3,3;5) with vertex-1 degrees (2,2): the 5-cycle coloring completes
    // the unique embedding instance, and its vertex-1 neighborhoods must be
    // weakly isomorphic to the embedded components.
    let s = session();
    let p = ColoringProblem::new(vec![3, 3], 5).unwrap();
    let lib1 = stages::subcoloring_library(&s, &p, 1, 2).unwrap();
    let lib2 = stages::subcoloring_library(&s, &p, 2, 2).unwrap();
    match ramsey_pipeline::embedding::refute_degree_triple(&s, &p, &[2, 2], &[lib1.clone(), lib2.clone()]).unwrap() {
        TripleVerdict::Sat { witness, .. } => {
            assert!(witness.is_ramsey_coloring(&[3, 3]));
            for (c, lib) in [(1usize, &lib1), (2usize, &lib2)] {
                let sub = witness.neighbor_subgraph(1, c);
                assert!(sub.weakly_isomorphic(&lib[0]).is_some());
            }
        }
        other => panic!("expected SAT, got {:?}", other),
    }
}

#[test]
fn refutation_matches_oracle_ground_truth_333_5() {
    // For every admissible degree tuple of (3,3,3;5), the embedding batches
    // must agree with brute force about whether a coloring with a vertex of
    // those exact color degrees exists. Exercises library reduction,
    // instance generation, and completion solving end to end.
    let s = session();
    let p = ColoringProblem::new(vec![3, 3, 3], 5).unwrap();
    let solutions = oracle(5, 3, &[3, 3, 3]);
    let tuples = degree_tuples(&p, &[(0, 4), (0, 4), (0, 4)]);
    assert!(!tuples.is_empty());

    for tuple in &tuples {
        if tuple.iter().any(|&d| d == 0) {
            // Empty neighborhoods have no component coloring in scope.
            continue;
        }
        let mut libraries = Vec::new();
        for (c0, &d) in tuple.iter().enumerate() {
            libraries.push(stages::subcoloring_library(&s, &p, c0 + 1, d).unwrap());
        }
        let verdict =
            ramsey_pipeline::embedding::refute_degree_triple(&s, &p, tuple, &libraries).unwrap();

        // Ground truth: does any solution have a vertex whose degree row,
        // sorted (all bounds equal, so colors are interchangeable), equals
        // the tuple?
        let mut sorted_tuple: Vec<u32> = tuple.iter().map(|&d| d as u32).collect();
        sorted_tuple.sort_unstable_by(|a, b| b.cmp(a));
        let exists = solutions.iter().any(|g| {
            let dm = g.degree_matrix();
            (1..=5).any(|v| {
                let mut row = dm.row(v).to_vec();
                row.sort_unstable_by(|a, b| b.cmp(a));
                row == sorted_tuple
            })
        });
        match verdict {
            TripleVerdict::Sat { witness, .. } => {
                assert!(exists, "embedding found a witness for {:?} but the oracle has none", tuple);
                assert!(witness.is_ramsey_coloring(&[3, 3, 3]));
            }
            TripleVerdict::AllUnsat { .. } => {
                assert!(!exists, "oracle has a vertex with degrees {:?} but embeddings all refuted", tuple);
            }
            TripleVerdict::Partial { .. } => panic!("no budget was set"),
        }
    }
}

#[test]
fn refutation_of_33_6_is_vacuous() {
    // Every admissible tuple for (3,3;6) has an empty component library, so
    // each batch is vacuously all-unsat; combined with the tuple catalog
    // this refutes (3,3;6) entirely.
    let s = session();
    let p = ColoringProblem::new(vec![3, 3], 6).unwrap();
    for tuple in degree_tuples(&p, &[(0, 5), (0, 5)]) {
        if tuple.iter().any(|&d| d == 0) {
            continue;
        }
        let mut libraries = Vec::new();
        for (c0, &d) in tuple.iter().enumerate() {
            libraries.push(stages::subcoloring_library(&s, &p, c0 + 1, d).unwrap());
        }
        match ramsey_pipeline::embedding::refute_degree_triple(&s, &p, &tuple, &libraries).unwrap() {
            TripleVerdict::AllUnsat { .. } => {}
            other => panic!("(3,3;6) tuple {:?} must refute, got {:?}", tuple, other),
        }
    }
}

#[test]
fn refutation_resumes_from_manifest() {
    let dir = std::env::temp_dir().join(format!("ramsey-embed-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let p = ColoringProblem::new(vec![3, 3, 3], 5).unwrap();
    let plain = session();
    let tuple = [2usize, 1, 1];
    let libraries: Vec<_> = tuple
        .iter()
        .enumerate()
        .map(|(c0, &d)| stages::subcoloring_library(&plain, &p, c0 + 1, d).unwrap())
        .collect();

    // Interrupted run: only one instance executes.
    let mut s1 = session().with_out_dir(&dir);
    s1.stop_after = Some(1);
    let partial = ramsey_pipeline::embedding::refute_degree_triple(&s1, &p, &tuple, &libraries).unwrap();
    let total = embedding_count(&[libraries[0].len(), libraries[1].len(), libraries[2].len()]);
    if total > 1 {
        match partial {
            TripleVerdict::Partial { pending, .. } => assert!(pending > 0),
            TripleVerdict::Sat { .. } => {} // first instance may already be SAT
            other => panic!("expected partial or sat, got {:?}", other),
        }
    }

    // Resumed run completes and agrees with a fresh in-memory run.
    let s2 = session().with_out_dir(&dir);
    let resumed = ramsey_pipeline::embedding::refute_degree_triple(&s2, &p, &tuple, &libraries).unwrap();
    let fresh = ramsey_pipeline::embedding::refute_degree_triple(&plain, &p, &tuple, &libraries).unwrap();
    match (&resumed, &fresh) {
        (TripleVerdict::AllUnsat { instances: a }, TripleVerdict::AllUnsat { instances: b }) => {
            assert_eq!(a, b)
        }
        (TripleVerdict::Sat { instance_id: a, .. }, TripleVerdict::Sat { instance_id: b, .. }) => {
            assert_eq!(a, b)
        }
        other => panic!("resumed and fresh runs disagree: {:?}", other),
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn degree_tuple_catalog_for_433_30() {
    // The admissible tuples for (4,3,3;30) within the published bounds.
    let p = ColoringProblem::new(vec![4, 3, 3], 30).unwrap();
    let tuples = degree_tuples(&p, &[(13, 16), (5, 8), (5, 8)]);
    let want: Vec<Vec<usize>> = vec![
        vec![13, 8, 8],
        vec![14, 8, 7],
        vec![15, 7, 7],
        vec![15, 8, 6],
        vec![16, 7, 6],
        vec![16, 8, 5],
    ];
    let mut got = tuples;
    got.sort();
    assert_eq!(got, want);
}
