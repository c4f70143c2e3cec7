//! Encode soundness: projected model counts of encoded constraint models
//! must equal brute-force solution counts, for every model small enough to
//! enumerate directly.

use ramsey_core::cnf::{self, Backend};
use ramsey_core::degseq;
use ramsey_core::graph::{enumerate_all_colorings, reduce_mod_weak_iso, ColoredGraph, DegreeMatrix};
use ramsey_core::model::{self, ColoringProblem};

fn solve_count(m: &model::ConstraintModel) -> Vec<ColoredGraph> {
    let (f, vm) = cnf::encode(m);
    cnf::enumerate_colorings(&f, &vm, &Backend::embedded(), None)
        .unwrap()
        .collect::<Result<Vec<_>, _>>()
        .unwrap()
}

fn oracle(n: usize, k: usize, pred: impl Fn(&ColoredGraph) -> bool) -> Vec<ColoredGraph> {
    enumerate_all_colorings(n, k, 1 << 30, pred).unwrap().collect()
}

fn assert_same_set(mut got: Vec<ColoredGraph>, mut want: Vec<ColoredGraph>) {
    got.sort();
    want.sort();
    assert_eq!(got.len(), want.len(), "solution count mismatch");
    assert_eq!(got, want, "solution sets differ");
}

#[test]
fn adjacency_model_counts() {
    assert_eq!(solve_count(&model::adjacency_model(2, 3)).len(), 3);
    assert_eq!(solve_count(&model::adjacency_model(3, 1)).len(), 1);
    assert_eq!(solve_count(&model::adjacency_model(4, 2)).len(), 64);
}

#[test]
fn ramsey_33_5_exactly_twelve_solutions() {
    let p = ColoringProblem::new(vec![3, 3], 5).unwrap();
    let got = solve_count(&model::ramsey_model(&p));
    let want = oracle(5, 2, |g| g.is_ramsey_coloring(&[3, 3]));
    assert_eq!(got.len(), 12);
    assert_same_set(got, want);
}

#[test]
fn ramsey_33_n_matches_oracle_for_small_n() {
    for n in 3..=5usize {
        let p = ColoringProblem::new(vec![3, 3], n).unwrap();
        let got = solve_count(&model::ramsey_model(&p));
        let want = oracle(n, 2, |g| g.is_ramsey_coloring(&[3, 3]));
        assert_same_set(got, want);
    }
}

#[test]
fn ramsey_333_4_matches_oracle() {
    let p = ColoringProblem::new(vec![3, 3, 3], 4).unwrap();
    let got = solve_count(&model::ramsey_model(&p));
    let want = oracle(4, 3, |g| g.is_ramsey_coloring(&[3, 3, 3]));
    assert_same_set(got, want);
}

#[test]
fn ramsey_33_6_unsat() {
    let p = ColoringProblem::new(vec![3, 3], 6).unwrap();
    let (f, _) = cnf::encode(&model::ramsey_model(&p));
    assert_eq!(cnf::solve(&f, &Backend::embedded()).unwrap(), cnf::SolveOutcome::Unsat);
}

#[test]
fn sb_lex_filtered_counts_match_graph_side_predicate() {
    // The CNF lex-leader chain and the matrix-level predicate must agree
    // exactly on which solutions survive.
    for (r, n) in [(vec![3usize, 3], 4usize), (vec![3, 3], 5), (vec![3, 3, 3], 4)] {
        let p = ColoringProblem::new(r.clone(), n).unwrap();
        let m = model::ramsey_model(&p).and(model::sb_lex(n, r.len())).unwrap();
        let got = solve_count(&m);
        let want = oracle(n, r.len(), |g| g.is_ramsey_coloring(&r) && g.satisfies_sb_lex());
        assert_same_set(got, want);
    }
}

#[test]
fn sb_lex_reduction_preserves_classes() {
    let p = ColoringProblem::new(vec![3, 3], 5).unwrap();
    let plain = solve_count(&model::ramsey_model(&p));
    let broken = solve_count(&model::ramsey_model(&p).and(model::sb_lex(5, 2)).unwrap());
    assert!(broken.len() <= plain.len());
    let classes_plain = reduce_mod_weak_iso(plain);
    let classes_broken = reduce_mod_weak_iso(broken);
    assert_eq!(classes_plain, classes_broken);
    assert_eq!(classes_plain.len(), 1);
}

#[test]
fn degree_matrix_model_pins_exact_coloring() {
    // Rows (2,0), (1,1), (1,1): edge {2,3} in color 2, the rest color 1.
    let m = DegreeMatrix::from_rows(&[vec![2, 0], vec![1, 1], vec![1, 1]]).unwrap();
    let model = model::adjacency_model(3, 2)
        .and(model::degree_matrix_model(&m).unwrap())
        .unwrap();
    let got = solve_count(&model);
    let want = oracle(3, 2, |g| g.degree_matrix() == m);
    assert_eq!(got.len(), 1);
    assert_eq!(got[0].color(2, 3), 2);
    assert_eq!(got[0].color(1, 2), 1);
    assert_same_set(got, want);
}

#[test]
fn per_matrix_union_with_guarded_lex_covers_all_classes() {
    // Union over canonical feasible matrices of the per-matrix solution sets
    // (with the guarded lex break) must reproduce the oracle classes.
    let p = ColoringProblem::new(vec![3, 3], 5).unwrap();
    let oracle_sols = oracle(5, 2, |g| g.is_ramsey_coloring(&[3, 3]));
    let mut matrices: Vec<DegreeMatrix> = oracle_sols
        .iter()
        .map(|g| degseq::lex_canonical_dm(&g.degree_matrix()))
        .collect();
    matrices.sort();
    matrices.dedup();

    let mut union: Vec<ColoredGraph> = Vec::new();
    for m in &matrices {
        let model = model::ramsey_model(&p)
            .and(model::degree_matrix_model(m).unwrap())
            .unwrap()
            .and(model::sb_lex_dm(m).unwrap())
            .unwrap();
        union.extend(solve_count(&model));
    }
    let got_classes = reduce_mod_weak_iso(union);
    let want_classes = reduce_mod_weak_iso(oracle_sols);
    assert_eq!(got_classes, want_classes);
}

#[test]
fn fix_partial_forces_given_cells() {
    let p = ColoringProblem::new(vec![3, 3], 5).unwrap();
    // Fix a full oracle solution: exactly that solution remains.
    let sols = oracle(5, 2, |g| g.is_ramsey_coloring(&[3, 3]));
    let chosen = sols[0].clone();
    let fixed = model::fix_partial(model::ramsey_model(&p), &chosen.to_partial()).unwrap();
    let got = solve_count(&fixed);
    assert_eq!(got, vec![chosen]);

    // Fix a non-Ramsey coloring: unsatisfiable.
    let bad = ColoredGraph::monochrome(5, 2, 1).unwrap();
    let fixed = model::fix_partial(model::ramsey_model(&p), &bad.to_partial()).unwrap();
    let (f, _) = cnf::encode(&fixed);
    assert_eq!(cnf::solve(&f, &Backend::embedded()).unwrap(), cnf::SolveOutcome::Unsat);
}

#[test]
fn circulant_model_collapses_to_distance_classes() {
    // On K5 with 2 colors the circulant constraint leaves 2 free choices:
    // 4 total assignments, of which the 2 all-one-color ones coincide per
    // color; distinct solutions = 4.
    let m = model::adjacency_model(5, 2).and(model::circulant_model(5, 2)).unwrap();
    let got = solve_count(&m);
    assert_eq!(got.len(), 4);
    // The 5-cycle coloring is circulant, so adding the Ramsey constraint
    // stays satisfiable.
    let p = ColoringProblem::new(vec![3, 3], 5).unwrap();
    let rm = model::ramsey_model(&p).and(model::circulant_model(5, 2)).unwrap();
    let sols = solve_count(&rm);
    assert!(!sols.is_empty());
    for g in &sols {
        assert!(g.is_ramsey_coloring(&[3, 3]));
    }
}

#[test]
fn degree_bound_violation_examples() {
    // Every (3,3;5) coloring is 2-regular per color, so [2,2] is verified
    // (violation model UNSAT) and vacuous bounds are UNSAT by construction.
    let p = ColoringProblem::new(vec![3, 3], 5).unwrap();
    for (lo, hi, expect_unsat) in [(2, 2, true), (0, 4, true), (3, 4, false)] {
        let m = model::degree_bound_violation_model(&p, lo, hi);
        let (f, vm) = cnf::encode(&m);
        match cnf::solve(&f, &Backend::embedded()).unwrap() {
            cnf::SolveOutcome::Unsat => assert!(expect_unsat, "[{}, {}] unexpectedly UNSAT", lo, hi),
            cnf::SolveOutcome::Sat(assignment) => {
                assert!(!expect_unsat, "[{}, {}] unexpectedly SAT", lo, hi);
                // The witness must really violate the bounds.
                let g = cnf::decode(&assignment, &vm, 5, 2).unwrap();
                assert!(g.is_ramsey_coloring(&[3, 3]));
                let m = g.degree_matrix();
                let violated = (1..=5).any(|v| {
                    (1..=2).any(|c| m.entry(v, c) < lo || m.entry(v, c) > hi)
                });
                assert!(violated);
            }
            other => panic!("unexpected outcome {:?}", other),
        }
    }
}

#[test]
fn all_solutions_generic_projection() {
    let f = cnf::CnfFormula::new(2, vec![vec![1, 2]]).unwrap();
    let sols: Vec<_> = cnf::all_solutions(&f, &[1, 2], &Backend::embedded(), None)
        .unwrap()
        .collect::<Result<Vec<_>, _>>()
        .unwrap();
    assert_eq!(sols.len(), 3);
}

#[test]
fn decoded_solutions_are_verified_ramsey_colorings() {
    let p = ColoringProblem::new(vec![3, 3], 5).unwrap();
    let (f, vm) = cnf::encode(&model::ramsey_model(&p));
    match cnf::solve(&f, &Backend::embedded()).unwrap() {
        cnf::SolveOutcome::Sat(assignment) => {
            let g = cnf::decode(&assignment, &vm, 5, 2).unwrap();
            assert!(g.is_ramsey_coloring(&[3, 3]));
        }
        other => panic!("expected SAT, got {:?}", other),
    }
}
