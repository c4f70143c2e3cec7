//! Checks against the two known 16-vertex three-color triangle-free
//! colorings (Kalbfleisch–Stanton 1968), shipped as text fixtures.

use ramsey_core::graph::{reduce_mod_weak_iso, ColorPerm, ColoredGraph, DegreeMatrix, VertexPerm};

fn fixture(name: &str) -> ColoredGraph {
    let path = format!("{}/tests/data/{}", env!("CARGO_MANIFEST_DIR"), name);
    let text = std::fs::read_to_string(path).unwrap();
    ColoredGraph::from_text(&text).unwrap()
}

#[test]
fn both_fixtures_are_valid_ramsey_colorings() {
    for name in ["r333_16_a.graph", "r333_16_b.graph"] {
        let g = fixture(name);
        assert_eq!(g.vertex_count(), 16);
        assert_eq!(g.color_count(), 3);
        assert!(g.is_ramsey_coloring(&[3, 3, 3]), "{} must avoid mono triangles", name);
    }
}

#[test]
fn first_vertex_has_five_edges_per_color() {
    let g = fixture("r333_16_a.graph");
    assert_eq!(g.color_degree(1, 1).unwrap(), 5);
    assert_eq!(g.color_degree(1, 2).unwrap(), 5);
    assert_eq!(g.color_degree(1, 3).unwrap(), 5);
}

#[test]
fn common_degree_matrix_is_all_fives() {
    let expect = DegreeMatrix::from_rows(&vec![vec![5u32, 5, 5]; 16]).unwrap();
    assert_eq!(fixture("r333_16_a.graph").degree_matrix(), expect);
    assert_eq!(fixture("r333_16_b.graph").degree_matrix(), expect);
}

#[test]
fn fixtures_are_not_weakly_isomorphic() {
    let a = fixture("r333_16_a.graph");
    let b = fixture("r333_16_b.graph");
    assert!(a.weakly_isomorphic(&b).is_none());
    assert_ne!(a.canonical_form(), b.canonical_form());
    assert_eq!(reduce_mod_weak_iso(vec![a, b]).len(), 2);
}

#[test]
fn fixture_rows_satisfy_lex_leader() {
    // Both matrices come out of a lex-constrained search, so the unguarded
    // row order must hold as published.
    assert!(fixture("r333_16_a.graph").satisfies_sb_lex());
    assert!(fixture("r333_16_b.graph").satisfies_sb_lex());
}

#[test]
fn canonical_form_stable_under_relabeling_of_fixture() {
    let g = fixture("r333_16_a.graph");
    let canon = g.canonical_form();
    let pi = VertexPerm::from_images(&[16, 3, 9, 1, 12, 5, 7, 14, 2, 11, 6, 13, 15, 4, 10, 8]).unwrap();
    let sigma = ColorPerm::from_images(&[3, 1, 2]).unwrap();
    let h = g.apply_perms(&pi, &sigma).unwrap();
    assert_eq!(h.canonical_form(), canon);
    let (wp, ws) = g.weakly_isomorphic(&h).expect("relabelings are isomorphic");
    assert_eq!(g.apply_perms(&wp, &ws).unwrap(), h);
}

#[test]
fn neighbor_subgraphs_shrink_bounds() {
    let g = fixture("r333_16_b.graph");
    for c in 1..=3usize {
        let sub = g.neighbor_subgraph(1, c);
        assert_eq!(sub.vertex_count(), 5);
        let mut r = [3usize, 3, 3];
        r[c - 1] = 2;
        assert!(sub.is_ramsey_coloring(&r));
    }
}
