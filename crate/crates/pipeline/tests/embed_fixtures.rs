//! Fixture-based embedding tests: the published 29-vertex witness and the
//! 30-vertex partial embedding with first-vertex degrees (14,8,7).

use ramsey_core::cnf::Backend;
use ramsey_core::graph::{ColoredGraph, DegreeMatrix, PartialColoredGraph};
use ramsey_core::model::ColoringProblem;
use ramsey_pipeline::EmbeddingInstance;

fn fixture(name: &str) -> String {
    let path = format!("{}/tests/data/{}", env!("CARGO_MANIFEST_DIR"), name);
    std::fs::read_to_string(path).unwrap()
}

fn witness_29() -> ColoredGraph {
    ColoredGraph::from_text(&fixture("r433_29.graph")).unwrap()
}

fn partial_30() -> PartialColoredGraph {
    PartialColoredGraph::from_text(&fixture("embed_14_8_7.partial")).unwrap()
}

#[test]
fn witness_is_a_regular_433_29_coloring() {
    let g = witness_29();
    assert_eq!(g.vertex_count(), 29);
    assert!(g.is_ramsey_coloring(&[4, 3, 3]));
    let expect = DegreeMatrix::from_rows(&vec![vec![12u32, 8, 8]; 29]).unwrap();
    assert_eq!(g.degree_matrix(), expect);
}

#[test]
fn witness_neighborhoods_are_component_colorings() {
    let g = witness_29();
    let sub1 = g.neighbor_subgraph(1, 1);
    let sub2 = g.neighbor_subgraph(1, 2);
    let sub3 = g.neighbor_subgraph(1, 3);
    assert_eq!(
        (sub1.vertex_count(), sub2.vertex_count(), sub3.vertex_count()),
        (12, 8, 8)
    );
    assert!(sub1.is_ramsey_coloring(&[3, 3, 3]));
    assert!(sub2.is_ramsey_coloring(&[4, 2, 3]));
    assert!(sub3.is_ramsey_coloring(&[4, 3, 2]));
}

#[test]
fn partial_fixture_shape() {
    let p = partial_30();
    assert_eq!(p.vertex_count(), 30);
    assert_eq!(p.color_count(), 3);
    // First row: 14 ones, 8 twos, 7 threes.
    let row: Vec<u8> = (2..=30).map(|v| p.get(1, v).unwrap()).collect();
    assert_eq!(row.iter().filter(|&&c| c == 1).count(), 14);
    assert_eq!(row.iter().filter(|&&c| c == 2).count(), 8);
    assert_eq!(row.iter().filter(|&&c| c == 3).count(), 7);
    assert_eq!(row, {
        let mut sorted = row.clone();
        sorted.sort_unstable();
        sorted
    });
    // Cross-block cells open, diagonal blocks assigned.
    assert_eq!(p.get(2, 16), None);
    assert_eq!(p.get(16, 24), None);
    assert!(p.get(2, 3).is_some());
    assert!(p.get(16, 17).is_some());
    assert!(p.get(24, 25).is_some());
}

#[test]
fn witness_blocks_realize_an_embedding_instance() {
    // Building the embedding instance from the witness's own neighborhood
    // blocks must reproduce the witness's fixed cells, and the witness
    // itself certifies the instance satisfiable.
    let g = witness_29();
    let p = ColoringProblem::new(vec![4, 3, 3], 29).unwrap();
    let components = vec![
        g.neighbor_subgraph(1, 1),
        g.neighbor_subgraph(1, 2),
        g.neighbor_subgraph(1, 3),
    ];
    let instance = EmbeddingInstance::new(&p, &[12, 8, 8], components, "witness-blocks".into()).unwrap();
    for (u, v, c) in instance.realized.assigned_edges() {
        assert_eq!(g.color(u, v), c, "cell ({}, {})", u, v);
    }
}

#[test]
fn witness_instance_completes_to_sat() {
    // The SAT solver must complete the witness-derived instance (the
    // witness proves it satisfiable) and the completion must itself be a
    // valid coloring with the right neighborhoods.
    let g = witness_29();
    let p = ColoringProblem::new(vec![4, 3, 3], 29).unwrap();
    let components: Vec<ColoredGraph> = (1..=3).map(|c| g.neighbor_subgraph(1, c)).collect();
    let session = ramsey_pipeline::Session::new(Backend::embedded());
    let libs: Vec<Vec<ColoredGraph>> = components.iter().map(|c| vec![c.clone()]).collect();
    match ramsey_pipeline::embedding::refute_degree_triple(&session, &p, &[12, 8, 8], &libs).unwrap() {
        ramsey_pipeline::TripleVerdict::Sat { witness, .. } => {
            assert!(witness.is_ramsey_coloring(&[4, 3, 3]));
            for (c, comp) in components.iter().enumerate() {
                let sub = witness.neighbor_subgraph(1, c + 1);
                assert!(sub.weakly_isomorphic(comp).is_some());
            }
        }
        other => panic!("witness instance must be satisfiable, got {:?}", other),
    }
}
