//! Exhaustive reference implementations for small graphs.
//!
//! These deliberately avoid the canonical-form machinery so tests can check
//! the production path against something independent. Only usable for small
//! `n` (the permutation search is factorial).

use super::{ColorPerm, ColoredGraph, VertexPerm};

/// Weak-isomorphism test by trying every `(pi, sigma)` pair.
pub fn weakly_isomorphic_brute(g: &ColoredGraph, h: &ColoredGraph) -> bool {
    if g.vertex_count() != h.vertex_count() || g.color_count() != h.color_count() {
        return false;
    }
    for sigma in ColorPerm::all(g.color_count()) {
        for pi in VertexPerm::all(g.vertex_count()) {
            if g.apply_perms(&pi, &sigma).unwrap() == *h {
                return true;
            }
        }
    }
    false
}

/// Partitions graphs into weak-isomorphism classes by pairwise brute-force
/// testing. Returns the classes as index sets into the input slice.
pub fn partition_classes_brute(graphs: &[ColoredGraph]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        match classes
            .iter_mut()
            .find(|class| weakly_isomorphic_brute(g, &graphs[class[0]]))
        {
            Some(class) => class.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_all_colorings;

    #[test]
    fn brute_classes_match_canonical_classes_on_k4() {
        let all: Vec<ColoredGraph> = enumerate_all_colorings(4, 2, 1 << 20, |_| true).unwrap().collect();
        let brute = partition_classes_brute(&all);
        let canonical = crate::graph::reduce_mod_weak_iso(all);
        assert_eq!(brute.len(), canonical.len());
    }
}
