//! Canonical-form search for edge-colored complete graphs.
//!
//! The canonical form of a graph `G` is the minimum, over all color
//! permutations in a given set and all vertex orderings, of the upper
//! triangle read column by column (`(1,2), (1,3), (2,3), (1,4), ...`).
//! Placing vertices one at a time determines exactly one new column of that
//! key per step, so a depth-first branch-and-bound over orderings can prune
//! against the best key found so far at every level.

use super::{ColorPerm, ColoredGraph, VertexPerm};

pub(crate) struct CanonOutcome {
    pub key: Vec<u8>,
    pub vperm: VertexPerm,
    pub cperm: ColorPerm,
}

pub(crate) fn min_key_search(g: &ColoredGraph, sigmas: &[ColorPerm]) -> CanonOutcome {
    assert!(!sigmas.is_empty(), "need at least one color permutation");
    let n = g.vertex_count();
    let total = n * (n - 1) / 2;

    let mut best = vec![u8::MAX; total];
    let mut best_order: Vec<usize> = Vec::new();
    let mut best_sigma = 0usize;

    for (si, sigma) in sigmas.iter().enumerate() {
        // Recolor once per sigma so the inner search is plain indexing.
        let mut cells = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    cells[i * n + j] = sigma.apply(g.at(i, j));
                }
            }
        }
        let best_found = !best_order.is_empty();
        let mut search = Search {
            n,
            cells: &cells,
            best: &mut best,
            best_order: &mut best_order,
            best_found,
            placed: Vec::with_capacity(n),
            used: vec![false; n],
            improved_sigma: false,
        };
        search.descend(false);
        if search.improved_sigma {
            best_sigma = si;
        }
    }

    // best_order[pos] = original vertex placed at canonical position pos, so
    // the witness maps original vertex v to its position.
    let mut image = vec![0usize; n];
    for (pos, &orig) in best_order.iter().enumerate() {
        image[orig] = pos;
    }
    CanonOutcome {
        key: best,
        vperm: VertexPerm::from_zero_based(image),
        cperm: sigmas[best_sigma].clone(),
    }
}

struct Search<'a> {
    n: usize,
    cells: &'a [u8],
    best: &'a mut Vec<u8>,
    best_order: &'a mut Vec<usize>,
    best_found: bool,
    placed: Vec<usize>,
    used: Vec<bool>,
    improved_sigma: bool,
}

impl Search<'_> {
    /// Explores all extensions of `placed`. `improved` is true when the path
    /// to this node already made the key strictly smaller than any complete
    /// key recorded before it.
    fn descend(&mut self, improved: bool) {
        let t = self.placed.len();
        if t == self.n {
            if improved || !self.best_found {
                *self.best_order = self.placed.clone();
                self.best_found = true;
                self.improved_sigma = true;
            }
            return;
        }
        let seg_start = (t * t - t) / 2;
        let seg_end = seg_start + t;

        // Candidate columns, sorted so the smallest extension is tried first.
        let mut cands: Vec<(Vec<u8>, usize)> = (0..self.n)
            .filter(|&u| !self.used[u])
            .map(|u| {
                let col: Vec<u8> = self.placed.iter().map(|&p| self.cells[p * self.n + u]).collect();
                (col, u)
            })
            .collect();
        cands.sort();

        for (col, u) in cands {
            match col.as_slice().cmp(&self.best[seg_start..seg_end]) {
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {
                    self.placed.push(u);
                    self.used[u] = true;
                    self.descend(improved);
                    self.used[u] = false;
                    self.placed.pop();
                }
                std::cmp::Ordering::Less => {
                    self.best[seg_start..seg_end].copy_from_slice(&col);
                    for cell in &mut self.best[seg_end..] {
                        *cell = u8::MAX;
                    }
                    self.placed.push(u);
                    self.used[u] = true;
                    self.descend(true);
                    self.used[u] = false;
                    self.placed.pop();
                }
            }
        }
    }
}
