//! Solver-agnostic constraint models for Ramsey coloring problems.
//!
//! A [`ConstraintModel`] is pure data: a list of atoms over the cells of an
//! `n x n` symmetric color matrix with one variable per unordered vertex
//! pair. The same model feeds the embedded solver and DIMACS export.

use crate::graph::{DegreeMatrix, PartialColoredGraph};
use crate::{Error, Result};

/// A `(r_1, ..., r_k; n)` coloring problem: color `c` must avoid `K_{r_c}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringProblem {
    r: Vec<usize>,
    n: usize,
}

impl ColoringProblem {
    pub fn new(r: Vec<usize>, n: usize) -> Result<Self> {
        if r.is_empty() || n == 0 {
            return Err(Error::invalid("problem", "need at least one color and one vertex"));
        }
        if r.iter().any(|&b| b < 2) {
            return Err(Error::invalid("problem", "clique bounds must be at least 2"));
        }
        Ok(ColoringProblem { r, n })
    }

    pub fn color_count(&self) -> usize {
        self.r.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn bounds(&self) -> &[usize] {
        &self.r
    }

    /// Same bounds on a different number of vertices.
    pub fn with_vertex_count(&self, n: usize) -> Result<Self> {
        Self::new(self.r.clone(), n)
    }

    /// Decrements the bound of color `c` (1-indexed), as when passing from a
    /// coloring to the induced coloring on a color-`c` neighborhood.
    pub fn decrement_bound(&self, c: usize, n: usize) -> Result<Self> {
        if c < 1 || c > self.r.len() {
            return Err(Error::OutOfRange(format!("color {}", c)));
        }
        let mut r = self.r.clone();
        r[c - 1] -= 1;
        Self::new(r, n)
    }
}

impl std::fmt::Display for ColoringProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let bounds: Vec<String> = self.r.iter().map(|b| b.to_string()).collect();
        write!(f, "({};{})", bounds.join(","), self.n)
    }
}

/// One constraint atom over the cell variables. Vertex indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    /// Cell `(i, j)` takes a color in `1..=k` (structural; one variable per
    /// unordered pair, zero diagonal and symmetry are implicit).
    EdgeInRange { i: usize, j: usize },
    /// Not all listed edges take color `c` (the edges of one vertex subset).
    NotAllEqual { edges: Vec<(usize, usize)>, color: u8 },
    /// Cell `(i, j)` is fixed to color `c`.
    EdgeFixed { i: usize, j: usize, color: u8 },
    /// Vertex `v` has exactly `degree` edges of color `c`.
    DegreeEquals { v: usize, color: u8, degree: u32 },
    /// Row `i` is lexicographically at most row `j`, both rows read with
    /// positions `i` and `j` omitted.
    LexLeqOmit { i: usize, j: usize },
    /// Same order, emitted only for pairs with equal degree-matrix rows.
    LexLeqOmitGuarded { i: usize, j: usize },
    /// Cells `a` and `b` take the same color (circulant structure).
    CellTie { a: (usize, usize), b: (usize, usize) },
    /// Some vertex has some color degree below `lo` or above `hi`.
    DegreeOutOfRange { lo: u32, hi: u32 },
}

/// A conjunction of atoms over an `n`-vertex, `k`-color cell matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintModel {
    n: usize,
    k: usize,
    atoms: Vec<Atom>,
}

impl ConstraintModel {
    pub fn empty(n: usize, k: usize) -> Self {
        ConstraintModel {
            n,
            k,
            atoms: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn color_count(&self) -> usize {
        self.k
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Conjunction of two models over the same matrix.
    pub fn and(mut self, other: ConstraintModel) -> Result<ConstraintModel> {
        if (self.n, self.k) != (other.n, other.k) {
            return Err(Error::SizeMismatch(format!(
                "conjoining models over ({}, {}) and ({}, {})",
                self.n, self.k, other.n, other.k
            )));
        }
        self.atoms.extend(other.atoms);
        Ok(self)
    }

    fn push(&mut self, atom: Atom) {
        self.atoms.push(atom);
    }

    /// Line-oriented dump of the atom list, for debugging.
    pub fn dump(&self) -> String {
        let mut out = format!("model n={} k={} atoms={}\n", self.n, self.k, self.atoms.len());
        for atom in &self.atoms {
            match atom {
                Atom::EdgeInRange { i, j } => out.push_str(&format!("edge-in-range {} {}\n", i, j)),
                Atom::NotAllEqual { edges, color } => {
                    let cells: Vec<String> = edges.iter().map(|(i, j)| format!("{}-{}", i, j)).collect();
                    out.push_str(&format!("not-all-equal c{} {}\n", color, cells.join(" ")));
                }
                Atom::EdgeFixed { i, j, color } => {
                    out.push_str(&format!("edge-fixed {} {} c{}\n", i, j, color))
                }
                Atom::DegreeEquals { v, color, degree } => {
                    out.push_str(&format!("degree-equals v{} c{} = {}\n", v, color, degree))
                }
                Atom::LexLeqOmit { i, j } => out.push_str(&format!("lex-leq {} {}\n", i, j)),
                Atom::LexLeqOmitGuarded { i, j } => {
                    out.push_str(&format!("lex-leq-guarded {} {}\n", i, j))
                }
                Atom::CellTie { a, b } => {
                    out.push_str(&format!("cell-tie {}-{} {}-{}\n", a.0, a.1, b.0, b.1))
                }
                Atom::DegreeOutOfRange { lo, hi } => {
                    out.push_str(&format!("degree-out-of-range [{}, {}]\n", lo, hi))
                }
            }
        }
        out
    }
}

/// Structural model: every unordered pair carries a color in `1..=k`.
pub fn adjacency_model(n: usize, k: usize) -> ConstraintModel {
    let mut m = ConstraintModel::empty(n, k);
    for i in 1..=n {
        for j in (i + 1)..=n {
            m.push(Atom::EdgeInRange { i, j });
        }
    }
    m
}

/// Excludes a monochromatic `K_r` in color `c`: one atom per `r`-subset.
/// `r > n` yields an empty model.
pub fn no_clique_model(n: usize, k: usize, c: usize, r: usize) -> ConstraintModel {
    assert!(r >= 2, "clique size must be at least 2");
    assert!(c >= 1 && c <= k, "color out of range");
    let mut m = ConstraintModel::empty(n, k);
    if r > n {
        return m;
    }
    let mut subset: Vec<usize> = (1..=r).collect();
    loop {
        let edges: Vec<(usize, usize)> = subset
            .iter()
            .enumerate()
            .flat_map(|(a, &u)| subset[a + 1..].iter().map(move |&v| (u, v)))
            .collect();
        m.push(Atom::NotAllEqual {
            edges,
            color: c as u8,
        });
        // Next r-combination of 1..=n in lexicographic order.
        let mut pos = r;
        loop {
            if pos == 0 {
                return m;
            }
            pos -= 1;
            if subset[pos] < n - (r - 1 - pos) {
                subset[pos] += 1;
                for q in (pos + 1)..r {
                    subset[q] = subset[q - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Full Ramsey model: adjacency plus per-color clique exclusion.
pub fn ramsey_model(p: &ColoringProblem) -> ConstraintModel {
    let (n, k) = (p.vertex_count(), p.color_count());
    let mut m = adjacency_model(n, k);
    for (c, &r) in p.bounds().iter().enumerate() {
        m = m.and(no_clique_model(n, k, c + 1, r)).expect("same shape");
    }
    m
}

/// Unguarded lex-leader symmetry break over all row pairs.
pub fn sb_lex(n: usize, k: usize) -> ConstraintModel {
    assert!(n >= 2, "need at least two rows");
    let mut m = ConstraintModel::empty(n, k);
    for i in 1..=n {
        for j in (i + 1)..=n {
            m.push(Atom::LexLeqOmit { i, j });
        }
    }
    m
}

/// Fixes the full degree matrix: one `DegreeEquals` atom per vertex/color.
///
/// Rejects matrices whose rows do not sum to `n - 1`.
pub fn degree_matrix_model(m: &DegreeMatrix) -> Result<ConstraintModel> {
    let n = m.vertex_count();
    let k = m.color_count();
    if !m.rows_sum_to(n as u32 - 1) {
        return Err(Error::invalid(
            "degree matrix",
            format!("rows must sum to {}", n - 1),
        ));
    }
    let mut out = ConstraintModel::empty(n, k);
    for v in 1..=n {
        for c in 1..=k {
            out.push(Atom::DegreeEquals {
                v,
                color: c as u8,
                degree: m.entry(v, c),
            });
        }
    }
    Ok(out)
}

/// Degree-matrix-guarded lex-leader: atoms only for pairs with equal rows.
///
/// Rejects matrices whose rows are not lex-sorted non-increasing.
pub fn sb_lex_dm(m: &DegreeMatrix) -> Result<ConstraintModel> {
    if !m.rows_sorted_non_increasing() {
        return Err(Error::invalid(
            "degree matrix",
            "rows must be lex-sorted non-increasing",
        ));
    }
    let n = m.vertex_count();
    let mut out = ConstraintModel::empty(n, m.color_count());
    for i in 1..=n {
        for j in (i + 1)..=n {
            if m.row(i) == m.row(j) {
                out.push(Atom::LexLeqOmitGuarded { i, j });
            }
        }
    }
    Ok(out)
}

/// Fixes the degree of every vertex in a single color. Used to test a
/// candidate degree sequence as the color-`color` column of the abstraction,
/// with vertices pre-ordered by the sequence.
pub fn color_degree_model(n: usize, k: usize, color: usize, degrees: &[u32]) -> Result<ConstraintModel> {
    if degrees.len() != n {
        return Err(Error::SizeMismatch(format!(
            "{} degrees for {} vertices",
            degrees.len(),
            n
        )));
    }
    if color < 1 || color > k {
        return Err(Error::OutOfRange(format!("color {}", color)));
    }
    let mut out = ConstraintModel::empty(n, k);
    for (v, &d) in degrees.iter().enumerate() {
        out.push(Atom::DegreeEquals {
            v: v + 1,
            color: color as u8,
            degree: d,
        });
    }
    Ok(out)
}

/// Guarded lex-leader atoms for an explicit list of row pairs. The caller is
/// responsible for the guard being sound (the pairs must be interchangeable
/// under whatever data the model fixes).
pub fn sb_lex_guarded_pairs(n: usize, k: usize, pairs: &[(usize, usize)]) -> ConstraintModel {
    let mut out = ConstraintModel::empty(n, k);
    for &(i, j) in pairs {
        assert!(i >= 1 && i < j && j <= n, "pair ({}, {}) out of range", i, j);
        out.push(Atom::LexLeqOmitGuarded { i, j });
    }
    out
}

/// Fixes every assigned off-diagonal cell of a partial coloring.
pub fn fix_partial(model: ConstraintModel, p: &PartialColoredGraph) -> Result<ConstraintModel> {
    if (model.vertex_count(), model.color_count()) != (p.vertex_count(), p.color_count()) {
        return Err(Error::SizeMismatch(
            "partial graph shape differs from model".into(),
        ));
    }
    let mut out = model;
    for (i, j, c) in p.assigned_edges() {
        if c == 0 || c as usize > out.k {
            return Err(Error::OutOfRange(format!("assigned color {}", c)));
        }
        out.push(Atom::EdgeFixed { i, j, color: c });
    }
    Ok(out)
}

/// Ties every cell to the representative of its cyclic distance class, so
/// cell `(i, j)` depends only on `(j - i) mod n`. With symmetry this leaves
/// `floor(n/2)` free color choices.
pub fn circulant_model(n: usize, k: usize) -> ConstraintModel {
    assert!(n >= 2, "need at least two vertices");
    let mut m = ConstraintModel::empty(n, k);
    for i in 1..=n {
        for j in (i + 1)..=n {
            let d = (j - i).min(n - (j - i));
            let rep = (1, 1 + d);
            if (i, j) != rep {
                m.push(Atom::CellTie { a: rep, b: (i, j) });
            }
        }
    }
    m
}

/// Ramsey model plus the requirement that some vertex violates the degree
/// bounds `[lo, hi]` in some color. UNSAT means the bounds hold universally.
pub fn degree_bound_violation_model(p: &ColoringProblem, lo: u32, hi: u32) -> ConstraintModel {
    let mut m = ramsey_model(p);
    m.push(Atom::DegreeOutOfRange { lo, hi });
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DegreeMatrix;

    fn count_cliques(m: &ConstraintModel) -> usize {
        m.atoms()
            .iter()
            .filter(|a| matches!(a, Atom::NotAllEqual { .. }))
            .count()
    }

    #[test]
    fn adjacency_atom_counts() {
        assert_eq!(adjacency_model(3, 1).atoms().len(), 3);
        assert_eq!(adjacency_model(2, 3).atoms().len(), 1);
        assert_eq!(adjacency_model(13, 3).atoms().len(), 78);
    }

    #[test]
    fn clique_atom_counts_match_binomials() {
        assert_eq!(count_cliques(&no_clique_model(3, 1, 1, 3)), 1);
        assert_eq!(count_cliques(&no_clique_model(30, 3, 1, 4)), 27_405);
        assert_eq!(count_cliques(&no_clique_model(13, 3, 2, 3)), 286);
        assert_eq!(count_cliques(&no_clique_model(3, 2, 1, 4)), 0);
    }

    #[test]
    fn clique_atoms_list_all_pair_edges() {
        let m = no_clique_model(4, 2, 2, 3);
        for atom in m.atoms() {
            match atom {
                Atom::NotAllEqual { edges, color } => {
                    assert_eq!(*color, 2);
                    assert_eq!(edges.len(), 3);
                }
                other => panic!("unexpected atom {:?}", other),
            }
        }
    }

    #[test]
    fn lex_pair_count() {
        let m = sb_lex(5, 2);
        assert_eq!(m.atoms().len(), 10);
    }

    #[test]
    fn degree_matrix_model_rejects_bad_row_sums() {
        let m = DegreeMatrix::from_rows(&[vec![2, 0], vec![0, 0], vec![1, 1]]).unwrap();
        assert!(degree_matrix_model(&m).is_err());
    }

    #[test]
    fn sb_lex_dm_emits_only_equal_row_pairs() {
        let m = DegreeMatrix::from_rows(&[vec![2, 0], vec![1, 1], vec![1, 1]]).unwrap();
        let model = sb_lex_dm(&m).unwrap();
        assert_eq!(
            model.atoms(),
            &[Atom::LexLeqOmitGuarded { i: 2, j: 3 }]
        );
        let distinct = DegreeMatrix::from_rows(&[vec![3, 0], vec![2, 1], vec![1, 2]]).unwrap();
        assert!(sb_lex_dm(&distinct).unwrap().atoms().is_empty());
        let unsorted = DegreeMatrix::from_rows(&[vec![1, 1], vec![2, 0]]).unwrap();
        assert!(sb_lex_dm(&unsorted).is_err());
    }

    #[test]
    fn sb_lex_dm_on_constant_matrix_mirrors_sb_lex() {
        let m = DegreeMatrix::from_rows(&[vec![2, 2], vec![2, 2], vec![2, 2], vec![2, 2], vec![2, 2]]).unwrap();
        let guarded = sb_lex_dm(&m).unwrap();
        let plain = sb_lex(5, 2);
        assert_eq!(guarded.atoms().len(), plain.atoms().len());
    }

    #[test]
    fn circulant_distance_classes() {
        let m = circulant_model(5, 2);
        // 10 cells, 2 distance classes, 2 representatives: 8 ties.
        assert_eq!(m.atoms().len(), 8);
    }

    #[test]
    fn fix_partial_range_check() {
        let model = adjacency_model(3, 2);
        let mut p = crate::graph::PartialColoredGraph::unassigned(3, 2).unwrap();
        p.set(1, 2, 2).unwrap();
        let fixed = fix_partial(model, &p).unwrap();
        assert!(fixed
            .atoms()
            .iter()
            .any(|a| matches!(a, Atom::EdgeFixed { i: 1, j: 2, color: 2 })));
    }

    #[test]
    fn dump_is_line_oriented() {
        let p = ColoringProblem::new(vec![3, 3], 4).unwrap();
        let dump = ramsey_model(&p).dump();
        assert!(dump.starts_with("model n=4 k=2"));
        assert!(dump.lines().count() > 1);
    }
}
