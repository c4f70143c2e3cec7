//! Edge-colored complete graphs and their symmetries.
//!
//! A [`ColoredGraph`] is a complete graph on `n` vertices with every edge
//! assigned a color in `1..=k`, stored as a symmetric `n x n` matrix with a
//! zero diagonal. Vertices and colors are 1-indexed in the public API.

mod brute;
mod canon;
mod enumerate;
mod text;

pub use brute::{partition_classes_brute, weakly_isomorphic_brute};
pub use enumerate::{enumerate_all_colorings, AllColorings};

use crate::{Error, Result};

/// Complete graph on `n` vertices with every edge colored in `1..=k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ColoredGraph {
    n: usize,
    k: usize,
    /// Row-major `n x n`; symmetric, zero diagonal, off-diagonal in `1..=k`.
    cells: Vec<u8>,
}

impl ColoredGraph {
    /// Builds a graph from a full `n x n` cell matrix, validating symmetry,
    /// the zero diagonal, and the color range.
    pub fn from_cells(n: usize, k: usize, cells: Vec<u8>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::invalid("graph", "n and k must be at least 1"));
        }
        if cells.len() != n * n {
            return Err(Error::invalid(
                "graph",
                format!("expected {} cells, got {}", n * n, cells.len()),
            ));
        }
        for i in 0..n {
            if cells[i * n + i] != 0 {
                return Err(Error::invalid("graph", format!("nonzero diagonal at {}", i + 1)));
            }
            for j in (i + 1)..n {
                let c = cells[i * n + j];
                if c != cells[j * n + i] {
                    return Err(Error::invalid(
                        "graph",
                        format!("asymmetric cell ({}, {})", i + 1, j + 1),
                    ));
                }
                if c == 0 || c as usize > k {
                    return Err(Error::invalid(
                        "graph",
                        format!("cell ({}, {}) = {} outside 1..={}", i + 1, j + 1, c, k),
                    ));
                }
            }
        }
        Ok(ColoredGraph { n, k, cells })
    }

    /// Builds a graph from the strict upper triangle in row-major pair order
    /// `(1,2), (1,3), ..., (1,n), (2,3), ...`.
    pub fn from_upper(n: usize, k: usize, upper: &[u8]) -> Result<Self> {
        let expect = n * (n - 1) / 2;
        if upper.len() != expect {
            return Err(Error::invalid(
                "graph",
                format!("expected {} upper-triangle cells, got {}", expect, upper.len()),
            ));
        }
        let mut cells = vec![0u8; n * n];
        let mut idx = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                cells[i * n + j] = upper[idx];
                cells[j * n + i] = upper[idx];
                idx += 1;
            }
        }
        Self::from_cells(n, k, cells)
    }

    /// Complete graph with every edge in one color.
    pub fn monochrome(n: usize, k: usize, color: u8) -> Result<Self> {
        Self::from_upper(n, k, &vec![color; n * (n - 1) / 2])
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn color_count(&self) -> usize {
        self.k
    }

    /// Color of the edge `{u, v}` (1-indexed); `0` when `u == v`.
    pub fn color(&self, u: usize, v: usize) -> u8 {
        assert!(u >= 1 && u <= self.n && v >= 1 && v <= self.n, "vertex out of range");
        self.cells[(u - 1) * self.n + (v - 1)]
    }

    #[inline]
    pub(crate) fn at(&self, i: usize, j: usize) -> u8 {
        self.cells[i * self.n + j]
    }

    /// Number of edges at `v` colored `c`.
    pub fn color_degree(&self, v: usize, c: usize) -> Result<usize> {
        if v < 1 || v > self.n {
            return Err(Error::OutOfRange(format!("vertex {} not in 1..={}", v, self.n)));
        }
        if c < 1 || c > self.k {
            return Err(Error::OutOfRange(format!("color {} not in 1..={}", c, self.k)));
        }
        let row = &self.cells[(v - 1) * self.n..v * self.n];
        Ok(row.iter().filter(|&&x| x as usize == c).count())
    }

    /// The `n x k` matrix of per-vertex, per-color degrees.
    pub fn degree_matrix(&self) -> DegreeMatrix {
        let mut entries = vec![0u32; self.n * self.k];
        for i in 0..self.n {
            for j in 0..self.n {
                let c = self.cells[i * self.n + j];
                if c != 0 {
                    entries[i * self.k + (c as usize - 1)] += 1;
                }
            }
        }
        DegreeMatrix {
            n: self.n,
            k: self.k,
            entries,
        }
    }

    /// Relabels vertices by `pi` and colors by `sigma`: the result `R`
    /// satisfies `R[pi(u)][pi(v)] = sigma(self[u][v])`.
    pub fn apply_perms(&self, pi: &VertexPerm, sigma: &ColorPerm) -> Result<ColoredGraph> {
        if pi.len() != self.n {
            return Err(Error::SizeMismatch(format!(
                "vertex permutation on {} elements applied to graph on {}",
                pi.len(),
                self.n
            )));
        }
        if sigma.len() != self.k {
            return Err(Error::SizeMismatch(format!(
                "color permutation on {} colors applied to {}-coloring",
                sigma.len(),
                self.k
            )));
        }
        let n = self.n;
        let mut cells = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    cells[pi.image[i] * n + pi.image[j]] = sigma.image[self.cells[i * n + j] as usize - 1];
                }
            }
        }
        Ok(ColoredGraph {
            n,
            k: self.k,
            cells,
        })
    }

    /// True iff some `r`-subset of vertices has all internal edges colored `c`.
    pub fn mono_clique_exists(&self, c: usize, r: usize) -> bool {
        assert!(r >= 2, "clique size must be at least 2");
        assert!(c >= 1 && c <= self.k, "color out of range");
        if r > self.n {
            return false;
        }
        let c = c as u8;
        let mut chosen = Vec::with_capacity(r);
        self.clique_search(c, r, 0, &mut chosen)
    }

    fn clique_search(&self, c: u8, r: usize, from: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == r {
            return true;
        }
        // Not enough vertices left to complete the clique.
        let need = r - chosen.len();
        for v in from..=(self.n - need) {
            if chosen.iter().all(|&u| self.at(u, v) == c) {
                chosen.push(v);
                if self.clique_search(c, r, v + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    /// True iff the coloring avoids a monochromatic `K_{r[c-1]}` in every color `c`.
    pub fn is_ramsey_coloring(&self, r: &[usize]) -> bool {
        assert_eq!(r.len(), self.k, "bound vector length must equal color count");
        !(1..=self.k).any(|c| self.mono_clique_exists(c, r[c - 1]))
    }

    /// Induced coloring on the color-`c` neighbors of `v`, renumbered by
    /// ascending original index. May have zero vertices.
    pub fn neighbor_subgraph(&self, v: usize, c: usize) -> ColoredGraph {
        assert!(v >= 1 && v <= self.n, "vertex out of range");
        assert!(c >= 1 && c <= self.k, "color out of range");
        let v0 = v - 1;
        let nbrs: Vec<usize> = (0..self.n)
            .filter(|&u| u != v0 && self.at(v0, u) as usize == c)
            .collect();
        let m = nbrs.len();
        let mut cells = vec![0u8; m * m];
        for a in 0..m {
            for b in 0..m {
                if a != b {
                    cells[a * m + b] = self.at(nbrs[a], nbrs[b]);
                }
            }
        }
        ColoredGraph {
            n: m,
            k: self.k,
            cells,
        }
    }

    /// Upper-triangle cells in the column-by-column order
    /// `(1,2), (1,3), (2,3), (1,4), ...` — the total order used for all
    /// "least matrix" comparisons and by the canonical form.
    pub(crate) fn cell_key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for j in 1..self.n {
            for i in 0..j {
                key.push(self.at(i, j));
            }
        }
        key
    }

    /// A distinguished representative of this graph's weak-isomorphism class.
    pub fn canonical_form(&self) -> ColoredGraph {
        self.canonical_form_with_witness().0
    }

    /// Canonical form together with the permutations that produce it:
    /// `self.apply_perms(pi, sigma)` equals the returned graph.
    pub fn canonical_form_with_witness(&self) -> (ColoredGraph, VertexPerm, ColorPerm) {
        let sigmas: Vec<ColorPerm> = ColorPerm::all(self.k);
        self.canonical_form_under(&sigmas)
    }

    /// Canonical form minimizing over the given color permutations only.
    ///
    /// Passing every permutation of `1..=k` yields the full weak-isomorphism
    /// canonical form; passing a subgroup (e.g. the stabilizer of a clique
    /// bound vector) canonicalizes modulo that subgroup.
    pub fn canonical_form_under(&self, sigmas: &[ColorPerm]) -> (ColoredGraph, VertexPerm, ColorPerm) {
        let outcome = canon::min_key_search(self, sigmas);
        let graph = self
            .apply_perms(&outcome.vperm, &outcome.cperm)
            .expect("canonical witness has matching dimensions");
        debug_assert_eq!(graph.cell_key(), outcome.key);
        (graph, outcome.vperm, outcome.cperm)
    }

    /// Tests weak isomorphism and, on success, returns a witness pair
    /// `(pi, sigma)` with `self.apply_perms(pi, sigma) == other`.
    ///
    /// A mismatch in `n` or `k` yields `None` rather than an error.
    pub fn weakly_isomorphic(&self, other: &ColoredGraph) -> Option<(VertexPerm, ColorPerm)> {
        if self.n != other.n || self.k != other.k {
            return None;
        }
        let (cg, pg, sg) = self.canonical_form_with_witness();
        let (ch, ph, sh) = other.canonical_form_with_witness();
        if cg != ch {
            return None;
        }
        // self --(pg,sg)--> canon <--(ph,sh)-- other, so
        // other = self . (ph^-1 . pg, sh^-1 . sg).
        let pi = ph.inverse().compose_after(&pg);
        let sigma = sh.inverse().compose_after(&sg);
        debug_assert_eq!(self.apply_perms(&pi, &sigma).unwrap(), *other);
        Some((pi, sigma))
    }

    /// Row-pair lex-leader predicate: rows compared as color strings after
    /// omitting positions `i` and `j` from both (1-indexed pair).
    fn row_pair_leq_omit(&self, i: usize, j: usize) -> bool {
        for p in 0..self.n {
            if p == i || p == j {
                continue;
            }
            let a = self.at(i, p);
            let b = self.at(j, p);
            if a < b {
                return true;
            }
            if a > b {
                return false;
            }
        }
        true
    }

    /// True iff every row pair `i < j` satisfies the lex-leader order.
    pub fn satisfies_sb_lex(&self) -> bool {
        (0..self.n).all(|i| ((i + 1)..self.n).all(|j| self.row_pair_leq_omit(i, j)))
    }

    /// Degree-matrix-guarded lex-leader: the row order is only required for
    /// pairs whose degree-matrix rows coincide.
    pub fn satisfies_sb_lex_dm(&self, m: &DegreeMatrix) -> bool {
        assert_eq!((m.n, m.k), (self.n, self.k), "degree matrix shape mismatch");
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if m.row_at(i) == m.row_at(j) && !self.row_pair_leq_omit(i, j) {
                    return false;
                }
            }
        }
        true
    }

    /// Forgets all cell assignments except structure, for partial-graph use.
    pub fn to_partial(&self) -> PartialColoredGraph {
        let cells = self.cells.iter().map(|&c| Some(c)).collect();
        PartialColoredGraph {
            n: self.n,
            k: self.k,
            cells,
        }
    }
}

impl PartialOrd for ColoredGraph {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ColoredGraph {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, self.k)
            .cmp(&(other.n, other.k))
            .then_with(|| self.cell_key().cmp(&other.cell_key()))
    }
}

impl std::fmt::Debug for ColoredGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ColoredGraph(n={}, k={})", self.n, self.k)?;
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// One canonical representative per weak-isomorphism class, sorted by the
/// graph total order so the result is deterministic regardless of input order.
pub fn reduce_mod_weak_iso<I>(graphs: I) -> Vec<ColoredGraph>
where
    I: IntoIterator<Item = ColoredGraph>,
{
    let mut reps: Vec<ColoredGraph> = graphs.into_iter().map(|g| g.canonical_form()).collect();
    reps.sort();
    reps.dedup();
    reps
}

/// Complete graph with some cells not yet assigned; assigned cells obey the
/// same symmetry and range invariants as [`ColoredGraph`].
#[derive(Clone, PartialEq, Eq)]
pub struct PartialColoredGraph {
    n: usize,
    k: usize,
    cells: Vec<Option<u8>>,
}

impl PartialColoredGraph {
    /// All off-diagonal cells unassigned.
    pub fn unassigned(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::invalid("partial graph", "n and k must be at least 1"));
        }
        let mut cells = vec![None; n * n];
        for i in 0..n {
            cells[i * n + i] = Some(0);
        }
        Ok(PartialColoredGraph { n, k, cells })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn color_count(&self) -> usize {
        self.k
    }

    /// Assigned color of `{u, v}`, or `None` (1-indexed).
    pub fn get(&self, u: usize, v: usize) -> Option<u8> {
        assert!(u >= 1 && u <= self.n && v >= 1 && v <= self.n, "vertex out of range");
        self.cells[(u - 1) * self.n + (v - 1)]
    }

    /// Assigns `{u, v}` to color `c`, keeping the matrix symmetric.
    pub fn set(&mut self, u: usize, v: usize, c: u8) -> Result<()> {
        if u < 1 || u > self.n || v < 1 || v > self.n || u == v {
            return Err(Error::OutOfRange(format!("edge ({}, {})", u, v)));
        }
        if c == 0 || c as usize > self.k {
            return Err(Error::OutOfRange(format!("color {} not in 1..={}", c, self.k)));
        }
        self.cells[(u - 1) * self.n + (v - 1)] = Some(c);
        self.cells[(v - 1) * self.n + (u - 1)] = Some(c);
        Ok(())
    }

    /// Assigned off-diagonal cells as `(u, v, color)` with `u < v`, 1-indexed.
    pub fn assigned_edges(&self) -> Vec<(usize, usize, u8)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if let Some(c) = self.cells[i * self.n + j] {
                    out.push((i + 1, j + 1, c));
                }
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(|c| c.is_some())
    }

    /// Converts to a [`ColoredGraph`] when every cell is assigned.
    pub fn try_into_colored(&self) -> Result<ColoredGraph> {
        let cells: Option<Vec<u8>> = self.cells.iter().copied().collect();
        match cells {
            Some(cells) => ColoredGraph::from_cells(self.n, self.k, cells),
            None => Err(Error::invalid("partial graph", "unassigned cells remain")),
        }
    }
}

impl std::fmt::Debug for PartialColoredGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "PartialColoredGraph(n={}, k={})", self.n, self.k)?;
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                match self.cells[i * self.n + j] {
                    Some(c) => write!(f, "{}", c)?,
                    None => write!(f, "?")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Bijection on vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPerm {
    /// `image[i] = pi(i+1) - 1`, 0-based.
    image: Vec<usize>,
}

impl VertexPerm {
    pub fn identity(n: usize) -> Self {
        VertexPerm {
            image: (0..n).collect(),
        }
    }

    /// Builds from 1-based images: `images[i]` is the image of vertex `i+1`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in images {
            if im < 1 || im > n || seen[im - 1] {
                return Err(Error::invalid("vertex permutation", "not a bijection"));
            }
            seen[im - 1] = true;
        }
        Ok(VertexPerm {
            image: images.iter().map(|&im| im - 1).collect(),
        })
    }

    pub(crate) fn from_zero_based(image: Vec<usize>) -> Self {
        VertexPerm { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// Image of vertex `v` (1-indexed).
    pub fn apply(&self, v: usize) -> usize {
        self.image[v - 1] + 1
    }

    pub fn inverse(&self) -> VertexPerm {
        let mut inv = vec![0usize; self.image.len()];
        for (i, &im) in self.image.iter().enumerate() {
            inv[im] = i;
        }
        VertexPerm { image: inv }
    }

    /// `self . other`: applies `other` first, then `self`.
    pub fn compose_after(&self, other: &VertexPerm) -> VertexPerm {
        assert_eq!(self.len(), other.len());
        VertexPerm {
            image: other.image.iter().map(|&m| self.image[m]).collect(),
        }
    }

    /// All `n!` permutations, for brute-force checks on small `n`.
    pub fn all(n: usize) -> Vec<VertexPerm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        permute_rec(&mut cur, 0, &mut |image| {
            out.push(VertexPerm {
                image: image.to_vec(),
            })
        });
        out
    }
}

/// Bijection on colors `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorPerm {
    /// `image[c] = sigma(c+1)`, values 1-based.
    image: Vec<u8>,
}

impl ColorPerm {
    pub fn identity(k: usize) -> Self {
        ColorPerm {
            image: (1..=k as u8).collect(),
        }
    }

    /// Builds from 1-based images: `images[c]` is the image of color `c+1`.
    pub fn from_images(images: &[u8]) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &im in images {
            if im < 1 || im as usize > k || seen[im as usize - 1] {
                return Err(Error::invalid("color permutation", "not a bijection"));
            }
            seen[im as usize - 1] = true;
        }
        Ok(ColorPerm {
            image: images.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// Image of color `c` (1-indexed).
    pub fn apply(&self, c: u8) -> u8 {
        self.image[c as usize - 1]
    }

    pub fn inverse(&self) -> ColorPerm {
        let mut inv = vec![0u8; self.image.len()];
        for (i, &im) in self.image.iter().enumerate() {
            inv[im as usize - 1] = i as u8 + 1;
        }
        ColorPerm { image: inv }
    }

    /// `self . other`: applies `other` first, then `self`.
    pub fn compose_after(&self, other: &ColorPerm) -> ColorPerm {
        assert_eq!(self.len(), other.len());
        ColorPerm {
            image: other.image.iter().map(|&m| self.image[m as usize - 1]).collect(),
        }
    }

    /// All `k!` permutations in a deterministic order.
    pub fn all(k: usize) -> Vec<ColorPerm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..k).collect();
        permute_rec(&mut cur, 0, &mut |image| {
            out.push(ColorPerm {
                image: image.iter().map(|&c| c as u8 + 1).collect(),
            })
        });
        out
    }

    /// Permutations fixing the clique-bound vector: `r[sigma(c)] == r[c]`.
    pub fn stabilizer(r: &[usize]) -> Vec<ColorPerm> {
        ColorPerm::all(r.len())
            .into_iter()
            .filter(|sigma| (1..=r.len()).all(|c| r[sigma.apply(c as u8) as usize - 1] == r[c - 1]))
            .collect()
    }
}

fn permute_rec(cur: &mut Vec<usize>, at: usize, emit: &mut impl FnMut(&[usize])) {
    if at == cur.len() {
        emit(cur);
        return;
    }
    for i in at..cur.len() {
        cur.swap(at, i);
        permute_rec(cur, at + 1, emit);
        cur.swap(at, i);
    }
}

/// `n x k` matrix of per-vertex, per-color degrees.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DegreeMatrix {
    n: usize,
    k: usize,
    entries: Vec<u32>,
}

impl DegreeMatrix {
    pub fn new(n: usize, k: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != n * k {
            return Err(Error::invalid(
                "degree matrix",
                format!("expected {} entries, got {}", n * k, entries.len()),
            ));
        }
        Ok(DegreeMatrix { n, k, entries })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::invalid("degree matrix", "ragged rows"));
        }
        Self::new(n, k, rows.concat())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn color_count(&self) -> usize {
        self.k
    }

    /// Entry for vertex `v`, color `c` (1-indexed).
    pub fn entry(&self, v: usize, c: usize) -> u32 {
        assert!(v >= 1 && v <= self.n && c >= 1 && c <= self.k);
        self.entries[(v - 1) * self.k + (c - 1)]
    }

    pub(crate) fn row_at(&self, i: usize) -> &[u32] {
        &self.entries[i * self.k..(i + 1) * self.k]
    }

    /// Row of vertex `v` (1-indexed).
    pub fn row(&self, v: usize) -> &[u32] {
        assert!(v >= 1 && v <= self.n);
        self.row_at(v - 1)
    }

    /// Column `c` (1-indexed), top to bottom.
    pub fn column(&self, c: usize) -> Vec<u32> {
        assert!(c >= 1 && c <= self.k);
        (0..self.n).map(|i| self.entries[i * self.k + (c - 1)]).collect()
    }

    /// True iff every row sums to `total`.
    pub fn rows_sum_to(&self, total: u32) -> bool {
        (0..self.n).map(|i| self.row_at(i).iter().sum::<u32>()).all(|s| s == total)
    }

    /// True iff rows are lex-sorted non-increasing top to bottom.
    pub fn rows_sorted_non_increasing(&self) -> bool {
        (1..self.n).all(|i| self.row_at(i - 1) >= self.row_at(i))
    }

    /// True iff columns, compared as vectors, are lex-sorted non-increasing
    /// left to right.
    pub fn columns_sorted_non_increasing(&self) -> bool {
        (2..=self.k).all(|c| self.column(c - 1) >= self.column(c))
    }

    /// Rows as owned vectors, for sorting and comparisons.
    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.n).map(|i| self.row_at(i).to_vec()).collect()
    }

    /// Applies a vertex permutation to rows and a color permutation to
    /// columns: entry `(pi(v), sigma(c))` of the result is entry `(v, c)`.
    pub fn permuted(&self, pi: &VertexPerm, sigma: &ColorPerm) -> DegreeMatrix {
        assert_eq!(pi.len(), self.n);
        assert_eq!(sigma.len(), self.k);
        let mut entries = vec![0u32; self.n * self.k];
        for v in 0..self.n {
            for c in 0..self.k {
                let nv = pi.image[v];
                let nc = sigma.image[c] as usize - 1;
                entries[nv * self.k + nc] = self.entries[v * self.k + c];
            }
        }
        DegreeMatrix {
            n: self.n,
            k: self.k,
            entries,
        }
    }
}

impl PartialOrd for DegreeMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DegreeMatrix {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, self.k)
            .cmp(&(other.n, other.k))
            .then_with(|| self.entries.cmp(&other.entries))
    }
}

impl std::fmt::Debug for DegreeMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "DegreeMatrix(n={}, k={})", self.n, self.k)?;
        for i in 0..self.n {
            writeln!(f, "{:?}", self.row_at(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3_mono() -> ColoredGraph {
        ColoredGraph::monochrome(3, 1, 1).unwrap()
    }

    /// K5 with the 5-cycle in color 1 and the chords (the complementary
    /// 5-cycle) in color 2.
    fn c5_coloring() -> ColoredGraph {
        let mut cells = vec![0u8; 25];
        for i in 0..5usize {
            for j in 0..5usize {
                if i != j {
                    let d = (j + 5 - i) % 5;
                    let c = if d == 1 || d == 4 { 1 } else { 2 };
                    cells[i * 5 + j] = c;
                }
            }
        }
        ColoredGraph::from_cells(5, 2, cells).unwrap()
    }

    #[test]
    fn color_degree_monochrome() {
        let g = ColoredGraph::monochrome(3, 2, 1).unwrap();
        assert_eq!(g.color_degree(1, 1).unwrap(), 2);
        assert_eq!(g.color_degree(1, 2).unwrap(), 0);
        assert!(g.color_degree(4, 1).is_err());
        assert!(g.color_degree(1, 3).is_err());
    }

    #[test]
    fn degree_matrix_k3() {
        let m = k3_mono().degree_matrix();
        assert_eq!(m.column(1), vec![2, 2, 2]);
        assert!(m.rows_sum_to(2));
    }

    #[test]
    fn degree_matrix_k4_one_odd_edge() {
        // K4 in color 1 except edge (1,2) in color 2.
        let mut upper = vec![1u8; 6];
        upper[0] = 2;
        let g = ColoredGraph::from_upper(4, 2, &upper).unwrap();
        let m = g.degree_matrix();
        assert_eq!(m.rows(), vec![vec![2, 1], vec![2, 1], vec![3, 0], vec![3, 0]]);
    }

    #[test]
    fn apply_identity() {
        let g = c5_coloring();
        let h = g
            .apply_perms(&VertexPerm::identity(5), &ColorPerm::identity(2))
            .unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn apply_color_swap() {
        let g = ColoredGraph::monochrome(3, 2, 1).unwrap();
        let swap = ColorPerm::from_images(&[2, 1]).unwrap();
        let h = g.apply_perms(&VertexPerm::identity(3), &swap).unwrap();
        assert_eq!(h, ColoredGraph::monochrome(3, 2, 2).unwrap());
    }

    #[test]
    fn apply_perms_commutes_with_degree_matrix() {
        let g = c5_coloring();
        let pi = VertexPerm::from_images(&[3, 1, 4, 5, 2]).unwrap();
        let sigma = ColorPerm::from_images(&[2, 1]).unwrap();
        let h = g.apply_perms(&pi, &sigma).unwrap();
        assert_eq!(h.degree_matrix(), g.degree_matrix().permuted(&pi, &sigma));
    }

    #[test]
    fn clique_detection() {
        assert!(k3_mono().mono_clique_exists(1, 3));
        let g = c5_coloring();
        assert!(!g.mono_clique_exists(1, 3));
        assert!(!g.mono_clique_exists(2, 3));
        assert!(g.is_ramsey_coloring(&[3, 3]));
        assert!(!ColoredGraph::monochrome(3, 2, 1).unwrap().is_ramsey_coloring(&[3, 3]));
    }

    #[test]
    fn neighbor_subgraph_basics() {
        let g = k3_mono();
        let h = g.neighbor_subgraph(1, 1);
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.color(1, 2), 1);
        let g2 = ColoredGraph::monochrome(3, 2, 1).unwrap();
        assert_eq!(g2.neighbor_subgraph(1, 2).vertex_count(), 0);
    }

    #[test]
    fn weak_iso_witness_verifies() {
        let g = c5_coloring();
        let pi = VertexPerm::from_images(&[2, 4, 1, 5, 3]).unwrap();
        let sigma = ColorPerm::from_images(&[2, 1]).unwrap();
        let h = g.apply_perms(&pi, &sigma).unwrap();
        let (wp, ws) = g.weakly_isomorphic(&h).expect("must be isomorphic");
        assert_eq!(g.apply_perms(&wp, &ws).unwrap(), h);
    }

    #[test]
    fn weak_iso_single_color2_edges() {
        // K4 with one color-2 edge in two different positions: related by a
        // transposition.
        let mut up_a = vec![1u8; 6];
        up_a[0] = 2; // edge (1,2)
        let mut up_b = vec![1u8; 6];
        up_b[4] = 2; // edge (2,4)
        let a = ColoredGraph::from_upper(4, 2, &up_a).unwrap();
        let b = ColoredGraph::from_upper(4, 2, &up_b).unwrap();
        assert!(a.weakly_isomorphic(&b).is_some());
    }

    #[test]
    fn weak_iso_size_mismatch_is_none() {
        let a = k3_mono();
        let b = ColoredGraph::monochrome(4, 1, 1).unwrap();
        assert!(a.weakly_isomorphic(&b).is_none());
        let c = ColoredGraph::monochrome(3, 2, 1).unwrap();
        assert!(a.weakly_isomorphic(&c).is_none());
    }

    #[test]
    fn canonical_idempotent() {
        let g = c5_coloring();
        let c1 = g.canonical_form();
        assert_eq!(c1.canonical_form(), c1);
    }

    #[test]
    fn reduce_collapses_orbit() {
        let g = c5_coloring();
        let pi = VertexPerm::from_images(&[5, 3, 1, 2, 4]).unwrap();
        let sigma = ColorPerm::from_images(&[2, 1]).unwrap();
        let h = g.apply_perms(&pi, &sigma).unwrap();
        let reps = reduce_mod_weak_iso(vec![g, h]);
        assert_eq!(reps.len(), 1);
    }

    #[test]
    fn sb_lex_on_sorted_monochrome() {
        assert!(k3_mono().satisfies_sb_lex());
    }

    #[test]
    fn partial_graph_roundtrip() {
        let g = c5_coloring();
        let p = g.to_partial();
        assert!(p.is_complete());
        assert_eq!(p.try_into_colored().unwrap(), g);
        let mut q = PartialColoredGraph::unassigned(3, 2).unwrap();
        assert!(!q.is_complete());
        q.set(1, 2, 2).unwrap();
        assert_eq!(q.get(2, 1), Some(2));
        assert!(q.set(1, 1, 1).is_err());
        assert!(q.set(1, 2, 3).is_err());
    }

    #[test]
    fn stabilizer_perms() {
        assert_eq!(ColorPerm::stabilizer(&[3, 3, 3]).len(), 6);
        assert_eq!(ColorPerm::stabilizer(&[4, 3, 3]).len(), 2);
        assert_eq!(ColorPerm::stabilizer(&[4, 2, 3]).len(), 1);
    }
}
