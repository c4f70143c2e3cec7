//! CNF encoding, DIMACS I/O, solving, and all-solutions enumeration.
//!
//! The encoding is one-hot per cell: edge `{i, j}` in color `c` is one
//! Boolean variable, with an exactly-one group per unordered pair. Edge
//! variables come first in the numbering so they double as the projection
//! set for model enumeration; every auxiliary variable introduced by
//! cardinality counters and lex chains is functionally determined by them.

mod dimacs;
mod enumerate;
mod solver;

pub mod backend;

pub use backend::{solve, Backend};
pub use dimacs::{dimacs_string, read_dimacs, read_dimacs_str, write_dimacs};
pub use enumerate::{all_solutions, enumerate_colorings, journal_path, read_journal, AllSolutions};
pub use solver::{Solver, SolverBudget, SolverResult};

use crate::graph::ColoredGraph;
use crate::model::{Atom, ConstraintModel};
use crate::{Error, Result};

/// A CNF formula: positive variable count plus non-empty, non-tautological
/// clauses of nonzero literals within range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    var_count: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(var_count: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for (idx, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::invalid("formula", format!("clause {} is empty", idx + 1)));
            }
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > var_count {
                    return Err(Error::invalid(
                        "formula",
                        format!("literal {} out of range in clause {}", lit, idx + 1),
                    ));
                }
            }
            for &lit in clause {
                if clause.contains(&-lit) {
                    return Err(Error::invalid(
                        "formula",
                        format!("clause {} contains {} and {}", idx + 1, lit, -lit),
                    ));
                }
            }
        }
        Ok(CnfFormula { var_count, clauses })
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// True iff `assignment` (index `v - 1` for variable `v`) satisfies
    /// every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        if assignment.len() < self.var_count {
            return false;
        }
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let v = lit.unsigned_abs() as usize - 1;
                assignment[v] == (lit > 0)
            })
        })
    }
}

/// Outcome of a single solver call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Total assignment, index `v - 1` for variable `v`; re-verified against
    /// the clause list before being returned.
    Sat(Vec<bool>),
    Unsat,
    BudgetExceeded,
}

/// Correspondence between `(i, j, c)` cell/color triples and variable ids.
///
/// Edge variables occupy `1..=pairs*k` in row-major pair order; auxiliary
/// variables follow.
#[derive(Clone, Debug)]
pub struct VarMap {
    n: usize,
    k: usize,
    var_count: usize,
}

impl VarMap {
    fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j <= self.n);
        let i0 = i - 1;
        let j0 = j - 1;
        i0 * self.n - i0 * (i0 + 1) / 2 + (j0 - i0 - 1)
    }

    /// Variable for cell `{i, j}` taking color `c` (all 1-indexed; `i < j`
    /// not required).
    pub fn edge_var(&self, i: usize, j: usize, c: usize) -> i32 {
        assert!(i != j && i >= 1 && j >= 1 && i <= self.n && j <= self.n);
        assert!(c >= 1 && c <= self.k);
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        (self.pair_index(a, b) * self.k + c) as i32
    }

    /// Inverse of [`VarMap::edge_var`] for edge variables, `None` for
    /// auxiliaries.
    pub fn edge_of_var(&self, var: i32) -> Option<(usize, usize, usize)> {
        if var < 1 || var as usize > self.edge_var_count() {
            return None;
        }
        let z = var as usize - 1;
        let pair = z / self.k;
        let c = z % self.k + 1;
        // Invert the row-major pair index by scanning rows.
        let mut rest = pair;
        for i in 1..self.n {
            let row = self.n - i;
            if rest < row {
                return Some((i, i + rest + 1, c));
            }
            rest -= row;
        }
        None
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn color_count(&self) -> usize {
        self.k
    }

    pub fn edge_var_count(&self) -> usize {
        self.n * (self.n - 1) / 2 * self.k
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    /// The edge variables, i.e. the projection set for coloring enumeration.
    pub fn projection(&self) -> Vec<i32> {
        (1..=self.edge_var_count() as i32).collect()
    }

    /// Sidecar text listing `i j c var` per edge variable.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.k, self.var_count);
        for i in 1..=self.n {
            for j in (i + 1)..=self.n {
                for c in 1..=self.k {
                    out.push_str(&format!("{} {} {} {}\n", i, j, c, self.edge_var(i, j, c)));
                }
            }
        }
        out
    }
}

struct Encoder {
    vm: VarMap,
    clauses: Vec<Vec<i32>>,
    next_var: usize,
}

impl Encoder {
    fn fresh(&mut self) -> i32 {
        self.next_var += 1;
        self.next_var as i32
    }

    fn clause(&mut self, lits: Vec<i32>) {
        debug_assert!(!lits.is_empty());
        self.clauses.push(lits);
    }

    /// Full sequential unary counter over `lits`: returns `outs` where
    /// `outs[j-1]` is a literal equivalent to "at least j of lits are true",
    /// for `1 <= j <= levels`. Both implication directions are encoded, so
    /// the outputs are functionally determined.
    fn unary_counter(&mut self, lits: &[i32], levels: usize) -> Vec<i32> {
        let m = lits.len();
        let levels = levels.min(m);
        assert!(levels >= 1);
        // s[i][j] (0-based j) = at least j+1 true among first i+1 literals.
        let mut prev: Vec<i32> = Vec::new();
        for (i, &x) in lits.iter().enumerate() {
            let width = (i + 1).min(levels);
            let mut cur = Vec::with_capacity(width);
            for j in 0..width {
                let s = self.fresh();
                cur.push(s);
                let above = prev.get(j).copied(); // s_{i-1, j}
                let diag = if j == 0 { None } else { prev.get(j - 1).copied() }; // s_{i-1, j-1}
                match (above, diag) {
                    (None, None) => {
                        // i == 0, j == 0: s <-> x
                        self.clause(vec![-s, x]);
                        self.clause(vec![s, -x]);
                    }
                    (Some(a), None) => {
                        // j == 0: s <-> a | x
                        self.clause(vec![-a, s]);
                        self.clause(vec![-x, s]);
                        self.clause(vec![-s, a, x]);
                    }
                    (Some(a), Some(d)) => {
                        // s <-> a | (x & d)
                        self.clause(vec![-a, s]);
                        self.clause(vec![-x, -d, s]);
                        self.clause(vec![-s, a, x]);
                        self.clause(vec![-s, a, d]);
                    }
                    (None, Some(d)) => {
                        // j == i: s <-> x & d
                        self.clause(vec![-x, -d, s]);
                        self.clause(vec![-s, x]);
                        self.clause(vec![-s, d]);
                    }
                }
            }
            prev = cur;
        }
        prev
    }

    /// Literal meaning "cells (i,p) and (j,p) have equal colors".
    fn cell_eq(&mut self, i: usize, j: usize, p: usize) -> i32 {
        let eq = self.fresh();
        for c in 1..=self.vm.color_count() {
            let a = self.vm.edge_var(i, p, c);
            let b = self.vm.edge_var(j, p, c);
            self.clause(vec![-eq, -a, b]);
            self.clause(vec![-a, -b, eq]);
        }
        eq
    }

    /// Literal meaning "color of (i,p) is strictly below color of (j,p)".
    fn cell_lt(&mut self, i: usize, j: usize, p: usize) -> i32 {
        let lt = self.fresh();
        let k = self.vm.color_count();
        for c in 1..=k {
            let b = self.vm.edge_var(j, p, c);
            // lt & B=c -> A < c
            let mut forward = vec![-lt, -b];
            for lower in 1..c {
                forward.push(self.vm.edge_var(i, p, lower));
            }
            self.clause(forward);
            // A=c & B=c' (c < c') -> lt
            for higher in (c + 1)..=k {
                let a = self.vm.edge_var(i, p, c);
                let bh = self.vm.edge_var(j, p, higher);
                self.clause(vec![-a, -bh, lt]);
            }
        }
        lt
    }

    /// Lex-leader chain for rows `i` and `j`, omitting positions `i` and `j`.
    fn lex_leq_omit(&mut self, i: usize, j: usize) {
        let positions: Vec<usize> = (1..=self.vm.vertex_count()).filter(|&p| p != i && p != j).collect();
        if positions.is_empty() {
            return;
        }
        let mut prefix_eq: Option<i32> = None; // z_{p-1}
        for (idx, &p) in positions.iter().enumerate() {
            let eq = self.cell_eq(i, j, p);
            let lt = self.cell_lt(i, j, p);
            match prefix_eq {
                None => self.clause(vec![lt, eq]),
                Some(z) => self.clause(vec![-z, lt, eq]),
            }
            if idx + 1 < positions.len() {
                let z_next = self.fresh();
                match prefix_eq {
                    None => {
                        // z_next <-> eq
                        self.clause(vec![-z_next, eq]);
                        self.clause(vec![z_next, -eq]);
                    }
                    Some(z) => {
                        self.clause(vec![-z_next, z]);
                        self.clause(vec![-z_next, eq]);
                        self.clause(vec![z_next, -z, -eq]);
                    }
                }
                prefix_eq = Some(z_next);
            }
        }
    }

    /// Degree literals of one (vertex, color) pair.
    fn degree_lits(&self, v: usize, c: usize) -> Vec<i32> {
        (1..=self.vm.vertex_count())
            .filter(|&u| u != v)
            .map(|u| self.vm.edge_var(v, u, c))
            .collect()
    }

    /// Forces a contradiction (used for constraints false by shape).
    fn contradiction(&mut self) {
        let f = self.fresh();
        self.clause(vec![f]);
        self.clause(vec![-f]);
    }
}

/// Encodes a constraint model to CNF.
///
/// Satisfying assignments, projected onto the edge variables, are exactly
/// the model's solutions; an exactly-one group per unordered pair is always
/// emitted.
pub fn encode(model: &ConstraintModel) -> (CnfFormula, VarMap) {
    let n = model.vertex_count();
    let k = model.color_count();
    let vm = VarMap {
        n,
        k,
        var_count: 0,
    };
    let edge_vars = vm.edge_var_count();
    let mut enc = Encoder {
        vm,
        clauses: Vec::new(),
        next_var: edge_vars,
    };

    // Structural exactly-one per unordered pair.
    for i in 1..=n {
        for j in (i + 1)..=n {
            let group: Vec<i32> = (1..=k).map(|c| enc.vm.edge_var(i, j, c)).collect();
            enc.clause(group.clone());
            for a in 0..k {
                for b in (a + 1)..k {
                    enc.clause(vec![-group[a], -group[b]]);
                }
            }
        }
    }

    for atom in model.atoms() {
        match atom {
            Atom::EdgeInRange { .. } => {} // structural
            Atom::NotAllEqual { edges, color } => {
                let clause: Vec<i32> = edges
                    .iter()
                    .map(|&(i, j)| -enc.vm.edge_var(i, j, *color as usize))
                    .collect();
                enc.clause(clause);
            }
            Atom::EdgeFixed { i, j, color } => {
                let v = enc.vm.edge_var(*i, *j, *color as usize);
                enc.clause(vec![v]);
            }
            Atom::DegreeEquals { v, color, degree } => {
                let lits = enc.degree_lits(*v, *color as usize);
                let m = lits.len();
                let d = *degree as usize;
                if d > m {
                    enc.contradiction();
                    continue;
                }
                if d == 0 {
                    for &x in &lits {
                        enc.clause(vec![-x]);
                    }
                    continue;
                }
                let levels = (d + 1).min(m);
                let outs = enc.unary_counter(&lits, levels);
                enc.clause(vec![outs[d - 1]]); // at least d
                if d < m {
                    enc.clause(vec![-outs[d]]); // at most d
                }
            }
            Atom::LexLeqOmit { i, j } | Atom::LexLeqOmitGuarded { i, j } => {
                enc.lex_leq_omit(*i, *j);
            }
            Atom::CellTie { a, b } => {
                for c in 1..=k {
                    let va = enc.vm.edge_var(a.0, a.1, c);
                    let vb = enc.vm.edge_var(b.0, b.1, c);
                    enc.clause(vec![-va, vb]);
                    enc.clause(vec![-vb, va]);
                }
            }
            Atom::DegreeOutOfRange { lo, hi } => {
                let m = n - 1;
                let lo = *lo as usize;
                let hi = *hi as usize;
                let mut violation: Vec<i32> = Vec::new();
                for v in 1..=n {
                    for c in 1..=k {
                        let lits = enc.degree_lits(v, c);
                        let levels = lo.max((hi + 1).min(m));
                        if levels == 0 {
                            continue;
                        }
                        let outs = enc.unary_counter(&lits, levels);
                        if lo >= 1 {
                            violation.push(-outs[lo - 1]); // degree < lo
                        }
                        if hi + 1 <= m {
                            violation.push(outs[hi]); // degree > hi
                        }
                    }
                }
                if violation.is_empty() {
                    enc.contradiction();
                } else {
                    enc.clause(violation);
                }
            }
        }
    }

    let var_count = enc.next_var;
    let clauses = enc.clauses;
    let mut vm = enc.vm;
    vm.var_count = var_count;
    let formula = CnfFormula { var_count, clauses };
    (formula, vm)
}

/// Decodes a total assignment over the edge variables into a graph.
///
/// Fails with an internal error when some pair has zero or multiple true
/// color variables — that would mean the encoder broke its own contract.
pub fn decode(assignment: &[bool], vm: &VarMap, n: usize, k: usize) -> Result<ColoredGraph> {
    if (vm.vertex_count(), vm.color_count()) != (n, k) {
        return Err(Error::SizeMismatch("variable map does not match n, k".into()));
    }
    let mut upper = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..=n {
        for j in (i + 1)..=n {
            let mut found: Option<u8> = None;
            for c in 1..=k {
                let var = vm.edge_var(i, j, c) as usize;
                if *assignment.get(var - 1).ok_or_else(|| {
                    Error::EncodingSoundness(format!("assignment too short for var {}", var))
                })? {
                    if found.is_some() {
                        return Err(Error::EncodingSoundness(format!(
                            "cell ({}, {}) has multiple colors",
                            i, j
                        )));
                    }
                    found = Some(c as u8);
                }
            }
            match found {
                Some(c) => upper.push(c),
                None => {
                    return Err(Error::EncodingSoundness(format!(
                        "cell ({}, {}) has no color",
                        i, j
                    )))
                }
            }
        }
    }
    ColoredGraph::from_upper(n, k, &upper)
}
