//! Degree-sequence and degree-matrix combinatorics.
//!
//! Graphicality testing (Erdős–Gallai), bounded enumeration of graphical
//! sequences, enumeration of candidate degree matrices with a given left
//! column, and the canonical lex form of a degree matrix under row/column
//! permutations.

use crate::graph::DegreeMatrix;
use crate::{Error, Result};
use std::collections::BTreeSet;

/// Non-increasing sequence of vertex degrees.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeSequence(Vec<u32>);

impl DegreeSequence {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid("degree sequence", "must be non-increasing"));
        }
        Ok(DegreeSequence(values))
    }

    /// Sorts an arbitrary list of degrees into a sequence.
    pub fn from_unsorted(mut values: Vec<u32>) -> Self {
        values.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSequence(values)
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Erdős–Gallai test: true iff some simple graph realizes the sequence.
pub fn is_graphical(s: &DegreeSequence) -> bool {
    let d = s.values();
    let n = d.len();
    if n == 0 {
        return true;
    }
    if d[0] as usize > n - 1 {
        return false;
    }
    let total: u64 = d.iter().map(|&x| x as u64).sum();
    if total % 2 != 0 {
        return false;
    }
    let mut prefix = 0u64;
    for p in 1..=n {
        prefix += d[p - 1] as u64;
        let mut tail = 0u64;
        for &x in &d[p..] {
            tail += (x as u64).min(p as u64);
        }
        if prefix > (p as u64) * (p as u64 - 1) + tail {
            return false;
        }
    }
    true
}

/// All graphical non-increasing sequences of length `n` with values in
/// `[lo, hi]`, in descending lexicographic order.
pub fn enum_degree_sequences(n: usize, lo: u32, hi: u32) -> Result<Vec<DegreeSequence>> {
    if lo > hi || hi as usize > n.saturating_sub(1) {
        return Err(Error::invalid(
            "degree bounds",
            format!("need 0 <= lo <= hi <= n-1, got [{}, {}] for n = {}", lo, hi, n),
        ));
    }
    let mut out = Vec::new();
    let mut cur: Vec<u32> = Vec::with_capacity(n);
    descend(n, lo, hi, &mut cur, &mut 0, &mut out);
    Ok(out)
}

fn descend(n: usize, lo: u32, hi: u32, cur: &mut Vec<u32>, prefix_sum: &mut u64, out: &mut Vec<DegreeSequence>) {
    if cur.len() == n {
        let seq = DegreeSequence(cur.clone());
        if is_graphical(&seq) {
            out.push(seq);
        }
        return;
    }
    let cap = cur.last().copied().unwrap_or(hi).min(hi);
    let mut v = cap;
    loop {
        cur.push(v);
        *prefix_sum += v as u64;
        // Erdős–Gallai prefix prune at p = current length: future values are
        // at most v, so their contribution is at most min(v, p) each.
        let j = cur.len() as u64;
        let bound = j * (j - 1) + (n as u64 - j) * (v as u64).min(j);
        if *prefix_sum <= bound {
            descend(n, lo, hi, cur, prefix_sum, out);
        }
        *prefix_sum -= v as u64;
        cur.pop();
        if v == lo {
            break;
        }
        v -= 1;
    }
}

/// Canonical lex form of a degree matrix under row and column permutations.
///
/// Candidates are built by applying each of the `k!` column permutations and
/// then sorting rows non-increasing; among candidates whose columns are also
/// sorted the row-major least matrix is returned (falling back to the least
/// candidate overall for degenerate shapes). The result is idempotent and
/// constant on row/column-permutation orbits.
pub fn lex_canonical_dm(m: &DegreeMatrix) -> DegreeMatrix {
    let k = m.color_count();
    let mut best: Option<Vec<Vec<u32>>> = None;
    let mut best_sorted = false;
    let mut cols: Vec<usize> = (0..k).collect();
    permute_columns(&mut cols, 0, &mut |perm| {
        let mut rows: Vec<Vec<u32>> = m
            .rows()
            .into_iter()
            .map(|row| perm.iter().map(|&c| row[c]).collect())
            .collect();
        rows.sort_unstable_by(|a, b| b.cmp(a));
        let cols_sorted = columns_sorted(&rows, k);
        let better = match &best {
            None => true,
            Some(b) => match (cols_sorted, best_sorted) {
                (true, false) => true,
                (false, true) => false,
                _ => rows < *b,
            },
        };
        if better {
            best = Some(rows);
            best_sorted = cols_sorted;
        }
    });
    DegreeMatrix::from_rows(&best.expect("at least one column permutation")).expect("same shape")
}

fn columns_sorted(rows: &[Vec<u32>], k: usize) -> bool {
    for c in 1..k {
        let mut state = std::cmp::Ordering::Equal;
        for row in rows {
            state = row[c - 1].cmp(&row[c]);
            if state != std::cmp::Ordering::Equal {
                break;
            }
        }
        if state == std::cmp::Ordering::Less {
            return false;
        }
    }
    true
}

fn permute_columns(cols: &mut Vec<usize>, at: usize, emit: &mut impl FnMut(&[usize])) {
    if at == cols.len() {
        emit(cols);
        return;
    }
    for i in at..cols.len() {
        cols.swap(at, i);
        permute_columns(cols, at + 1, emit);
        cols.swap(at, i);
    }
}

/// Row/column-permutation equivalence of degree matrices.
pub fn dm_equivalent(m: &DegreeMatrix, n: &DegreeMatrix) -> bool {
    if (m.vertex_count(), m.color_count()) != (n.vertex_count(), n.color_count()) {
        return false;
    }
    lex_canonical_dm(m) == lex_canonical_dm(n)
}

/// All canonical candidate degree matrices with first column from
/// `left_columns`, rows summing to `row_total`, and every column graphical
/// when sorted. Deduplicated modulo row/column permutation.
pub fn enum_degree_matrices(
    n: usize,
    k: usize,
    row_total: u32,
    left_columns: &[DegreeSequence],
) -> Result<Vec<DegreeMatrix>> {
    if k == 0 {
        return Err(Error::invalid("degree matrix enumeration", "k must be at least 1"));
    }
    let mut found: BTreeSet<DegreeMatrix> = BTreeSet::new();
    for s in left_columns {
        if s.len() != n {
            return Err(Error::SizeMismatch(format!(
                "left column of length {} for n = {}",
                s.len(),
                n
            )));
        }
        if s.values().iter().any(|&d| d > row_total) {
            continue;
        }
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(n);
        let colstate = vec![std::cmp::Ordering::Equal; k - 1];
        extend_rows(n, k, row_total, s.values(), &mut rows, &colstate, &mut found);
    }
    Ok(found.into_iter().collect())
}

fn extend_rows(
    n: usize,
    k: usize,
    row_total: u32,
    left: &[u32],
    rows: &mut Vec<Vec<u32>>,
    colstate: &[std::cmp::Ordering],
    found: &mut BTreeSet<DegreeMatrix>,
) {
    if rows.len() == n {
        if columns_graphical(rows, k) {
            let m = DegreeMatrix::from_rows(rows).expect("rectangular rows");
            found.insert(lex_canonical_dm(&m));
        }
        return;
    }
    let i = rows.len();
    let first = left[i];
    let rest = row_total - first;
    // The previous row bounds this one lexicographically when first entries
    // tie; otherwise the tail is free.
    let bound: Option<Vec<u32>> = match rows.last() {
        Some(prev) if prev[0] == first => Some(prev[1..].to_vec()),
        _ => None,
    };
    let mut tail: Vec<u32> = Vec::with_capacity(k - 1);
    extend_tail(k - 1, rest, bound.as_deref(), &mut tail, &mut |t| {
        let mut row = Vec::with_capacity(k);
        row.push(first);
        row.extend_from_slice(t);
        // Keep adjacent columns lex-sorted non-increasing: once a pair of
        // columns compares Less on the first undecided row, the whole branch
        // violates the candidate invariant.
        let mut state: Vec<std::cmp::Ordering> = colstate.to_vec();
        for c in 0..k - 1 {
            if state[c] == std::cmp::Ordering::Equal {
                state[c] = row[c].cmp(&row[c + 1]);
                if state[c] == std::cmp::Ordering::Less {
                    return;
                }
            }
        }
        rows.push(row);
        extend_rows(n, k, row_total, left, rows, &state, found);
        rows.pop();
    });
}

/// Emits tails of length `len` summing to `sum`, in descending lex order,
/// bounded above by `bound` when present.
fn extend_tail(
    len: usize,
    sum: u32,
    bound: Option<&[u32]>,
    tail: &mut Vec<u32>,
    emit: &mut impl FnMut(&[u32]),
) {
    if len == 0 {
        if sum == 0 {
            emit(tail);
        }
        return;
    }
    if len == 1 {
        // Last entry forced.
        let v = sum;
        let allowed = match bound {
            Some(b) if !tail_lt(b, tail) => v <= b[tail.len()],
            _ => true,
        };
        if allowed {
            tail.push(v);
            emit(tail);
            tail.pop();
        }
        return;
    }
    let cap = match bound {
        Some(b) if !tail_lt(b, tail) => sum.min(b[tail.len()]),
        _ => sum,
    };
    let mut v = cap;
    loop {
        tail.push(v);
        extend_tail(len - 1, sum - v, bound, tail, emit);
        tail.pop();
        if v == 0 {
            break;
        }
        v -= 1;
    }
}

/// True iff the tail built so far is already strictly below the bound.
fn tail_lt(bound: &[u32], tail: &[u32]) -> bool {
    bound[..tail.len()] > *tail
}

fn columns_graphical(rows: &[Vec<u32>], k: usize) -> bool {
    for c in 0..k {
        let col: Vec<u32> = rows.iter().map(|r| r[c]).collect();
        if !is_graphical(&DegreeSequence::from_unsorted(col)) {
            return false;
        }
    }
    true
}

/// One sequence per line, space separated.
pub fn write_sequences(seqs: &[DegreeSequence]) -> String {
    let mut out = String::new();
    for s in seqs {
        let row: Vec<String> = s.values().iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_sequences(text: &str) -> Result<Vec<DegreeSequence>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let values: Result<Vec<u32>> = line
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("bad degree {:?}", t),
                })
            })
            .collect();
        out.push(DegreeSequence::new(values?).map_err(|_| Error::Parse {
            line: idx + 1,
            msg: "sequence not non-increasing".into(),
        })?);
    }
    Ok(out)
}

/// Matrices as `n k` header plus `n` rows each, blank-line separated.
pub fn write_matrices(mats: &[DegreeMatrix]) -> String {
    let mut out = String::new();
    for (idx, m) in mats.iter().enumerate() {
        if idx > 0 {
            out.push('\n');
        }
        out.push_str(&format!("{} {}\n", m.vertex_count(), m.color_count()));
        for v in 1..=m.vertex_count() {
            let row: Vec<String> = m.row(v).iter().map(|x| x.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn parse_matrices(text: &str) -> Result<Vec<DegreeMatrix>> {
    let mut out = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some(&(idx, line)) = lines.peek() {
        if line.trim().is_empty() {
            lines.next();
            continue;
        }
        let mut header = line.split_whitespace();
        let n: usize = parse_num(header.next(), idx + 1)?;
        let k: usize = parse_num(header.next(), idx + 1)?;
        lines.next();
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(n);
        for _ in 0..n {
            let (ridx, row_line) = lines.next().ok_or(Error::Parse {
                line: idx + 1,
                msg: format!("expected {} matrix rows", n),
            })?;
            let row: Result<Vec<u32>> = row_line
                .split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| Error::Parse {
                        line: ridx + 1,
                        msg: format!("bad entry {:?}", t),
                    })
                })
                .collect();
            let row = row?;
            if row.len() != k {
                return Err(Error::Parse {
                    line: ridx + 1,
                    msg: format!("expected {} entries, found {}", k, row.len()),
                });
            }
            rows.push(row);
        }
        out.push(DegreeMatrix::from_rows(&rows).expect("validated shape"));
    }
    Ok(out)
}

fn parse_num(tok: Option<&str>, line: usize) -> Result<usize> {
    tok.ok_or(Error::Parse {
        line,
        msg: "missing header field".into(),
    })?
    .parse()
    .map_err(|_| Error::Parse {
        line,
        msg: "bad header field".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(values: &[u32]) -> DegreeSequence {
        DegreeSequence::new(values.to_vec()).unwrap()
    }

    #[test]
    fn graphical_basics() {
        assert!(is_graphical(&seq(&[0, 0, 0])));
        assert!(is_graphical(&seq(&[3, 1, 1, 1])));
        assert!(!is_graphical(&seq(&[3, 3, 1, 1])));
        assert!(!is_graphical(&seq(&[1])));
        assert!(is_graphical(&seq(&[2, 2, 2])));
        assert!(DegreeSequence::new(vec![1, 2]).is_err());
    }

    #[test]
    fn sequences_for_n3_full_range() {
        let seqs = enum_degree_sequences(3, 0, 2).unwrap();
        let expect = vec![seq(&[2, 2, 2]), seq(&[2, 1, 1]), seq(&[1, 1, 0]), seq(&[0, 0, 0])];
        assert_eq!(seqs, expect);
    }

    #[test]
    fn sequence_order_is_descending_lex() {
        let seqs = enum_degree_sequences(4, 0, 3).unwrap();
        for w in seqs.windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn bad_bounds_rejected() {
        assert!(enum_degree_sequences(2, 5, 1).is_err());
        assert!(enum_degree_sequences(3, 0, 4).is_err());
    }

    #[test]
    fn lex_canonical_dm_is_idempotent_and_orbit_constant() {
        let m = DegreeMatrix::from_rows(&[vec![2, 0], vec![1, 1], vec![1, 1]]).unwrap();
        let canon = lex_canonical_dm(&m);
        assert_eq!(lex_canonical_dm(&canon), canon);
        // Swapping rows or columns must not change the canonical form.
        let swapped_rows = DegreeMatrix::from_rows(&[vec![1, 1], vec![2, 0], vec![1, 1]]).unwrap();
        let swapped_cols = DegreeMatrix::from_rows(&[vec![0, 2], vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(lex_canonical_dm(&swapped_rows), canon);
        assert_eq!(lex_canonical_dm(&swapped_cols), canon);
        assert!(dm_equivalent(&m, &swapped_cols));
    }

    #[test]
    fn dm_equivalence_distinguishes() {
        let a = DegreeMatrix::from_rows(&vec![vec![5, 5, 5]; 16]).unwrap();
        let b = DegreeMatrix::from_rows(&vec![vec![4, 4, 4]; 16]).unwrap();
        assert!(!dm_equivalent(&a, &b));
        assert!(dm_equivalent(&a, &a));
    }

    #[test]
    fn matrix_enumeration_small() {
        // n=3, k=2, row_total=2: the only feasible degree matrices of
        // 2-colorings of K3, left column among graphical 3-sequences.
        let left: Vec<DegreeSequence> = enum_degree_sequences(3, 0, 2).unwrap();
        let mats = enum_degree_matrices(3, 2, 2, &left).unwrap();
        for m in &mats {
            assert!(m.rows_sum_to(2));
            assert_eq!(lex_canonical_dm(m), *m);
            for c in 1..=2 {
                let col = DegreeSequence::from_unsorted(m.column(c));
                assert!(is_graphical(&col));
            }
        }
    }

    #[test]
    fn all_five_matrix_is_found() {
        let left = vec![seq(&[5; 16])];
        let mats = enum_degree_matrices(16, 3, 15, &left).unwrap();
        let all5 = DegreeMatrix::from_rows(&vec![vec![5, 5, 5]; 16]).unwrap();
        assert!(mats.contains(&all5));
    }

    #[test]
    fn sequence_file_roundtrip() {
        let seqs = enum_degree_sequences(4, 1, 3).unwrap();
        let text = write_sequences(&seqs);
        assert_eq!(parse_sequences(&text).unwrap(), seqs);
    }

    #[test]
    fn matrix_file_roundtrip() {
        let left = enum_degree_sequences(3, 0, 2).unwrap();
        let mats = enum_degree_matrices(3, 2, 2, &left).unwrap();
        let text = write_matrices(&mats);
        assert_eq!(parse_matrices(&text).unwrap(), mats);
    }
}
