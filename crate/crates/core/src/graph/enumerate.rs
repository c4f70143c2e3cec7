//! Brute-force enumeration of all complete-graph colorings.
//!
//! This is the reference oracle the SAT pipeline is tested against. It walks
//! the upper-triangle cells in row-major order as a base-`k` counter, so the
//! output order is deterministic and lexicographically ascending.

use super::ColoredGraph;
use crate::{Error, Result};

/// Iterator over every `k`-coloring of `K_n`, in row-major base-`k` order.
pub struct AllColorings {
    n: usize,
    k: u8,
    digits: Vec<u8>,
    done: bool,
    started: bool,
}

impl Iterator for AllColorings {
    type Item = ColoredGraph;

    fn next(&mut self) -> Option<ColoredGraph> {
        if self.done {
            return None;
        }
        if self.started {
            // Increment the counter, least-significant (rightmost) cell first.
            let mut pos = self.digits.len();
            loop {
                if pos == 0 {
                    self.done = true;
                    return None;
                }
                pos -= 1;
                if self.digits[pos] < self.k {
                    self.digits[pos] += 1;
                    break;
                }
                self.digits[pos] = 1;
            }
        } else {
            self.started = true;
        }
        Some(ColoredGraph::from_upper(self.n, self.k as usize, &self.digits).expect("counter stays in range"))
    }
}

/// Streams every coloring of `K_n` in `k` colors satisfying `predicate`.
///
/// Refuses up front when the search space `k^(n(n-1)/2)` exceeds `budget`.
pub fn enumerate_all_colorings<F>(
    n: usize,
    k: usize,
    budget: u64,
    predicate: F,
) -> Result<impl Iterator<Item = ColoredGraph>>
where
    F: Fn(&ColoredGraph) -> bool,
{
    if n == 0 || k == 0 || k > u8::MAX as usize {
        return Err(Error::invalid("enumeration", "n and k must be at least 1 (k < 256)"));
    }
    let cells = (n * (n - 1) / 2) as u32;
    let space = (k as u64).checked_pow(cells);
    match space {
        Some(s) if s <= budget => {}
        _ => {
            return Err(Error::BudgetExceeded(format!(
                "{}^{} colorings exceed budget {}",
                k, cells, budget
            )))
        }
    }
    let iter = AllColorings {
        n,
        k: k as u8,
        digits: vec![1u8; cells as usize],
        done: false,
        started: false,
    };
    Ok(iter.filter(move |g| predicate(g)))
}
