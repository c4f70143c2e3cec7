//! Embedded CDCL SAT solver.
//!
//! A fairly standard implementation: two watched literals, first-UIP
//! conflict analysis with recursive clause minimization, VSIDS branching
//! with phase saving, Luby restarts, and activity-based learnt-clause
//! deletion. Clause literals live in one flat arena to keep propagation
//! cache-friendly. There is no randomness anywhere and heap ties break
//! toward the lowest variable id, so runs are reproducible.
//!
//! Clauses may be added between `solve` calls (blocking clauses for model
//! enumeration); the solver keeps its learnt clauses and activities.

use std::time::{Duration, Instant};

const RESTART_INTERVAL: u64 = 100;
const VAR_DECAY: f64 = 0.95;
const CLA_DECAY: f32 = 0.999;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Lit(u32);

impl Lit {
    fn new(var: usize, positive: bool) -> Lit {
        Lit((var as u32) << 1 | (!positive) as u32)
    }
    fn from_dimacs(l: i32) -> Lit {
        debug_assert!(l != 0);
        Lit::new(l.unsigned_abs() as usize - 1, l > 0)
    }
    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }
    fn positive(self) -> bool {
        self.0 & 1 == 0
    }
    fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }
    fn code(self) -> usize {
        self.0 as usize
    }
}

/// Clause metadata; literals sit in the shared arena at `start..start+len`.
#[derive(Clone, Copy)]
struct Header {
    start: u32,
    len: u32,
    activity: f32,
    /// Distinct decision levels in the clause when learnt; 0 for problem
    /// clauses. Low-LBD ("glue") clauses survive database reduction.
    lbd: u32,
    learnt: bool,
}

#[derive(Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

/// Resource limits for one `solve` call. `conflicts` bounds this call's
/// conflict count; `wall` is checked periodically.
#[derive(Clone, Debug, Default)]
pub struct SolverBudget {
    pub conflicts: Option<u64>,
    pub wall: Option<Duration>,
}

impl SolverBudget {
    pub fn unlimited() -> Self {
        SolverBudget::default()
    }

    pub fn conflicts(n: u64) -> Self {
        SolverBudget {
            conflicts: Some(n),
            wall: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverResult {
    Sat,
    Unsat,
    BudgetExceeded,
}

pub struct Solver {
    arena: Vec<Lit>,
    headers: Vec<Header>,
    learnts: Vec<u32>,
    watches: Vec<Vec<Watcher>>,
    /// 0 undef, 1 true, -1 false, indexed by variable.
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f32,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    max_learnts: f64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
}

impl Solver {
    pub fn new(num_vars: usize) -> Self {
        let mut s = Solver {
            arena: Vec::new(),
            headers: Vec::new(),
            learnts: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::new(),
            phase: Vec::new(),
            seen: Vec::new(),
            ok: true,
            max_learnts: 8000.0,
            conflicts: 0,
            decisions: 0,
            propagations: 0,
        };
        s.ensure_vars(num_vars);
        s
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    pub fn ensure_vars(&mut self, n: usize) {
        while self.assigns.len() < n {
            let v = self.assigns.len();
            self.assigns.push(0);
            self.level.push(0);
            self.reason.push(None);
            self.activity.push(0.0);
            self.phase.push(false);
            self.seen.push(false);
            self.watches.push(Vec::new());
            self.watches.push(Vec::new());
            self.heap.insert(v, &self.activity);
        }
    }

    #[inline]
    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.assigns[l.var()];
        if l.positive() {
            v
        } else {
            -v
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a clause in DIMACS literal convention. Returns false when the
    /// solver becomes permanently unsatisfiable.
    pub fn add_clause(&mut self, dimacs_lits: &[i32]) -> bool {
        if !self.ok {
            return false;
        }
        self.cancel_until(0);
        let max_var = dimacs_lits.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0);
        self.ensure_vars(max_var);

        let mut lits: Vec<Lit> = dimacs_lits.iter().map(|&l| Lit::from_dimacs(l)).collect();
        lits.sort_by_key(|l| l.0);
        lits.dedup();
        let mut filtered = Vec::with_capacity(lits.len());
        for (idx, &l) in lits.iter().enumerate() {
            if idx + 1 < lits.len() && lits[idx + 1] == l.negate() {
                return true; // tautology
            }
            match self.lit_value(l) {
                1 => return true, // satisfied at level 0
                -1 => continue,   // false at level 0, drop
                _ => filtered.push(l),
            }
        }
        match filtered.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(filtered[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                self.attach(&filtered, false, 0);
                true
            }
        }
    }

    fn attach(&mut self, lits: &[Lit], learnt: bool, lbd: u32) -> u32 {
        debug_assert!(lits.len() >= 2);
        let cref = self.headers.len() as u32;
        self.watches[lits[0].negate().code()].push(Watcher {
            cref,
            blocker: lits[1],
        });
        self.watches[lits[1].negate().code()].push(Watcher {
            cref,
            blocker: lits[0],
        });
        self.headers.push(Header {
            start: self.arena.len() as u32,
            len: lits.len() as u32,
            activity: 0.0,
            lbd,
            learnt,
        });
        self.arena.extend_from_slice(lits);
        if learnt {
            self.learnts.push(cref);
        }
        cref
    }

    fn enqueue(&mut self, l: Lit, reason: Option<u32>) {
        debug_assert_eq!(self.lit_value(l), 0);
        let v = l.var();
        self.assigns[v] = if l.positive() { 1 } else { -1 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.propagations += 1;
            let false_lit = p.negate();
            // `p` became true, so clauses watching `!p` must be visited.
            let mut ws = std::mem::take(&mut self.watches[false_lit.negate().code()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            'watchers: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.lit_value(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let h = self.headers[w.cref as usize];
                let range = h.start as usize..(h.start + h.len) as usize;
                let first = {
                    let lits = &mut self.arena[range.clone()];
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                    lits[0]
                };
                if first != w.blocker && self.lit_value(first) == 1 {
                    ws[j] = Watcher {
                        cref: w.cref,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                // Look for a new literal to watch.
                {
                    let assigns = &self.assigns;
                    let lits = &mut self.arena[range];
                    for idx in 2..lits.len() {
                        let l = lits[idx];
                        let val = if l.positive() {
                            assigns[l.var()]
                        } else {
                            -assigns[l.var()]
                        };
                        if val != -1 {
                            lits.swap(1, idx);
                            self.watches[lits[1].negate().code()].push(Watcher {
                                cref: w.cref,
                                blocker: first,
                            });
                            continue 'watchers;
                        }
                    }
                }
                // No new watch: clause is unit or conflicting.
                ws[j] = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                j += 1;
                if self.lit_value(first) == -1 {
                    // Conflict: keep remaining watchers, stop propagation.
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                    self.qhead = self.trail.len();
                    conflict = Some(w.cref);
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.negate().code()] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn cancel_until(&mut self, target: u32) {
        if self.decision_level() <= target {
            return;
        }
        let bound = self.trail_lim[target as usize];
        for idx in (bound..self.trail.len()).rev() {
            let l = self.trail[idx];
            let v = l.var();
            self.phase[v] = l.positive();
            self.assigns[v] = 0;
            self.reason[v] = None;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(bound);
        self.trail_lim.truncate(target as usize);
        self.qhead = bound;
    }

    fn var_bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.update(v, &self.activity);
    }

    fn cla_bump(&mut self, cref: u32) {
        let h = &mut self.headers[cref as usize];
        h.activity += self.cla_inc;
        if h.activity > 1e20 {
            for &lr in &self.learnts {
                self.headers[lr as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis; returns the learnt clause (asserting
    /// literal first) and the backtrack level.
    fn analyze(&mut self, conflict: u32) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![Lit(0)]; // slot 0 for the asserting literal
        let mut path_count = 0u32;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let mut confl = conflict;
        let current_level = self.decision_level();

        loop {
            if self.headers[confl as usize].learnt {
                self.cla_bump(confl);
            }
            let h = self.headers[confl as usize];
            let skip = if p.is_none() { 0 } else { 1 };
            for idx in skip..h.len as usize {
                let q = self.arena[h.start as usize + idx];
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.var_bump(v);
                    self.seen[v] = true;
                    if self.level[v] >= current_level {
                        path_count += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var()] {
                    break;
                }
            }
            let pl = self.trail[index];
            self.seen[pl.var()] = false;
            path_count -= 1;
            if path_count == 0 {
                learnt[0] = pl.negate();
                break;
            }
            p = Some(pl);
            confl = self.reason[pl.var()].expect("non-decision literal on conflict path");
        }

        // Minimize: drop literals implied by the rest of the clause.
        let mut to_clear: Vec<usize> = learnt[1..].iter().map(|l| l.var()).collect();
        let abstract_levels = learnt[1..]
            .iter()
            .fold(0u32, |acc, l| acc | (1 << (self.level[l.var()] & 31)));
        let keep: Vec<Lit> = learnt[1..]
            .iter()
            .filter(|&&l| self.reason[l.var()].is_none() || !self.lit_redundant(l, abstract_levels, &mut to_clear))
            .copied()
            .collect();
        learnt.truncate(1);
        learnt.extend(keep);
        for v in to_clear {
            self.seen[v] = false;
        }

        // Find the backtrack level and move one of its literals to slot 1.
        if learnt.len() == 1 {
            (learnt, 0)
        } else {
            let mut max_idx = 1;
            for idx in 2..learnt.len() {
                if self.level[learnt[idx].var()] > self.level[learnt[max_idx].var()] {
                    max_idx = idx;
                }
            }
            learnt.swap(1, max_idx);
            let bt = self.level[learnt[1].var()];
            (learnt, bt)
        }
    }

    /// True when `p` is implied by seen literals: every path from `p`
    /// through reasons ends in seen or level-0 literals.
    fn lit_redundant(&mut self, p: Lit, abstract_levels: u32, to_clear: &mut Vec<usize>) -> bool {
        let mut stack = vec![p];
        let top = to_clear.len();
        while let Some(q) = stack.pop() {
            let cref = self.reason[q.var()].expect("checked by caller or pushed with reason");
            let h = self.headers[cref as usize];
            for idx in 1..h.len as usize {
                let l = self.arena[h.start as usize + idx];
                let v = l.var();
                if self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                if self.reason[v].is_some() && (1u32 << (self.level[v] & 31)) & abstract_levels != 0 {
                    self.seen[v] = true;
                    stack.push(l);
                    to_clear.push(v);
                } else {
                    for &u in &to_clear[top..] {
                        self.seen[u] = false;
                    }
                    to_clear.truncate(top);
                    return false;
                }
            }
        }
        true
    }

    /// Number of distinct decision levels among the clause literals.
    fn clause_lbd(&mut self, lits: &[Lit]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|l| self.level[l.var()]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    fn pick_branch(&mut self) -> Option<usize> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v] == 0 {
                return Some(v);
            }
        }
        None
    }

    fn reduce_db(&mut self) {
        // Drop the lower-activity half of the learnt clauses, keeping
        // binaries and clauses locked as reasons.
        let mut ranked: Vec<u32> = self
            .learnts
            .iter()
            .copied()
            .filter(|&cr| {
                let h = self.headers[cr as usize];
                h.len > 2 && h.lbd > 3 && !self.is_locked(cr)
            })
            .collect();
        ranked.sort_by(|&a, &b| {
            let ha = self.headers[a as usize];
            let hb = self.headers[b as usize];
            hb.lbd
                .cmp(&ha.lbd)
                .then(ha.activity.partial_cmp(&hb.activity).unwrap())
                .then(a.cmp(&b))
        });
        let drop_count = ranked.len() / 2;
        if drop_count == 0 {
            self.max_learnts *= 1.3;
            return;
        }
        let mut dropped = vec![false; self.headers.len()];
        for &cr in &ranked[..drop_count] {
            dropped[cr as usize] = true;
        }

        // Compact arena and headers, then remap references.
        let mut remap: Vec<Option<u32>> = vec![None; self.headers.len()];
        let old_headers = std::mem::take(&mut self.headers);
        let old_arena = std::mem::take(&mut self.arena);
        let mut next = 0u32;
        for (idx, h) in old_headers.iter().enumerate() {
            if dropped[idx] {
                continue;
            }
            remap[idx] = Some(next);
            next += 1;
            let start = self.arena.len() as u32;
            self.arena
                .extend_from_slice(&old_arena[h.start as usize..(h.start + h.len) as usize]);
            self.headers.push(Header { start, ..*h });
        }
        self.learnts = self
            .learnts
            .iter()
            .filter_map(|&cr| remap[cr as usize])
            .collect();
        for r in &mut self.reason {
            if let Some(cr) = *r {
                *r = remap[cr as usize];
            }
        }
        for w in &mut self.watches {
            w.clear();
        }
        for (idx, h) in self.headers.iter().enumerate() {
            let cref = idx as u32;
            let l0 = self.arena[h.start as usize];
            let l1 = self.arena[h.start as usize + 1];
            self.watches[l0.negate().code()].push(Watcher { cref, blocker: l1 });
            self.watches[l1.negate().code()].push(Watcher { cref, blocker: l0 });
        }
        self.max_learnts *= 1.3;
    }

    fn is_locked(&self, cref: u32) -> bool {
        let first = self.arena[self.headers[cref as usize].start as usize];
        self.reason[first.var()] == Some(cref) && self.lit_value(first) == 1
    }

    /// Runs the CDCL loop until SAT, UNSAT, or budget exhaustion.
    pub fn solve(&mut self, budget: &SolverBudget) -> SolverResult {
        if !self.ok {
            return SolverResult::Unsat;
        }
        self.cancel_until(0);
        let started = Instant::now();
        let conflict_limit = budget.conflicts.map(|c| self.conflicts.saturating_add(c));
        let mut restart_num = 0u64;
        let mut restart_conflicts = 0u64;
        let mut restart_limit = luby(restart_num) * RESTART_INTERVAL;
        // Trail-size statistics for blocked restarts: when the current
        // assignment is much deeper than average the solver is likely close
        // to a model, so the next restart is skipped.
        let mut trail_sum = 0u64;
        let mut trail_samples = 0u64;
        let mut restart_blocked = false;

        loop {
            if let Some(conflict) = self.propagate() {
                self.conflicts += 1;
                restart_conflicts += 1;
                trail_sum += self.trail.len() as u64;
                trail_samples += 1;
                if trail_samples >= 100
                    && (self.trail.len() as u64) * 10 > 14 * (trail_sum / trail_samples)
                {
                    restart_blocked = true;
                }
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SolverResult::Unsat;
                }
                let (learnt, bt) = self.analyze(conflict);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let lbd = self.clause_lbd(&learnt);
                    let cref = self.attach(&learnt, true, lbd);
                    self.cla_bump(cref);
                    self.enqueue(first, Some(cref));
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLA_DECAY;

                if let Some(limit) = conflict_limit {
                    if self.conflicts >= limit {
                        self.cancel_until(0);
                        return SolverResult::BudgetExceeded;
                    }
                }
                if self.conflicts % 512 == 0 {
                    if let Some(wall) = budget.wall {
                        if started.elapsed() >= wall {
                            self.cancel_until(0);
                            return SolverResult::BudgetExceeded;
                        }
                    }
                }
            } else {
                if restart_conflicts >= restart_limit {
                    restart_num += 1;
                    restart_conflicts = 0;
                    restart_limit = luby(restart_num) * RESTART_INTERVAL;
                    if restart_blocked {
                        restart_blocked = false;
                    } else {
                        self.cancel_until(0);
                        continue;
                    }
                }
                if self.learnts.len() as f64 >= self.max_learnts {
                    self.reduce_db();
                }
                match self.pick_branch() {
                    None => return SolverResult::Sat,
                    Some(v) => {
                        self.decisions += 1;
                        let phase = self.phase[v];
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(Lit::new(v, phase), None);
                    }
                }
            }
        }
    }

    /// Total assignment after a SAT answer; index `v - 1` for variable `v`.
    pub fn model(&self) -> Vec<bool> {
        self.assigns.iter().map(|&a| a == 1).collect()
    }
}

/// Luby restart sequence: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
fn luby(mut i: u64) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) / 2;
        seq -= 1;
        i %= size;
    }
    1u64 << seq
}

/// Binary max-heap over variables ordered by activity, ties broken toward
/// the lowest variable id for reproducibility.
struct VarHeap {
    heap: Vec<usize>,
    position: Vec<i32>,
}

impl VarHeap {
    fn new() -> Self {
        VarHeap {
            heap: Vec::new(),
            position: Vec::new(),
        }
    }

    fn before(a: usize, b: usize, act: &[f64]) -> bool {
        act[a] > act[b] || (act[a] == act[b] && a < b)
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.position.len() <= v {
            self.position.resize(v + 1, -1);
        }
        if self.position[v] >= 0 {
            return;
        }
        self.position[v] = self.heap.len() as i32;
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn update(&mut self, v: usize, act: &[f64]) {
        if v < self.position.len() && self.position[v] >= 0 {
            // Activity only grows, so sifting up suffices.
            self.sift_up(self.position[v] as usize, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        self.position[top] = -1;
        let last = self.heap.pop().unwrap();
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.position[last] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if Self::before(self.heap[i], self.heap[parent], act) {
                self.swap(i, parent);
                i = parent;
            } else {
                break;
            }
        }
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        loop {
            let left = 2 * i + 1;
            if left >= self.heap.len() {
                break;
            }
            let right = left + 1;
            let child = if right < self.heap.len() && Self::before(self.heap[right], self.heap[left], act) {
                right
            } else {
                left
            };
            if Self::before(self.heap[child], self.heap[i], act) {
                self.swap(i, child);
                i = child;
            } else {
                break;
            }
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.heap.swap(a, b);
        self.position[self.heap[a]] = a as i32;
        self.position[self.heap[b]] = b as i32;
    }
}
