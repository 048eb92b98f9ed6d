//! Depth-first searches for third columns of reduced DCA(4, n+1; n) and for
//! small cyclic HDM(4, n; h).
//!
//! Rows are filled in order and candidate values are tried in ascending
//! order, so results are reproducible. A node is one accepted placement; the
//! node budget bounds the number of placements.
//!
//! For the third column `c`, with fixed columns `x` and `y`, the differences
//! `c - x` and `c - y` each have capacity 0 at 0, 2 at `n/2` and 1 elsewhere.
//! `n` placements fill those capacities exactly, so every leaf is a solution.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::array::{ArrayKind, Form, ResidueArray};
use crate::construct::odd_even_column;
use crate::residue::sub_mod;
use crate::verify::{verify_dca, verify_hdm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("node budget of {0} exhausted before any solution")]
    BudgetExhausted(u64),
    #[error("fixed columns are infeasible: {0}")]
    InfeasibleFixedColumns(String),
    #[error("exhaustive enumeration is limited to order 12, got {0}")]
    OrderTooLarge(u32),
    #[error("search space exhausted without a solution")]
    NoSolution,
    #[error("bad configuration: {0}")]
    BadConfig(String),
}

/// Progress snapshot, emitted every `progress_every` nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Progress {
    pub nodes: u64,
    pub depth: usize,
    pub solutions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub order: u32,
    pub col0: Vec<u32>,
    pub col1: Vec<u32>,
    pub node_budget: u64,
    pub result_limit: usize,
    /// Forced leading values of the searched column.
    pub prefix: Vec<u32>,
    /// Check difference capacities on every placement (off: only at leaves).
    pub prune: bool,
    /// Explore the subtrees under the first free row in parallel.
    pub parallel: bool,
    pub progress_every: Option<u64>,
}

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

impl SearchConfig {
    /// Identity and odd-then-even fixed columns, unlimited results.
    pub fn new(order: u32) -> Self {
        Self {
            order,
            col0: (0..order).collect(),
            col1: odd_even_column(order),
            node_budget: DEFAULT_NODE_BUDGET,
            result_limit: usize::MAX,
            prefix: Vec::new(),
            prune: true,
            parallel: false,
            progress_every: None,
        }
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.result_limit = limit;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.node_budget = budget;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub solutions: Vec<Vec<u32>>,
    pub nodes: u64,
    /// The whole space was explored.
    pub complete: bool,
    pub budget_exhausted: bool,
}

impl SearchOutcome {
    /// The reduced array for solution `idx`.
    pub fn array(&self, cfg: &SearchConfig, idx: usize) -> ResidueArray {
        assemble(cfg, &self.solutions[idx])
    }
}

fn assemble(cfg: &SearchConfig, c: &[u32]) -> ResidueArray {
    ResidueArray::from_columns(
        ArrayKind::Dca,
        Form::Reduced,
        cfg.order,
        0,
        4,
        &[cfg.col0.clone(), cfg.col1.clone(), c.to_vec()],
    )
    .expect("search columns have the configured order")
}

fn capacity(d: u32, n: u32) -> u8 {
    match d {
        0 => 0,
        d if 2 * d == n => 2,
        _ => 1,
    }
}

fn is_permutation(col: &[u32], n: u32) -> bool {
    let mut seen = vec![false; n as usize];
    col.len() == n as usize
        && col
            .iter()
            .all(|&v| v < n && !std::mem::replace(&mut seen[v as usize], true))
}

/// `c - x` has capacity-exact counts.
fn profile_ok(c: &[u32], x: &[u32], n: u32) -> bool {
    let mut cnt = vec![0u8; n as usize];
    for (&a, &b) in c.iter().zip(x) {
        cnt[sub_mod(a, b, n) as usize] += 1;
    }
    (0..n).all(|d| cnt[d as usize] == capacity(d, n))
}

fn validate(cfg: &SearchConfig) -> Result<(), SearchError> {
    let n = cfg.order;
    if n < 2 || n % 2 != 0 {
        return Err(SearchError::BadConfig(format!("order {n} must be even and at least 2")));
    }
    if cfg.node_budget == 0 {
        return Err(SearchError::BadConfig("node budget must be at least 1".into()));
    }
    if cfg.prefix.len() > n as usize || cfg.prefix.iter().any(|&v| v >= n) {
        return Err(SearchError::BadConfig("prefix does not fit the order".into()));
    }
    for (name, col) in [("column 0", &cfg.col0), ("column 1", &cfg.col1)] {
        if !is_permutation(col, n) {
            return Err(SearchError::InfeasibleFixedColumns(format!(
                "{name} is not a permutation of Z_{n}"
            )));
        }
    }
    if !profile_ok(&cfg.col1, &cfg.col0, n) {
        return Err(SearchError::InfeasibleFixedColumns(format!(
            "column 1 - column 0 is not Z_{n} \\ {{0}} with {} doubled",
            n / 2
        )));
    }
    Ok(())
}

/// Depth-first state for one (sub)search.
struct Dfs<'a> {
    cfg: &'a SearchConfig,
    n: u32,
    col: Vec<u32>,
    used: Vec<bool>,
    cnt0: Vec<u8>,
    cnt1: Vec<u8>,
    nodes: u64,
    budget: u64,
    limit: usize,
    /// Solutions with the node count at which each was completed.
    found: Vec<(Vec<u32>, u64)>,
    stopped: bool,
    progress: Option<&'a (dyn Fn(&Progress) + Sync)>,
}

impl<'a> Dfs<'a> {
    fn new(
        cfg: &'a SearchConfig,
        budget: u64,
        limit: usize,
        progress: Option<&'a (dyn Fn(&Progress) + Sync)>,
    ) -> Self {
        let n = cfg.order as usize;
        Self {
            cfg,
            n: cfg.order,
            col: Vec::with_capacity(n),
            used: vec![false; n],
            cnt0: vec![0; n],
            cnt1: vec![0; n],
            nodes: 0,
            budget,
            limit,
            found: Vec::new(),
            stopped: false,
            progress,
        }
    }

    fn candidates(&self, row: usize) -> std::ops::Range<u32> {
        match self.cfg.prefix.get(row) {
            Some(&v) => v..v + 1,
            None => 0..self.n,
        }
    }

    fn fits(&self, row: usize, v: u32) -> bool {
        if self.used[v as usize] {
            return false;
        }
        if !self.cfg.prune {
            return true;
        }
        let d0 = sub_mod(v, self.cfg.col0[row], self.n);
        let d1 = sub_mod(v, self.cfg.col1[row], self.n);
        self.cnt0[d0 as usize] < capacity(d0, self.n) && self.cnt1[d1 as usize] < capacity(d1, self.n)
    }

    fn place(&mut self, row: usize, v: u32, delta: i8) {
        let d0 = sub_mod(v, self.cfg.col0[row], self.n) as usize;
        let d1 = sub_mod(v, self.cfg.col1[row], self.n) as usize;
        self.used[v as usize] = delta > 0;
        self.cnt0[d0] = self.cnt0[d0].wrapping_add_signed(delta);
        self.cnt1[d1] = self.cnt1[d1].wrapping_add_signed(delta);
        if delta > 0 {
            self.col.push(v);
        } else {
            self.col.pop();
        }
    }

    /// Tries `v` at the next row; returns false once the search must stop.
    fn step(&mut self, v: u32) -> bool {
        let row = self.col.len();
        if !self.fits(row, v) {
            return true;
        }
        if self.nodes == self.budget {
            self.stopped = true;
            return false;
        }
        self.nodes += 1;
        if let (Some(every), Some(report)) = (self.cfg.progress_every, self.progress) {
            if self.nodes % every == 0 {
                report(&Progress { nodes: self.nodes, depth: row + 1, solutions: self.found.len() });
            }
        }
        self.place(row, v, 1);
        let go_on = self.descend();
        self.place(row, v, -1);
        go_on
    }

    fn descend(&mut self) -> bool {
        let row = self.col.len();
        if row == self.n as usize {
            let ok = self.cfg.prune
                || (profile_ok(&self.col, &self.cfg.col0, self.n)
                    && profile_ok(&self.col, &self.cfg.col1, self.n));
            if ok {
                self.found.push((self.col.clone(), self.nodes));
                if self.found.len() >= self.limit {
                    return false;
                }
            }
            return true;
        }
        for v in self.candidates(row) {
            if !self.step(v) {
                return false;
            }
        }
        true
    }
}

fn finish(
    cfg: &SearchConfig,
    found: Vec<(Vec<u32>, u64)>,
    nodes: u64,
    stopped: bool,
) -> Result<SearchOutcome, SearchError> {
    let solutions: Vec<Vec<u32>> = found.into_iter().map(|(c, _)| c).collect();
    if stopped && solutions.is_empty() {
        return Err(SearchError::BudgetExhausted(cfg.node_budget));
    }
    for c in &solutions {
        // Never self-certify: every result goes through the verifier.
        let r = verify_dca(&assemble(cfg, c), true).expect("even order");
        assert!(r.passed(), "search produced an invalid column: {}", r.to_text());
    }
    let complete = !stopped && solutions.len() < cfg.result_limit;
    Ok(SearchOutcome { solutions, nodes, complete, budget_exhausted: stopped })
}

pub fn search_third_column(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    search_third_column_with_progress(cfg, &|_| {})
}

/// As [`search_third_column`], reporting progress through `report`.
///
/// In parallel mode each subtree under the first free row is searched on its
/// own with the full budget; the subtrees are then merged in candidate order,
/// charging nodes exactly as the serial search would, and a subtree that would
/// have hit the budget is cut at the same point. Results are identical to the
/// serial search.
pub fn search_third_column_with_progress(
    cfg: &SearchConfig,
    report: &(dyn Fn(&Progress) + Sync),
) -> Result<SearchOutcome, SearchError> {
    validate(cfg)?;
    if !cfg.parallel || cfg.prefix.len() >= cfg.order as usize {
        let mut dfs = Dfs::new(cfg, cfg.node_budget, cfg.result_limit, Some(report));
        dfs.descend();
        return finish(cfg, dfs.found, dfs.nodes, dfs.stopped);
    }

    // Walk the forced prefix serially, then branch on the next row.
    let split = cfg.prefix.len();
    let mut base = Dfs::new(cfg, cfg.node_budget, cfg.result_limit, None);
    for &v in &cfg.prefix {
        if !base.fits(base.col.len(), v) {
            return finish(cfg, Vec::new(), base.nodes, false);
        }
        if base.nodes == base.budget {
            return finish(cfg, Vec::new(), base.nodes, true);
        }
        base.nodes += 1;
        base.place(base.col.len(), v, 1);
    }
    let branch_values: Vec<u32> = (0..cfg.order).filter(|&v| base.fits(split, v)).collect();
    let start = base.nodes;
    let branches: Vec<(Vec<(Vec<u32>, u64)>, u64, bool)> = branch_values
        .par_iter()
        .map(|&v| {
            let mut sub = Dfs::new(cfg, cfg.node_budget - start, cfg.result_limit, Some(report));
            for (row, &p) in cfg.prefix.iter().enumerate() {
                sub.place(row, p, 1);
            }
            sub.step(v);
            (sub.found, sub.nodes, sub.stopped)
        })
        .collect();

    let mut found = Vec::new();
    let mut used = start;
    for (sols, nodes, sub_stopped) in branches {
        let remaining = cfg.node_budget - used;
        for (c, at) in sols {
            if at > remaining || found.len() >= cfg.result_limit {
                break;
            }
            found.push((c, used + at));
        }
        if found.len() >= cfg.result_limit {
            let last = found.last().map(|f| f.1).unwrap_or(used);
            return finish(cfg, found, last, false);
        }
        if nodes > remaining || (nodes == remaining && sub_stopped) {
            return finish(cfg, found, cfg.node_budget, true);
        }
        used += nodes;
    }
    finish(cfg, found, used, false)
}

/// Every permutation of `Z_order` whose differences against the default
/// fixed columns have the P2 profile, in lexicographic order.
pub fn enumerate_third_columns(order: u32) -> Result<Vec<Vec<u32>>, SearchError> {
    if order > 12 {
        return Err(SearchError::OrderTooLarge(order));
    }
    let cfg = SearchConfig::new(order);
    validate(&cfg)?;
    let mut out = Vec::new();
    let mut perm: Vec<u32> = (0..order).collect();
    loop {
        if profile_ok(&perm, &cfg.col0, order) && profile_ok(&perm, &cfg.col1, order) {
            out.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(p: &mut [u32]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("a larger element exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HdmSearchConfig {
    pub node_budget: u64,
    pub progress_every: Option<u64>,
    /// First search only arrays closed under negation (see
    /// [`hdm_multiplier`]), then fall back to the unrestricted search.
    pub use_multiplier: bool,
}

impl Default for HdmSearchConfig {
    fn default() -> Self {
        Self { node_budget: DEFAULT_NODE_BUDGET, progress_every: None, use_multiplier: true }
    }
}

/// Orbit multipliers `[1, -1]` when negation fixes nothing outside the hole
/// (`h` even, so `n/2` lies in `H`).
pub fn hdm_multiplier(n: u32, h: u32) -> Option<Vec<u32>> {
    (h % 2 == 0 && n > 2).then(|| vec![1, n - 1])
}

/// Cyclic HDM(4, n; h) with hole `{0, u, 2u, ...}`, `u = n/h`.
///
/// The last column is zero and column 0 lists `G \ H` in ascending order;
/// rows are filled with pairs `(b, c)` in lexicographic order so that
/// `b`, `c`, `b - a`, `c - a` and `c - b` each run through `G \ H` once.
/// With the multiplier enabled, a row `(a, b, c)` is placed together with
/// `(-a, -b, -c)`, which halves the number of free rows; if that restricted
/// space has no solution the plain search runs with the remaining budget.
pub fn search_hdm(n: u32, h: u32, cfg: &HdmSearchConfig) -> Result<ResidueArray, SearchError> {
    search_hdm_with_progress(n, h, cfg, &|_| {})
}

pub fn search_hdm_with_progress(
    n: u32,
    h: u32,
    cfg: &HdmSearchConfig,
    report: &dyn Fn(&Progress),
) -> Result<ResidueArray, SearchError> {
    if h == 0 || h >= n || n % h != 0 {
        return Err(SearchError::BadConfig(format!("hole {h} must properly divide n={n}")));
    }
    if cfg.node_budget == 0 {
        return Err(SearchError::BadConfig("node budget must be at least 1".into()));
    }
    let mut orbits = Vec::new();
    if cfg.use_multiplier {
        if let Some(p) = hdm_multiplier(n, h) {
            orbits.push(p);
        }
    }
    orbits.push(vec![1]);
    let mut spent = 0;
    for orbit in orbits {
        let mut st = HdmDfs::new(n, h, orbit, cfg.node_budget - spent, cfg.progress_every, report);
        if st.budget == 0 {
            return Err(SearchError::BudgetExhausted(cfg.node_budget));
        }
        if !st.descend() {
            let arr = st.array(h);
            let r = verify_hdm(&arr).expect("hole divides n");
            assert!(r.passed(), "HDM search produced an invalid array: {}", r.to_text());
            return Ok(arr);
        }
        if st.stopped {
            return Err(SearchError::BudgetExhausted(cfg.node_budget));
        }
        spent += st.nodes;
    }
    Err(SearchError::NoSolution)
}

struct HdmDfs<'a> {
    n: u32,
    u: u32,
    orbit: Vec<u32>,
    /// Orbit representatives of `G \ H`, ascending.
    reps: Vec<u32>,
    /// Chosen `(b, c)` per representative.
    chosen: Vec<(u32, u32)>,
    /// Used values of b, c, b-a, c-a, c-b.
    used: [Vec<bool>; 5],
    nodes: u64,
    budget: u64,
    stopped: bool,
    every: Option<u64>,
    report: &'a dyn Fn(&Progress),
}

impl<'a> HdmDfs<'a> {
    fn new(
        n: u32,
        h: u32,
        orbit: Vec<u32>,
        budget: u64,
        every: Option<u64>,
        report: &'a dyn Fn(&Progress),
    ) -> Self {
        let u = n / h;
        let mut seen = vec![false; n as usize];
        let mut reps = Vec::new();
        for a in (0..n).filter(|a| a % u != 0) {
            if !seen[a as usize] {
                reps.push(a);
                for &m in &orbit {
                    seen[(a as u64 * m as u64 % n as u64) as usize] = true;
                }
            }
        }
        Self {
            n,
            u,
            orbit,
            reps,
            chosen: Vec::new(),
            used: std::array::from_fn(|_| vec![false; n as usize]),
            nodes: 0,
            budget,
            stopped: false,
            every,
            report,
        }
    }

    fn times(&self, m: u32, v: u32) -> u32 {
        (m as u64 * v as u64 % self.n as u64) as u32
    }

    fn free(&self, slot: usize, v: u32) -> bool {
        v % self.u != 0 && self.orbit.iter().all(|&m| !self.used[slot][self.times(m, v) as usize])
    }

    fn mark(&mut self, vals: [u32; 5], on: bool) {
        for (slot, v) in vals.into_iter().enumerate() {
            for k in 0..self.orbit.len() {
                let t = self.times(self.orbit[k], v);
                self.used[slot][t as usize] = on;
            }
        }
    }

    /// Returns false when a solution is complete (stop), true to keep going.
    fn descend(&mut self) -> bool {
        let row = self.chosen.len();
        if row == self.reps.len() {
            return false;
        }
        let a = self.reps[row];
        let n = self.n;
        for b in 0..n {
            if !self.free(0, b) || !self.free(2, sub_mod(b, a, n)) {
                continue;
            }
            for c in 0..n {
                let vals = [b, c, sub_mod(b, a, n), sub_mod(c, a, n), sub_mod(c, b, n)];
                if !self.free(1, c) || !self.free(3, vals[3]) || !self.free(4, vals[4]) {
                    continue;
                }
                if self.nodes == self.budget {
                    self.stopped = true;
                    return true;
                }
                self.nodes += 1;
                if let Some(every) = self.every {
                    if self.nodes % every == 0 {
                        (self.report)(&Progress { nodes: self.nodes, depth: row + 1, solutions: 0 });
                    }
                }
                self.mark(vals, true);
                self.chosen.push((b, c));
                if !self.descend() {
                    return false;
                }
                if self.stopped {
                    return true;
                }
                self.chosen.pop();
                self.mark(vals, false);
            }
        }
        true
    }

    fn array(&self, h: u32) -> ResidueArray {
        let n = self.n as usize;
        let mut bc = vec![(0, 0); n];
        for (&a, &(b, c)) in self.reps.iter().zip(&self.chosen) {
            for &m in &self.orbit {
                bc[self.times(m, a) as usize] = (self.times(m, b), self.times(m, c));
            }
        }
        let mut entries = Vec::new();
        for a in (0..self.n).filter(|a| a % self.u != 0) {
            let (b, c) = bc[a as usize];
            entries.extend([a, b, c, 0]);
        }
        ResidueArray::new(ArrayKind::Hdm, Form::Full, self.n, h, 4, entries)
            .expect("rows cover G minus H")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_six_matches_enumeration() {
        let all = enumerate_third_columns(6).unwrap();
        assert!(all.contains(&vec![3, 0, 4, 1, 5, 2]));
        let out = search_third_column(&SearchConfig::new(6)).unwrap();
        assert!(out.complete);
        assert_eq!(out.solutions, all);
        assert_eq!(enumerate_third_columns(14), Err(SearchError::OrderTooLarge(14)));
    }

    #[test]
    fn budget_one_is_exhausted() {
        let cfg = SearchConfig::new(6).with_budget(1);
        assert_eq!(search_third_column(&cfg), Err(SearchError::BudgetExhausted(1)));
    }

    #[test]
    fn infeasible_fixed_columns() {
        let mut cfg = SearchConfig::new(6);
        cfg.col1 = (0..6).collect();
        assert!(matches!(search_third_column(&cfg), Err(SearchError::InfeasibleFixedColumns(_))));
        cfg.col1 = vec![0; 6];
        assert!(matches!(search_third_column(&cfg), Err(SearchError::InfeasibleFixedColumns(_))));
    }

    #[test]
    fn pruning_is_sound() {
        for n in [4, 6, 8] {
            let pruned = search_third_column(&SearchConfig::new(n)).unwrap();
            let mut cfg = SearchConfig::new(n);
            cfg.prune = false;
            let plain = search_third_column(&cfg).unwrap();
            assert_eq!(pruned.solutions, plain.solutions, "n={n}");
            assert!(pruned.nodes <= plain.nodes);
        }
    }

    #[test]
    fn parallel_matches_serial() {
        for (n, limit, budget) in [(6, usize::MAX, 10_000), (8, 3, 10_000), (8, usize::MAX, 40), (10, 5, 500)] {
            let mut cfg = SearchConfig::new(n).with_limit(limit).with_budget(budget);
            let serial = search_third_column(&cfg);
            cfg.parallel = true;
            assert_eq!(search_third_column(&cfg), serial, "n={n} limit={limit} budget={budget}");
        }
    }

    #[test]
    fn prefix_restricts() {
        let mut cfg = SearchConfig::new(6);
        cfg.prefix = vec![3, 0];
        let out = search_third_column(&cfg).unwrap();
        assert!(out.solutions.iter().all(|c| c[..2] == [3, 0]));
        assert!(out.solutions.contains(&vec![3, 0, 4, 1, 5, 2]));
    }

    #[test]
    fn progress_is_reported() {
        use std::sync::atomic::{AtomicU64, Ordering};
        let seen = AtomicU64::new(0);
        let mut cfg = SearchConfig::new(8);
        cfg.progress_every = Some(5);
        let out = search_third_column_with_progress(&cfg, &|p| {
            seen.store(p.nodes, Ordering::Relaxed);
        })
        .unwrap();
        let last = seen.load(Ordering::Relaxed);
        assert!(last > 0 && last <= out.nodes && last % 5 == 0);
    }

    #[test]
    fn hdm_10_2() {
        let a = search_hdm(10, 2, &HdmSearchConfig::default()).unwrap();
        assert_eq!((a.order(), a.hole(), a.rows()), (10, 2, 8));
        assert_eq!(search_hdm(10, 2, &HdmSearchConfig::default()).unwrap(), a);
    }

    #[test]
    fn hdm_10_5_has_no_solution() {
        assert_eq!(search_hdm(10, 5, &HdmSearchConfig::default()), Err(SearchError::NoSolution));
        assert!(matches!(search_hdm(10, 3, &HdmSearchConfig::default()), Err(SearchError::BadConfig(_))));
    }

    #[test]
    fn hdm_budget() {
        let cfg = HdmSearchConfig { node_budget: 1, ..HdmSearchConfig::default() };
        assert_eq!(search_hdm(10, 2, &cfg), Err(SearchError::BudgetExhausted(1)));
    }
}
