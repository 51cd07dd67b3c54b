//! Exhaustive backtracking over permutations of a fixed length.
//!
//! Positions are filled left to right with values tried in ascending order,
//! so solutions come out in lexicographic order. A constraint is checked on
//! partial prefixes only where a violation in the prefix is final:
//!
//! * all-different, through the used-value set;
//! * avoidance of prefix-monotone patterns (classic, consecutive, and
//!   vincular/bivincular without an end anchor), checked incrementally for
//!   occurrences ending at the newest entry;
//! * derangement, parity and involution, checked entry by entry;
//! * statistic predicates, through interval bounds on each statistic over all
//!   completions of the prefix.
//!
//! Everything else (mesh and boxed patterns, containment, the remaining
//! properties) is evaluated on complete permutations only.
//!
//! Parallel runs split the tree into the feasible prefixes of length
//! `split_depth`, solve each subtree independently and concatenate results in
//! prefix order, so output never depends on scheduling.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::model::{Constraint, Model};
use crate::pattern::{Matcher, Mode};
use crate::perm::Permutation;
use crate::properties::{check_property, PropertyKind};
use crate::statistics::{evaluate_predicate, prefix_range, statistic, StatisticPredicate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid partial assignment: {0}")]
    InvalidAssignment(String),
    #[error("node budget of {budget} exceeded")]
    ResourceLimit { budget: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMode {
    Count,
    #[default]
    Enumerate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveConfig {
    pub workers: usize,
    pub split_depth: usize,
    /// Maximum number of solutions reported.
    pub limit: Option<u64>,
    pub mode: SolveMode,
    /// When false every constraint is checked at the leaves only.
    pub pruning: bool,
    /// Abort with [`SolveError::ResourceLimit`] after visiting this many nodes.
    pub node_limit: Option<u64>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            workers: 1,
            split_depth: 2,
            limit: None,
            mode: SolveMode::Enumerate,
            pruning: true,
            node_limit: None,
        }
    }
}

impl SolveConfig {
    pub fn count() -> Self {
        Self {
            mode: SolveMode::Count,
            ..Self::default()
        }
    }

    fn validate(&self, length: usize) -> Result<(), SolveError> {
        if self.workers == 0 {
            return Err(SolveError::InvalidConfig(
                "workers must be at least 1".into(),
            ));
        }
        if self.limit == Some(0) {
            return Err(SolveError::InvalidConfig("limit must be at least 1".into()));
        }
        if self.split_depth >= length {
            return Err(SolveError::InvalidConfig(format!(
                "split depth {} must be below the length {length}",
                self.split_depth
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub perm: Permutation,
    /// Values of the model's emitted statistics, in `Model::emit` order.
    pub stats: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SolveOutcome {
    pub count: u64,
    /// Empty in count mode.
    pub solutions: Vec<Solution>,
    /// False iff `limit` cut the result short.
    pub exhausted: bool,
}

/// Values assigned to positions `1..=m` of a permutation of length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialAssignment {
    n: usize,
    prefix: Vec<usize>,
}

impl PartialAssignment {
    pub fn new(n: usize, prefix: Vec<usize>) -> Result<Self, SolveError> {
        if prefix.len() > n {
            return Err(SolveError::InvalidAssignment(format!(
                "{} values for length {n}",
                prefix.len()
            )));
        }
        let mut used = vec![false; n + 1];
        for &v in &prefix {
            if v == 0 || v > n || used[v] {
                return Err(SolveError::InvalidAssignment(format!(
                    "value {v} repeated or outside 1..{n}"
                )));
            }
            used[v] = true;
        }
        Ok(Self { n, prefix })
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }
}

enum PrefixCheck<'a> {
    Avoid(Matcher),
    Derangement,
    Parity,
    Involution,
    Bound(&'a StatisticPredicate),
}

enum LeafCheck<'a> {
    Pattern(Matcher, Mode),
    Property(PropertyKind, bool),
    Statistic(&'a StatisticPredicate),
}

struct Engine<'a> {
    model: &'a Model,
    n: usize,
    prefix_checks: Vec<PrefixCheck<'a>>,
    leaf_checks: Vec<LeafCheck<'a>>,
}

/// Per-search mutable state: one per subtree worker.
struct Frontier {
    prefix: Vec<usize>,
    used: Vec<bool>,
}

impl Frontier {
    fn new(n: usize) -> Self {
        Self {
            prefix: Vec::with_capacity(n),
            used: vec![false; n + 1],
        }
    }

    fn push(&mut self, v: usize) {
        self.prefix.push(v);
        self.used[v] = true;
    }

    fn pop(&mut self) {
        let v = self.prefix.pop().expect("nonempty prefix");
        self.used[v] = false;
    }
}

struct Budget<'a> {
    shared: &'a AtomicU64,
    limit: Option<u64>,
    local: u64,
}

impl Budget<'_> {
    const BATCH: u64 = 1024;

    fn tick(&mut self) -> Result<(), SolveError> {
        self.local += 1;
        if self.local == Self::BATCH {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<(), SolveError> {
        let total = self.shared.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        match self.limit {
            Some(budget) if total > budget => Err(SolveError::ResourceLimit { budget }),
            _ => Ok(()),
        }
    }
}

struct Sink {
    enumerate: bool,
    cap: Option<u64>,
    count: u64,
    solutions: Vec<Solution>,
}

impl<'a> Engine<'a> {
    fn new(model: &'a Model, pruning: bool) -> Self {
        let mut prefix_checks = Vec::new();
        let mut leaf_checks = Vec::new();
        for c in model.constraints() {
            match c {
                Constraint::Pattern { pattern, mode } => {
                    let matcher = Matcher::new(pattern);
                    if pruning && *mode == Mode::Avoid && pattern.is_prefix_monotone() {
                        prefix_checks.push(PrefixCheck::Avoid(matcher));
                    } else {
                        leaf_checks.push(LeafCheck::Pattern(matcher, *mode));
                    }
                }
                Constraint::Property { kind, negate } => {
                    let incremental = match (kind, negate) {
                        (PropertyKind::Derangement, false) => Some(PrefixCheck::Derangement),
                        (PropertyKind::Parity, false) => Some(PrefixCheck::Parity),
                        (PropertyKind::Involution, false) => Some(PrefixCheck::Involution),
                        _ => None,
                    };
                    match incremental {
                        Some(check) if pruning => prefix_checks.push(check),
                        _ => leaf_checks.push(LeafCheck::Property(*kind, *negate)),
                    }
                }
                Constraint::Statistic(pred) => {
                    if pruning {
                        prefix_checks.push(PrefixCheck::Bound(pred));
                    }
                    leaf_checks.push(LeafCheck::Statistic(pred));
                }
            }
        }
        Self {
            model,
            n: model.length(),
            prefix_checks,
            leaf_checks,
        }
    }

    /// Checks the newest entry of the frontier against every prefix rule.
    fn extend_ok(&self, f: &Frontier) -> bool {
        let m = f.prefix.len();
        let v = f.prefix[m - 1];
        self.prefix_checks.iter().all(|check| match check {
            PrefixCheck::Avoid(matcher) => !matcher.exists_ending_at_last(&f.prefix),
            PrefixCheck::Derangement => v != m,
            PrefixCheck::Parity => v % 2 == m % 2,
            PrefixCheck::Involution => {
                if v <= m {
                    f.prefix[v - 1] == m
                } else {
                    // an earlier position already maps to m, so σ(m) would have to be that position
                    !f.used[m]
                }
            }
            PrefixCheck::Bound(pred) => {
                match pred.combine_ranges(|k| prefix_range(k, &f.prefix, self.n, &f.used)) {
                    Some((lo, hi)) => pred.admits_range(lo, hi),
                    None => true,
                }
            }
        })
    }

    fn leaf_ok(&self, values: &[usize], perm: &Permutation) -> bool {
        self.leaf_checks.iter().all(|check| match check {
            LeafCheck::Pattern(matcher, Mode::Avoid) => !matcher.exists(values),
            LeafCheck::Pattern(matcher, Mode::Contain) => matcher.exists(values),
            LeafCheck::Property(kind, negate) => check_property(perm, *kind) != *negate,
            LeafCheck::Statistic(pred) => {
                evaluate_predicate(perm, pred).expect("predicate magnitude checked by Model::new")
            }
        })
    }

    fn emit(&self, f: &Frontier, sink: &mut Sink) -> ControlFlow<()> {
        let perm = Permutation::from_vec_unchecked(f.prefix.clone());
        if !self.leaf_ok(&f.prefix, &perm) {
            return ControlFlow::Continue(());
        }
        sink.count += 1;
        if sink.enumerate {
            let stats = self
                .model
                .emit()
                .iter()
                .map(|&k| statistic(&perm, k))
                .collect();
            sink.solutions.push(Solution { perm, stats });
        }
        if sink.cap.is_some_and(|cap| sink.count >= cap) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    }

    fn dfs(
        &self,
        f: &mut Frontier,
        sink: &mut Sink,
        budget: &mut Budget<'_>,
    ) -> Result<ControlFlow<()>, SolveError> {
        budget.tick()?;
        if f.prefix.len() == self.n {
            return Ok(self.emit(f, sink));
        }
        for v in 1..=self.n {
            if f.used[v] {
                continue;
            }
            f.push(v);
            if self.extend_ok(f) {
                if let ControlFlow::Break(()) = self.dfs(f, sink, budget)? {
                    f.pop();
                    return Ok(ControlFlow::Break(()));
                }
            }
            f.pop();
        }
        Ok(ControlFlow::Continue(()))
    }

    /// Replays `prefix` entry by entry; false as soon as a prefix rule fails.
    fn replay(&self, prefix: &[usize]) -> Option<Frontier> {
        let mut f = Frontier::new(self.n);
        for &v in prefix {
            f.push(v);
            if !self.extend_ok(&f) {
                return None;
            }
        }
        Some(f)
    }

    fn collect_prefixes(&self, f: &mut Frontier, depth: usize, out: &mut Vec<PartialAssignment>) {
        if f.prefix.len() == depth {
            out.push(PartialAssignment {
                n: self.n,
                prefix: f.prefix.clone(),
            });
            return;
        }
        for v in 1..=self.n {
            if f.used[v] {
                continue;
            }
            f.push(v);
            if self.extend_ok(f) {
                self.collect_prefixes(f, depth, out);
            }
            f.pop();
        }
    }

    fn solve_subtree(
        &self,
        root: &PartialAssignment,
        enumerate: bool,
        cap: Option<u64>,
        nodes: &AtomicU64,
        node_limit: Option<u64>,
    ) -> Result<Sink, SolveError> {
        let mut sink = Sink {
            enumerate,
            cap,
            count: 0,
            solutions: Vec::new(),
        };
        let mut budget = Budget {
            shared: nodes,
            limit: node_limit,
            local: 0,
        };
        if let Some(mut f) = self.replay(&root.prefix) {
            let _ = self.dfs(&mut f, &mut sink, &mut budget)?;
        }
        budget.flush()?;
        Ok(sink)
    }
}

/// Sound pruning test: false only if no completion of `pa` satisfies `m`.
pub fn prefix_feasible(pa: &PartialAssignment, m: &Model) -> bool {
    if pa.n != m.length() {
        return false;
    }
    let engine = Engine::new(m, true);
    match engine.replay(&pa.prefix) {
        None => false,
        Some(f) if f.prefix.len() == engine.n => {
            let perm = Permutation::from_vec_unchecked(f.prefix.clone());
            engine.leaf_ok(&f.prefix, &perm)
        }
        Some(_) => true,
    }
}

/// Feasible prefixes of length `cfg.split_depth`, in lexicographic order.
/// Their subtrees partition the solution set.
pub fn split_work(m: &Model, cfg: &SolveConfig) -> Result<Vec<PartialAssignment>, SolveError> {
    cfg.validate(m.length())?;
    let engine = Engine::new(m, cfg.pruning);
    let mut out = Vec::new();
    engine.collect_prefixes(&mut Frontier::new(m.length()), cfg.split_depth, &mut out);
    Ok(out)
}

pub fn solve(m: &Model, cfg: &SolveConfig) -> Result<SolveOutcome, SolveError> {
    cfg.validate(m.length())?;
    let engine = Engine::new(m, cfg.pruning);
    let mut roots = Vec::new();
    engine.collect_prefixes(&mut Frontier::new(m.length()), cfg.split_depth, &mut roots);

    let enumerate = cfg.mode == SolveMode::Enumerate;
    // one past the limit tells a truncated result from an exact fit
    let cap = cfg.limit.map(|l| l + 1);
    let nodes = AtomicU64::new(0);

    let parts: Vec<Sink> = if cfg.workers == 1 {
        let mut parts = Vec::with_capacity(roots.len());
        let mut found = 0u64;
        for root in &roots {
            let remaining = cap.map(|c| c - found);
            let part = engine.solve_subtree(root, enumerate, remaining, &nodes, cfg.node_limit)?;
            found += part.count;
            parts.push(part);
            if cap.is_some_and(|c| found >= c) {
                break;
            }
        }
        parts
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| SolveError::InvalidConfig(e.to_string()))?;
        pool.install(|| {
            roots
                .par_iter()
                .map(|root| engine.solve_subtree(root, enumerate, cap, &nodes, cfg.node_limit))
                .collect::<Result<Vec<_>, _>>()
        })?
    };

    let total: u64 = parts.iter().map(|p| p.count).sum();
    let (count, exhausted) = match cfg.limit {
        Some(limit) if total > limit => (limit, false),
        _ => (total, true),
    };
    let mut solutions = Vec::new();
    if enumerate {
        for part in parts {
            solutions.extend(part.solutions);
        }
        solutions.truncate(count as usize);
    }
    Ok(SolveOutcome {
        count,
        solutions,
        exhausted,
    })
}
