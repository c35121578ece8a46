//! Exact counting and listing of cyclic permutations avoiding a pattern set.
//!
//! The search walks canonical forms `1, s_2, ..., s_n` depth first. The
//! forest is split into `n - 1` shards by the value of `s_2`; shards run in
//! parallel when the `parallel` feature is on and their results are merged
//! in shard order, so every answer is independent of scheduling.
//!
//! With pruning on, a prefix is discarded as soon as it holds an occurrence
//! that does not use the seam adjacency `s_n -> s_1`: appending entries never
//! breaks an adjacency or changes relative order, so such an occurrence
//! survives into every completion. Occurrences across the seam are checked
//! on complete permutations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use thiserror::Error;

use crate::matcher::{contains_cyclic_by_rotation, SetMatcher};
use crate::pattern::{PatternKind, PatternSet};
use crate::perm::{for_each_cyclic, CyclicPerm};

/// Largest length the search supports (values are tracked in a `u64`).
pub const MAX_N: usize = 63;

/// Default ceiling on visited search nodes.
pub const DEFAULT_BUDGET_NODES: u64 = 20_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("node budget of {budget} exhausted at n = {n}")]
    BudgetExceeded { n: usize, budget: u64 },
    #[error("pattern set must consist of cyclic patterns")]
    NotCyclic,
    #[error("length {0} outside the supported range 1..={MAX_N}")]
    BadLength(usize),
    #[error("unknown statistic `{0}` (expected predecessor_of_n or zeil_reverse)")]
    UnknownStatistic(String),
    #[error("statistic needs n >= 3, got {0}")]
    StatisticTooShort(usize),
    #[error("cannot build thread pool: {0}")]
    ThreadPool(String),
}

/// How shards are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// `jobs: None` uses the global pool (one thread per core).
    Parallel {
        jobs: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub exec: Exec,
    pub budget_nodes: u64,
    pub prune: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            exec: Exec::Parallel { jobs: None },
            budget_nodes: DEFAULT_BUDGET_NODES,
            prune: true,
        }
    }
}

impl SearchConfig {
    pub fn sequential() -> Self {
        SearchConfig {
            exec: Exec::Sequential,
            ..Self::default()
        }
    }

    pub fn with_budget(mut self, nodes: u64) -> Self {
        self.budget_nodes = nodes;
        self
    }

    pub fn unpruned(mut self) -> Self {
        self.prune = false;
        self
    }
}

/// Statistics available for refined counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Statistic {
    /// The entry cyclically preceding `n`.
    PredecessorOfMax,
    /// Length of the longest `i, i+1, ..., n` subsequence of some rotation.
    ZeilReverse,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::PredecessorOfMax => "predecessor_of_n",
            Statistic::ZeilReverse => "zeil_reverse",
        }
    }

    pub fn eval(self, sigma: &CyclicPerm) -> usize {
        match self {
            Statistic::PredecessorOfMax => sigma.predecessor_of_max() as usize,
            Statistic::ZeilReverse => sigma.zeil_reverse(),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = EnumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "predecessor_of_n" => Ok(Statistic::PredecessorOfMax),
            "zeil_reverse" => Ok(Statistic::ZeilReverse),
            other => Err(EnumError::UnknownStatistic(other.to_string())),
        }
    }
}

trait Visitor: Send {
    fn leaf(&mut self, sigma: &[u8]) -> ControlFlow<()>;
}

#[derive(Default)]
struct Counter(u64);

impl Visitor for Counter {
    fn leaf(&mut self, _: &[u8]) -> ControlFlow<()> {
        self.0 += 1;
        ControlFlow::Continue(())
    }
}

#[derive(Default)]
struct Collector(Vec<CyclicPerm>);

impl Visitor for Collector {
    fn leaf(&mut self, sigma: &[u8]) -> ControlFlow<()> {
        self.0
            .push(CyclicPerm::from_canonical_unchecked(sigma.to_vec()));
        ControlFlow::Continue(())
    }
}

#[derive(Default)]
struct FirstHit(Option<CyclicPerm>);

impl Visitor for FirstHit {
    fn leaf(&mut self, sigma: &[u8]) -> ControlFlow<()> {
        self.0 = Some(CyclicPerm::from_canonical_unchecked(sigma.to_vec()));
        ControlFlow::Break(())
    }
}

struct Refiner {
    stat: Statistic,
    counts: BTreeMap<usize, u64>,
}

impl Visitor for Refiner {
    fn leaf(&mut self, sigma: &[u8]) -> ControlFlow<()> {
        let c = CyclicPerm::from_canonical_unchecked(sigma.to_vec());
        *self.counts.entry(self.stat.eval(&c)).or_default() += 1;
        ControlFlow::Continue(())
    }
}

/// State shared by all shards of one search.
struct Shared {
    budget: u64,
    nodes: AtomicU64,
    exhausted: AtomicBool,
    /// Smallest shard index that reported a hit in first-hit mode.
    best_shard: AtomicUsize,
}

const FLUSH_EVERY: u64 = 1 << 12;

struct Dfs<'a, V> {
    matcher: &'a SetMatcher,
    n: usize,
    prune: bool,
    shard: usize,
    shared: &'a Shared,
    prefix: Vec<u8>,
    used: u64,
    local_nodes: u64,
    visitor: V,
}

enum Stop {
    Visitor,
    Abort,
}

impl<V: Visitor> Dfs<'_, V> {
    fn tick(&mut self) -> ControlFlow<Stop> {
        self.local_nodes += 1;
        if self.local_nodes == FLUSH_EVERY {
            let total = self
                .shared
                .nodes
                .fetch_add(self.local_nodes, Ordering::Relaxed)
                + self.local_nodes;
            self.local_nodes = 0;
            if total > self.shared.budget {
                self.shared.exhausted.store(true, Ordering::Relaxed);
            }
        }
        if self.shared.exhausted.load(Ordering::Relaxed)
            || self.shared.best_shard.load(Ordering::Relaxed) < self.shard
        {
            return ControlFlow::Break(Stop::Abort);
        }
        ControlFlow::Continue(())
    }

    /// Appends `v`; returns false when the new prefix is already dead.
    fn push(&mut self, v: u8) -> bool {
        self.prefix.push(v);
        self.used |= 1 << v;
        !self.prune || !self.matcher.prefix_hit(&self.prefix, self.prefix.len() - 1)
    }

    fn pop(&mut self) {
        let v = self.prefix.pop().unwrap();
        self.used &= !(1 << v);
    }

    fn descend(&mut self) -> ControlFlow<Stop> {
        self.tick()?;
        if self.prefix.len() == self.n {
            let ok = if self.prune {
                !self.matcher.seam_hit(&self.prefix)
            } else {
                self.matcher.avoided_by(&self.prefix)
            };
            if ok {
                self.visitor
                    .leaf(&self.prefix)
                    .map_break(|_| Stop::Visitor)?;
            }
            return ControlFlow::Continue(());
        }
        for v in 2..=self.n as u8 {
            if self.used & (1 << v) != 0 {
                continue;
            }
            let alive = self.push(v);
            let r = if alive {
                self.descend()
            } else {
                ControlFlow::Continue(())
            };
            self.pop();
            r?;
        }
        ControlFlow::Continue(())
    }

    fn flush(&mut self) {
        self.shared
            .nodes
            .fetch_add(self.local_nodes, Ordering::Relaxed);
        self.local_nodes = 0;
    }
}

fn check_inputs(set: &PatternSet, n: usize) -> Result<(), EnumError> {
    if set.kind() == Some(PatternKind::Linear) {
        return Err(EnumError::NotCyclic);
    }
    if n == 0 || n > MAX_N {
        return Err(EnumError::BadLength(n));
    }
    Ok(())
}

/// Runs one shard (the subtree with `s_2 = shard + 2`, or the whole tree for
/// `n <= 1`).
fn run_shard<V: Visitor>(
    matcher: &SetMatcher,
    n: usize,
    prune: bool,
    shard: usize,
    shared: &Shared,
    visitor: V,
) -> V {
    let mut dfs = Dfs {
        matcher,
        n,
        prune,
        shard,
        shared,
        prefix: Vec::with_capacity(n),
        used: 0,
        local_nodes: 0,
        visitor,
    };
    let outcome = if dfs.push(1) {
        if n == 1 {
            dfs.descend()
        } else {
            let v = shard as u8 + 2;
            if dfs.push(v) {
                dfs.descend()
            } else {
                ControlFlow::Continue(())
            }
        }
    } else {
        ControlFlow::Continue(())
    };
    if let ControlFlow::Break(Stop::Visitor) = outcome {
        shared.best_shard.fetch_min(shard, Ordering::Relaxed);
    }
    dfs.flush();
    dfs.visitor
}

fn search<V, F>(
    matcher: &SetMatcher,
    n: usize,
    cfg: &SearchConfig,
    make: F,
) -> Result<Vec<V>, EnumError>
where
    V: Visitor,
    F: Fn() -> V + Sync,
{
    let shared = Shared {
        budget: cfg.budget_nodes,
        nodes: AtomicU64::new(0),
        exhausted: AtomicBool::new(false),
        best_shard: AtomicUsize::new(usize::MAX),
    };
    let shards = n.saturating_sub(1).max(1);
    let one = |s: usize| run_shard(matcher, n, cfg.prune, s, &shared, make());
    let results: Vec<V> = match cfg.exec {
        Exec::Sequential => (0..shards).map(one).collect(),
        Exec::Parallel { jobs } => run_parallel(shards, jobs, &one)?,
    };
    if shared.exhausted.load(Ordering::Relaxed)
        || shared.nodes.load(Ordering::Relaxed) > cfg.budget_nodes
    {
        return Err(EnumError::BudgetExceeded {
            n,
            budget: cfg.budget_nodes,
        });
    }
    Ok(results)
}

#[cfg(feature = "parallel")]
fn run_parallel<V, F>(shards: usize, jobs: Option<usize>, one: &F) -> Result<Vec<V>, EnumError>
where
    V: Send,
    F: Fn(usize) -> V + Sync,
{
    use rayon::prelude::*;
    let go = || (0..shards).into_par_iter().map(one).collect::<Vec<V>>();
    match jobs {
        None => Ok(go()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| EnumError::ThreadPool(e.to_string()))?;
            Ok(pool.install(go))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn run_parallel<V, F>(shards: usize, _jobs: Option<usize>, one: &F) -> Result<Vec<V>, EnumError>
where
    F: Fn(usize) -> V,
{
    Ok((0..shards).map(one).collect())
}

/// A pattern set compiled once and searched at many lengths.
#[derive(Debug, Clone)]
pub struct Enumerator {
    set: PatternSet,
    matcher: SetMatcher,
    cfg: SearchConfig,
}

impl Enumerator {
    pub fn new(set: &PatternSet, cfg: SearchConfig) -> Result<Self, EnumError> {
        if set.kind() == Some(PatternKind::Linear) {
            return Err(EnumError::NotCyclic);
        }
        Ok(Enumerator {
            set: set.clone(),
            matcher: SetMatcher::new(set),
            cfg,
        })
    }

    pub fn set(&self) -> &PatternSet {
        &self.set
    }

    pub fn config(&self) -> &SearchConfig {
        &self.cfg
    }

    pub fn count(&self, n: usize) -> Result<u64, EnumError> {
        check_inputs(&self.set, n)?;
        let parts = search(&self.matcher, n, &self.cfg, Counter::default)?;
        Ok(parts.iter().map(|c| c.0).sum())
    }

    pub fn enumerate(&self, n: usize) -> Result<Vec<CyclicPerm>, EnumError> {
        check_inputs(&self.set, n)?;
        let parts = search(&self.matcher, n, &self.cfg, Collector::default)?;
        Ok(parts.into_iter().flat_map(|c| c.0).collect())
    }

    pub fn count_refined(
        &self,
        n: usize,
        stat: Statistic,
    ) -> Result<BTreeMap<usize, u64>, EnumError> {
        check_inputs(&self.set, n)?;
        if n < 3 {
            return Err(EnumError::StatisticTooShort(n));
        }
        let parts = search(&self.matcher, n, &self.cfg, || Refiner {
            stat,
            counts: BTreeMap::new(),
        })?;
        let mut out = BTreeMap::new();
        for p in parts {
            for (k, v) in p.counts {
                *out.entry(k).or_default() += v;
            }
        }
        Ok(out)
    }

    /// The lexicographically first avoider of length `n`, if any.
    pub fn first_avoider(&self, n: usize) -> Result<Option<CyclicPerm>, EnumError> {
        check_inputs(&self.set, n)?;
        let parts = search(&self.matcher, n, &self.cfg, FirstHit::default)?;
        Ok(parts.into_iter().find_map(|h| h.0))
    }
}

/// `|Av_n[set]|`.
pub fn count_avoiders(set: &PatternSet, n: usize, cfg: &SearchConfig) -> Result<u64, EnumError> {
    Enumerator::new(set, *cfg)?.count(n)
}

/// All avoiders in lexicographic order of canonical form.
pub fn enumerate_avoiders(
    set: &PatternSet,
    n: usize,
    cfg: &SearchConfig,
) -> Result<impl Iterator<Item = CyclicPerm>, EnumError> {
    Ok(Enumerator::new(set, *cfg)?.enumerate(n)?.into_iter())
}

pub fn count_refined(
    set: &PatternSet,
    n: usize,
    stat: Statistic,
    cfg: &SearchConfig,
) -> Result<BTreeMap<usize, u64>, EnumError> {
    Enumerator::new(set, *cfg)?.count_refined(n, stat)
}

/// Oracle: filter all `(n-1)!` cyclic permutations with the rotation-based
/// reference matcher. No pruning, no sharding.
pub fn count_by_filter(set: &PatternSet, n: usize) -> u64 {
    let mut c = 0;
    for_each_cyclic(n, |sigma| {
        if !set.iter().any(|p| contains_cyclic_by_rotation(sigma, p)) {
            c += 1;
        }
    });
    c
}

/// Oracle list counterpart of [`count_by_filter`].
pub fn avoiders_by_filter(set: &PatternSet, n: usize) -> Vec<CyclicPerm> {
    let mut out = Vec::new();
    for_each_cyclic(n, |sigma| {
        if !set.iter().any(|p| contains_cyclic_by_rotation(sigma, p)) {
            out.push(sigma.clone());
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Pattern;

    fn set(s: &str) -> PatternSet {
        s.parse().unwrap()
    }

    fn count(s: &str, n: usize) -> u64 {
        count_avoiders(&set(s), n, &SearchConfig::default()).unwrap()
    }

    #[test]
    fn count_examples() {
        assert_eq!(count("[1~3,2,4]", 8), 429);
        assert_eq!(count("[1~2~3] [2~3~1]", 9), 1524);
    }

    #[test]
    fn enumerate_examples() {
        let v: Vec<_> = enumerate_avoiders(&set("[1~2,3]"), 5, &SearchConfig::default())
            .unwrap()
            .collect();
        assert_eq!(v, vec!["[1,5,4,3,2]".parse::<CyclicPerm>().unwrap()]);

        let all: Vec<_> = enumerate_avoiders(&PatternSet::empty(), 4, &SearchConfig::default())
            .unwrap()
            .collect();
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));

        assert_eq!(
            enumerate_avoiders(&set("[1~2] [2~1]"), 3, &SearchConfig::default())
                .unwrap()
                .count(),
            0
        );
    }

    #[test]
    fn refined_examples() {
        let m = count_refined(
            &set("[1~4,2,3]"),
            5,
            Statistic::PredecessorOfMax,
            &SearchConfig::default(),
        )
        .unwrap();
        assert_eq!(m, BTreeMap::from([(1, 1), (2, 3), (3, 5), (4, 5)]));

        let z = count_refined(
            &set("[1~4,3,2]"),
            5,
            Statistic::ZeilReverse,
            &SearchConfig::default(),
        )
        .unwrap();
        assert_eq!(z.values().sum::<u64>(), 14);
        assert!(matches!(
            "bogus".parse::<Statistic>(),
            Err(EnumError::UnknownStatistic(_))
        ));
    }

    #[test]
    fn errors() {
        let lin = set("1~2,3");
        assert_eq!(
            count_avoiders(&lin, 4, &SearchConfig::default()),
            Err(EnumError::NotCyclic)
        );
        assert_eq!(
            count_avoiders(&set("[1~2,3]"), 0, &SearchConfig::default()),
            Err(EnumError::BadLength(0))
        );
        let tiny = SearchConfig::default().with_budget(100);
        assert!(matches!(
            count_avoiders(&set("[1~3,2,4]"), 9, &tiny),
            Err(EnumError::BudgetExceeded { n: 9, .. })
        ));
    }

    #[test]
    fn matches_oracle_and_unpruned() {
        let sets = [
            "[1~2,3]",
            "[1~3~2]",
            "[1~2~3] [3~2~1]",
            "[1~3,2,4]",
            "[2~3,4,1]",
            "[1,2,3]",
            "[1~3,4,2] [2,1~3,4]",
        ];
        for s in sets {
            let ps = set(s);
            for n in 1..=7 {
                let oracle = count_by_filter(&ps, n);
                for cfg in [
                    SearchConfig::default(),
                    SearchConfig::sequential(),
                    SearchConfig::sequential().unpruned(),
                    SearchConfig {
                        exec: Exec::Parallel { jobs: Some(3) },
                        ..SearchConfig::default()
                    },
                ] {
                    assert_eq!(count_avoiders(&ps, n, &cfg).unwrap(), oracle, "{s} n={n}");
                }
                let listed: Vec<_> = enumerate_avoiders(&ps, n, &SearchConfig::default())
                    .unwrap()
                    .collect();
                assert_eq!(listed, avoiders_by_filter(&ps, n));
            }
        }
    }

    #[test]
    fn first_avoider_is_lexicographically_first() {
        let ps = set("[1~3,2,4]");
        let all = avoiders_by_filter(&ps, 7);
        let e = Enumerator::new(&ps, SearchConfig::default()).unwrap();
        assert_eq!(e.first_avoider(7).unwrap(), all.first().cloned());
        let none = Enumerator::new(&set("[1~2] [2~1]"), SearchConfig::default()).unwrap();
        assert_eq!(none.first_avoider(6).unwrap(), None);
    }

    #[test]
    fn single_entry_pattern() {
        let p = PatternSet::new([Pattern::cyclic(vec![1], &[]).unwrap()]).unwrap();
        for n in 1..5 {
            assert_eq!(count_avoiders(&p, n, &SearchConfig::default()).unwrap(), 0);
        }
    }
}
