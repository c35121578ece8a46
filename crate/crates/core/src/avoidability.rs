//! Avoidability of sets of totally vincular cyclic patterns.
//!
//! A set is *avoidable* if arbitrarily long cyclic permutations avoid it.
//! That is not decidable by search, so every report here is relative to a
//! horizon `N`: a set of length-`k` patterns counts as *horizon-unavoidable*
//! when `Av_n` is empty for each of the `k` lengths `N-k+1..=N`. A window of
//! `k` lengths (rather than just `n = N`) is needed because some avoidable
//! sets only have avoiders at lengths in one residue class, e.g. the blow-up
//! witnesses exist only at multiples of `k`, and `{[1~2~3], [3~2~1]}` is
//! avoided only at even lengths.

use serde::Serialize;
use thiserror::Error;

use crate::enumerator::{EnumError, Enumerator, SearchConfig};
use crate::formulas::binomial;
use crate::par;
use crate::pattern::{all_totally_vincular, totally_vincular_of, Pattern, PatternKind, PatternSet};
use crate::perm::{CyclicPerm, LinearPerm};

/// Label attached to every search-based report.
pub const EVIDENCE: &str = "horizon-relative";

/// Largest `k` for the subset-lattice searches (subsets are `u64` masks
/// over the `k!` patterns).
pub const LATTICE_MAX_K: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AvoidError {
    #[error("index i = {i} outside 1..={k}")]
    IndexOutOfRange { i: usize, k: usize },
    #[error("pattern length k = {0} not supported here")]
    BadLength(usize),
    #[error("{0} is not a totally vincular pattern of length {1}")]
    NotTotallyVincular(String, usize),
    #[error("{pattern} does not have 1 at position {i}")]
    ExcludedNotInSet { pattern: String, i: usize },
    #[error("n = {n} is smaller than k = {k}")]
    TooShort { n: usize, k: usize },
    #[error("length {0} too large")]
    TooLong(usize),
    #[error("horizon {horizon} is smaller than the pattern length {k}")]
    HorizonTooSmall { horizon: usize, k: usize },
    #[error(transparent)]
    Enum(#[from] EnumError),
}

fn check_index(i: usize, k: usize) -> Result<(), AvoidError> {
    if k == 0 {
        return Err(AvoidError::BadLength(0));
    }
    if !(1..=k).contains(&i) {
        return Err(AvoidError::IndexOutOfRange { i, k });
    }
    Ok(())
}

fn tv_with(k: usize, keep: impl Fn(&Pattern) -> bool) -> PatternSet {
    let all = all_totally_vincular(k, PatternKind::Cyclic);
    PatternSet::from_sorted_unchecked(all.iter().filter(|p| keep(p)).cloned().collect())
}

/// Totally vincular cyclic patterns of length `k` with 1 at position `i`.
pub fn pi_set(i: usize, k: usize) -> Result<PatternSet, AvoidError> {
    check_index(i, k)?;
    Ok(tv_with(k, |p| p.values()[i - 1] == 1))
}

/// Totally vincular cyclic patterns of length `k` with `k` at position `i`.
pub fn pi_set_complement(i: usize, k: usize) -> Result<PatternSet, AvoidError> {
    check_index(i, k)?;
    Ok(tv_with(k, |p| p.values()[i - 1] as usize == k))
}

/// The totally vincular patterns of the `k` rotations of `pi`.
pub fn rotation_class(pi: &LinearPerm) -> PatternSet {
    PatternSet::new(
        pi.rotations()
            .iter()
            .map(|r| totally_vincular_of(r, PatternKind::Cyclic)),
    )
    .expect("same length")
}

/// All totally vincular patterns of length `k` except the rotations of `pi`.
pub fn rotation_closure_complement(pi: &LinearPerm) -> PatternSet {
    all_totally_vincular(pi.len(), PatternKind::Cyclic).without(&rotation_class(pi))
}

/// All totally vincular patterns of length `k` except the rotations of the
/// identity; `[iota_n]` avoids it for every `n`.
pub fn max_avoidable_set(k: usize) -> Result<PatternSet, AvoidError> {
    if k < 2 {
        return Err(AvoidError::BadLength(k));
    }
    Ok(rotation_closure_complement(&LinearPerm::identity(k)))
}

/// `pi` repeated `m` times with entries `m(pi_j - 1) + r` in block `r`.
/// Every cyclic window of length `k` reduces to a rotation of `pi`.
pub fn blowup_witness(pi: &LinearPerm, m: usize) -> Result<CyclicPerm, AvoidError> {
    let k = pi.len();
    if m == 0 {
        return Err(AvoidError::TooShort { n: 0, k });
    }
    if k * m > u8::MAX as usize {
        return Err(AvoidError::TooLong(k * m));
    }
    let mut v = Vec::with_capacity(k * m);
    for r in 1..=m {
        for &p in pi.values() {
            v.push((m * (p as usize - 1) + r) as u8);
        }
    }
    Ok(CyclicPerm::from_linear(
        &LinearPerm::new(v).expect("blow-up is a permutation"),
    ))
}

/// Values of `pi` with 1 kept, the rest moved to the top, then
/// `n-k+1, n-k, ..., 2`.
fn build_low_one(pi: &[u8], n: usize) -> Vec<u8> {
    let k = pi.len();
    let mut v: Vec<u8> = pi
        .iter()
        .map(|&x| {
            if x == 1 {
                1
            } else {
                (n - k + x as usize) as u8
            }
        })
        .collect();
    v.extend((2..=n - k + 1).rev().map(|x| x as u8));
    v
}

/// Values of `pi` with 1 and 2 kept, the rest moved to the top, then
/// `n-k+2, ..., 3`.
fn build_low_two(pi: &[u8], n: usize) -> Vec<u8> {
    let k = pi.len();
    let mut v: Vec<u8> = pi
        .iter()
        .map(|&x| {
            if x <= 2 {
                x
            } else {
                (n - k + x as usize) as u8
            }
        })
        .collect();
    v.extend((3..=n - k + 2).rev().map(|x| x as u8));
    v
}

fn cyc(v: Vec<u8>) -> CyclicPerm {
    CyclicPerm::from_linear(&LinearPerm::new(v).expect("construction is a permutation"))
}

fn reversed(v: &[u8]) -> Vec<u8> {
    v.iter().rev().copied().collect()
}

/// A cyclic permutation of length `n` avoiding `pi_set(i, k)` minus
/// `excluded`, which must be a totally vincular pattern with 1 at
/// position `i`.
pub fn witness_minus_one(
    i: usize,
    k: usize,
    excluded: &Pattern,
    n: usize,
) -> Result<CyclicPerm, AvoidError> {
    check_index(i, k)?;
    if excluded.len() != k || !excluded.is_totally_vincular() {
        return Err(AvoidError::NotTotallyVincular(excluded.to_string(), k));
    }
    let pi = excluded.values();
    if pi[i - 1] != 1 {
        return Err(AvoidError::ExcludedNotInSet {
            pattern: excluded.to_string(),
            i,
        });
    }
    if n < k {
        return Err(AvoidError::TooShort { n, k });
    }
    if n > u8::MAX as usize {
        return Err(AvoidError::TooLong(n));
    }
    Ok(if i == 1 || 2 * i < k + 1 {
        cyc(build_low_one(pi, n))
    } else if 2 * i == k + 1 {
        // the middle position: build with 2 before the 1, mirror otherwise
        let two_before = pi.iter().position(|&x| x == 2).unwrap() < i - 1;
        if two_before {
            cyc(build_low_two(pi, n))
        } else {
            cyc(build_low_two(&reversed(pi), n)).reverse()
        }
    } else {
        let r = Pattern::totally_vincular(reversed(pi), excluded.kind()).expect("valid");
        witness_minus_one(k + 1 - i, k, &r, n)?.reverse()
    })
}

fn check_tv_set(set: &PatternSet) -> Result<usize, AvoidError> {
    let k = set.pattern_len().ok_or(AvoidError::BadLength(0))?;
    if let Some(p) = set
        .iter()
        .find(|p| !p.is_totally_vincular() || !p.is_cyclic())
    {
        return Err(AvoidError::NotTotallyVincular(p.to_string(), k));
    }
    Ok(k)
}

/// Per-length avoider search for a totally vincular set.
#[derive(Debug, Clone, Serialize)]
pub struct AvoidabilityReport {
    pub patterns: Vec<String>,
    pub k: usize,
    pub horizon: usize,
    /// `(n, first avoider in lexicographic order)` for `k <= n <= horizon`.
    pub per_n: Vec<(usize, Option<String>)>,
    /// Smallest `n0` with `Av_n` empty for all `n0 <= n <= horizon`.
    pub empty_from: Option<usize>,
    pub evidence: &'static str,
}

impl AvoidabilityReport {
    pub fn is_empty_at(&self, n: usize) -> Option<bool> {
        self.per_n.iter().find(|r| r.0 == n).map(|r| r.1.is_none())
    }
}

/// Finds, for each `k <= n <= horizon`, whether some cyclic permutation of
/// length `n` avoids `set`.
pub fn avoidable_up_to(
    set: &PatternSet,
    horizon: usize,
    cfg: &SearchConfig,
) -> Result<AvoidabilityReport, AvoidError> {
    let k = check_tv_set(set)?;
    if horizon < k {
        return Err(AvoidError::HorizonTooSmall { horizon, k });
    }
    let e = Enumerator::new(set, *cfg)?;
    let mut per_n = Vec::new();
    for n in k..=horizon {
        per_n.push((n, e.first_avoider(n)?.map(|s| s.to_string())));
    }
    let empty_from = per_n
        .iter()
        .rev()
        .take_while(|r| r.1.is_none())
        .last()
        .map(|r| r.0);
    Ok(AvoidabilityReport {
        patterns: set.strings(),
        k,
        horizon,
        per_n,
        empty_from,
        evidence: EVIDENCE,
    })
}

/// `Av_n[set]` is empty for every `n` in `max(k, N-k+1)..=N`.
pub fn horizon_unavoidable(
    set: &PatternSet,
    horizon: usize,
    cfg: &SearchConfig,
) -> Result<bool, AvoidError> {
    let k = check_tv_set(set)?;
    if horizon < k {
        return Err(AvoidError::HorizonTooSmall { horizon, k });
    }
    let e = Enumerator::new(set, *cfg)?;
    let lo = k.max(horizon + 1 - k);
    for n in (lo..=horizon).rev() {
        if e.first_avoider(n)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Subsets of `all` encoded as bit masks.
fn subset(all: &PatternSet, mask: u64) -> PatternSet {
    PatternSet::from_sorted_unchecked(
        all.iter()
            .enumerate()
            .filter(|(j, _)| mask >> j & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect(),
    )
}

/// All `size`-element masks below `1 << m`, increasing.
fn masks_of_size(m: usize, size: usize) -> Vec<u64> {
    if size == 0 {
        return vec![0];
    }
    if size > m {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut x: u64 = (1 << size) - 1;
    while x < 1 << m {
        out.push(x);
        // next mask with the same popcount
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

fn lattice_patterns(k: usize) -> Result<PatternSet, AvoidError> {
    if k == 0 || k > LATTICE_MAX_K {
        return Err(AvoidError::BadLength(k));
    }
    Ok(all_totally_vincular(k, PatternKind::Cyclic))
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Minimal horizon-unavoidable subsets of the totally vincular patterns of
/// length `k`.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub k: usize,
    pub horizon: usize,
    pub minimal_sets: Vec<Vec<String>>,
    pub smallest_size: Option<usize>,
    /// No horizon-unavoidable set smaller than `(k-1)!` was found.
    #[serde(rename = "conjecture_5_3_consistent")]
    pub min_size_consistent: bool,
    /// Largest subset size examined; `k!` means the lattice was exhausted.
    pub searched_up_to_size: usize,
    /// Number of subsets that were evaluated.
    pub subsets_checked: u64,
    /// Size of the largest antichain, `C(k!, k!/2)`.
    pub antichain_bound: String,
    pub evidence: &'static str,
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap() + "\n"
    }
}

/// A lattice search cut short; `partial` covers every completed size level.
#[derive(Debug, Clone, Error)]
#[error("{error} (search completed through subset size {})", .partial.searched_up_to_size)]
pub struct ClassificationError {
    pub partial: Box<ClassificationReport>,
    pub error: AvoidError,
}

/// Visits subsets in increasing size, skipping supersets of sets already
/// found, and reports the minimal horizon-unavoidable ones. Sizes above
/// `max_size` are not examined.
pub fn classify_minimal_unavoidable(
    k: usize,
    horizon: usize,
    max_size: usize,
    cfg: &SearchConfig,
) -> Result<ClassificationReport, ClassificationError> {
    let fail = |error: AvoidError, report: ClassificationReport| ClassificationError {
        partial: Box::new(report),
        error,
    };
    let kf = factorial(k.clamp(1, LATTICE_MAX_K));
    let mut report = ClassificationReport {
        k,
        horizon,
        minimal_sets: Vec::new(),
        smallest_size: None,
        min_size_consistent: true,
        searched_up_to_size: 0,
        subsets_checked: 0,
        antichain_bound: binomial(kf as u64, kf as u64 / 2).to_string(),
        evidence: EVIDENCE,
    };
    let all = match lattice_patterns(k) {
        Ok(a) => a,
        Err(e) => return Err(fail(e, report)),
    };
    if horizon < k {
        return Err(fail(AvoidError::HorizonTooSmall { horizon, k }, report));
    }
    let m = all.len();
    let mut found: Vec<u64> = Vec::new();
    for size in 1..=max_size.min(m) {
        let level: Vec<u64> = masks_of_size(m, size)
            .into_iter()
            .filter(|&x| !found.iter().any(|&f| f & !x == 0))
            .collect();
        let verdicts = par::map(&level, |&x| {
            horizon_unavoidable(&subset(&all, x), horizon, cfg)
        });
        report.subsets_checked += level.len() as u64;
        for (x, v) in level.iter().zip(verdicts) {
            match v {
                Ok(true) => found.push(*x),
                Ok(false) => {}
                Err(e) => return Err(fail(e, report)),
            }
        }
        report.searched_up_to_size = size;
    }
    report.minimal_sets = found.iter().map(|&x| subset(&all, x).strings()).collect();
    report.smallest_size = found.iter().map(|x| x.count_ones() as usize).min();
    report.min_size_consistent = report.smallest_size.is_none_or(|s| s >= factorial(k - 1));
    Ok(report)
}

/// Largest horizon-avoidable subsets, and whether each is the complement of
/// a rotation class.
#[derive(Debug, Clone, Serialize)]
pub struct MaximumAvoidableReport {
    pub k: usize,
    pub horizon: usize,
    pub max_size: usize,
    pub maximum_sets: Vec<Vec<String>>,
    /// Every maximum set equals `rotation_closure_complement(pi)` for some
    /// `pi`.
    pub all_rotation_complements: bool,
    pub evidence: &'static str,
}

impl MaximumAvoidableReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap() + "\n"
    }
}

/// Largest subset size whose subsets are horizon-avoidable, found by
/// scanning sizes from `k!` downward. Exhaustive, so limited to `k <= 3`.
pub fn maximum_avoidable_probe(
    k: usize,
    horizon: usize,
    cfg: &SearchConfig,
) -> Result<MaximumAvoidableReport, AvoidError> {
    if k == 0 || k > 3 {
        return Err(AvoidError::BadLength(k));
    }
    let all = lattice_patterns(k)?;
    if horizon < k {
        return Err(AvoidError::HorizonTooSmall { horizon, k });
    }
    let m = all.len();
    let mut rotation_complements = Vec::new();
    crate::perm::for_each_permutation(k, |p| {
        let pi = LinearPerm::new(p.to_vec()).expect("permutation");
        rotation_complements.push(rotation_closure_complement(&pi));
    });
    for size in (0..=m).rev() {
        let level = masks_of_size(m, size);
        let verdicts = par::map(&level, |&x| {
            horizon_unavoidable(&subset(&all, x), horizon, cfg)
        });
        let mut maxima = Vec::new();
        for (x, v) in level.iter().zip(verdicts) {
            if !v? {
                maxima.push(subset(&all, *x));
            }
        }
        if !maxima.is_empty() {
            return Ok(MaximumAvoidableReport {
                k,
                horizon,
                max_size: size,
                all_rotation_complements: maxima.iter().all(|s| rotation_complements.contains(s)),
                maximum_sets: maxima.iter().map(PatternSet::strings).collect(),
                evidence: EVIDENCE,
            });
        }
    }
    unreachable!("the empty set is always avoidable")
}
