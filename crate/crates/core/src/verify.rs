//! Property suites that cross-check the matcher, enumerator, formulas,
//! bijections and avoidability constructions against each other and against
//! brute force. Each check records the first counterexample it meets.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::avoidability::{
    blowup_witness, classify_minimal_unavoidable, maximum_avoidable_probe, pi_set,
    pi_set_complement, rotation_closure_complement, witness_minus_one, AvoidError,
};
use crate::bijections::{
    check_cyclic_order_bijection, check_predecessor_refinement, check_zeil_refinement,
    BijectionError,
};
use crate::enumerator::{count_by_filter, EnumError, Enumerator, SearchConfig};
use crate::formulas::{self, binomial, catalan, catalan_triangle, FormulaError};
use crate::matcher::{contains_cyclic, contains_cyclic_via, SetMatcher};
use crate::par;
use crate::pattern::{trivial_wilf_orbit, Pattern, PatternKind, PatternSet};
use crate::perm::{for_each_cyclic, for_each_permutation, CyclicPerm, LinearPerm};

/// Outcome of one named property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Counterexample or mismatch description; empty on success.
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, failure: Option<String>) -> Check {
        Check {
            name: name.into(),
            passed: failure.is_none(),
            detail: failure.unwrap_or_default(),
        }
    }

    pub fn equal<T: PartialEq + fmt::Display>(
        name: impl Into<String>,
        actual: T,
        expected: T,
    ) -> Check {
        let failure = (actual != expected).then(|| format!("got {actual}, expected {expected}"));
        Check::new(name, failure)
    }

    /// Compares `(actual, expected)` pairs, reporting the first mismatch.
    pub fn equal_lists(name: impl Into<String>, pairs: &[(u64, u64)]) -> Check {
        let failure = pairs
            .iter()
            .position(|(a, e)| a != e)
            .map(|i| format!("entry {i}: got {}, expected {}", pairs[i].0, pairs[i].1));
        Check::new(name, failure)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}", self.name)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite `{0}` (expected symmetry, formulas, bijections, avoidability or all)")]
    UnknownSuite(String),
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Bijection(#[from] BijectionError),
    #[error(transparent)]
    Avoid(#[from] AvoidError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Symmetry,
    Formulas,
    Bijections,
    Avoidability,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Symmetry => "symmetry",
            Suite::Formulas => "formulas",
            Suite::Bijections => "bijections",
            Suite::Avoidability => "avoidability",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Suite::Symmetry,
            Suite::Formulas,
            Suite::Bijections,
            Suite::Avoidability,
            Suite::All,
        ]
        .into_iter()
        .find(|x| x.name() == s)
        .ok_or_else(|| VerifyError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Runs a suite. `n_max` overrides the default length bound of every check
/// in it; the defaults are the bounds listed in each suite function.
pub fn run_suite(suite: Suite, n_max: Option<usize>) -> Result<Vec<SuiteReport>, VerifyError> {
    let one = |s: Suite| -> Result<SuiteReport, VerifyError> {
        let checks = match s {
            Suite::Symmetry => symmetry_suite(n_max)?,
            Suite::Formulas => formulas_suite(n_max)?,
            Suite::Bijections => bijections_suite(n_max)?,
            Suite::Avoidability => avoidability_suite(n_max)?,
            Suite::All => unreachable!(),
        };
        Ok(SuiteReport {
            suite: s.name().to_string(),
            checks,
        })
    };
    match suite {
        Suite::All => [
            Suite::Symmetry,
            Suite::Formulas,
            Suite::Bijections,
            Suite::Avoidability,
        ]
        .into_iter()
        .map(one)
        .collect(),
        s => Ok(vec![one(s)?]),
    }
}

/// Every cyclic pattern of length `k`, canonical and deduplicated.
pub fn all_cyclic_patterns(k: usize) -> Vec<Pattern> {
    let mut out = BTreeSet::new();
    for_each_permutation(k, |p| {
        for mask in 0u64..1 << k {
            if (mask.count_ones() as usize) < k {
                out.insert(Pattern::cyclic_with_seam(p.to_vec(), mask).expect("valid"));
            }
        }
    });
    out.into_iter().collect()
}

fn all_cyclic_up_to(n: usize) -> Vec<CyclicPerm> {
    let mut v = Vec::new();
    for m in 1..=n {
        for_each_cyclic(m, |s| v.push(s.clone()));
    }
    v
}

fn first_bad_host(hosts: &[CyclicPerm], ok: impl Fn(&CyclicPerm) -> bool + Sync) -> Option<String> {
    par::first_failure(hosts, ok).map(|i| hosts[i].to_string())
}

fn single(p: &Pattern) -> PatternSet {
    PatternSet::new([p.clone()]).expect("single pattern")
}

/// Matcher symmetry and representative independence (`n <= 7`), pruning
/// soundness against the naive filter (`n <= 8`) and against the unpruned
/// search (`n <= 9`), trivial Wilf invariance of counts (`n <= 9`).
pub fn symmetry_suite(n_max: Option<usize>) -> Result<Vec<Check>, VerifyError> {
    let small = n_max.unwrap_or(7);
    let naive = n_max.unwrap_or(8);
    let unpruned = n_max.unwrap_or(9);
    let mut out = Vec::new();
    let hosts = all_cyclic_up_to(small);
    let pats: Vec<Pattern> = all_cyclic_patterns(3)
        .into_iter()
        .chain(all_cyclic_patterns(4))
        .collect();

    let bad = pats.iter().find_map(|p| {
        let (r, c) = (p.reverse(), p.complement());
        first_bad_host(&hosts, |s| {
            let x = contains_cyclic(s, p);
            x == contains_cyclic(&s.reverse(), &r) && x == contains_cyclic(&s.complement(), &c)
        })
        .map(|s| format!("{p} in {s}"))
    });
    out.push(Check::new(
        format!("containment commutes with reverse and complement (k <= 4, n <= {small})"),
        bad,
    ));

    let bad = pats.iter().find_map(|p| {
        let reps = p.wrap_free_representatives();
        first_bad_host(&hosts, |s| {
            let x = contains_cyclic(s, p);
            reps.iter().all(|r| contains_cyclic_via(s, r) == x)
        })
        .map(|s| format!("{p} in {s}"))
    });
    out.push(Check::new(
        format!("every wrap-free representative gives the same answer (k <= 4, n <= {small})"),
        bad,
    ));

    let bad = all_cyclic_patterns(3).iter().find_map(|p| {
        p.bond_slots().into_iter().find_map(|slot| {
            let q = p.without_bond(slot);
            first_bad_host(&hosts, |s| !contains_cyclic(s, p) || contains_cyclic(s, &q))
                .map(|s| format!("{p} without bond {slot} in {s}"))
        })
    });
    out.push(Check::new(
        format!("removing a bond never loses containment (k = 3, n <= {small})"),
        bad,
    ));

    let up = "[1~2]".parse::<Pattern>().expect("valid");
    let down = "[2~1]".parse::<Pattern>().expect("valid");
    let bad = first_bad_host(&hosts, |s| {
        s.len() < 2 || (contains_cyclic(s, &up) && contains_cyclic(s, &down))
    });
    out.push(Check::new(
        format!("every cyclic permutation has an ascent and a descent (n <= {small})"),
        bad,
    ));

    let singletons: Vec<PatternSet> = pats.iter().map(single).collect();
    let cfg = SearchConfig::default();
    let mut bad = None;
    'outer: for s in &singletons {
        let e = Enumerator::new(s, cfg)?;
        for n in 1..=naive {
            let (a, b) = (e.count(n)?, count_by_filter(s, n));
            if a != b {
                bad = Some(format!("{s} at n = {n}: pruned {a}, naive {b}"));
                break 'outer;
            }
        }
    }
    out.push(Check::new(
        format!("pruned search equals the naive filter (k <= 4, n <= {naive})"),
        bad,
    ));

    let mut bad = None;
    'outer: for s in &singletons {
        let e = Enumerator::new(s, cfg)?;
        let u = Enumerator::new(s, cfg.unpruned())?;
        for n in naive + 1..=unpruned {
            let (a, b) = (e.count(n)?, u.count(n)?);
            if a != b {
                bad = Some(format!("{s} at n = {n}: pruned {a}, unpruned {b}"));
                break 'outer;
            }
        }
    }
    out.push(Check::new(
        format!(
            "pruned search equals the unpruned search (k <= 4, {} <= n <= {unpruned})",
            naive + 1
        ),
        bad,
    ));

    let wilf_n = n_max.unwrap_or(9);
    let reps: Vec<PatternSet> = all_cyclic_patterns(4)
        .iter()
        .filter(|p| p.num_bonds() == 1)
        .map(single)
        .chain(
            [
                "[1~2~3] [2~3~1]",
                "[1~3~2] [2~1~3]",
                "[1~3~2] [3~1~2]",
                "[1~2~3] [3~2~1]",
            ]
            .iter()
            .map(|s| s.parse().expect("valid set")),
        )
        .collect();
    let mut bad = None;
    'outer: for s in &reps {
        let orbit: Vec<PatternSet> = trivial_wilf_orbit(s).into_iter().collect();
        for n in 1..=wilf_n {
            let counts: Vec<u64> = orbit
                .iter()
                .map(|t| Enumerator::new(t, cfg).and_then(|e| e.count(n)))
                .collect::<Result<_, _>>()?;
            if counts.windows(2).any(|w| w[0] != w[1]) {
                bad = Some(format!("orbit of {s} at n = {n}: {counts:?}"));
                break 'outer;
            }
        }
    }
    out.push(Check::new(
        format!("counts are constant on trivial Wilf orbits (n <= {wilf_n})"),
        bad,
    ));
    Ok(out)
}

fn class_vs<F>(
    name: &str,
    set: &str,
    ns: std::ops::RangeInclusive<usize>,
    f: F,
) -> Result<Check, VerifyError>
where
    F: Fn(usize) -> Result<BigUint, FormulaError>,
{
    let set: PatternSet = set.parse().expect("valid set");
    let e = Enumerator::new(&set, SearchConfig::default())?;
    let mut pairs = Vec::new();
    for n in ns.clone() {
        let expected = f(n)?;
        pairs.push((e.count(n)?, u64::try_from(expected).unwrap_or(u64::MAX)));
    }
    let failure = pairs
        .iter()
        .zip(ns)
        .find(|((a, b), _)| a != b)
        .map(|((a, b), n)| format!("n = {n}: enumerated {a}, formula {b}"));
    Ok(Check::new(format!("{name} matches {set}"), failure))
}

/// Formula-versus-enumeration identities and formula-internal identities,
/// for `n <= 10` by default.
pub fn formulas_suite(n_max: Option<usize>) -> Result<Vec<Check>, VerifyError> {
    let n = n_max.unwrap_or(10);
    let mut out = vec![
        class_vs(
            "zeil-region-sum",
            "[1~2,3,4]",
            2..=n,
            formulas::zeil_region_sum,
        )?,
        class_vs(
            "zeil-region-sum",
            "[1~2,4,3]",
            2..=n,
            formulas::zeil_region_sum,
        )?,
        class_vs("catalan(n-1)", "[1~3,2,4]", 1..=n, |m| {
            Ok(catalan(m as u64 - 1))
        })?,
        class_vs("catalan(n-1)", "[1~4,2,3]", 1..=n, |m| {
            Ok(catalan(m as u64 - 1))
        })?,
        class_vs("catalan(n-1)", "[1~4,3,2]", 1..=n, |m| {
            Ok(catalan(m as u64 - 1))
        })?,
        class_vs("dyck-uudd(n+1)", "[1~3,4,2]", 1..=n, |m| {
            formulas::dyck_uudd(m + 1)
        })?,
        class_vs(
            "strongly-monotone-sum",
            "[2~3,1,4]",
            2..=n,
            formulas::strongly_monotone_sum,
        )?,
        class_vs(
            "consecutive-123",
            "[1~2~3]",
            1..=n,
            formulas::consecutive_123,
        )?,
        class_vs(
            "consecutive-132",
            "[1~3~2]",
            1..=n,
            formulas::consecutive_132,
        )?,
        class_vs("alternating count", "[1~2~3] [3~2~1]", 1..=n, |m| {
            if m <= 2 {
                Ok(1u32.into())
            } else if m % 2 == 1 {
                Ok(0u32.into())
            } else {
                formulas::updown(m - 1)
            }
        })?,
        class_vs("one then zeros", "[1~2]", 1..=n, |m| {
            Ok(u32::from(m == 1).into())
        })?,
    ];

    // one bond, length 3: only the decreasing or increasing cycle survives
    let cfg = SearchConfig::default();
    let mut bad = None;
    for p in all_cyclic_patterns(3).iter().filter(|p| p.num_bonds() == 1) {
        let e = Enumerator::new(&single(p), cfg)?;
        for m in 1..=n {
            let av = e.enumerate(m)?;
            let ok = av.len() == 1
                && (av[0] == CyclicPerm::increasing(m) || av[0] == CyclicPerm::decreasing(m));
            if !ok {
                bad = Some(format!("{p} at n = {m}: {av:?}"));
                break;
            }
        }
        if bad.is_some() {
            break;
        }
    }
    out.push(Check::new(
        format!("each one-bond length-3 pattern has a single monotone avoider (n <= {n})"),
        bad,
    ));

    let doubletons = [
        pi_set(1, 3)?,
        pi_set(2, 3)?,
        pi_set(3, 3)?,
        pi_set_complement(1, 3)?,
        pi_set_complement(2, 3)?,
        pi_set_complement(3, 3)?,
    ];
    let mut bad = None;
    for s in &doubletons {
        let e = Enumerator::new(s, cfg)?;
        for m in 1..=n {
            let c = e.count(m)?;
            if c != u64::from(m <= 2) {
                bad.get_or_insert(format!("{s} at n = {m}: {c}"));
            }
        }
    }
    out.push(Check::new(
        format!("the six unavoidable doubletons give 1, 1, 0, 0, ... (n <= {n})"),
        bad,
    ));

    let hi = n_max.map_or(12, |m| m.max(3));
    let mut bad = None;
    for m in 3..=hi {
        let exact = formulas::consecutive_123(m)?;
        let approx = formulas::consecutive_123_closed_form(m, 50)?;
        let exact_f: f64 = exact.to_string().parse().expect("decimal");
        if (approx - exact_f).abs() >= 0.5 {
            bad = Some(format!("n = {m}: closed form {approx}, exact {exact}"));
            break;
        }
    }
    out.push(Check::new(
        format!("truncated closed form (K = 50) rounds to consecutive-123 (3 <= n <= {hi})"),
        bad,
    ));

    let mut bad = None;
    for r in 0..=30u64 {
        let row: BigUint = (0..=r)
            .map(|k| catalan_triangle(r, k).expect("in range"))
            .sum();
        if row != catalan(r + 1) {
            bad = Some(format!("row {r} sums to {row}"));
            break;
        }
        if r > 0 {
            for k in 0..=r {
                let s: BigUint = (0..=k)
                    .map(|j| catalan_triangle(r - 1, j).expect("in range"))
                    .sum();
                if s != catalan_triangle(r, k).expect("in range") {
                    bad = Some(format!("T({r},{k}) is not a prefix sum of row {}", r - 1));
                }
            }
        }
    }
    out.push(Check::new("Catalan triangle rows sum to Catalan numbers and satisfy the prefix-sum recurrence (n <= 30)", bad));

    let mut bad = None;
    for m in 2..=25 {
        let (a, b) = (formulas::dyck_uudd(m)?, formulas::dyck_uudd_explicit(m)?);
        if a != b {
            bad = Some(format!("n = {m}: recurrence {a}, explicit {b}"));
            break;
        }
    }
    out.push(Check::new(
        "dyck-uudd recurrence equals its explicit sum (2 <= n <= 25)",
        bad,
    ));
    Ok(out)
}

/// Cyclic-order bijection (`n + 2 <= 9`), and the two delete/insert
/// refinements (`n <= 9`).
pub fn bijections_suite(n_max: Option<usize>) -> Result<Vec<Check>, VerifyError> {
    let n = n_max.unwrap_or(9);
    let mut out = check_cyclic_order_bijection(n.saturating_sub(2))?;
    out.extend(check_predecessor_refinement(n)?);
    out.extend(check_zeil_refinement(n)?);
    let c: u64 = catalan(n as u64 - 1).try_into().unwrap_or(u64::MAX);
    out.push(Check::equal(
        format!("|Av_{n}[1~4,2,3]| = C_{}", n - 1),
        Enumerator::new(
            &"[1~4,2,3]".parse().expect("valid"),
            SearchConfig::default(),
        )?
        .count(n)?,
        c,
    ));
    Ok(out)
}

/// Unavoidability of `pi_set(i, k)` for `k <= n <= k + 4`, `k <= 5`;
/// witness constructions (`k <= 6`, `n <= 50`); blow-ups (`k <= 4`,
/// `m <= 5`); the `k = 3` classification at horizon 8 and the maximum
/// avoidable probe at horizon 9; monotonicity over all pairs of subsets at
/// `k = 3`.
pub fn avoidability_suite(n_max: Option<usize>) -> Result<Vec<Check>, VerifyError> {
    let cfg = SearchConfig::default();
    let mut out = Vec::new();

    let mut bad = None;
    for k in 1..=5 {
        for i in 1..=k {
            for s in [pi_set(i, k)?, pi_set_complement(i, k)?] {
                let e = Enumerator::new(&s, cfg)?;
                for n in k..=k + 4 {
                    if let Some(w) = e.first_avoider(n)? {
                        bad = Some(format!("{s} avoided by {w}"));
                    }
                }
            }
        }
    }
    out.push(Check::new(
        "no permutation of length k..=k+4 avoids pi_set(i, k) or its complement (k <= 5)",
        bad,
    ));

    let wn = n_max.unwrap_or(50);
    let mut cases = Vec::new();
    for k in 1..=6 {
        for i in 1..=k {
            for p in pi_set(i, k)?.iter() {
                cases.push((i, k, p.clone()));
            }
        }
    }
    let results = par::map(&cases, |(i, k, p)| -> Result<Option<String>, AvoidError> {
        let rest = SetMatcher::new(&pi_set(*i, *k)?.without(&single(p)));
        for n in *k..=wn.max(*k) {
            let w = witness_minus_one(*i, *k, p, n)?;
            if !rest.avoided_by(w.values()) {
                return Ok(Some(format!("i = {i}, excluded {p}, n = {n}: {w}")));
            }
        }
        Ok(None)
    });
    let mut bad = None;
    for r in results {
        if let Some(f) = r? {
            bad.get_or_insert(f);
        }
    }
    out.push(Check::new(
        format!(
            "witness_minus_one avoids pi_set(i, k) minus the excluded pattern (k <= 6, n <= {wn})"
        ),
        bad,
    ));

    let mut bad = None;
    for k in 1..=4 {
        for_each_permutation(k, |p| {
            let pi = LinearPerm::new(p.to_vec()).expect("permutation");
            let m = SetMatcher::new(&rotation_closure_complement(&pi));
            for r in 1..=5 {
                let w = blowup_witness(&pi, r).expect("small");
                if bad.is_none() && !m.avoided_by(w.values()) {
                    bad = Some(format!("pi = {pi}, m = {r}: {w}"));
                }
            }
        });
    }
    out.push(Check::new(
        "blow-up witnesses avoid the rotation-closure complement (k <= 4, m <= 5)",
        bad,
    ));

    let report = classify_minimal_unavoidable(3, 8, 6, &cfg).map_err(|e| e.error)?;
    let mut expected: Vec<Vec<String>> = (1..=3)
        .flat_map(|i| [pi_set(i, 3), pi_set_complement(i, 3)])
        .map(|s| s.map(|s| s.strings()))
        .collect::<Result<_, _>>()?;
    expected.sort();
    let mut got = report.minimal_sets.clone();
    got.sort();
    out.push(Check::new(
        "k = 3 minimal horizon-unavoidable sets are exactly pi_set(i, 3) and their complements (horizon 8)",
        (got != expected).then(|| format!("found {got:?}")),
    ));
    out.push(Check::new(
        "number of minimal sets at k = 3 is within the antichain bound C(6, 3)",
        (got.len() as u64 > u64::try_from(binomial(6, 3)).unwrap_or(0))
            .then(|| format!("{} sets", got.len())),
    ));

    let probe = maximum_avoidable_probe(3, 9, &cfg)?;
    out.push(Check::equal(
        "largest horizon-avoidable subset at k = 3 has size k! - k (horizon 9)",
        probe.max_size,
        3,
    ));
    out.push(Check::new(
        "every maximum avoidable set at k = 3 is a rotation-closure complement (horizon 9)",
        (!probe.all_rotation_complements).then(|| format!("{:?}", probe.maximum_sets)),
    ));

    // monotonicity: emptiness at each n is inherited by supersets
    let all = crate::pattern::all_totally_vincular(3, PatternKind::Cyclic);
    let mn = n_max.unwrap_or(8).max(3);
    let masks: Vec<u64> = (0..64).collect();
    let empties = par::map(&masks, |&x| -> Result<Vec<bool>, EnumError> {
        let s = PatternSet::from_sorted_unchecked(
            all.iter()
                .enumerate()
                .filter(|(j, _)| x >> j & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect(),
        );
        let e = Enumerator::new(&s, cfg)?;
        (3..=mn)
            .map(|n| e.first_avoider(n).map(|w| w.is_none()))
            .collect()
    });
    let empties: Vec<Vec<bool>> = empties.into_iter().collect::<Result<_, _>>()?;
    let mut bad = None;
    for a in 0..64u64 {
        for b in 0..64u64 {
            if a & b == a {
                if let Some(j) = (0..empties[0].len())
                    .find(|&j| empties[a as usize][j] && !empties[b as usize][j])
                {
                    bad.get_or_insert(format!(
                        "subset mask {a:#b} empty but superset {b:#b} not at n = {}",
                        j + 3
                    ));
                }
            }
        }
    }
    out.push(Check::new(
        format!("emptiness is monotone under inclusion (k = 3, n <= {mn})"),
        bad,
    ));
    Ok(out)
}
