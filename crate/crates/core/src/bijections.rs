//! Constructive bijections between avoidance classes and other Catalan-like
//! or cyclic-order families, with exhaustive checkers.
//!
//! * `phi`/`psi`: cyclic permutations of length `n + 2` avoiding
//!   `{[1~3~2], [2~1~3], [3~2~1]}` versus total cyclic orders on `[n + 2]`
//!   containing every consecutive triple `(i, i+1, i+2)` (indices mod
//!   `n + 2`). This family is called `R_n` below.
//! * delete/insert of the maximum for `[1~4,2,3]`, refined by the entry
//!   preceding `n` (`A(n, i)`).
//! * delete/insert of the maximum for `[1~4,3,2]`, refined by
//!   `zeil_reverse = n - i` (`E(n, i)`).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::enumerator::{EnumError, Enumerator, SearchConfig};
use crate::formulas::catalan_triangle;
use crate::matcher::avoids_set;
use crate::par;
use crate::pattern::PatternSet;
use crate::perm::{for_each_permutation, CyclicPerm};
use crate::verify::Check;

/// Largest `n` accepted by [`brute_force_rn`] (`(n + 1)!` arrangements).
pub const RN_MAX: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error("triple ({0}, {1}, {2}) has repeated or out-of-range elements")]
    BadTriple(u8, u8, u8),
    #[error("arrangement {0:?} is not a permutation of [m] starting with 1")]
    BadArrangement(Vec<u8>),
    #[error("{0} is not in the required avoidance class")]
    NotInClass(CyclicPerm),
    #[error("cyclic order misses the consecutive triple ({0}, {1}, {2})")]
    NotInRn(u8, u8, u8),
    #[error("comparison relation has a directed cycle")]
    CyclicRelation,
    #[error("{0}")]
    Precondition(String),
    #[error("n = {n} exceeds the brute-force limit {max}")]
    Budget { n: usize, max: usize },
    #[error(transparent)]
    Enum(#[from] EnumError),
}

/// A total cyclic order on `[m]`, stored as the circular arrangement read
/// from element 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TotalCyclicOrder {
    arrangement: Vec<u8>,
    /// `pos[x - 1]` is the index of `x` in `arrangement`.
    pos: Vec<u8>,
}

impl TotalCyclicOrder {
    pub fn new(arrangement: Vec<u8>) -> Result<Self, BijectionError> {
        let m = arrangement.len();
        let mut pos = vec![u8::MAX; m];
        for (i, &x) in arrangement.iter().enumerate() {
            if x == 0 || x as usize > m || pos[x as usize - 1] != u8::MAX {
                return Err(BijectionError::BadArrangement(arrangement));
            }
            pos[x as usize - 1] = i as u8;
        }
        if m == 0 || arrangement[0] != 1 {
            return Err(BijectionError::BadArrangement(arrangement));
        }
        Ok(TotalCyclicOrder { arrangement, pos })
    }

    pub fn arrangement(&self) -> &[u8] {
        &self.arrangement
    }

    pub fn len(&self) -> usize {
        self.arrangement.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrangement.is_empty()
    }

    fn holds(&self, x: u8, y: u8, z: u8) -> bool {
        let m = self.len();
        let p = |v: u8| self.pos[v as usize - 1] as usize;
        (p(y) + m - p(x)) % m < (p(z) + m - p(x)) % m
    }

    /// Whether reading around the circle from `x`, `y` comes before `z`.
    pub fn triple_in(&self, x: u8, y: u8, z: u8) -> Result<bool, BijectionError> {
        let m = self.len() as u8;
        let ok = |v: u8| (1..=m).contains(&v);
        if !(ok(x) && ok(y) && ok(z)) || x == y || y == z || x == z {
            return Err(BijectionError::BadTriple(x, y, z));
        }
        Ok(self.holds(x, y, z))
    }

    /// Every triple of the relation, materialized.
    pub fn triples(&self) -> Vec<(u8, u8, u8)> {
        let m = self.len() as u8;
        let mut out = Vec::new();
        for x in 1..=m {
            for y in 1..=m {
                for z in 1..=m {
                    if x != y && y != z && x != z && self.holds(x, y, z) {
                        out.push((x, y, z));
                    }
                }
            }
        }
        out
    }

    /// Checks cyclicity, antisymmetry, transitivity and totality on the
    /// materialized triple set.
    pub fn satisfies_axioms(&self) -> bool {
        let m = self.len();
        let set: std::collections::HashSet<_> = self.triples().into_iter().collect();
        let has = |t: (u8, u8, u8)| set.contains(&t);
        for &(x, y, z) in &set {
            if !has((y, z, x)) || has((z, y, x)) {
                return false;
            }
            for u in 1..=m as u8 {
                if u != x && u != y && u != z && has((x, z, u)) && !has((x, y, u)) {
                    return false;
                }
            }
        }
        for x in 1..=m as u8 {
            for y in 1..=m as u8 {
                for z in 1..=m as u8 {
                    if x != y && y != z && x != z && !has((x, y, z)) && !has((x, z, y)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The first required consecutive triple that is missing, for an order
    /// on `[n + 2]`.
    fn missing_consecutive(&self) -> Option<(u8, u8, u8)> {
        let m = self.len() as u8;
        let next = |v: u8| v % m + 1;
        (1..=m)
            .map(|i| (i, next(i), next(next(i))))
            .find(|&(a, b, c)| !self.holds(a, b, c))
    }

    /// Membership in `R_{m-2}`.
    pub fn in_rn(&self) -> bool {
        self.len() >= 3 && self.missing_consecutive().is_none()
    }
}

impl std::fmt::Display for TotalCyclicOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.arrangement.iter().map(u8::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `{[1~3~2], [2~1~3], [3~2~1]}`.
pub fn cyclic_order_class() -> PatternSet {
    "[1~3~2] [2~1~3] [3~2~1]".parse().expect("valid set")
}

/// `{[1~4,2,3]}`.
pub fn predecessor_class() -> PatternSet {
    "[1~4,2,3]".parse().expect("valid set")
}

/// `{[1~4,3,2]}`.
pub fn zeil_class() -> PatternSet {
    "[1~4,3,2]".parse().expect("valid set")
}

/// Sends `sigma` to the cyclic order in which `(i, j, k)` holds iff
/// `sigma_i sigma_j sigma_k` reduces to 123, 231 or 312. As an arrangement
/// this is the inverse of `sigma`.
pub fn phi(sigma: &CyclicPerm) -> Result<TotalCyclicOrder, BijectionError> {
    if sigma.len() < 3 || !avoids_set(sigma, &cyclic_order_class()) {
        return Err(BijectionError::NotInClass(sigma.clone()));
    }
    TotalCyclicOrder::new(sigma.canonical().inverse().into_values())
}

/// Inverse of [`phi`]: fixes `sigma_1 = 1` and orders the other positions by
/// `sigma_i < sigma_j` iff `(1, i, j)` is in the order.
pub fn psi(z: &TotalCyclicOrder) -> Result<CyclicPerm, BijectionError> {
    if let Some((a, b, c)) = z.missing_consecutive() {
        return Err(BijectionError::NotInRn(a, b, c));
    }
    if z.len() < 3 {
        return Err(BijectionError::BadArrangement(z.arrangement.clone()));
    }
    let m = z.len();
    // Kahn's algorithm over positions 2..=m
    let mut succ = vec![Vec::new(); m + 1];
    let mut indeg = vec![0usize; m + 1];
    for i in 2..=m as u8 {
        for j in 2..=m as u8 {
            if i != j && z.holds(1, i, j) {
                succ[i as usize].push(j as usize);
                indeg[j as usize] += 1;
            }
        }
    }
    let mut ready: Vec<usize> = (2..=m).filter(|&i| indeg[i] == 0).collect();
    let mut values = vec![0u8; m];
    values[0] = 1;
    let mut next = 2u8;
    while let Some(i) = ready.pop() {
        values[i - 1] = next;
        next += 1;
        for &j in &succ[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                ready.push(j);
            }
        }
    }
    if next as usize != m + 1 {
        return Err(BijectionError::CyclicRelation);
    }
    Ok(CyclicPerm::from_canonical_unchecked(values))
}

/// Every member of `R_n`, by filtering all arrangements of `[n + 2]`.
pub fn rn_members(n: usize) -> Result<Vec<TotalCyclicOrder>, BijectionError> {
    if n == 0 || n > RN_MAX {
        return Err(BijectionError::Budget { n, max: RN_MAX });
    }
    let m = n + 2;
    let mut out = Vec::new();
    for_each_permutation(m - 1, |p| {
        let mut arr = Vec::with_capacity(m);
        arr.push(1);
        arr.extend(p.iter().map(|&x| x + 1));
        let z = TotalCyclicOrder::new(arr).expect("valid arrangement");
        if z.in_rn() {
            out.push(z);
        }
    });
    Ok(out)
}

/// `|R_n|` by brute force.
pub fn brute_force_rn(n: usize) -> Result<u64, BijectionError> {
    Ok(rn_members(n)?.len() as u64)
}

/// Removes `n` from a cyclic permutation of length `n >= 2`.
pub fn delete_top(sigma: &CyclicPerm) -> Result<CyclicPerm, BijectionError> {
    if sigma.len() < 2 {
        return Err(BijectionError::Precondition(
            "delete_top needs length at least 2".into(),
        ));
    }
    Ok(sigma.delete_max())
}

/// Inverse of [`delete_top`] on `A(n, i)`: inserts `n` right after `i`.
/// `tau` must avoid `[1~4,2,3]` with `n - 1` preceded by some `j <= i`.
pub fn insert_top_after_predecessor(tau: &CyclicPerm, i: u8) -> Result<CyclicPerm, BijectionError> {
    let n = tau.len() + 1;
    if tau.len() < 2 || i == 0 || i as usize >= n {
        return Err(BijectionError::Precondition(format!(
            "need 1 <= i <= {} for a permutation of length {}",
            n - 1,
            tau.len()
        )));
    }
    if !avoids_set(tau, &predecessor_class()) {
        return Err(BijectionError::NotInClass(tau.clone()));
    }
    let j = tau.predecessor_of_max();
    if j > i {
        return Err(BijectionError::Precondition(format!(
            "{tau} has {j} before its maximum, more than i = {i}"
        )));
    }
    Ok(tau.insert_max_after(i))
}

/// Inverse of [`delete_top`] on `E(n, i)`. With `zeil_reverse(tau) =
/// n - 1 - j`, inserts `n` after `n - 1` when `j = i` and after `i` when
/// `j < i`.
pub fn insert_top_by_zeil(tau: &CyclicPerm, i: usize) -> Result<CyclicPerm, BijectionError> {
    let n = tau.len() + 1;
    if tau.len() < 2 || i + 2 > n {
        return Err(BijectionError::Precondition(format!(
            "need 0 <= i <= {} for a permutation of length {}",
            n.saturating_sub(2),
            tau.len()
        )));
    }
    if !avoids_set(tau, &zeil_class()) {
        return Err(BijectionError::NotInClass(tau.clone()));
    }
    let j = (n - 1) - tau.zeil_reverse();
    match j.cmp(&i) {
        std::cmp::Ordering::Equal => Ok(tau.insert_max_after((n - 1) as u8)),
        std::cmp::Ordering::Less => Ok(tau.insert_max_after(i as u8)),
        std::cmp::Ordering::Greater => Err(BijectionError::Precondition(format!(
            "{tau} has zeil_reverse {}, below n - 1 - i = {}",
            tau.zeil_reverse(),
            n - 1 - i
        ))),
    }
}

fn avoiders(set: &PatternSet, n: usize) -> Result<Vec<CyclicPerm>, BijectionError> {
    Ok(Enumerator::new(set, SearchConfig::default())?.enumerate(n)?)
}

fn group_by<K: Ord>(
    v: Vec<CyclicPerm>,
    key: impl Fn(&CyclicPerm) -> K,
) -> BTreeMap<K, Vec<CyclicPerm>> {
    let mut m: BTreeMap<K, Vec<CyclicPerm>> = BTreeMap::new();
    for s in v {
        m.entry(key(&s)).or_default().push(s);
    }
    m
}

/// Exhaustive check of `phi`/`psi` for `1 <= n <= n_max`: axioms, `R_n`
/// membership, mutual inverses and `|Av_{n+2}| = |R_n|`.
pub fn check_cyclic_order_bijection(n_max: usize) -> Result<Vec<Check>, BijectionError> {
    let mut out = Vec::new();
    for n in 1..=n_max.min(RN_MAX) {
        let av = avoiders(&cyclic_order_class(), n + 2)?;
        let rn = rn_members(n)?;
        out.push(Check::equal(
            format!("|Av_{}| = |R_{n}|", n + 2),
            av.len() as u64,
            rn.len() as u64,
        ));

        let bad = par::first_failure(&av, |s| match phi(s) {
            Ok(z) => z.in_rn() && (n + 2 > 8 || z.satisfies_axioms()) && psi(&z).as_ref() == Ok(s),
            Err(_) => false,
        });
        out.push(Check::new(
            format!("phi then psi is the identity on Av_{}", n + 2),
            bad.map(|i| format!("counterexample {}", av[i])),
        ));

        let bad = par::first_failure(&rn, |z| match psi(z) {
            Ok(s) => avoids_set(&s, &cyclic_order_class()) && phi(&s).as_ref() == Ok(z),
            Err(_) => false,
        });
        out.push(Check::new(
            format!("psi then phi is the identity on R_{n}"),
            bad.map(|i| format!("counterexample {}", rn[i])),
        ));
    }
    Ok(out)
}

/// Exhaustive check of the predecessor refinement of `[1~4,2,3]` for
/// `4 <= n <= n_max`: `|A(n,i)| = T(n-2, i-1)` and delete/insert are
/// mutually inverse between `A(n,i)` and `A(n-1,1) u ... u A(n-1,i)`.
pub fn check_predecessor_refinement(n_max: usize) -> Result<Vec<Check>, BijectionError> {
    let class = predecessor_class();
    let mut out = Vec::new();
    let mut prev = group_by(avoiders(&class, 3)?, |s| s.predecessor_of_max());
    for n in 4..=n_max {
        let cur = group_by(avoiders(&class, n)?, |s| s.predecessor_of_max());
        let mut sizes = Vec::new();
        let mut failure = None;
        for i in 1..n as u8 {
            let a: &[CyclicPerm] = cur.get(&i).map_or(&[], |v| v);
            let t = catalan_triangle(n as u64 - 2, i as u64 - 1).expect("in range");
            sizes.push((a.len() as u64, t.try_into().unwrap_or(u64::MAX)));
            let b: Vec<CyclicPerm> = prev
                .range(..=i)
                .flat_map(|(_, v)| v.iter().cloned())
                .collect();
            if failure.is_none() {
                let bad = par::first_failure(a, |s| {
                    delete_top(s).is_ok_and(|t| {
                        t.predecessor_of_max() <= i
                            && insert_top_after_predecessor(&t, i).as_ref() == Ok(s)
                    })
                });
                failure = bad.map(|k| format!("A({n},{i}) element {}", a[k]));
            }
            if failure.is_none() {
                let bad = par::first_failure(&b, |t| {
                    insert_top_after_predecessor(t, i).is_ok_and(|s| {
                        s.predecessor_of_max() == i
                            && avoids_set(&s, &class)
                            && s.delete_max() == *t
                    })
                });
                failure = bad.map(|k| format!("B({n},{i}) element {}", b[k]));
            }
        }
        out.push(Check::equal_lists(
            format!("|A({n},i)| = T({},i-1)", n - 2),
            &sizes,
        ));
        out.push(Check::new(
            format!("delete/insert round trips at n = {n}"),
            failure,
        ));
        prev = cur;
    }
    Ok(out)
}

/// Exhaustive check of the `zeil_reverse` refinement of `[1~4,3,2]` for
/// `4 <= n <= n_max`: `|E(n,i)| = T(n-2, i)` and delete/insert are mutually
/// inverse between `E(n,i)` and `E(n-1,0) u ... u E(n-1,i)`.
pub fn check_zeil_refinement(n_max: usize) -> Result<Vec<Check>, BijectionError> {
    let class = zeil_class();
    let mut out = Vec::new();
    let key = |s: &CyclicPerm| s.len() - s.zeil_reverse();
    let mut prev = group_by(avoiders(&class, 3)?, key);
    for n in 4..=n_max {
        let cur = group_by(avoiders(&class, n)?, key);
        let mut sizes = Vec::new();
        let mut failure = None;
        for i in 0..=n - 2 {
            let e: &[CyclicPerm] = cur.get(&i).map_or(&[], |v| v);
            let t = catalan_triangle(n as u64 - 2, i as u64).expect("in range");
            sizes.push((e.len() as u64, t.try_into().unwrap_or(u64::MAX)));
            let f: Vec<CyclicPerm> = prev
                .range(..=i)
                .flat_map(|(_, v)| v.iter().cloned())
                .collect();
            if failure.is_none() {
                let bad = par::first_failure(e, |s| {
                    delete_top(s)
                        .is_ok_and(|t| key(&t) <= i && insert_top_by_zeil(&t, i).as_ref() == Ok(s))
                });
                failure = bad.map(|k| format!("E({n},{i}) element {}", e[k]));
            }
            if failure.is_none() {
                let bad = par::first_failure(&f, |t| {
                    insert_top_by_zeil(t, i).is_ok_and(|s| {
                        key(&s) == i && avoids_set(&s, &class) && s.delete_max() == *t
                    })
                });
                failure = bad.map(|k| format!("F({n},{i}) element {}", f[k]));
            }
        }
        out.push(Check::equal_lists(
            format!("|E({n},i)| = T({},i)", n - 2),
            &sizes,
        ));
        out.push(Check::new(
            format!("delete/insert round trips at n = {n}"),
            failure,
        ));
        prev = cur;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[u8]) -> TotalCyclicOrder {
        TotalCyclicOrder::new(v.to_vec()).unwrap()
    }

    #[test]
    fn triple_examples() {
        assert_eq!(z(&[1, 2, 3]).triple_in(1, 2, 3), Ok(true));
        assert_eq!(z(&[1, 2, 3]).triple_in(3, 2, 1), Ok(false));
        assert_eq!(z(&[1, 3, 2]).triple_in(2, 1, 3), Ok(true));
        assert!(z(&[1, 2, 3]).triple_in(1, 1, 3).is_err());
        assert!(TotalCyclicOrder::new(vec![2, 1, 3]).is_err());
    }

    #[test]
    fn smallest_cases() {
        assert_eq!(brute_force_rn(1), Ok(1));
        let id = CyclicPerm::increasing(3);
        assert_eq!(phi(&id).unwrap(), z(&[1, 2, 3]));
        assert_eq!(psi(&z(&[1, 2, 3])).unwrap(), id);
        assert!(phi(&"[1,3,2]".parse().unwrap()).is_err());
        assert!(matches!(
            psi(&z(&[1, 3, 2])),
            Err(BijectionError::NotInRn(..))
        ));
        assert!(matches!(
            brute_force_rn(8),
            Err(BijectionError::Budget { .. })
        ));
    }

    #[test]
    fn insert_preconditions() {
        let tau: CyclicPerm = "[1,2,3]".parse().unwrap();
        assert_eq!(
            insert_top_after_predecessor(&tau, 1),
            Err(BijectionError::Precondition(
                "[1,2,3] has 2 before its maximum, more than i = 1".into()
            ))
        );
        assert_eq!(
            insert_top_after_predecessor(&tau, 2).unwrap(),
            "[1,2,4,3]".parse().unwrap()
        );
        assert_eq!(
            insert_top_after_predecessor(&tau, 3).unwrap(),
            "[1,2,3,4]".parse().unwrap()
        );
        assert!(insert_top_by_zeil(&tau, 5).is_err());
    }

    #[test]
    fn all_suites_pass_small() {
        for c in check_cyclic_order_bijection(5).unwrap() {
            assert!(c.passed, "{c:?}");
        }
        for c in check_predecessor_refinement(7).unwrap() {
            assert!(c.passed, "{c:?}");
        }
        for c in check_zeil_refinement(7).unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }
}
