//! Containment of vincular patterns in linear and cyclic permutations.
//!
//! The core is [`LinearMatcher`], a backtracking search that places pattern
//! entries from right to left. Placing right to left lets the enumerator ask
//! "is there an occurrence ending at the entry just appended?" without
//! scanning the whole prefix.
//!
//! Cyclic containment has two implementations:
//!
//! * [`contains_cyclic_by_rotation`] runs the linear matcher on every
//!   rotation of the host. It is the reference.
//! * [`CyclicMatcher`] works on the canonical linear host only. An
//!   occurrence that does not use the host's seam adjacency is a linear
//!   occurrence of a seam-free rotation of the pattern; one that does use it
//!   as a bond is a linear occurrence of the corresponding seam-bonded
//!   rotation pinned to the first and last host entries.
//!
//! Totally vincular sets get a third path, [`WindowMatcher`], which ranks
//! each cyclic window of the host and looks it up in a table.

use std::ops::ControlFlow;

use crate::pattern::{Pattern, PatternSet};
use crate::perm::{CyclicPerm, LinearPerm};

/// A linear vincular pattern compiled for repeated matching.
#[derive(Debug, Clone)]
pub struct LinearMatcher {
    values: Vec<u8>,
    /// `bond_after[j]`: entries `j` and `j + 1` must be adjacent.
    bond_after: Vec<bool>,
    /// Among entries right of `j`, the one with the largest smaller value.
    lower: Vec<Option<usize>>,
    /// Among entries right of `j`, the one with the smallest larger value.
    upper: Vec<Option<usize>>,
}

impl LinearMatcher {
    /// Compiles the stored representative of `p` read as a linear pattern.
    pub fn new(p: &Pattern) -> Self {
        let values = p.values().to_vec();
        let k = values.len();
        let bond_after = (0..k).map(|j| p.has_bond(j + 1)).collect();
        let mut lower = vec![None; k];
        let mut upper = vec![None; k];
        for j in 0..k {
            for i in j + 1..k {
                if values[i] < values[j] {
                    if lower[j].is_none_or(|l: usize| values[l] < values[i]) {
                        lower[j] = Some(i);
                    }
                } else if upper[j].is_none_or(|u: usize| values[u] > values[i]) {
                    upper[j] = Some(i);
                }
            }
        }
        LinearMatcher {
            values,
            bond_after,
            lower,
            upper,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Visits occurrences (0-based index tuples). `first` / `last` pin the
    /// host index of the first / last pattern entry. Visiting stops when the
    /// callback breaks; the return value says whether it did.
    pub fn search(
        &self,
        host: &[u8],
        first: Option<usize>,
        last: Option<usize>,
        f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> bool {
        let k = self.len();
        let n = host.len();
        if k == 0 || n < k {
            return false;
        }
        let min_first = first.unwrap_or(0);
        if min_first + k > n {
            return false;
        }
        let mut idx = vec![0usize; k];
        let (lo, hi) = match last {
            Some(l) => {
                if l >= n || l < min_first + k - 1 {
                    return false;
                }
                (l, l)
            }
            None => (min_first + k - 1, n - 1),
        };
        for end in lo..=hi {
            if k == 1 && first.is_some_and(|s| s != end) {
                continue;
            }
            idx[k - 1] = end;
            if self.place(host, k - 1, &mut idx, first, f).is_break() {
                return true;
            }
        }
        false
    }

    fn place(
        &self,
        host: &[u8],
        placed: usize,
        idx: &mut [usize],
        first: Option<usize>,
        f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if placed == 0 {
            return f(idx);
        }
        let j = placed - 1;
        let right = idx[placed];
        let min = first.unwrap_or(0) + j;
        if right == 0 || right - 1 < min {
            return ControlFlow::Continue(());
        }
        let (from, to) = if self.bond_after[j] {
            (right - 1, right - 1)
        } else if j == 0 && first.is_some() {
            (min, min)
        } else {
            (min, right - 1)
        };
        if j == 0 && first.is_some() && from != min {
            return ControlFlow::Continue(());
        }
        let lo_val = self.lower[j].map(|l| host[idx[l]]);
        let hi_val = self.upper[j].map(|u| host[idx[u]]);
        for c in (from..=to).rev() {
            let v = host[c];
            if lo_val.is_some_and(|x| v < x) || hi_val.is_some_and(|x| v > x) {
                continue;
            }
            idx[j] = c;
            self.place(host, j, idx, first, f)?;
        }
        ControlFlow::Continue(())
    }

    pub fn occurs_in(&self, host: &[u8]) -> bool {
        self.search(host, None, None, &mut |_| ControlFlow::Break(()))
    }

    /// An occurrence whose last entry sits at host index `last`.
    pub fn occurs_ending_at(&self, host: &[u8], last: usize) -> bool {
        self.search(host, None, Some(last), &mut |_| ControlFlow::Break(()))
    }

    /// An occurrence spanning from host index `first` to `last` inclusive.
    pub fn occurs_pinned(&self, host: &[u8], first: usize, last: usize) -> bool {
        self.search(host, Some(first), Some(last), &mut |_| {
            ControlFlow::Break(())
        })
    }
}

/// Linear containment of the stored representative of `p` in `sigma`.
pub fn contains_linear(sigma: &LinearPerm, p: &Pattern) -> bool {
    LinearMatcher::new(p).occurs_in(sigma.values())
}

/// All occurrences as 1-based index tuples in lexicographic order.
pub fn occurrences_linear(sigma: &LinearPerm, p: &Pattern) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    LinearMatcher::new(p).search(sigma.values(), None, None, &mut |idx| {
        out.push(idx.iter().map(|&i| i + 1).collect());
        ControlFlow::Continue(())
    });
    out.sort();
    out
}

/// Reference cyclic containment: some rotation of `sigma` contains the
/// canonical representative of `p` linearly.
pub fn contains_cyclic_by_rotation(sigma: &CyclicPerm, p: &Pattern) -> bool {
    contains_cyclic_via(sigma, p)
}

/// Cyclic containment through an explicit representative: `rep` is read as
/// a linear pattern and matched against every rotation of `sigma`.
pub fn contains_cyclic_via(sigma: &CyclicPerm, rep: &Pattern) -> bool {
    if sigma.len() < rep.len() {
        return false;
    }
    let m = LinearMatcher::new(rep);
    sigma.rotations().iter().any(|r| m.occurs_in(r.values()))
}

/// Compiled cyclic pattern matched against canonical linear hosts.
#[derive(Debug, Clone)]
pub struct CyclicMatcher {
    k: usize,
    free: Vec<LinearMatcher>,
    seam: Vec<LinearMatcher>,
}

impl CyclicMatcher {
    pub fn new(p: &Pattern) -> Self {
        let mut free = Vec::new();
        let mut seam = Vec::new();
        let mut seen_free = Vec::new();
        let mut seen_seam = Vec::new();
        for (rot, wraps) in p.rotations() {
            let (list, seen) = if wraps {
                (&mut seam, &mut seen_seam)
            } else {
                (&mut free, &mut seen_free)
            };
            if !seen.contains(&rot) {
                list.push(LinearMatcher::new(&rot));
                seen.push(rot);
            }
        }
        CyclicMatcher {
            k: p.len(),
            free,
            seam,
        }
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    /// Full cyclic containment in the cyclic permutation whose linear
    /// representative is `host` (any rotation works).
    pub fn occurs_in(&self, host: &[u8]) -> bool {
        let n = host.len();
        if n < self.k {
            return false;
        }
        self.free.iter().any(|m| m.occurs_in(host)) || self.occurs_across_seam(host)
    }

    /// Occurrences that use the host adjacency `host[n-1] -> host[0]` as a
    /// bond.
    pub fn occurs_across_seam(&self, host: &[u8]) -> bool {
        let n = host.len();
        n >= self.k && self.seam.iter().any(|m| m.occurs_pinned(host, 0, n - 1))
    }

    /// A seam-free occurrence ending exactly at `last`; used to prune
    /// prefixes.
    pub fn occurs_ending_at(&self, host: &[u8], last: usize) -> bool {
        self.free.iter().any(|m| m.occurs_ending_at(host, last))
    }
}

pub fn contains_cyclic(sigma: &CyclicPerm, p: &Pattern) -> bool {
    if p.is_totally_vincular() && p.len() <= WindowMatcher::MAX_K {
        return WindowMatcher::single(p).occurs_in(sigma.values());
    }
    CyclicMatcher::new(p).occurs_in(sigma.values())
}

/// True iff `sigma` contains no member of `set`.
pub fn avoids_set(sigma: &CyclicPerm, set: &PatternSet) -> bool {
    SetMatcher::new(set).avoided_by(sigma.values())
}

/// Rank of the reduction of `w` among permutations of its length, in
/// lexicographic order.
fn rank_window(w: &[u8]) -> usize {
    let k = w.len();
    let mut code = 0usize;
    for i in 0..k {
        let smaller = w[i + 1..].iter().filter(|&&x| x < w[i]).count();
        code = code * (k - i) + smaller;
    }
    code
}

/// Table-driven matcher for a set of totally vincular patterns of one
/// length.
#[derive(Debug, Clone)]
pub struct WindowMatcher {
    k: usize,
    forbidden: Vec<bool>,
}

impl WindowMatcher {
    /// Largest window length served by a lookup table.
    pub const MAX_K: usize = 9;

    pub fn new(set: &PatternSet) -> Option<Self> {
        let k = set.pattern_len()?;
        if k > Self::MAX_K || !set.is_totally_vincular() {
            return None;
        }
        let size: usize = (1..=k).product();
        let mut forbidden = vec![false; size];
        for p in set {
            forbidden[rank_window(p.values())] = true;
        }
        Some(WindowMatcher { k, forbidden })
    }

    fn single(p: &Pattern) -> Self {
        let set = PatternSet::new([p.clone()]).expect("single pattern");
        Self::new(&set).expect("totally vincular")
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    /// The window of `k` entries ending at `last` (no wrap-around).
    #[inline]
    pub fn window_forbidden(&self, host: &[u8], last: usize) -> bool {
        last + 1 >= self.k && self.forbidden[rank_window(&host[last + 1 - self.k..=last])]
    }

    /// Windows that wrap from the end of `host` back to its start.
    pub fn seam_forbidden(&self, host: &[u8]) -> bool {
        let n = host.len();
        let k = self.k;
        if n < k || k < 2 {
            return false;
        }
        let mut buf = [0u8; Self::MAX_K];
        for start in n - k + 1..n {
            for (j, b) in buf[..k].iter_mut().enumerate() {
                *b = host[(start + j) % n];
            }
            if self.forbidden[rank_window(&buf[..k])] {
                return true;
            }
        }
        false
    }

    /// Some cyclic window of `host` is forbidden.
    pub fn occurs_in(&self, host: &[u8]) -> bool {
        let n = host.len();
        if n < self.k {
            return false;
        }
        (self.k - 1..n).any(|l| self.window_forbidden(host, l)) || self.seam_forbidden(host)
    }
}

/// Matcher for a whole pattern set of cyclic patterns.
#[derive(Debug, Clone)]
pub enum SetMatcher {
    Window(WindowMatcher),
    General(Vec<CyclicMatcher>),
}

impl SetMatcher {
    pub fn new(set: &PatternSet) -> Self {
        match WindowMatcher::new(set) {
            Some(w) => SetMatcher::Window(w),
            None => SetMatcher::General(set.iter().map(CyclicMatcher::new).collect()),
        }
    }

    /// Same as [`SetMatcher::new`] but never takes the window path.
    pub fn general(set: &PatternSet) -> Self {
        SetMatcher::General(set.iter().map(CyclicMatcher::new).collect())
    }

    /// Whether a prefix whose last entry is at `last` already contains a
    /// seam-free occurrence ending there.
    #[inline]
    pub fn prefix_hit(&self, prefix: &[u8], last: usize) -> bool {
        match self {
            SetMatcher::Window(w) => w.window_forbidden(prefix, last),
            SetMatcher::General(ms) => ms.iter().any(|m| m.occurs_ending_at(prefix, last)),
        }
    }

    /// Occurrences that need the completed cycle.
    #[inline]
    pub fn seam_hit(&self, host: &[u8]) -> bool {
        match self {
            SetMatcher::Window(w) => w.seam_forbidden(host),
            SetMatcher::General(ms) => ms.iter().any(|m| m.occurs_across_seam(host)),
        }
    }

    pub fn avoided_by(&self, host: &[u8]) -> bool {
        match self {
            SetMatcher::Window(w) => !w.occurs_in(host),
            SetMatcher::General(ms) => !ms.iter().any(|m| m.occurs_in(host)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{all_totally_vincular, PatternKind};
    use crate::perm::for_each_cyclic;

    fn lp(s: &str) -> LinearPerm {
        s.parse().unwrap()
    }

    fn cp(s: &str) -> CyclicPerm {
        s.parse().unwrap()
    }

    fn pat(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    #[test]
    fn linear_examples() {
        assert!(contains_linear(&lp("3,4,2,5,1"), &pat("2~1,3")));
        assert_eq!(
            occurrences_linear(&lp("3,4,2,5,1"), &pat("2~1,3")),
            vec![vec![2, 3, 4]]
        );
        assert!(!contains_linear(&lp("1,4,2,3"), &pat("1~2,3")));
        assert!(!contains_linear(&lp("1,2"), &pat("1,2,3")));
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(
            occurrences_linear(&lp("3,4,2,5,1"), &pat("2,1,3")),
            vec![vec![1, 3, 4], vec![2, 3, 4]]
        );
        assert_eq!(
            occurrences_linear(&lp("1,2,3"), &pat("1~2~3")),
            vec![vec![1, 2, 3]]
        );
        assert!(occurrences_linear(&lp("3,2,1"), &pat("1,2")).is_empty());
    }

    #[test]
    fn cyclic_examples() {
        for n in 3..9 {
            assert!(contains_cyclic(&CyclicPerm::increasing(n), &pat("[1~2~3]")));
            assert!(!contains_cyclic(
                &CyclicPerm::decreasing(n),
                &pat("[1~2,3]")
            ));
        }
        assert!(!contains_cyclic(&cp("[1,3,2]"), &pat("[1~2~3]")));
    }

    #[test]
    fn avoids_set_examples() {
        let s: PatternSet = "[1~2~3] [3~2~1]".parse().unwrap();
        assert!(!avoids_set(&cp("[1,2,3,4]"), &s));
        assert!(avoids_set(&cp("[1,2]"), &s));
        let classical: PatternSet = "[1,2,3]".parse().unwrap();
        assert!(avoids_set(&CyclicPerm::decreasing(6), &classical));
    }

    /// Brute-force occurrence test straight from the definition.
    fn brute_linear(host: &[u8], p: &Pattern) -> bool {
        let n = host.len();
        let k = p.len();
        if n < k {
            return false;
        }
        let mut found = false;
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let bonds_ok = p.bond_slots().iter().all(|&s| idx[s] == idx[s - 1] + 1);
            let order_ok = (0..k).all(|a| {
                (0..k).all(|b| (host[idx[a]] < host[idx[b]]) == (p.values()[a] < p.values()[b]))
            });
            if bonds_ok && order_ok {
                found = true;
                break;
            }
            // next combination
            let mut i = k;
            loop {
                if i == 0 {
                    return found;
                }
                i -= 1;
                if idx[i] < n - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
        found
    }

    fn all_patterns(k: usize, kind: PatternKind) -> Vec<Pattern> {
        let mut out = Vec::new();
        crate::perm::for_each_permutation(k, |v| {
            for mask in 0..(1u32 << (k - 1)) {
                let slots: Vec<usize> = (1..k).filter(|s| mask & (1 << (s - 1)) != 0).collect();
                out.push(match kind {
                    PatternKind::Linear => Pattern::linear(v.to_vec(), &slots).unwrap(),
                    PatternKind::Cyclic => Pattern::cyclic(v.to_vec(), &slots).unwrap(),
                });
            }
        });
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn linear_matcher_agrees_with_definition() {
        for k in 1..=4 {
            let pats = all_patterns(k, PatternKind::Linear);
            for n in 1..=6 {
                crate::perm::for_each_permutation(n, |h| {
                    for p in &pats {
                        assert_eq!(
                            LinearMatcher::new(p).occurs_in(h),
                            brute_linear(h, p),
                            "{p} in {h:?}"
                        );
                    }
                });
            }
        }
    }

    #[test]
    fn seam_decomposition_agrees_with_rotation() {
        for k in 1..=4 {
            let pats = all_patterns(k, PatternKind::Cyclic);
            for n in 1..=7 {
                for_each_cyclic(n, |c| {
                    for p in &pats {
                        let reference = contains_cyclic_by_rotation(c, p);
                        assert_eq!(
                            CyclicMatcher::new(p).occurs_in(c.values()),
                            reference,
                            "{p} {c}"
                        );
                        assert_eq!(contains_cyclic(c, p), reference, "{p} {c}");
                    }
                });
            }
        }
    }

    #[test]
    fn window_scan_agrees_with_general() {
        for k in 1..=4 {
            let tv = all_totally_vincular(k, PatternKind::Cyclic);
            for n in 1..=8 {
                for_each_cyclic(n, |c| {
                    for p in &tv {
                        let w = WindowMatcher::single(p).occurs_in(c.values());
                        assert_eq!(w, CyclicMatcher::new(p).occurs_in(c.values()), "{p} {c}");
                        let window_hit = n >= k
                            && (0..n).any(|s| {
                                let win: Vec<u8> =
                                    (0..k).map(|j| c.values()[(s + j) % n]).collect();
                                crate::perm::reduce_u8(&win) == p.values()
                            });
                        assert_eq!(w, window_hit);
                    }
                });
            }
        }
    }

    #[test]
    fn ascent_and_descent_everywhere() {
        let up = pat("[1~2]");
        let down = pat("[2~1]");
        for n in 2..=8 {
            for_each_cyclic(n, |c| {
                assert!(contains_cyclic(c, &up) && contains_cyclic(c, &down));
            });
        }
    }

    #[test]
    fn rank_window_is_lexicographic_rank() {
        let mut expected = 0;
        crate::perm::for_each_permutation(4, |p| {
            assert_eq!(rank_window(p), expected);
            expected += 1;
        });
        assert_eq!(rank_window(&[10, 30, 20]), rank_window(&[1, 3, 2]));
    }
}
