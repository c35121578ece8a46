//! Linear and cyclic permutations with the primitive maps used everywhere
//! else: reduction, rotation, the dihedral symmetries, and the Zeilberger
//! statistic.
//!
//! Values are stored as `u8`, so lengths up to 255 are representable. All
//! contracts are 1-based in values; slices are indexed from 0 internally.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Errors raised when building permutations from raw input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("empty sequence")]
    Empty,
    #[error("duplicate element {0}")]
    Duplicate(i64),
    #[error("sequence of length {0} exceeds the supported maximum of 255")]
    TooLong(usize),
    #[error("not a permutation of [{n}]: value {value} out of range")]
    OutOfRange { n: usize, value: i64 },
    #[error("cannot parse permutation `{0}`")]
    Syntax(String),
}

/// A permutation of `[n]` in one-line notation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearPerm(Vec<u8>);

/// A rotation class of linear permutations, stored as the rotation that
/// starts with value 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicPerm(LinearPerm);

/// Reduces a sequence of distinct integers to the permutation of `[n]` with
/// the same relative order.
pub fn reduce(seq: &[i64]) -> Result<LinearPerm, PermError> {
    if seq.is_empty() {
        return Err(PermError::Empty);
    }
    if seq.len() > u8::MAX as usize {
        return Err(PermError::TooLong(seq.len()));
    }
    let mut order: Vec<usize> = (0..seq.len()).collect();
    order.sort_by_key(|&i| seq[i]);
    for w in order.windows(2) {
        if seq[w[0]] == seq[w[1]] {
            return Err(PermError::Duplicate(seq[w[0]]));
        }
    }
    let mut values = vec![0u8; seq.len()];
    for (rank, &i) in order.iter().enumerate() {
        values[i] = (rank + 1) as u8;
    }
    Ok(LinearPerm(values))
}

/// Reduction of a slice of already-distinct small values.
#[cfg(test)]
pub(crate) fn reduce_u8(seq: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; seq.len()];
    for (i, &v) in seq.iter().enumerate() {
        let below = seq.iter().filter(|&&w| w < v).count();
        out[i] = below as u8 + 1;
    }
    out
}

impl LinearPerm {
    /// Validates that `values` is a permutation of `[n]`.
    pub fn new(values: Vec<u8>) -> Result<Self, PermError> {
        let n = values.len();
        if n == 0 {
            return Err(PermError::Empty);
        }
        if n > u8::MAX as usize {
            return Err(PermError::TooLong(n));
        }
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v as usize > n {
                return Err(PermError::OutOfRange { n, value: v as i64 });
            }
            if seen[v as usize] {
                return Err(PermError::Duplicate(v as i64));
            }
            seen[v as usize] = true;
        }
        Ok(LinearPerm(values))
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u8>) -> Self {
        debug_assert!(LinearPerm::new(values.clone()).is_ok());
        LinearPerm(values)
    }

    pub fn identity(n: usize) -> Self {
        LinearPerm((1..=n as u8).collect())
    }

    pub fn decreasing(n: usize) -> Self {
        LinearPerm((1..=n as u8).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u8] {
        &self.0
    }

    pub fn into_values(self) -> Vec<u8> {
        self.0
    }

    /// Rotation starting at 0-based index `start`.
    pub fn rotate(&self, start: usize) -> LinearPerm {
        let n = self.len();
        let s = start % n;
        let mut v = Vec::with_capacity(n);
        v.extend_from_slice(&self.0[s..]);
        v.extend_from_slice(&self.0[..s]);
        LinearPerm(v)
    }

    /// All `n` rotations, the first being `self`.
    pub fn rotations(&self) -> Vec<LinearPerm> {
        (0..self.len()).map(|s| self.rotate(s)).collect()
    }

    pub fn reverse(&self) -> LinearPerm {
        LinearPerm(self.0.iter().rev().copied().collect())
    }

    pub fn complement(&self) -> LinearPerm {
        let top = self.len() as u8 + 1;
        LinearPerm(self.0.iter().map(|&v| top - v).collect())
    }

    pub fn reverse_complement(&self) -> LinearPerm {
        self.complement().reverse()
    }

    pub fn inverse(&self) -> LinearPerm {
        let mut inv = vec![0u8; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize - 1] = i as u8 + 1;
        }
        LinearPerm(inv)
    }

    pub fn canonicalize(&self) -> CyclicPerm {
        let at = self
            .0
            .iter()
            .position(|&v| v == 1)
            .expect("value 1 present");
        CyclicPerm(self.rotate(at))
    }

    /// Largest `m` such that `n, n-1, ..., n-m+1` is a subsequence.
    pub fn zeil(&self) -> usize {
        zeil_linear(&self.0)
    }

    pub fn zeil_reverse(&self) -> usize {
        self.reverse().zeil()
    }
}

fn zeil_linear(values: &[u8]) -> usize {
    let n = values.len();
    let mut pos = vec![0usize; n + 1];
    for (i, &v) in values.iter().enumerate() {
        pos[v as usize] = i;
    }
    let mut len = 1;
    let mut v = n;
    while v > 1 && pos[v - 1] > pos[v] {
        len += 1;
        v -= 1;
    }
    len
}

impl CyclicPerm {
    /// Builds the rotation class of any linear representative.
    pub fn from_linear(p: &LinearPerm) -> Self {
        p.canonicalize()
    }

    pub fn new(values: Vec<u8>) -> Result<Self, PermError> {
        Ok(LinearPerm::new(values)?.canonicalize())
    }

    pub(crate) fn from_canonical_unchecked(values: Vec<u8>) -> Self {
        debug_assert_eq!(values.first(), Some(&1));
        CyclicPerm(LinearPerm::from_vec_unchecked(values))
    }

    /// `[1, 2, ..., n]`
    pub fn increasing(n: usize) -> Self {
        CyclicPerm(LinearPerm::identity(n))
    }

    /// `[n, ..., 2, 1]`, stored as `1, n, n-1, ..., 2`.
    pub fn decreasing(n: usize) -> Self {
        LinearPerm::decreasing(n).canonicalize()
    }

    pub fn canonical(&self) -> &LinearPerm {
        &self.0
    }

    pub fn values(&self) -> &[u8] {
        self.0.values()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rotations(&self) -> Vec<LinearPerm> {
        self.0.rotations()
    }

    pub fn reverse(&self) -> CyclicPerm {
        self.0.reverse().canonicalize()
    }

    pub fn complement(&self) -> CyclicPerm {
        self.0.complement().canonicalize()
    }

    pub fn reverse_complement(&self) -> CyclicPerm {
        self.0.reverse_complement().canonicalize()
    }

    /// Maximum of the linear statistic over all rotations.
    pub fn zeil(&self) -> usize {
        // Rotating so that n comes first is optimal: the longest run
        // n, n-1, ..., i read cyclically starting from n.
        let n = self.len();
        let at = self.values().iter().position(|&v| v as usize == n).unwrap();
        zeil_linear(self.0.rotate(at).values())
    }

    pub fn zeil_reverse(&self) -> usize {
        self.reverse().zeil()
    }

    /// The element cyclically preceding the maximum `n`.
    pub fn predecessor_of_max(&self) -> u8 {
        let v = self.values();
        let n = v.len();
        let at = v.iter().position(|&x| x as usize == n).unwrap();
        v[(at + n - 1) % n]
    }

    /// Removes the value `n` and returns the resulting cyclic permutation of
    /// `[n-1]`. Requires `n >= 2`.
    pub fn delete_max(&self) -> CyclicPerm {
        let n = self.len() as u8;
        let v: Vec<u8> = self.values().iter().copied().filter(|&x| x != n).collect();
        CyclicPerm::from_canonical_unchecked(v)
    }

    /// Inserts the value `n + 1` immediately after `after`.
    pub fn insert_max_after(&self, after: u8) -> CyclicPerm {
        let top = self.len() as u8 + 1;
        let mut v = Vec::with_capacity(self.len() + 1);
        for &x in self.values() {
            v.push(x);
            if x == after {
                v.push(top);
            }
        }
        CyclicPerm::from_canonical_unchecked(v)
    }
}

impl fmt::Display for LinearPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_csv(f, &self.0)
    }
}

impl fmt::Debug for LinearPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearPerm({self})")
    }
}

impl fmt::Display for CyclicPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        write_csv(f, self.values())?;
        f.write_str("]")
    }
}

impl fmt::Debug for CyclicPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicPerm({self})")
    }
}

fn write_csv(f: &mut fmt::Formatter<'_>, values: &[u8]) -> fmt::Result {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

fn parse_csv(s: &str) -> Result<Vec<u8>, PermError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u8>()
                .map_err(|_| PermError::Syntax(s.to_string()))
        })
        .collect()
}

impl FromStr for LinearPerm {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(PermError::Empty);
        }
        let s = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .unwrap_or(s);
        // One-digit shorthand: "1342".
        if s.len() > 1 && s.bytes().all(|b| b.is_ascii_digit()) {
            return LinearPerm::new(s.bytes().map(|b| b - b'0').collect());
        }
        LinearPerm::new(parse_csv(s)?)
    }
}

impl FromStr for CyclicPerm {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| PermError::Syntax(s.to_string()))?;
        CyclicPerm::new(parse_csv(inner)?)
    }
}

/// Calls `f` on every permutation of `[n]` in lexicographic order.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[u8])) {
    let mut v: Vec<u8> = (1..=n as u8).collect();
    loop {
        f(&v);
        if !next_permutation(&mut v) {
            break;
        }
    }
}

/// Every cyclic permutation of `[n]` (canonical forms, lexicographic order).
pub fn for_each_cyclic(n: usize, mut f: impl FnMut(&CyclicPerm)) {
    if n == 0 {
        return;
    }
    let mut tail: Vec<u8> = (2..=n as u8).collect();
    loop {
        let mut v = Vec::with_capacity(n);
        v.push(1);
        v.extend_from_slice(&tail);
        f(&CyclicPerm::from_canonical_unchecked(v));
        if !next_permutation(&mut tail) {
            break;
        }
    }
}

pub(crate) fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LinearPerm {
        s.parse().unwrap()
    }

    fn cp(s: &str) -> CyclicPerm {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(&[3, 6, 2, 5, 4]).unwrap(), lp("2,5,1,4,3"));
        assert_eq!(reduce(&[1, 2, 3]).unwrap(), lp("1,2,3"));
        assert_eq!(reduce(&[4, 2, 5]).unwrap(), lp("2,1,3"));
        assert_eq!(reduce(&[4, 2, 4]), Err(PermError::Duplicate(4)));
        assert_eq!(reduce(&[]), Err(PermError::Empty));
    }

    #[test]
    fn rotations_examples() {
        let r = lp("1,2,3").rotations();
        assert_eq!(r, vec![lp("1,2,3"), lp("2,3,1"), lp("3,1,2")]);
        assert_eq!(lp("1").rotations(), vec![lp("1")]);
        assert_eq!(lp("2,1").rotations(), vec![lp("2,1"), lp("1,2")]);
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(lp("3,1,2").canonicalize().values(), &[1, 2, 3]);
        assert_eq!(
            lp("1,3,6,2,5,4").canonicalize().values(),
            &[1, 3, 6, 2, 5, 4]
        );
        assert_eq!(
            lp("6,2,5,4,1,3").canonicalize().values(),
            &[1, 3, 6, 2, 5, 4]
        );
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(lp("1,3,2").reverse(), lp("2,3,1"));
        assert_eq!(lp("1,3,2").complement(), lp("3,1,2"));
        assert_eq!(cp("[1,2,3,4]").reverse_complement(), cp("[1,2,3,4]"));
    }

    #[test]
    fn zeil_examples() {
        assert_eq!(cp("[1,3,6,2,5,4]").zeil(), 4);
        assert_eq!(lp("1,3,6,2,5,4").zeil(), 3);
        for n in 1..8 {
            assert_eq!(CyclicPerm::increasing(n).zeil_reverse(), n);
        }
    }

    #[test]
    fn cyclic_zeil_is_max_over_rotations() {
        for n in 1..=8 {
            for_each_cyclic(n, |c| {
                let brute = c.rotations().iter().map(|r| r.zeil()).max().unwrap();
                assert_eq!(c.zeil(), brute, "{c}");
                assert_eq!(c.zeil_reverse(), c.reverse().zeil());
                if n >= 2 {
                    assert!((2..=n).contains(&c.zeil()));
                }
            });
        }
    }

    #[test]
    fn invariants_small() {
        for n in 1..=6 {
            for_each_permutation(n, |v| {
                let p = LinearPerm::new(v.to_vec()).unwrap();
                let wide: Vec<i64> = v.iter().map(|&x| x as i64).collect();
                assert_eq!(reduce(&wide).unwrap(), p);
                let c = p.canonicalize();
                for r in p.rotations() {
                    assert_eq!(r.canonicalize(), c);
                }
                assert_eq!(p.reverse().reverse(), p);
                assert_eq!(p.complement().complement(), p);
                assert_eq!(p.reverse_complement(), p.complement().reverse());
                assert_eq!(p.reverse().zeil(), p.zeil_reverse());
            });
        }
    }

    #[test]
    fn cyclic_count() {
        let mut c = 0;
        for_each_cyclic(6, |_| c += 1);
        assert_eq!(c, 120);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(cp("[6,2,5,4,1,3]").to_string(), "[1,3,6,2,5,4]");
        assert!("1,1".parse::<LinearPerm>().is_err());
        assert!("1,3".parse::<LinearPerm>().is_err());
        assert!("[1,2".parse::<CyclicPerm>().is_err());
    }

    #[test]
    fn delete_and_insert_max() {
        let c = cp("[1,3,5,2,4]");
        assert_eq!(c.predecessor_of_max(), 3);
        assert_eq!(c.delete_max(), cp("[1,3,2,4]"));
        assert_eq!(c.delete_max().insert_max_after(3), c);
    }
}
