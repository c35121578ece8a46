//! Vincular patterns, linear and cyclic, and finite sets of them.
//!
//! Text form: comma-separated values, `~` between two values that must be
//! adjacent in an occurrence, and square brackets around a cyclic pattern.
//! `[1~3,4,2]` is the cyclic pattern with a single bond between its first
//! two entries. Whitespace is ignored.
//!
//! A cyclic pattern is stored as one of its rotations whose bonds do not
//! cross the seam between last and first entry; among those the rotation
//! with the lexicographically smallest value sequence is kept.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::{for_each_permutation, LinearPerm};

/// Longest supported pattern; bonds live in a `u32` mask.
pub const MAX_PATTERN_LEN: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternKind {
    Linear,
    Cyclic,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("empty pattern")]
    Empty,
    #[error("syntax error at column {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("duplicate value {value} at column {pos}")]
    DuplicateValue { value: u32, pos: usize },
    #[error("value {value} at column {pos} is outside [1, {len}]")]
    ValueOutOfRange { value: u32, pos: usize, len: usize },
    #[error("bond at column {pos} does not join two entries")]
    BondOnMissingSlot { pos: usize },
    #[error("pattern longer than {MAX_PATTERN_LEN}")]
    TooLong,
    #[error("cyclic pattern with every adjacency bonded is not supported")]
    FullyBondedCycle,
    #[error("pattern set mixes kinds or lengths: `{0}`")]
    MixedSet(String),
}

/// A vincular pattern. For linear patterns bit `j - 1` of `bonds` marks slot
/// `j`, joining entries `j` and `j + 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    kind: PatternKind,
    values: Vec<u8>,
    bonds: u32,
}

fn validate_values(values: &[u8]) -> Result<(), PatternError> {
    let k = values.len();
    if k == 0 {
        return Err(PatternError::Empty);
    }
    if k > MAX_PATTERN_LEN {
        return Err(PatternError::TooLong);
    }
    let mut seen = 0u64;
    for (pos, &v) in values.iter().enumerate() {
        if v == 0 || v as usize > k {
            return Err(PatternError::ValueOutOfRange {
                value: v as u32,
                pos,
                len: k,
            });
        }
        if seen & (1 << v) != 0 {
            return Err(PatternError::DuplicateValue {
                value: v as u32,
                pos,
            });
        }
        seen |= 1 << v;
    }
    Ok(())
}

fn slot_mask(k: usize) -> u32 {
    if k <= 1 {
        0
    } else {
        (((1u64) << (k - 1)) - 1) as u32
    }
}

/// Rotation of a cyclic bond assignment. `cyc` has bit `j` set when the
/// adjacency between entries `j` and `j + 1 (mod k)` is bonded (0-based).
fn rotate_cyclic(values: &[u8], cyc: u64, start: usize) -> (Vec<u8>, u64) {
    let k = values.len();
    let mut v = Vec::with_capacity(k);
    v.extend_from_slice(&values[start..]);
    v.extend_from_slice(&values[..start]);
    let mut b = 0u64;
    for j in 0..k {
        if cyc & (1 << ((start + j) % k)) != 0 {
            b |= 1 << j;
        }
    }
    (v, b)
}

impl Pattern {
    /// A linear pattern; `slots` are 1-based bond slots.
    pub fn linear(values: Vec<u8>, slots: &[usize]) -> Result<Self, PatternError> {
        validate_values(&values)?;
        let k = values.len();
        let mut bonds = 0u32;
        for &s in slots {
            if s == 0 || s >= k {
                return Err(PatternError::BondOnMissingSlot { pos: s });
            }
            bonds |= 1 << (s - 1);
        }
        Ok(Pattern {
            kind: PatternKind::Linear,
            values,
            bonds,
        })
    }

    /// A cyclic pattern given by any representative whose bond slots are
    /// 1-based linear slots (so none crosses the seam).
    pub fn cyclic(values: Vec<u8>, slots: &[usize]) -> Result<Self, PatternError> {
        let lin = Pattern::linear(values, slots)?;
        Ok(Self::cyclic_from_mask(&lin.values, lin.bonds as u64))
    }

    /// Cyclic pattern from a full cyclic bond mask (bit `j` bonds entries
    /// `j` and `j + 1 mod k`, 0-based), which may include the seam.
    pub fn cyclic_with_seam(values: Vec<u8>, cyclic_bonds: u64) -> Result<Self, PatternError> {
        validate_values(&values)?;
        let k = values.len();
        let full = if k >= 64 { u64::MAX } else { (1u64 << k) - 1 };
        let cyc = cyclic_bonds & full;
        if k > 1 && cyc == full {
            return Err(PatternError::FullyBondedCycle);
        }
        Ok(Self::cyclic_from_mask(
            &values,
            if k == 1 { 0 } else { cyc },
        ))
    }

    fn cyclic_from_mask(values: &[u8], cyc: u64) -> Self {
        let k = values.len();
        let mut best: Option<(Vec<u8>, u64)> = None;
        for s in 0..k {
            let (v, b) = rotate_cyclic(values, cyc, s);
            // wrap slot of the rotation is bit k-1
            if k > 1 && b & (1 << (k - 1)) != 0 {
                continue;
            }
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                best = Some((v, b));
            }
        }
        let (values, b) = best.expect("a wrap-free rotation exists");
        Pattern {
            kind: PatternKind::Cyclic,
            values,
            bonds: b as u32,
        }
    }

    /// Totally vincular pattern on the given values.
    pub fn totally_vincular(values: Vec<u8>, kind: PatternKind) -> Result<Self, PatternError> {
        validate_values(&values)?;
        let bonds = slot_mask(values.len());
        Ok(match kind {
            PatternKind::Linear => Pattern {
                kind,
                values,
                bonds,
            },
            PatternKind::Cyclic => Self::cyclic_from_mask(&values, bonds as u64),
        })
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    pub fn is_cyclic(&self) -> bool {
        self.kind == PatternKind::Cyclic
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values of the stored (canonical, for cyclic) representative.
    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// Bond mask of the stored representative over linear slots.
    pub fn bond_mask(&self) -> u32 {
        self.bonds
    }

    pub fn has_bond(&self, slot: usize) -> bool {
        slot >= 1 && slot < self.len() && self.bonds & (1 << (slot - 1)) != 0
    }

    /// 1-based bonded slots of the stored representative.
    pub fn bond_slots(&self) -> Vec<usize> {
        (1..self.len()).filter(|&s| self.has_bond(s)).collect()
    }

    pub fn num_bonds(&self) -> usize {
        self.bonds.count_ones() as usize
    }

    pub fn is_totally_vincular(&self) -> bool {
        self.bonds == slot_mask(self.len())
    }

    /// The same pattern with all bonds dropped.
    pub fn devincularize(&self) -> Pattern {
        match self.kind {
            PatternKind::Linear => Pattern {
                bonds: 0,
                ..self.clone()
            },
            PatternKind::Cyclic => Self::cyclic_from_mask(&self.values, 0),
        }
    }

    /// The same pattern with one bond slot removed.
    pub fn without_bond(&self, slot: usize) -> Pattern {
        let bonds = self.bonds & !(1u32 << (slot - 1));
        match self.kind {
            PatternKind::Linear => Pattern {
                bonds,
                ..self.clone()
            },
            PatternKind::Cyclic => Self::cyclic_from_mask(&self.values, bonds as u64),
        }
    }

    /// Linear view of the stored representative.
    pub fn as_linear(&self) -> Pattern {
        Pattern {
            kind: PatternKind::Linear,
            ..self.clone()
        }
    }

    /// For a cyclic pattern: every rotation of the stored representative as
    /// a linear pattern, paired with whether the rotation's seam carries a
    /// bond. Rotation `s` starts at entry `s` (0-based).
    pub fn rotations(&self) -> Vec<(Pattern, bool)> {
        let k = self.len();
        (0..k)
            .map(|s| {
                let (v, b) = rotate_cyclic(&self.values, self.bonds as u64, s);
                let seam = k > 1 && b & (1 << (k - 1)) != 0;
                (
                    Pattern {
                        kind: PatternKind::Linear,
                        values: v,
                        bonds: (b as u32) & slot_mask(k),
                    },
                    seam,
                )
            })
            .collect()
    }

    /// Rotations (as linear patterns) whose bonds avoid the seam.
    pub fn wrap_free_representatives(&self) -> Vec<Pattern> {
        let mut reps: Vec<Pattern> = self
            .rotations()
            .into_iter()
            .filter(|(_, seam)| !seam)
            .map(|(p, _)| p)
            .collect();
        reps.sort();
        reps.dedup();
        reps
    }

    pub fn reverse(&self) -> Pattern {
        let k = self.len();
        let values: Vec<u8> = self.values.iter().rev().copied().collect();
        let mut bonds = 0u32;
        for s in self.bond_slots() {
            bonds |= 1 << (k - s - 1);
        }
        match self.kind {
            PatternKind::Linear => Pattern {
                kind: PatternKind::Linear,
                values,
                bonds,
            },
            PatternKind::Cyclic => Self::cyclic_from_mask(&values, bonds as u64),
        }
    }

    pub fn complement(&self) -> Pattern {
        let top = self.len() as u8 + 1;
        let values: Vec<u8> = self.values.iter().map(|&v| top - v).collect();
        match self.kind {
            PatternKind::Linear => Pattern {
                kind: PatternKind::Linear,
                values,
                bonds: self.bonds,
            },
            PatternKind::Cyclic => Self::cyclic_from_mask(&values, self.bonds as u64),
        }
    }

    pub fn reverse_complement(&self) -> Pattern {
        self.complement().reverse()
    }

    /// Overline rendering with parenthesised bonded runs, e.g. `(13)42`.
    pub fn compact_notation(&self) -> String {
        let sep = if self.len() > 9 { "," } else { "" };
        let mut out = String::new();
        let k = self.len();
        let mut i = 0;
        let mut first = true;
        while i < k {
            let mut j = i;
            while j + 1 < k && self.has_bond(j + 1) {
                j += 1;
            }
            if !first {
                out.push_str(sep);
            }
            first = false;
            let run: Vec<String> = self.values[i..=j].iter().map(|v| v.to_string()).collect();
            if j > i {
                out.push('(');
                out.push_str(&run.join(sep));
                out.push(')');
            } else {
                out.push_str(&run[0]);
            }
            i = j + 1;
        }
        if self.is_cyclic() {
            format!("[{out}]")
        } else {
            out
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_cyclic() {
            f.write_str("[")?;
        }
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(if self.has_bond(i) { "~" } else { "," })?;
            }
            write!(f, "{v}")?;
        }
        if self.is_cyclic() {
            f.write_str("]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({self})")
    }
}

/// Parses a single pattern; `offset` shifts reported columns.
fn parse_at(text: &str, offset: usize) -> Result<Pattern, PatternError> {
    let chars: Vec<(usize, char)> = text
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| (i + offset, c))
        .collect();
    if chars.is_empty() {
        return Err(PatternError::Empty);
    }
    let (mut lo, mut hi) = (0, chars.len());
    let cyclic = chars[0].1 == '[';
    if cyclic {
        if chars[hi - 1].1 != ']' {
            return Err(PatternError::Syntax {
                pos: chars[hi - 1].0,
                msg: "missing closing `]`".into(),
            });
        }
        lo += 1;
        hi -= 1;
    }
    let body = &chars[lo..hi];
    if body.is_empty() {
        return Err(PatternError::Empty);
    }

    let mut values: Vec<(u32, usize)> = Vec::new();
    let mut slots: Vec<usize> = Vec::new();
    let mut cur: Option<(u32, usize)> = None;
    let mut pending_sep: Option<(char, usize)> = None;
    for &(pos, c) in body {
        match c {
            '0'..='9' => {
                let d = c as u32 - '0' as u32;
                cur = Some(match cur {
                    None => (d, pos),
                    Some((v, p)) => (v.saturating_mul(10).saturating_add(d), p),
                });
            }
            ',' | '~' => {
                match cur.take() {
                    Some(v) => {
                        values.push(v);
                    }
                    None => {
                        return Err(if c == '~' {
                            PatternError::BondOnMissingSlot { pos }
                        } else {
                            PatternError::Syntax {
                                pos,
                                msg: "expected a value before `,`".into(),
                            }
                        })
                    }
                }
                if c == '~' {
                    slots.push(values.len());
                }
                pending_sep = Some((c, pos));
            }
            '[' | ']' => {
                return Err(PatternError::Syntax {
                    pos,
                    msg: format!("unexpected `{c}`"),
                })
            }
            _ => {
                return Err(PatternError::Syntax {
                    pos,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    match cur {
        Some(v) => values.push(v),
        None => {
            let (c, pos) = pending_sep.expect("nonempty body");
            return Err(if c == '~' {
                PatternError::BondOnMissingSlot { pos }
            } else {
                PatternError::Syntax {
                    pos,
                    msg: "trailing `,`".into(),
                }
            });
        }
    }

    let k = values.len();
    if k > MAX_PATTERN_LEN {
        return Err(PatternError::TooLong);
    }
    let mut seen = vec![false; k + 1];
    for &(v, pos) in &values {
        if v == 0 || v as usize > k {
            return Err(PatternError::ValueOutOfRange {
                value: v,
                pos,
                len: k,
            });
        }
        if seen[v as usize] {
            return Err(PatternError::DuplicateValue { value: v, pos });
        }
        seen[v as usize] = true;
    }
    let vals: Vec<u8> = values.iter().map(|&(v, _)| v as u8).collect();
    if cyclic {
        Pattern::cyclic(vals, &slots)
    } else {
        Pattern::linear(vals, &slots)
    }
}

impl FromStr for Pattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_at(s, 0)
    }
}

/// Parses a pattern in the textual grammar.
pub fn parse_pattern(text: &str) -> Result<Pattern, PatternError> {
    text.parse()
}

/// A finite set of patterns of one kind and one length.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PatternSet {
    patterns: Vec<Pattern>,
}

impl PatternSet {
    pub fn empty() -> Self {
        PatternSet::default()
    }

    pub fn new(patterns: impl IntoIterator<Item = Pattern>) -> Result<Self, PatternError> {
        let mut patterns: Vec<Pattern> = patterns.into_iter().collect();
        patterns.sort();
        patterns.dedup();
        if let Some(first) = patterns.first() {
            if patterns
                .iter()
                .any(|p| p.kind != first.kind || p.len() != first.len())
            {
                let text: Vec<String> = patterns.iter().map(|p| p.to_string()).collect();
                return Err(PatternError::MixedSet(text.join(" ")));
            }
        }
        Ok(PatternSet { patterns })
    }

    pub(crate) fn from_sorted_unchecked(patterns: Vec<Pattern>) -> Self {
        PatternSet { patterns }
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Pattern> {
        self.patterns.iter()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Common pattern length, `None` for the empty set.
    pub fn pattern_len(&self) -> Option<usize> {
        self.patterns.first().map(|p| p.len())
    }

    pub fn kind(&self) -> Option<PatternKind> {
        self.patterns.first().map(|p| p.kind)
    }

    pub fn contains(&self, p: &Pattern) -> bool {
        self.patterns.binary_search(p).is_ok()
    }

    pub fn is_totally_vincular(&self) -> bool {
        self.patterns.iter().all(|p| p.is_totally_vincular())
    }

    fn map(&self, f: impl Fn(&Pattern) -> Pattern) -> PatternSet {
        let mut v: Vec<Pattern> = self.patterns.iter().map(f).collect();
        v.sort();
        v.dedup();
        PatternSet { patterns: v }
    }

    pub fn reverse(&self) -> PatternSet {
        self.map(Pattern::reverse)
    }

    pub fn complement(&self) -> PatternSet {
        self.map(Pattern::complement)
    }

    pub fn reverse_complement(&self) -> PatternSet {
        self.map(Pattern::reverse_complement)
    }

    /// Set difference.
    pub fn without(&self, other: &PatternSet) -> PatternSet {
        PatternSet {
            patterns: self
                .patterns
                .iter()
                .filter(|p| !other.contains(p))
                .cloned()
                .collect(),
        }
    }

    pub fn strings(&self) -> Vec<String> {
        self.patterns.iter().map(|p| p.to_string()).collect()
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.patterns.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PatternSet{self}")
    }
}

impl<'a> IntoIterator for &'a PatternSet {
    type Item = &'a Pattern;
    type IntoIter = std::slice::Iter<'a, Pattern>;

    fn into_iter(self) -> Self::IntoIter {
        self.patterns.iter()
    }
}

/// Parses a set of patterns. Patterns are separated by `;`, and bracketed
/// cyclic patterns may also simply follow one another: `[1~2~3] [3~2~1]`.
impl FromStr for PatternSet {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Vec::new();
        let mut offset = 0;
        for piece in s.split(';') {
            let piece_off = offset;
            offset += piece.len() + 1;
            if piece.trim().is_empty() {
                continue;
            }
            if !piece.contains('[') {
                out.push(parse_at(piece, piece_off)?);
                continue;
            }
            let mut start: Option<usize> = None;
            for (i, c) in piece.char_indices() {
                match c {
                    '[' => {
                        if start.is_some() {
                            return Err(PatternError::Syntax {
                                pos: piece_off + i,
                                msg: "nested `[`".into(),
                            });
                        }
                        start = Some(i);
                    }
                    ']' => {
                        let st = start.take().ok_or(PatternError::Syntax {
                            pos: piece_off + i,
                            msg: "unmatched `]`".into(),
                        })?;
                        out.push(parse_at(&piece[st..=i], piece_off + st)?);
                    }
                    c if start.is_none() && !c.is_whitespace() && c != ',' => {
                        return Err(PatternError::Syntax {
                            pos: piece_off + i,
                            msg: format!("unexpected `{c}` between patterns"),
                        })
                    }
                    _ => {}
                }
            }
            if let Some(st) = start {
                return Err(PatternError::Syntax {
                    pos: piece_off + st,
                    msg: "missing closing `]`".into(),
                });
            }
        }
        PatternSet::new(out)
    }
}

/// The orbit of a pattern set under reverse, complement and their
/// composition.
pub fn trivial_wilf_orbit(s: &PatternSet) -> BTreeSet<PatternSet> {
    [
        s.clone(),
        s.reverse(),
        s.complement(),
        s.reverse_complement(),
    ]
    .into_iter()
    .collect()
}

/// All `k!` totally vincular patterns of length `k`, in lexicographic order
/// of their value sequences.
pub fn all_totally_vincular(k: usize, kind: PatternKind) -> PatternSet {
    let mut v = Vec::new();
    for_each_permutation(k, |p| {
        v.push(Pattern::totally_vincular(p.to_vec(), kind).expect("valid permutation"));
    });
    v.sort();
    PatternSet::from_sorted_unchecked(v)
}

/// The totally vincular pattern read off a permutation.
pub fn totally_vincular_of(p: &LinearPerm, kind: PatternKind) -> Pattern {
    Pattern::totally_vincular(p.values().to_vec(), kind).expect("valid permutation")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    fn set(s: &str) -> PatternSet {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        let p = pat("[1~3,4,2]");
        assert!(p.is_cyclic());
        assert_eq!(p.values(), &[1, 3, 4, 2]);
        assert_eq!(p.bond_slots(), vec![1]);

        let q = pat("[1~2~3]");
        assert_eq!(q.values(), &[1, 2, 3]);
        assert_eq!(q.bond_slots(), vec![1, 2]);
        assert!(q.is_totally_vincular());

        assert_eq!(
            "[1,3,3]".parse::<Pattern>(),
            Err(PatternError::DuplicateValue { value: 3, pos: 5 })
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            "1,2~".parse::<Pattern>(),
            Err(PatternError::BondOnMissingSlot { pos: 3 })
        ));
        assert!(matches!(
            "~1,2".parse::<Pattern>(),
            Err(PatternError::BondOnMissingSlot { pos: 0 })
        ));
        assert!(matches!(
            "1,4,2".parse::<Pattern>(),
            Err(PatternError::ValueOutOfRange { value: 4, .. })
        ));
        assert!(matches!(
            "1,a".parse::<Pattern>(),
            Err(PatternError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            "[1,2".parse::<Pattern>(),
            Err(PatternError::Syntax { .. })
        ));
        assert!(matches!("".parse::<Pattern>(), Err(PatternError::Empty)));
        assert!(matches!("[]".parse::<Pattern>(), Err(PatternError::Empty)));
    }

    #[test]
    fn multi_digit_and_whitespace() {
        let p = pat(" 10 ~ 1, 2,3,4,5,6,7,8,9 ");
        assert_eq!(p.len(), 10);
        assert_eq!(p.values()[0], 10);
        assert_eq!(p.bond_slots(), vec![1]);
        assert_eq!(p.to_string(), "10~1,2,3,4,5,6,7,8,9");
    }

    #[test]
    fn cyclic_canonical_form() {
        // any rotation representative gives the same stored pattern
        assert_eq!(pat("[3~1,4,2]"), pat("[2,3~1,4]"));
        assert_eq!(pat("[3,1~2]"), pat("[1~2,3]"));
        assert_eq!(pat("[2~3~1]").values(), &[2, 3, 1]);
        assert_eq!(pat("[2,3,1]").values(), &[1, 2, 3]);
        assert!(matches!(
            Pattern::cyclic_with_seam(vec![1, 2, 3], 0b111),
            Err(PatternError::FullyBondedCycle)
        ));
        // seam bond gets rotated away
        let s = Pattern::cyclic_with_seam(vec![2, 4, 1, 3], 0b1000).unwrap();
        assert_eq!(s, pat("[1,3~2,4]"));
    }

    #[test]
    fn reverse_complement_examples() {
        let r = pat("1~3,4,2").reverse();
        assert_eq!(r.values(), &[2, 4, 3, 1]);
        assert_eq!(r.bond_slots(), vec![3]);
        assert_eq!(r.to_string(), "2,4,3~1");

        assert_eq!(pat("[1~2,3,4]").complement(), pat("[4~3,2,1]"));
        assert_eq!(pat("[1~3,2,4]").reverse_complement(), pat("[1,3,2~4]"));
        assert_eq!(
            pat("[1~3,2,4]").reverse_complement().to_string(),
            "[1,3,2~4]"
        );
    }

    #[test]
    fn orbit_examples() {
        let o = trivial_wilf_orbit(&set("[1~3,2,4]"));
        assert_eq!(o.len(), 4);
        let expected: BTreeSet<PatternSet> = ["[1~3,2,4]", "[2~4,1,3]", "[3~1,4,2]", "[4~2,3,1]"]
            .iter()
            .map(|s| set(s))
            .collect();
        assert_eq!(o, expected);
        assert_eq!(trivial_wilf_orbit(&set("[1~4,2,3]")).len(), 2);
        assert_eq!(trivial_wilf_orbit(&set("[1~2~3] [3~2~1]")).len(), 1);
    }

    #[test]
    fn totally_vincular_sets() {
        assert_eq!(
            all_totally_vincular(1, PatternKind::Linear).strings(),
            vec!["1"]
        );
        assert_eq!(all_totally_vincular(3, PatternKind::Cyclic).len(), 6);
        let s4 = all_totally_vincular(4, PatternKind::Cyclic);
        assert_eq!(s4.len(), 24);
        assert!(s4
            .iter()
            .all(|p| p.is_totally_vincular() && p.num_bonds() == 3));
    }

    #[test]
    fn set_parsing() {
        let s = set("[1~2~3] [3~2~1]");
        assert_eq!(s.len(), 2);
        let t = set("[3~2~1];[1~2~3]");
        assert_eq!(s, t);
        assert!(matches!(
            "[1~2] [1~2~3]".parse::<PatternSet>(),
            Err(PatternError::MixedSet(_))
        ));
        assert_eq!(set("1~2,3; 3,2~1").len(), 2);
        assert!(set("").is_empty());
    }

    #[test]
    fn compact_notation() {
        assert_eq!(pat("1~3,4,2").compact_notation(), "(13)42");
        assert_eq!(pat("[1~2~3]").compact_notation(), "[(123)]");
        assert_eq!(pat("1,2").compact_notation(), "12");
    }

    #[test]
    fn reverse_and_complement_commute_up_to_rotation() {
        for k in 1..=5 {
            for_each_permutation(k, |v| {
                for mask in 0..(1u32 << (k - 1)) {
                    let slots: Vec<usize> = (1..k).filter(|s| mask & (1 << (s - 1)) != 0).collect();
                    for p in [
                        Pattern::linear(v.to_vec(), &slots).unwrap(),
                        Pattern::cyclic(v.to_vec(), &slots).unwrap(),
                    ] {
                        assert_eq!(p.reverse().reverse(), p);
                        assert_eq!(p.complement().complement(), p);
                        assert_eq!(p.complement().reverse(), p.reverse().complement());
                        assert_eq!(p.to_string().parse::<Pattern>().unwrap(), p);
                    }
                }
            });
        }
    }
}
