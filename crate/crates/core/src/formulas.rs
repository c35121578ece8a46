//! Exact integer sequences that count the avoidance classes, plus the one
//! floating-point closed form.
//!
//! Everything here is arbitrary precision. The only `f64` routine is
//! [`consecutive_123_closed_form`], a truncated infinite sum.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("{name}: argument {arg} out of range ({expected})")]
    OutOfRange {
        name: &'static str,
        arg: i64,
        expected: &'static str,
    },
    #[error("{name}: n = {n} exceeds the brute-force budget (max {max})")]
    Budget {
        name: &'static str,
        n: usize,
        max: usize,
    },
}

fn out_of_range(name: &'static str, arg: i64, expected: &'static str) -> FormulaError {
    FormulaError::OutOfRange {
        name,
        arg,
        expected,
    }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn catalan(n: u64) -> BigUint {
    binomial(2 * n, n) / (n + 1)
}

/// Entry `T(n, k) = (n-k+1)/(n+1) * C(n+k, n)` of Catalan's triangle, with
/// `T(n, n+1) = 0`.
pub fn catalan_triangle(n: u64, k: u64) -> Result<BigUint, FormulaError> {
    if k == n + 1 {
        return Ok(BigUint::zero());
    }
    if k > n + 1 {
        return Err(out_of_range(
            "catalan_triangle",
            k as i64,
            "0 <= k <= n + 1",
        ));
    }
    Ok(binomial(n + k, n) * (n - k + 1) / (n + 1))
}

/// Number of up-down permutations of `[n]` via the Seidel–Entringer
/// boustrophedon.
pub fn updown(n: usize) -> Result<BigUint, FormulaError> {
    if n == 0 {
        return Err(out_of_range("updown", 0, "n >= 1"));
    }
    let mut row = vec![BigUint::one()];
    for m in 1..=n {
        let mut next = vec![BigUint::zero(); m + 1];
        for k in 1..=m {
            next[k] = &next[k - 1] + &row[m - k];
        }
        row = next;
    }
    Ok(row[n].clone())
}

/// `1 + sum_{i=0}^{n-2} i (i+1)^{n-i-2}`: the count for one bond on an
/// ascent followed by two larger entries.
pub fn zeil_region_sum(n: usize) -> Result<BigUint, FormulaError> {
    if n < 2 {
        return Err(out_of_range("zeil_region_sum", n as i64, "n >= 2"));
    }
    let mut total = BigUint::one();
    for i in 0..=n - 2 {
        total += BigUint::from(i) * num_traits::pow(BigUint::from(i + 1), n - i - 2);
    }
    Ok(total)
}

/// `D_n` from `D_1 = 2, D_2 = D_3 = 1`, `D_n = sum_{k=1}^{n-3} D_k D_{n-k}`.
pub fn dyck_uudd(n: usize) -> Result<BigUint, FormulaError> {
    Ok(dyck_uudd_table(n)?.pop().unwrap())
}

/// `D_1 ..= D_n`.
pub fn dyck_uudd_table(n: usize) -> Result<Vec<BigUint>, FormulaError> {
    if n == 0 {
        return Err(out_of_range("dyck_uudd", 0, "n >= 1"));
    }
    // index 0 unused
    let mut d = vec![BigUint::zero(), 2u32.into(), 1u32.into(), 1u32.into()];
    for m in 4..=n {
        let mut s = BigUint::zero();
        for k in 1..=m - 3 {
            s += &d[k] * &d[m - k];
        }
        d.push(s);
    }
    d.truncate(n + 1);
    d.remove(0);
    Ok(d)
}

/// Alternating-sum expression for `D_m`, `m >= 2`:
/// `D_{n+1} = sum_j (-1)^j / (n-j) * C(n-j, j) * C(2n-3j, n-j-1)`.
pub fn dyck_uudd_explicit(m: usize) -> Result<BigUint, FormulaError> {
    if m < 2 {
        return Err(out_of_range("dyck_uudd_explicit", m as i64, "n >= 2"));
    }
    let n = (m - 1) as u64;
    let mut sum = BigRational::zero();
    for j in 0..=n / 2 {
        let num = BigInt::from(binomial(n - j, j) * binomial(2 * n - 3 * j, n - j - 1));
        let mut term = BigRational::new(num, BigInt::from(n - j));
        if j.is_odd() {
            term = -term;
        }
        sum += term;
    }
    debug_assert!(sum.is_integer() && !sum.is_negative());
    Ok(sum.to_integer().to_biguint().expect("nonnegative"))
}

/// Largest `n` for which [`strongly_monotone`] runs its enumeration.
pub const STRONGLY_MONOTONE_MAX: usize = 13;

/// Number of set partitions of `[n]` whose blocks, ordered by minimum, also
/// have increasing maxima. Counted by walking all restricted growth strings.
pub fn strongly_monotone(n: usize) -> Result<BigUint, FormulaError> {
    if n > STRONGLY_MONOTONE_MAX {
        return Err(FormulaError::Budget {
            name: "strongly_monotone",
            n,
            max: STRONGLY_MONOTONE_MAX,
        });
    }
    if n <= 1 {
        return Ok(BigUint::one());
    }
    // rgs[i] = block of element i; blocks numbered by first appearance,
    // which is the order of their minima.
    let mut rgs = vec![0usize; n];
    let mut count: u64 = 0;
    loop {
        let blocks = rgs.iter().max().unwrap() + 1;
        let mut last = vec![0usize; blocks];
        for (i, &b) in rgs.iter().enumerate() {
            last[b] = i;
        }
        if last.windows(2).all(|w| w[0] < w[1]) {
            count += 1;
        }
        // next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(count.into());
            }
            let prefix_max = rgs[..i].iter().max().copied().unwrap();
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for x in rgs[i + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// `sum_{i=0}^{n-2} C(n-2, i) A_i` with `A_i` the strongly monotone
/// partition counts.
pub fn strongly_monotone_sum(n: usize) -> Result<BigUint, FormulaError> {
    if n < 2 {
        return Err(out_of_range("strongly_monotone_sum", n as i64, "n >= 2"));
    }
    let mut total = BigUint::zero();
    for i in 0..=n - 2 {
        total += binomial((n - 2) as u64, i as u64) * strongly_monotone(i)?;
    }
    Ok(total)
}

/// Cyclic permutations of `[n]` with no two consecutive cyclic ascents.
///
/// With `E = sum a_m z^m / m!` and `a_0 = 1`, the relation `E' = E^2 - E + 1`
/// gives `a_{m+1} = sum_j C(m, j) a_j a_{m-j} - a_m + [m = 0]`; the answer is
/// `a_{n-1}`.
pub fn consecutive_123(n: usize) -> Result<BigUint, FormulaError> {
    if n == 0 {
        return Err(out_of_range("consecutive_123", 0, "n >= 1"));
    }
    let mut a: Vec<BigInt> = vec![BigInt::one()];
    for m in 0..n - 1 {
        let mut s = BigInt::zero();
        for j in 0..=m {
            s += BigInt::from(binomial(m as u64, j as u64)) * &a[j] * &a[m - j];
        }
        s -= &a[m];
        if m == 0 {
            s += 1;
        }
        a.push(s);
    }
    Ok(a[n - 1].to_biguint().expect("counts are nonnegative"))
}

/// Truncated closed form `(n-1)! sum_{k=-K}^{K} (sqrt(3) / (2 pi (k + 1/3)))^n`
/// for the same count as [`consecutive_123`]. An approximation.
pub fn consecutive_123_closed_form(n: usize, terms: usize) -> Result<f64, FormulaError> {
    if n < 2 {
        return Err(out_of_range(
            "consecutive_123_closed_form",
            n as i64,
            "n >= 2",
        ));
    }
    if terms == 0 {
        return Err(out_of_range("consecutive_123_closed_form", 0, "K >= 1"));
    }
    let c = 3f64.sqrt() / (2.0 * std::f64::consts::PI);
    let k = terms as i64;
    let mut sum = 0.0;
    // sum the small terms first
    for j in (1..=k).rev() {
        for kk in [j, -j] {
            sum += (c / (kk as f64 + 1.0 / 3.0)).powi(n as i32);
        }
    }
    sum += (3.0 * c).powi(n as i32);
    let fact = factorial((n - 1) as u64).to_f64().unwrap_or(f64::INFINITY);
    Ok(fact * sum)
}

/// Cyclic permutations of `[n]` with no cyclic window reducing to `132`.
///
/// Solves `E' = exp(E - z^2/2)`, `E(0) = 0`, coefficient by coefficient.
/// Writing `F = E - z^2/2` and `G = exp(F)`, `G' = F' G` gives
/// `g_{m+1} = sum_j C(m, j) f_{j+1} g_{m-j}` in exponential coefficients,
/// and `e_{m+1} = g_m`.
pub fn consecutive_132(n: usize) -> Result<BigUint, FormulaError> {
    if n == 0 {
        return Err(out_of_range("consecutive_132", 0, "n >= 1"));
    }
    let mut e: Vec<BigInt> = vec![BigInt::zero()];
    let mut g: Vec<BigInt> = vec![BigInt::one()];
    let f = |e: &[BigInt], m: usize| -> BigInt {
        // z^2/2 contributes 2!/2 = 1 to the exponential coefficient at m = 2
        if m == 2 {
            &e[2] - 1
        } else {
            e[m].clone()
        }
    };
    while e.len() <= n {
        let m = e.len() - 1;
        e.push(g[m].clone());
        let mut s = BigInt::zero();
        for j in 0..=m {
            s += BigInt::from(binomial(m as u64, j as u64)) * f(&e, j + 1) * &g[m - j];
        }
        g.push(s);
    }
    Ok(e[n].to_biguint().expect("counts are nonnegative"))
}

/// How an [`IntSeq`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definition {
    ClosedForm,
    Recurrence,
    SeriesCoefficients,
    BruteForce,
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Definition::ClosedForm => "closed form",
            Definition::Recurrence => "recurrence",
            Definition::SeriesCoefficients => "series coefficients",
            Definition::BruteForce => "brute force",
        })
    }
}

/// A named, tabulated integer sequence.
#[derive(Debug, Clone)]
pub struct IntSeq {
    pub name: &'static str,
    pub definition: Definition,
    pub values: BTreeMap<usize, BigUint>,
}

/// The integer sequences exposed by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sequence {
    Catalan,
    Updown,
    ZeilRegionSum,
    DyckUudd,
    DyckUuddExplicit,
    StronglyMonotone,
    StronglyMonotoneSum,
    Consecutive123,
    Consecutive132,
}

impl Sequence {
    pub const ALL: [Sequence; 9] = [
        Sequence::Catalan,
        Sequence::Updown,
        Sequence::ZeilRegionSum,
        Sequence::DyckUudd,
        Sequence::DyckUuddExplicit,
        Sequence::StronglyMonotone,
        Sequence::StronglyMonotoneSum,
        Sequence::Consecutive123,
        Sequence::Consecutive132,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Sequence::Catalan => "catalan",
            Sequence::Updown => "updown",
            Sequence::ZeilRegionSum => "zeil-region-sum",
            Sequence::DyckUudd => "dyck-uudd",
            Sequence::DyckUuddExplicit => "dyck-uudd-explicit",
            Sequence::StronglyMonotone => "strongly-monotone",
            Sequence::StronglyMonotoneSum => "strongly-monotone-sum",
            Sequence::Consecutive123 => "consecutive-123",
            Sequence::Consecutive132 => "consecutive-132",
        }
    }

    pub fn from_name(name: &str) -> Option<Sequence> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn definition(self) -> Definition {
        match self {
            Sequence::Catalan | Sequence::ZeilRegionSum | Sequence::DyckUuddExplicit => {
                Definition::ClosedForm
            }
            Sequence::Updown | Sequence::DyckUudd | Sequence::StronglyMonotoneSum => {
                Definition::Recurrence
            }
            Sequence::StronglyMonotone => Definition::BruteForce,
            Sequence::Consecutive123 | Sequence::Consecutive132 => Definition::SeriesCoefficients,
        }
    }

    pub fn value(self, n: usize) -> Result<BigUint, FormulaError> {
        match self {
            Sequence::Catalan => Ok(catalan(n as u64)),
            Sequence::Updown => updown(n),
            Sequence::ZeilRegionSum => zeil_region_sum(n),
            Sequence::DyckUudd => dyck_uudd(n),
            Sequence::DyckUuddExplicit => dyck_uudd_explicit(n),
            Sequence::StronglyMonotone => strongly_monotone(n),
            Sequence::StronglyMonotoneSum => strongly_monotone_sum(n),
            Sequence::Consecutive123 => consecutive_123(n),
            Sequence::Consecutive132 => consecutive_132(n),
        }
    }

    pub fn tabulate(self, range: std::ops::RangeInclusive<usize>) -> Result<IntSeq, FormulaError> {
        let values = range
            .map(|n| self.value(n).map(|v| (n, v)))
            .collect::<Result<_, _>>()?;
        Ok(IntSeq {
            name: self.name(),
            definition: self.definition(),
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn catalan_examples() {
        assert_eq!(catalan_triangle(3, 2).unwrap(), big(5));
        assert_eq!(catalan(5), big(42));
        assert_eq!(catalan_triangle(2, 3).unwrap(), big(0));
        assert!(catalan_triangle(2, 4).is_err());
    }

    #[test]
    fn catalan_triangle_identities() {
        for n in 0..=30u64 {
            let row: BigUint = (0..=n).map(|k| catalan_triangle(n, k).unwrap()).sum();
            assert_eq!(row, catalan(n + 1));
            if n >= 1 {
                for k in 0..=n {
                    let s: BigUint = (0..=k).map(|j| catalan_triangle(n - 1, j).unwrap()).sum();
                    assert_eq!(catalan_triangle(n, k).unwrap(), s);
                }
            }
        }
    }

    /// Up-down permutations by direct enumeration.
    fn updown_brute(n: usize) -> u64 {
        let mut c = 0;
        crate::perm::for_each_permutation(n, |p| {
            if p.windows(2)
                .enumerate()
                .all(|(i, w)| (w[0] < w[1]) == (i % 2 == 0))
            {
                c += 1;
            }
        });
        c
    }

    #[test]
    fn updown_examples() {
        assert_eq!(updown(1).unwrap(), big(1));
        assert_eq!(updown(3).unwrap(), big(2));
        assert_eq!(updown(5).unwrap(), big(16));
        for n in 1..=8 {
            assert_eq!(updown(n).unwrap(), big(updown_brute(n)));
        }
    }

    #[test]
    fn zeil_region_sum_examples() {
        assert_eq!(zeil_region_sum(5).unwrap(), big(14));
        assert_eq!(zeil_region_sum(8).unwrap(), big(523));
        assert_eq!(zeil_region_sum(2).unwrap(), big(1));
    }

    #[test]
    fn dyck_examples() {
        assert_eq!(dyck_uudd(5).unwrap(), big(5));
        assert_eq!(dyck_uudd(6).unwrap(), big(13));
        assert_eq!(dyck_uudd(13).unwrap(), big(20705));
        for m in 2..=25 {
            assert_eq!(
                dyck_uudd(m).unwrap(),
                dyck_uudd_explicit(m).unwrap(),
                "m={m}"
            );
        }
    }

    #[test]
    fn strongly_monotone_examples() {
        assert_eq!(strongly_monotone(0).unwrap(), big(1));
        assert_eq!(strongly_monotone(1).unwrap(), big(1));
        assert_eq!(strongly_monotone(2).unwrap(), big(2));
        assert_eq!(strongly_monotone(3).unwrap(), big(4));
        assert!(strongly_monotone(14).is_err());
        assert_eq!(strongly_monotone_sum(5).unwrap(), big(14));
        assert_eq!(strongly_monotone_sum(10).unwrap(), big(5583));
        assert_eq!(strongly_monotone_sum(2).unwrap(), big(1));
    }

    #[test]
    fn consecutive_series_examples() {
        assert_eq!(consecutive_123(1).unwrap(), big(1));
        assert_eq!(consecutive_123(3).unwrap(), big(1));
        assert_eq!(consecutive_123(4).unwrap(), big(3));
        assert_eq!(consecutive_132(1).unwrap(), big(1));
        assert_eq!(consecutive_132(3).unwrap(), big(1));
    }

    #[test]
    fn closed_form_rounds_to_series() {
        for n in 3..=12 {
            let approx = consecutive_123_closed_form(n, 50).unwrap();
            let exact = consecutive_123(n).unwrap().to_f64().unwrap();
            assert!((approx - exact).abs() < 0.5, "n={n}: {approx} vs {exact}");
        }
        assert!((consecutive_123_closed_form(3, 50).unwrap() - 1.0).abs() < 0.5);
        assert!((consecutive_123_closed_form(4, 50).unwrap() - 3.0).abs() < 0.5);
    }

    #[test]
    fn sequences_by_name() {
        for s in Sequence::ALL {
            assert_eq!(Sequence::from_name(s.name()), Some(s));
        }
        let t = Sequence::Catalan.tabulate(0..=5).unwrap();
        assert_eq!(t.values[&5], big(42));
    }
}
