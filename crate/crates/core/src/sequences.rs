//! Exact tables for the EGZ numbers `N_n`, the score-sequence counts `S_n`,
//! strong (single-part) counts `T_n`, and the parts-refined counts `A_{n,m}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{central_binomials, divisors, totient, BigInt, BigRat, Sieve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeqKind {
    ScoreCounts,
    EgzNumbers,
    StrongCounts,
    Generic,
}

/// A finite prefix `values[0..=n_max]` of an integer sequence.
///
/// Sequences that only start at index 1 (`EgzNumbers`, `StrongCounts`)
/// carry a placeholder 0 at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSeq {
    pub kind: SeqKind,
    pub values: Vec<BigInt>,
}

impl IntSeq {
    pub fn new(kind: SeqKind, values: Vec<BigInt>) -> Self {
        IntSeq { kind, values }
    }

    pub fn n_max(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.values.get(n)
    }
}

impl std::ops::Index<usize> for IntSeq {
    type Output = BigInt;

    fn index(&self, n: usize) -> &BigInt {
        &self.values[n]
    }
}

fn exact_div(num: BigInt, den: u64, what: &str) -> Result<BigInt> {
    let (q, r) = num.div_rem(BigInt::from(den));
    if r != 0 {
        return Err(Error::Internal(format!(
            "{what}: division by {den} is not exact"
        )));
    }
    Ok(q)
}

fn signed_term(n: usize, d: usize, binom: &BigInt, phi: u64) -> BigInt {
    let t = BigInt::from(binom * phi);
    if (n + d).is_multiple_of(2) {
        t
    } else {
        -t
    }
}

/// `N_n = (1/2n) * sum_{d | n} (-1)^(n+d) C(2d, d) phi(n/d)`.
pub fn egz_number(n: usize) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut sum = BigInt::new();
    for d in divisors(n as u64)? {
        let d = d as usize;
        let c = crate::exactnum::central_binomial(d as u32);
        let phi = totient((n / d) as u64)?;
        sum += signed_term(n, d, &c, phi);
    }
    exact_div(sum, 2 * n as u64, "egz_number")
}

/// `N_1..=N_{n_max}` from sieved divisor and totient data.
pub fn egz_table(n_max: usize) -> Result<IntSeq> {
    if n_max == 0 {
        return Err(Error::ZeroArgument);
    }
    let sieve = Sieve::new(n_max);
    let phi = sieve.totients();
    let binom = central_binomials(n_max);
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(BigInt::new());
    for n in 1..=n_max {
        let mut sum = BigInt::new();
        for d in sieve.divisors(n) {
            sum += signed_term(n, d, &binom[d], phi[n / d]);
        }
        values.push(exact_div(sum, 2 * n as u64, "egz_table")?);
    }
    Ok(IntSeq::new(SeqKind::EgzNumbers, values))
}

/// `S_0..=S_{n_max}` from `n S_n = sum_{k=1}^n N_k S_{n-k}`.
pub fn score_counts(n_max: usize) -> Result<IntSeq> {
    let mut values = vec![BigInt::from(1)];
    if n_max == 0 {
        return Ok(IntSeq::new(SeqKind::ScoreCounts, values));
    }
    let egz = egz_table(n_max)?;
    for n in 1..=n_max {
        let mut acc = BigInt::new();
        for k in 1..=n {
            acc += &egz[k] * &values[n - k];
        }
        values.push(exact_div(acc, n as u64, "score_counts")?);
    }
    Ok(IntSeq::new(SeqKind::ScoreCounts, values))
}

/// Strong counts from the renewal decomposition
/// `S_n = sum_{k=1}^n T_k S_{n-k}`, solved for `T_n`.
pub fn strong_counts(n_max: usize) -> Result<IntSeq> {
    if n_max == 0 {
        return Err(Error::ZeroArgument);
    }
    let scores = score_counts(n_max)?;
    Ok(strong_from_scores(&scores))
}

fn strong_from_scores(scores: &IntSeq) -> IntSeq {
    let n_max = scores.n_max();
    let mut t = vec![BigInt::new(); n_max + 1];
    for n in 1..=n_max {
        let mut v = scores[n].clone();
        for k in 1..n {
            v -= &t[k] * &scores[n - k];
        }
        t[n] = v;
    }
    IntSeq::new(SeqKind::StrongCounts, t)
}

/// `A_{n,m}`: score sequences of length `n` with exactly `m` irreducible
/// parts, for `1 <= m <= n <= n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartsTable {
    n_max: usize,
    // rows[n][m] for 0 <= m <= n; rows[0] = [1].
    rows: Vec<Vec<BigInt>>,
}

impl PartsTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn get(&self, n: usize, m: usize) -> Option<&BigInt> {
        if n == 0 || m == 0 {
            return None;
        }
        self.rows.get(n)?.get(m)
    }

    /// Row `n` as `[A_{n,1}, ..., A_{n,n}]`.
    pub fn row(&self, n: usize) -> Option<&[BigInt]> {
        if n == 0 || n > self.n_max {
            return None;
        }
        Some(&self.rows[n][1..])
    }

    pub fn row_sum(&self, n: usize) -> Option<BigInt> {
        self.row(n).map(|r| r.iter().sum())
    }
}

pub fn parts_table(n_max: usize) -> Result<PartsTable> {
    let strong = strong_counts(n_max)?;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
    rows.push(vec![BigInt::from(1)]);
    for n in 1..=n_max {
        let mut row = vec![BigInt::new(); n + 1];
        for m in 1..=n {
            let mut v = BigInt::new();
            // The first part has length k; the remaining n - k cells hold m - 1 parts.
            for k in 1..=(n + 1 - m) {
                if let Some(prev) = rows[n - k].get(m - 1) {
                    v += &strong[k] * prev;
                }
            }
            row[m] = v;
        }
        rows.push(row);
    }
    Ok(PartsTable { n_max, rows })
}

/// `E[1/I_n] = (sum_m A_{n,m} / m) / S_n`, with `I_n` the number of parts.
pub fn mean_inverse_parts(table: &PartsTable, n: usize) -> Result<BigRat> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let row = table.row(n).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "n = {n} outside parts table (n_max = {})",
            table.n_max
        ))
    })?;
    let mut weighted = BigRat::new();
    let mut total = BigInt::new();
    for (i, a) in row.iter().enumerate() {
        weighted += BigRat::from((a.clone(), BigInt::from(i + 1)));
        total += a;
    }
    Ok(weighted / total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    // Count of n-subsets of {1..2n-1} summing to 0 mod n, by a DP over
    // (size, residue).
    fn zero_sum_subsets(n: usize) -> BigInt {
        let mut ways = vec![vec![BigInt::new(); n]; n + 1];
        ways[0][0] = BigInt::from(1);
        for x in 1..=(2 * n - 1) {
            for size in (1..=n).rev() {
                for r in 0..n {
                    let from = (r + n - x % n) % n;
                    let add = ways[size - 1][from].clone();
                    ways[size][r] += add;
                }
            }
        }
        ways[n][0].clone()
    }

    #[test]
    fn egz_number_examples() {
        assert_eq!(egz_number(1).unwrap(), 1);
        assert_eq!(egz_number(4).unwrap(), 9);
        assert_eq!(egz_number(5).unwrap(), 26);
        assert_eq!(egz_number(0), Err(Error::ZeroArgument));
    }

    #[test]
    fn egz_matches_subset_dp() {
        for n in 1..=40 {
            assert_eq!(egz_number(n).unwrap(), zero_sum_subsets(n), "n = {n}");
        }
    }

    #[test]
    fn egz_table_examples() {
        assert_eq!(egz_table(4).unwrap().values, ints(&[0, 1, 1, 4, 9]));
        assert_eq!(egz_table(1).unwrap().values, ints(&[0, 1]));
        assert!(egz_table(0).is_err());
        let table = egz_table(300).unwrap();
        for n in 1..=300 {
            assert_eq!(table[n], egz_number(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn score_counts_examples() {
        assert_eq!(score_counts(0).unwrap().values, ints(&[1]));
        assert_eq!(score_counts(4).unwrap().values, ints(&[1, 1, 1, 2, 4]));
        assert_eq!(
            score_counts(8).unwrap().values,
            ints(&[1, 1, 1, 2, 4, 9, 22, 59, 167])
        );
    }

    #[test]
    fn recurrence_holds_to_500() {
        let n_max = 500;
        let s = score_counts(n_max).unwrap();
        let egz = egz_table(n_max).unwrap();
        for n in 1..=n_max {
            let rhs: BigInt = (1..=n).map(|k| BigInt::from(&egz[k] * &s[n - k])).sum();
            assert_eq!(BigInt::from(&s[n] * n as u32), rhs);
            assert!(egz[n] > 0);
        }
    }

    #[test]
    fn strong_counts_examples() {
        assert_eq!(strong_counts(1).unwrap().values, ints(&[0, 1]));
        assert_eq!(strong_counts(3).unwrap().values, ints(&[0, 1, 0, 1]));
        assert!(strong_counts(0).is_err());
    }

    #[test]
    fn renewal_convolution_to_200() {
        let s = score_counts(200).unwrap();
        let t = strong_counts(200).unwrap();
        for n in 1..=200 {
            assert!(t[n] >= 0);
            let conv: BigInt = (1..=n).map(|k| BigInt::from(&t[k] * &s[n - k])).sum();
            assert_eq!(conv, s[n]);
        }
    }

    #[test]
    fn parts_table_examples() {
        let table = parts_table(6).unwrap();
        assert_eq!(table.row(1).unwrap(), ints(&[1]).as_slice());
        assert_eq!(table.row(3).unwrap(), ints(&[1, 0, 1]).as_slice());
        let s = score_counts(6).unwrap();
        for n in 1..=6 {
            assert_eq!(table.row_sum(n).unwrap(), s[n]);
        }
        assert!(table.row(0).is_none());
        assert!(table.row(7).is_none());
        assert_eq!(table.get(3, 3), Some(&BigInt::from(1)));
        assert_eq!(table.get(3, 4), None);
    }

    #[test]
    fn parts_first_column_is_strong() {
        let table = parts_table(40).unwrap();
        let t = strong_counts(40).unwrap();
        for n in 1..=40 {
            assert_eq!(table.get(n, 1).unwrap(), &t[n]);
            // one part per cell only for the staircase 0,1,..,n-1
            assert_eq!(table.get(n, n).unwrap(), &BigInt::from(1));
        }
    }

    #[test]
    fn mean_inverse_parts_examples() {
        let table = parts_table(30).unwrap();
        assert_eq!(mean_inverse_parts(&table, 1).unwrap(), 1);
        assert_eq!(mean_inverse_parts(&table, 3).unwrap(), BigRat::from((2, 3)));
        assert!(mean_inverse_parts(&table, 31).is_err());
        assert!(mean_inverse_parts(&table, 0).is_err());
    }

    #[test]
    fn mean_inverse_parts_identity() {
        let table = parts_table(30).unwrap();
        let s = score_counts(30).unwrap();
        let egz = egz_table(30).unwrap();
        for n in 1..=30 {
            let lhs = mean_inverse_parts(&table, n).unwrap() * BigRat::from(&s[n] * n as u32);
            assert_eq!(lhs, BigRat::from(egz[n].clone()), "n = {n}");
        }
    }
}
