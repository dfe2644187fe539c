//! Bridges of length `2n`, their sawtooth areas, and the Erdős–Moser
//! encoding of score sequences as bridges (`d_i = s_i + i`).
//!
//! Also hosts the exhaustive enumerators used as oracles elsewhere; these
//! refuse `n` above a caller-supplied bound.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::BigInt;

pub const DEFAULT_ENUMERATION_BOUND: usize = 10;

/// A ±1 bridge of length `2n`, stored as its down-step times
/// `1 <= d_1 < ... < d_n <= 2n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Bridge {
    n: usize,
    down_steps: Vec<usize>,
}

impl Bridge {
    pub fn new(down_steps: Vec<usize>) -> Result<Self> {
        let n = down_steps.len();
        if n == 0 {
            return Err(Error::InvalidBridge("needs at least one down step".into()));
        }
        if !down_steps.iter().tuple_windows().all(|(a, b)| a < b) {
            return Err(Error::InvalidBridge(format!(
                "down steps {down_steps:?} not strictly increasing"
            )));
        }
        if down_steps[0] < 1 || down_steps[n - 1] > 2 * n {
            return Err(Error::InvalidBridge(format!(
                "down steps {down_steps:?} outside 1..={}",
                2 * n
            )));
        }
        Ok(Bridge { n, down_steps })
    }

    /// Down steps at odd times; oscillates between 0 and -1.
    pub fn sawtooth(n: usize) -> Result<Self> {
        Bridge::new((1..=n).map(|i| 2 * i - 1).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn down_steps(&self) -> &[usize] {
        &self.down_steps
    }

    pub fn len(&self) -> usize {
        2 * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Increments `B_t - B_{t-1}` for `t = 1..=2n`.
    pub fn increments(&self) -> Vec<i64> {
        let mut inc = vec![1i64; 2 * self.n];
        for &d in &self.down_steps {
            inc[d - 1] = -1;
        }
        inc
    }

    /// `B_0, ..., B_{2n}`.
    pub fn walk(&self) -> Vec<i64> {
        let mut w = Vec::with_capacity(2 * self.n + 1);
        w.push(0);
        let mut h = 0;
        for step in self.increments() {
            h += step;
            w.push(h);
        }
        w
    }

    /// `a(B) = -n^2 + sum_i d_i`.
    pub fn sawtooth_area(&self) -> i64 {
        let s: usize = self.down_steps.iter().sum();
        s as i64 - (self.n * self.n) as i64
    }

    /// `a(B) = (1/2) [n + sum_t (2n + 1 - t)(B_t - B_{t-1})]`.
    pub fn area_by_increments(&self) -> i64 {
        let two_n = 2 * self.n as i64;
        let weighted: i64 = self
            .increments()
            .iter()
            .enumerate()
            .map(|(i, step)| (two_n - i as i64) * step)
            .sum();
        let doubled = self.n as i64 + weighted;
        debug_assert!(doubled % 2 == 0);
        doubled / 2
    }

    /// Whether `B_{2k} = 0`.
    pub fn returns_at(&self, k: usize) -> bool {
        k <= self.n && self.down_steps.iter().take_while(|&&d| d <= 2 * k).count() == k
    }

    /// Area of the sub-bridge `(B_0, ..., B_{2k})`, defined only when `B_{2k} = 0`.
    pub fn prefix_area(&self, k: usize) -> Option<i64> {
        if !self.returns_at(k) {
            return None;
        }
        let s: usize = self.down_steps[..k].iter().sum();
        Some(s as i64 - (k * k) as i64)
    }

    /// Running area against the sawtooth, times four:
    /// `R(t) = sum_{u<=t} (B_{u-1} + B_u + 1)`. At return times `2k`,
    /// `R(2k) = 4 a(B^(2k))`.
    pub fn area_profile(&self) -> Vec<i64> {
        let w = self.walk();
        let mut out = Vec::with_capacity(w.len());
        out.push(0);
        let mut acc = 0;
        for u in 1..w.len() {
            acc += w[u - 1] + w[u] + 1;
            out.push(acc);
        }
        out
    }

    /// Area against the sawtooth raised by `delta`, integrated step by step.
    pub fn translated_area(&self, delta: i64) -> i64 {
        let w = self.walk();
        let reference: Vec<i64> = Bridge::sawtooth(self.n)
            .expect("n >= 1")
            .walk()
            .into_iter()
            .map(|h| h + delta)
            .collect();
        let mut twice_area = 0;
        for u in 1..w.len() {
            twice_area += (w[u - 1] + w[u]) - (reference[u - 1] + reference[u]);
        }
        debug_assert!(twice_area % 4 == 0);
        twice_area / 4
    }

    pub fn ends_with_up_step(&self) -> bool {
        self.down_steps[self.n - 1] < 2 * self.n
    }
}

impl fmt::Display for Bridge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.down_steps.iter().join(","))
    }
}

pub fn sawtooth_area(b: &Bridge) -> i64 {
    b.sawtooth_area()
}

/// A score sequence `s_1 <= ... <= s_n` satisfying Landau's conditions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ScoreSeq {
    scores: Vec<usize>,
}

impl ScoreSeq {
    pub fn new(scores: Vec<usize>) -> Result<Self> {
        let signed: Vec<i64> = scores.iter().map(|&s| s as i64).collect();
        if !is_score_sequence(&signed) {
            return Err(Error::InvalidScoreSequence(format!("{scores:?}")));
        }
        Ok(ScoreSeq { scores })
    }

    /// `0, 1, ..., n-1`.
    pub fn staircase(n: usize) -> Self {
        ScoreSeq {
            scores: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.scores.len()
    }

    pub fn scores(&self) -> &[usize] {
        &self.scores
    }
}

impl fmt::Display for ScoreSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scores.iter().all(|&s| s < 10) {
            write!(f, "{}", self.scores.iter().join(""))
        } else {
            write!(f, "({})", self.scores.iter().join(","))
        }
    }
}

fn choose2(k: i64) -> i64 {
    k * (k - 1) / 2
}

/// Nondecreasing, within `[0, n-1]`, total `C(n,2)`, and every partial sum
/// at least `C(k,2)`.
pub fn is_score_sequence(s: &[i64]) -> bool {
    let n = s.len() as i64;
    let mut partial = 0;
    for (i, &x) in s.iter().enumerate() {
        if x < 0 || x > n - 1 || (i > 0 && x < s[i - 1]) {
            return false;
        }
        partial += x;
        if partial < choose2(i as i64 + 1) {
            return false;
        }
    }
    partial == choose2(n)
}

/// Down steps at `d_i = s_i + i`.
pub fn bridge_from_scores(s: &ScoreSeq) -> Result<Bridge> {
    Bridge::new(
        s.scores
            .iter()
            .enumerate()
            .map(|(i, &x)| x + i + 1)
            .collect(),
    )
}

/// `s_i = d_i - i` when that is a score sequence.
pub fn scores_from_bridge(b: &Bridge) -> Option<ScoreSeq> {
    let scores: Vec<usize> = b
        .down_steps
        .iter()
        .enumerate()
        .map(|(i, &d)| d - (i + 1))
        .collect();
    ScoreSeq::new(scores).ok()
}

/// Swap up and down steps; the new down steps are the complement in `1..=2n`.
pub fn reflect(b: &Bridge) -> Bridge {
    let downs: Vec<usize> = (1..=2 * b.n)
        .filter(|t| b.down_steps.binary_search(t).is_err())
        .collect();
    Bridge::new(downs).expect("complement of a balanced step set is balanced")
}

fn check_bound(n: usize, bound: usize) -> Result<()> {
    if n > bound {
        return Err(Error::AboveBound { n, bound });
    }
    Ok(())
}

/// Every bridge of half-length `n`, in lexicographic order of down steps.
pub fn all_bridges(n: usize) -> impl Iterator<Item = Bridge> {
    (1..=2 * n)
        .combinations(n)
        .filter(move |_| n > 0)
        .map(|d| Bridge {
            n: d.len(),
            down_steps: d,
        })
}

/// All score sequences of length `n`, lexicographic.
pub fn enumerate_score_sequences(n: usize, bound: usize) -> Result<Vec<ScoreSeq>> {
    check_bound(n, bound)?;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    extend_scores(n, 0, &mut current, &mut out);
    Ok(out)
}

fn extend_scores(n: usize, partial: usize, current: &mut Vec<usize>, out: &mut Vec<ScoreSeq>) {
    let k = current.len();
    let total = n * n.saturating_sub(1) / 2;
    if k == n {
        if partial == total {
            out.push(ScoreSeq {
                scores: current.clone(),
            });
        }
        return;
    }
    let lo = current.last().copied().unwrap_or(0);
    let remaining = n - k;
    for s in lo..n {
        let next = partial + s;
        // Landau at k + 1, and the tail (all >= s) must still fit under the total.
        if next < (k + 1) * k / 2 || partial + s * remaining > total {
            continue;
        }
        current.push(s);
        extend_scores(n, next, current, out);
        current.pop();
    }
}

/// Bridges whose sawtooth area is divisible by `n`; there are `2 N_n`.
pub fn enumerate_bridges_area_zero_mod_n(n: usize, bound: usize) -> Result<Vec<Bridge>> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    check_bound(n, bound)?;
    Ok(all_bridges(n)
        .filter(|b| b.sawtooth_area().rem_euclid(n as i64) == 0)
        .collect())
}

/// Number of `n`-subsets of `{1, ..., 2n-1}` with sum divisible by `n`.
pub fn brute_force_egz(n: usize, bound: usize) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    check_bound(n, bound)?;
    let count = (1..2 * n)
        .combinations(n)
        .filter(|t| t.iter().sum::<usize>() % n == 0)
        .count();
    Ok(BigInt::from(count))
}
