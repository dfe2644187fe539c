//! The Lévy–Khintchine transform of a sequence prefix.
//!
//! For `a_0 = 1` the transform `a*` is defined by
//! `n a_n = sum_{k=1}^n a*_k a_{n-k}` with `a*_0 = 0`. A positive summable
//! sequence is proportional to an infinitely divisible law on the
//! non-negative integers exactly when its transform is non-negative. On a
//! finite prefix that can only be checked up to the prefix length, and
//! reports say so.
//!
//! All convolutions are exact. Floating point (MPFR) appears only in the
//! final `exp`/`sqrt` of [`LkEstimator`] and [`moser_constant`].

use std::fmt;

use rug::float::Round;
use rug::ops::{MulAssignRound, Pow};
use rug::Float;

use crate::error::{Error, Result};
use crate::exactnum::{BigInt, BigRat};
use crate::sequences::{egz_table, IntSeq};

/// Extra decimal digits carried through every floating-point evaluation.
pub const GUARD_DIGITS: u32 = 10;

/// Working precision in bits for `digits` significant decimal digits plus guard.
pub fn working_precision(digits: u32) -> u32 {
    ((digits + GUARD_DIGITS) as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RatSeq {
    pub values: Vec<BigRat>,
}

impl RatSeq {
    pub fn new(values: Vec<BigRat>) -> Self {
        RatSeq { values }
    }

    pub fn from_ints<'a, I: IntoIterator<Item = &'a BigInt>>(values: I) -> Self {
        RatSeq::new(
            values
                .into_iter()
                .map(|v| BigRat::from(v.clone()))
                .collect(),
        )
    }

    /// `values[n] / base^n`, e.g. `S_n / 4^n`.
    pub fn normalized(seq: &IntSeq, base: u32) -> Self {
        let mut pow = BigInt::from(1);
        let mut out = Vec::with_capacity(seq.values.len());
        for v in &seq.values {
            out.push(BigRat::from((v.clone(), pow.clone())));
            pow *= base;
        }
        RatSeq::new(out)
    }

    /// `values[n] * c^n`.
    pub fn scaled(&self, c: &BigRat) -> Self {
        let mut pow = BigRat::from(1);
        let mut out = Vec::with_capacity(self.values.len());
        for v in &self.values {
            out.push(BigRat::from(v * &pow));
            pow *= c;
        }
        RatSeq::new(out)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl std::ops::Index<usize> for RatSeq {
    type Output = BigRat;

    fn index(&self, n: usize) -> &BigRat {
        &self.values[n]
    }
}

fn check_leading(a: &RatSeq, expected: i32) -> Result<()> {
    match a.values.first() {
        None => Err(Error::InvalidArgument("sequence prefix is empty".into())),
        Some(v) if *v == expected => Ok(()),
        Some(v) => Err(Error::LeadingElement {
            expected,
            found: v.to_string(),
        }),
    }
}

/// `a*_n = n a_n - sum_{k=1}^{n-1} a*_k a_{n-k}`; requires `a_0 = 1`.
pub fn lk_forward(a: &RatSeq) -> Result<RatSeq> {
    check_leading(a, 1)?;
    let len = a.len();
    let mut star = vec![BigRat::new(); len];
    for n in 1..len {
        let mut v = BigRat::from(&a[n] * BigRat::from(n));
        for k in 1..n {
            v -= BigRat::from(&star[k] * &a[n - k]);
        }
        star[n] = v;
    }
    Ok(RatSeq::new(star))
}

/// `a_n = (1/n) sum_{k=1}^n a*_k a_{n-k}` with `a_0 = 1`; requires `a*_0 = 0`.
pub fn lk_inverse(a_star: &RatSeq) -> Result<RatSeq> {
    check_leading(a_star, 0)?;
    let len = a_star.len();
    let mut a = Vec::with_capacity(len);
    a.push(BigRat::from(1));
    for n in 1..len {
        let mut v = BigRat::new();
        for k in 1..=n {
            v += BigRat::from(&a_star[k] * &a[n - k]);
        }
        v /= BigRat::from(n);
        a.push(v);
    }
    Ok(RatSeq::new(a))
}

/// Outcome of the non-negativity test on a transform prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LkReport {
    pub transform: RatSeq,
    pub all_nonnegative: bool,
    pub first_negative_index: Option<usize>,
    /// `sum_k a_k` over the prefix; the finite stand-in for the normaliser
    /// of `p_n = a_n / sum_k a_k`.
    pub normalization: BigRat,
}

impl LkReport {
    /// Largest index the verdict covers.
    pub fn verified_to(&self) -> usize {
        self.transform.len().saturating_sub(1)
    }

    pub fn verdict(&self) -> String {
        match self.first_negative_index {
            None => format!(
                "transform non-negative (prefix-verified to {})",
                self.verified_to()
            ),
            Some(i) => format!("not infinitely divisible: transform negative at index {i}"),
        }
    }
}

impl fmt::Display for LkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}; normalization {}",
            self.verdict(),
            self.normalization
        )
    }
}

pub fn check_infinite_divisibility(a: &RatSeq) -> Result<LkReport> {
    check_leading(a, 1)?;
    for (i, v) in a.values.iter().enumerate() {
        if *v <= 0 {
            return Err(Error::NonPositiveEntry {
                index: i,
                value: v.to_string(),
            });
        }
    }
    let transform = lk_forward(a)?;
    let first_negative_index = transform.values.iter().position(|v| *v < 0);
    let normalization = exact_sum(a.values.clone());
    Ok(LkReport {
        transform,
        all_nonnegative: first_negative_index.is_none(),
        first_negative_index,
        normalization,
    })
}

/// Pairwise exact summation; keeps operand sizes balanced on long sums.
pub fn exact_sum(mut terms: Vec<BigRat>) -> BigRat {
    if terms.is_empty() {
        return BigRat::new();
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(x) = it.next() {
            match it.next() {
                Some(y) => next.push(x + y),
                None => next.push(x),
            }
        }
        terms = next;
    }
    terms.pop().unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticsConfig {
    /// Regular-variation index of `a*`; supplied by the caller, not estimated.
    pub gamma: BigRat,
    /// Number of terms `K` kept in `sum_k a*_k / k`.
    pub truncation: usize,
    /// Significant decimal digits requested in the output.
    pub digits: u32,
}

impl AsymptoticsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gamma >= 0 {
            return Err(Error::NonNegativeIndex(self.gamma.to_string()));
        }
        if self.truncation == 0 {
            return Err(Error::InvalidArgument(
                "truncation K must be at least 1".into(),
            ));
        }
        if self.digits == 0 {
            return Err(Error::InvalidArgument("digits must be at least 1".into()));
        }
        Ok(())
    }
}

/// Evaluates `a_n ~ (a*_n / n) exp(sum_{k=1}^K a*_k / k)` for many `n`
/// against one precomputed exponent.
#[derive(Debug, Clone)]
pub struct LkEstimator<'a> {
    a_star: &'a RatSeq,
    cfg: AsymptoticsConfig,
    exponent: BigRat,
    scale: Float,
}

impl<'a> LkEstimator<'a> {
    pub fn new(a_star: &'a RatSeq, cfg: AsymptoticsConfig) -> Result<Self> {
        cfg.validate()?;
        check_leading(a_star, 0)?;
        let available = a_star.len() - 1;
        if cfg.truncation > available {
            return Err(Error::TruncationTooLarge {
                requested: cfg.truncation,
                available,
            });
        }
        let terms = (1..=cfg.truncation)
            .map(|k| BigRat::from(&a_star[k] / BigRat::from(k)))
            .collect();
        let exponent = exact_sum(terms);
        let prec = working_precision(cfg.digits);
        let scale = Float::with_val(prec, &exponent).exp();
        Ok(LkEstimator {
            a_star,
            cfg,
            exponent,
            scale,
        })
    }

    /// The exact truncated exponent `sum_{k=1}^K a*_k / k`.
    pub fn exponent(&self) -> &BigRat {
        &self.exponent
    }

    pub fn config(&self) -> &AsymptoticsConfig {
        &self.cfg
    }

    pub fn estimate(&self, n: usize) -> Result<Float> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        if n >= self.a_star.len() {
            return Err(Error::InvalidArgument(format!(
                "n = {n} beyond transform prefix of length {}",
                self.a_star.len()
            )));
        }
        let prec = self.scale.prec();
        let lead = BigRat::from(&self.a_star[n] / BigRat::from(n));
        Ok(Float::with_val(prec, &lead) * &self.scale)
    }
}

pub fn asymptotic_estimate(a_star: &RatSeq, cfg: &AsymptoticsConfig, n: usize) -> Result<Float> {
    LkEstimator::new(a_star, cfg.clone())?.estimate(n)
}

/// Empirical index `log(a*_{2n} / a*_n) / log 2`, for eyeballing the
/// regular-variation hypothesis. `None` if out of range or non-positive.
pub fn regular_variation_diagnostic(a_star: &RatSeq, n: usize) -> Option<f64> {
    if n == 0 || 2 * n >= a_star.len() || a_star[n] <= 0 || a_star[2 * n] <= 0 {
        return None;
    }
    let ratio = BigRat::from(&a_star[2 * n] / &a_star[n]);
    let r = Float::with_val(64, &ratio);
    Some(r.log2().to_f64())
}

/// `C = (1 / (2 sqrt(pi))) exp(sum_{k=1}^K N_k / (k 4^k))` with a rigorous
/// truncation bound.
#[derive(Debug, Clone)]
pub struct MoserConstant {
    pub truncation: usize,
    pub digits: u32,
    pub exponent: BigRat,
    pub value: Float,
    /// Upper bound on the omitted exponent tail `sum_{k>K} N_k / (k 4^k)`.
    pub exponent_tail_bound: Float,
    /// Upper bound on `C_inf - C_K`.
    pub tail_bound: Float,
}

impl MoserConstant {
    pub fn upper(&self) -> Float {
        Float::with_val(self.value.prec(), &self.value + &self.tail_bound)
    }
}

/// Uses `N_k <= C(2k,k)/k <= 4^k / (k sqrt(pi k))`, so the exponent tail is
/// at most `sum_{k>K} k^{-5/2} / sqrt(pi) <= (2/3) K^{-3/2} / sqrt(pi)`.
pub fn moser_constant(truncation: usize, digits: u32) -> Result<MoserConstant> {
    if truncation == 0 {
        return Err(Error::InvalidArgument(
            "truncation K must be at least 1".into(),
        ));
    }
    if digits == 0 {
        return Err(Error::InvalidArgument("digits must be at least 1".into()));
    }
    let egz = egz_table(truncation)?;
    let mut terms = Vec::with_capacity(truncation);
    for k in 1..=truncation {
        let den = BigInt::from(k) << (2 * k as u32);
        terms.push(BigRat::from((egz[k].clone(), den)));
    }
    let exponent = exact_sum(terms);

    let prec = working_precision(digits);
    let sqrt_pi = Float::with_val(prec, rug::float::Constant::Pi).sqrt();
    let value = Float::with_val(prec, &exponent).exp() / (Float::with_val(prec, 2) * &sqrt_pi);

    let k = Float::with_val(prec, truncation);
    let mut exponent_tail_bound = Float::with_val(prec, 2) / 3;
    exponent_tail_bound /= k.pow(Float::with_val(prec, 1.5)) * &sqrt_pi;
    let mut growth = Float::with_val(prec, &exponent_tail_bound).exp_m1();
    growth.mul_assign_round(&value, Round::Up);
    Ok(MoserConstant {
        truncation,
        digits,
        exponent,
        value,
        exponent_tail_bound,
        tail_bound: growth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::score_counts;
    use proptest::prelude::*;

    fn rat(p: i64, q: i64) -> BigRat {
        BigRat::from((p, q))
    }

    fn rel_err(x: &Float, y: &Float) -> Float {
        let diff = Float::with_val(x.prec(), x - y);
        (diff / y).abs()
    }

    fn rats(v: &[(i64, i64)]) -> RatSeq {
        RatSeq::new(v.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    // Direct evaluation of sum_{k=1}^n a*_k a_{n-k} against n a_n.
    fn satisfies_identity(a: &RatSeq, star: &RatSeq) -> bool {
        (1..a.len()).all(|n| {
            let mut rhs = BigRat::new();
            for k in 1..=n {
                rhs += BigRat::from(&star[k] * &a[n - k]);
            }
            rhs == &a[n] * BigRat::from(n)
        })
    }

    #[test]
    fn forward_degenerate() {
        let a = rats(&[(1, 1), (0, 1), (0, 1), (0, 1)]);
        assert_eq!(lk_forward(&a).unwrap(), rats(&[(0, 1); 4]));
        assert_eq!(lk_forward(&rats(&[(1, 1)])).unwrap(), rats(&[(0, 1)]));
    }

    #[test]
    fn forward_poisson() {
        let mut fact = BigInt::from(1);
        let mut vals = vec![BigRat::from(1)];
        for n in 1..15u32 {
            fact *= n;
            vals.push(BigRat::from((BigInt::from(1), fact.clone())));
        }
        let a = RatSeq::new(vals);
        let star = lk_forward(&a).unwrap();
        assert_eq!(star[1], 1);
        assert!((2..15).all(|k| star[k] == 0));
        assert!(satisfies_identity(&a, &star));
    }

    #[test]
    fn leading_element_checks() {
        assert!(matches!(
            lk_forward(&rats(&[(2, 1), (1, 1)])),
            Err(Error::LeadingElement { expected: 1, .. })
        ));
        assert!(matches!(
            lk_inverse(&rats(&[(1, 1)])),
            Err(Error::LeadingElement { expected: 0, .. })
        ));
        assert!(lk_forward(&RatSeq::default()).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            lk_inverse(&rats(&[(0, 1); 5])).unwrap(),
            rats(&[(1, 1), (0, 1), (0, 1), (0, 1), (0, 1)])
        );
        let egz = egz_table(30).unwrap();
        let s = score_counts(30).unwrap();
        let a = lk_inverse(&RatSeq::from_ints(&egz.values)).unwrap();
        assert_eq!(a, RatSeq::from_ints(&s.values));
    }

    #[test]
    fn normalized_scores_transform_to_normalized_egz() {
        let s = score_counts(50).unwrap();
        let egz = egz_table(50).unwrap();
        let star = lk_forward(&RatSeq::normalized(&s, 4)).unwrap();
        assert_eq!(star, RatSeq::normalized(&egz, 4));
    }

    #[test]
    fn divisibility_examples() {
        let s = score_counts(40).unwrap();
        let report = check_infinite_divisibility(&RatSeq::normalized(&s, 4)).unwrap();
        assert!(report.all_nonnegative);
        assert_eq!(report.first_negative_index, None);
        assert!(report.verdict().contains("prefix-verified to 40"));

        let report = check_infinite_divisibility(&rats(&[(1, 1), (1, 1), (1, 10)])).unwrap();
        assert_eq!(report.transform[2], rat(-4, 5));
        assert_eq!(report.first_negative_index, Some(2));
        assert!(!report.all_nonnegative);
        assert_eq!(report.normalization, rat(21, 10));

        let ones = RatSeq::new(vec![BigRat::from(1); 12]);
        let report = check_infinite_divisibility(&ones).unwrap();
        assert!(report.all_nonnegative);
        assert_eq!(report.transform[1], 1);
        // geometric: a*_n = 1 for all n >= 1
        assert!((1..12).all(|k| report.transform[k] == 1));

        assert!(matches!(
            check_infinite_divisibility(&rats(&[(1, 1), (0, 1)])),
            Err(Error::NonPositiveEntry { index: 1, .. })
        ));
    }

    #[test]
    fn estimate_single_term() {
        let star = rats(&[(0, 1), (3, 2), (0, 1)]);
        let cfg = AsymptoticsConfig {
            gamma: rat(-3, 2),
            truncation: 1,
            digits: 20,
        };
        let est = asymptotic_estimate(&star, &cfg, 1).unwrap();
        let prec = working_precision(20);
        let c = Float::with_val(prec, 1.5);
        let expected = Float::with_val(prec, &c * Float::with_val(prec, c.exp_ref()));
        let rel = rel_err(&est, &expected);
        assert!(rel < 1e-25, "{est} vs {expected}");
    }

    #[test]
    fn estimate_rejections() {
        let star = rats(&[(0, 1), (1, 1), (1, 4)]);
        let mut cfg = AsymptoticsConfig {
            gamma: rat(0, 1),
            truncation: 2,
            digits: 10,
        };
        assert!(matches!(
            asymptotic_estimate(&star, &cfg, 1),
            Err(Error::NonNegativeIndex(_))
        ));
        cfg.gamma = rat(-1, 2);
        cfg.truncation = 3;
        assert!(matches!(
            asymptotic_estimate(&star, &cfg, 1),
            Err(Error::TruncationTooLarge {
                requested: 3,
                available: 2
            })
        ));
        cfg.truncation = 2;
        assert!(asymptotic_estimate(&star, &cfg, 3).is_err());
        assert!(asymptotic_estimate(&star, &cfg, 2).is_ok());
    }

    #[test]
    fn estimate_monotone_in_truncation() {
        let egz = egz_table(200).unwrap();
        let star = RatSeq::normalized(&egz, 4);
        let mut prev: Option<Float> = None;
        for k in [1, 2, 5, 10, 50, 100, 200] {
            let cfg = AsymptoticsConfig {
                gamma: rat(-3, 2),
                truncation: k,
                digits: 15,
            };
            let est = asymptotic_estimate(&star, &cfg, 100).unwrap();
            if let Some(p) = prev {
                assert!(est > p);
            }
            prev = Some(est);
        }
    }

    #[test]
    fn diagnostic_near_minus_three_halves() {
        let egz = egz_table(2000).unwrap();
        let star = RatSeq::normalized(&egz, 4);
        let idx = regular_variation_diagnostic(&star, 1000).unwrap();
        assert!((idx + 1.5).abs() < 0.01, "{idx}");
        assert_eq!(regular_variation_diagnostic(&star, 1001), None);
    }

    #[test]
    fn moser_single_term() {
        let c = moser_constant(1, 20).unwrap();
        assert_eq!(c.exponent, rat(1, 4));
        let prec = working_precision(20);
        let pi = Float::with_val(prec, rug::float::Constant::Pi);
        let expected = Float::with_val(prec, 0.25).exp() / (Float::with_val(prec, 2) * pi.sqrt());
        let rel = rel_err(&c.value, &expected);
        assert!(rel < 1e-25);
        assert!(moser_constant(0, 10).is_err());
        assert!(moser_constant(1, 0).is_err());
    }

    #[test]
    fn moser_increasing_and_bounded() {
        let mut prev: Option<MoserConstant> = None;
        for k in [10, 20, 40, 80, 160, 320] {
            let c = moser_constant(k, 15).unwrap();
            if let Some(p) = &prev {
                assert!(c.value > p.value);
                assert!(c.value <= p.upper());
            }
            prev = Some(c);
        }
    }

    #[test]
    fn egz_below_tail_bound_majorant() {
        let egz = egz_table(2000).unwrap();
        for k in 1..=2000u32 {
            let cb = crate::exactnum::central_binomial(k);
            assert!(BigInt::from(&egz[k as usize] * k) <= cb, "k = {k}");
        }
    }

    #[test]
    fn exact_sum_matches_sequential() {
        let terms: Vec<BigRat> = (1..60).map(|k| rat(k, k * k + 1)).collect();
        let seq = terms.iter().fold(BigRat::new(), |acc, t| acc + t);
        assert_eq!(exact_sum(terms), seq);
        assert_eq!(exact_sum(vec![]), 0);
    }

    fn rat_prefix() -> impl Strategy<Value = RatSeq> {
        prop::collection::vec((-50i64..50, 1i64..20), 0..30).prop_map(|v| {
            let mut vals = vec![BigRat::from(1)];
            vals.extend(v.into_iter().map(|(p, q)| rat(p, q)));
            RatSeq::new(vals)
        })
    }

    proptest! {
        #[test]
        fn forward_inverse_round_trip(a in rat_prefix()) {
            let star = lk_forward(&a).unwrap();
            prop_assert!(satisfies_identity(&a, &star));
            prop_assert_eq!(lk_inverse(&star).unwrap(), a);
        }

        #[test]
        fn inverse_forward_round_trip(a in rat_prefix()) {
            let mut star = a.clone();
            star.values[0] = BigRat::new();
            prop_assert_eq!(lk_forward(&lk_inverse(&star).unwrap()).unwrap(), star);
        }

        #[test]
        fn scaling_covariance(a in rat_prefix(), p in 1i64..10, q in 1i64..10) {
            let c = rat(p, q);
            let lhs = lk_forward(&a.scaled(&c)).unwrap();
            let rhs = lk_forward(&a).unwrap().scaled(&c);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
