//! Exact integer and rational arithmetic, plus the small amount of number
//! theory needed by the EGZ closed form: Euler's totient, divisor lists and
//! central binomial coefficients.
//!
//! `BigInt` and `BigRat` are GMP-backed. `BigRat` is always kept in lowest
//! terms with a positive denominator.

use crate::error::{Error, Result};

pub type BigInt = rug::Integer;
pub type BigRat = rug::Rational;

/// Euler's totient by trial-division factorisation.
pub fn totient(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut phi = n;
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if rest > 1 {
        phi -= phi / rest;
    }
    Ok(phi)
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// `(2d)! / (d!)^2`.
pub fn central_binomial(d: u32) -> BigInt {
    BigInt::from(BigInt::binomial_u(2 * d, d))
}

/// Central binomials `C(0,0), C(2,1), ..., C(2*d_max, d_max)` built by the
/// ratio `C(2d+2, d+1) = C(2d, d) * (2d+1)(2d+2) / (d+1)^2`.
pub fn central_binomials(d_max: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(d_max + 1);
    let mut c = BigInt::from(1);
    out.push(c.clone());
    for d in 0..d_max as u64 {
        c *= (2 * d + 1) * 2;
        c.div_exact_u_mut((d + 1) as u32);
        out.push(c.clone());
    }
    out
}

/// Plain positional decimal with `digits` significant digits (no exponent).
pub fn format_decimal(x: &rug::Float, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let (neg, mantissa, exp) = x.to_sign_string_exp(10, Some(digits.max(1)));
    let Some(exp) = exp else {
        return "0".to_string();
    };
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    let len = mantissa.len() as i32;
    if exp <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp) as usize));
        out.push_str(&mantissa);
    } else if exp >= len {
        out.push_str(&mantissa);
        out.extend(std::iter::repeat_n('0', (exp - len) as usize));
    } else {
        out.push_str(&mantissa[..exp as usize]);
        out.push('.');
        out.push_str(&mantissa[exp as usize..]);
    }
    out
}

/// Smallest-prime-factor sieve over `1..=bound`, used for table builds.
#[derive(Debug, Clone)]
pub struct Sieve {
    spf: Vec<u32>,
}

impl Sieve {
    pub fn new(bound: usize) -> Self {
        let mut spf = vec![0u32; bound + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=bound {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let lim = spf[i];
            for &p in &primes {
                if p > lim || i * p as usize > bound {
                    break;
                }
                spf[i * p as usize] = p;
            }
        }
        Sieve { spf }
    }

    pub fn bound(&self) -> usize {
        self.spf.len() - 1
    }

    /// Prime factorisation as (prime, exponent) pairs, ascending.
    pub fn factorize(&self, n: usize) -> Vec<(usize, u32)> {
        assert!(n >= 1 && n <= self.bound(), "{n} outside sieve range");
        let mut out: Vec<(usize, u32)> = Vec::new();
        let mut x = n;
        while x > 1 {
            let p = self.spf[x] as usize;
            x /= p;
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `phi(0..=bound)` with a placeholder 0 at index 0.
    pub fn totients(&self) -> Vec<u64> {
        let bound = self.bound();
        let mut phi = vec![0u64; bound + 1];
        if bound >= 1 {
            phi[1] = 1;
        }
        for i in 2..=bound {
            let p = self.spf[i] as usize;
            let m = i / p;
            phi[i] = if m.is_multiple_of(p) {
                phi[m] * p as u64
            } else {
                phi[m] * (p as u64 - 1)
            };
        }
        phi
    }

    pub fn divisors(&self, n: usize) -> Vec<usize> {
        let mut divs = vec![1usize];
        for (p, e) in self.factorize(n) {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}
