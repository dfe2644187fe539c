//! Pairs `(B, m)` of a score bridge `B` and a shift `0 <= m < 2 l(B)`, where
//! `2 l(B)` is the length of the first irreducible part, correspond one to
//! one with bridges of sawtooth area divisible by `n`. The map shifts the
//! increments of `B` cyclically to the left by `m`.
//!
//! The inverse scans all `2n` rotations of the target; uniqueness of the
//! preimage is checked rather than assumed.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{
    bridge_from_scores, enumerate_bridges_area_zero_mod_n, enumerate_score_sequences,
    scores_from_bridge, Bridge,
};

/// Times `k` (`0 < k <= n`) with `B_{2k} = 0` and zero prefix area.
pub fn irreducible_breakpoints(b: &Bridge) -> Result<Vec<usize>> {
    if scores_from_bridge(b).is_none() {
        return Err(Error::NotScoreBridge);
    }
    Ok((1..=b.n())
        .filter(|&k| b.prefix_area(k) == Some(0))
        .collect())
}

/// `l(B)`: the first breakpoint.
pub fn first_part_length(b: &Bridge) -> Result<usize> {
    let bps = irreducible_breakpoints(b)?;
    Ok(bps[0])
}

/// Rotate the increments left by `m`: the `j`-th increment of the result is
/// the `(j + m)`-th of `b`, indices mod `2n`.
pub fn cyclic_shift(b: &Bridge, m: usize) -> Result<Bridge> {
    let len = b.len();
    if m >= len {
        return Err(Error::ShiftOutOfRange { m, limit: len });
    }
    let mut downs: Vec<usize> = b
        .down_steps()
        .iter()
        .map(|&d| (d + len - m - 1) % len + 1)
        .collect();
    downs.sort_unstable();
    Bridge::new(downs)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ShiftPair {
    bridge: Bridge,
    m: usize,
}

impl ShiftPair {
    pub fn new(bridge: Bridge, m: usize) -> Result<Self> {
        let ell = first_part_length(&bridge)?;
        if m >= 2 * ell {
            return Err(Error::ShiftOutOfRange { m, limit: 2 * ell });
        }
        Ok(ShiftPair { bridge, m })
    }

    pub fn bridge(&self) -> &Bridge {
        &self.bridge
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

impl fmt::Display for ShiftPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, m={})", self.bridge, self.m)
    }
}

pub fn forward_map(p: &ShiftPair) -> Bridge {
    cyclic_shift(&p.bridge, p.m).expect("m < 2l <= 2n")
}

/// All pairs `(B, m)` with `forward_map(B, m) = b_prime`, found by scanning
/// rotations.
pub fn preimages(b_prime: &Bridge) -> Vec<ShiftPair> {
    let len = b_prime.len();
    let mut found = Vec::new();
    for r in 0..len {
        let candidate = cyclic_shift(b_prime, r).expect("r < 2n");
        if let Ok(ell) = first_part_length(&candidate) {
            let m = (len - r) % len;
            if m < 2 * ell {
                found.push(ShiftPair {
                    bridge: candidate,
                    m,
                });
            }
        }
    }
    found
}

pub fn inverse_map(b_prime: &Bridge) -> Result<ShiftPair> {
    let n = b_prime.n();
    let area = b_prime.sawtooth_area();
    if area.rem_euclid(n as i64) != 0 {
        return Err(Error::NotInCodomain { area, n });
    }
    let mut found = preimages(b_prime);
    if found.len() != 1 {
        return Err(Error::PreimageCount {
            bridge: b_prime.to_string(),
            count: found.len(),
        });
    }
    Ok(found.pop().unwrap())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Failure {
    /// Two pairs map to the same bridge.
    Collision {
        image: String,
        first: String,
        second: String,
    },
    /// An image whose area is not divisible by `n`.
    OffTarget { pair: String, area: i64 },
    /// A codomain bridge with no preimage or several.
    BadPreimageCount { bridge: String, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BijectionReport {
    pub n: usize,
    pub score_sequences: usize,
    /// `sum_B 2 l(B)` over score bridges.
    pub domain_size: usize,
    /// Number of bridges with area divisible by `n`.
    pub codomain_size: usize,
    pub is_injective: bool,
    pub is_surjective: bool,
    pub failures: Vec<Failure>,
}

impl BijectionReport {
    pub fn is_bijective(&self) -> bool {
        self.is_injective && self.is_surjective
    }
}

impl fmt::Display for BijectionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let relation = if self.domain_size == self.codomain_size {
            "="
        } else {
            "!="
        };
        let verdict = match (self.is_injective, self.is_surjective) {
            (true, true) => "bijective",
            (true, false) => "injective, not surjective",
            (false, true) => "surjective, not injective",
            (false, false) => "neither injective nor surjective",
        };
        write!(
            f,
            "n = {}: domain {} {} codomain {}, {}",
            self.n, self.domain_size, relation, self.codomain_size, verdict
        )
    }
}

/// Exhaustively check that `forward_map` is a bijection onto the bridges
/// with area divisible by `n`.
pub fn verify_bijection(n: usize, bound: usize) -> Result<BijectionReport> {
    let scores = enumerate_score_sequences(n, bound)?;
    let codomain = enumerate_bridges_area_zero_mod_n(n, bound)?;
    let mut failures = Vec::new();

    let mut images: HashMap<Bridge, ShiftPair> = HashMap::new();
    let mut domain_size = 0;
    let mut is_injective = true;
    let mut on_target = true;
    for s in &scores {
        let b = bridge_from_scores(s)?;
        let ell = first_part_length(&b)?;
        for m in 0..2 * ell {
            domain_size += 1;
            let pair = ShiftPair {
                bridge: b.clone(),
                m,
            };
            let image = forward_map(&pair);
            let area = image.sawtooth_area();
            if area.rem_euclid(n as i64) != 0 {
                on_target = false;
                failures.push(Failure::OffTarget {
                    pair: pair.to_string(),
                    area,
                });
            }
            if let Some(prev) = images.get(&image) {
                is_injective = false;
                failures.push(Failure::Collision {
                    image: image.to_string(),
                    first: prev.to_string(),
                    second: pair.to_string(),
                });
            } else {
                images.insert(image, pair);
            }
        }
    }

    let mut is_surjective = on_target;
    for b in &codomain {
        let pre = preimages(b);
        if pre.len() != 1 {
            failures.push(Failure::BadPreimageCount {
                bridge: b.to_string(),
                count: pre.len(),
            });
            if pre.is_empty() {
                is_surjective = false;
            } else {
                is_injective = false;
            }
        }
        if !images.contains_key(b) {
            is_surjective = false;
        }
    }

    Ok(BijectionReport {
        n,
        score_sequences: scores.len(),
        domain_size,
        codomain_size: codomain.len(),
        is_injective,
        is_surjective,
        failures,
    })
}
