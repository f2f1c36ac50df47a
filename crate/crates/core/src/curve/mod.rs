//! Elliptic curves over Q in long Weierstrass form
//! `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`, and their reductions mod p.

mod bsgs;
mod naive;

use rug::Integer;
use sha2::{Digest, Sha256};

use crate::arith::{self, reduce_i128};
use crate::error::{Error, Result};

pub use bsgs::{group_order_bsgs, BSGS_MIN_PRIME, BSGS_RETRIES};
pub use naive::count_points_naive;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveQ {
    /// `[a1, a2, a3, a4, a6]`.
    pub coeffs: [i64; 5],
    pub label: String,
    /// Prime divisors of the model discriminant, ascending.
    pub bad_primes: Vec<u64>,
    pub declared_cm: bool,
    discriminant: Integer,
}

/// Built-in test corpus: `(label, coefficients, declared CM)`.
pub const CORPUS: &[(&str, [i64; 5], bool)] = &[
    ("11a3", [0, -1, 1, 0, 0], false),
    ("37a1", [0, 0, 1, -1, 0], false),
    ("y2=x3-x", [0, 0, 0, -1, 0], true),
    ("y2=x3+x", [0, 0, 0, 1, 0], true),
    ("y2=x3-2", [0, 0, 0, 0, -2], true),
];

fn b_invariants(c: &[i64; 5]) -> [Integer; 4] {
    let [a1, a2, a3, a4, a6] = c.map(Integer::from);
    let b2 = Integer::from(&a1 * &a1) + 4 * &a2;
    let b4 = Integer::from(2 * &a4) + Integer::from(&a1 * &a3);
    let b6 = Integer::from(&a3 * &a3) + 4 * &a6;
    let b8 = Integer::from(&a1 * &a1) * &a6 + Integer::from(4 * &a2) * &a6 - Integer::from(&a1 * &a3) * &a4
        + Integer::from(&a2 * &a3) * &a3
        - Integer::from(&a4 * &a4);
    [b2, b4, b6, b8]
}

fn discriminant_of(c: &[i64; 5]) -> Integer {
    let [b2, b4, b6, b8] = b_invariants(c);
    let b2sq = Integer::from(&b2 * &b2);
    -(b2sq * &b8) - 8 * (Integer::from(&b4 * &b4) * &b4) - 27 * Integer::from(&b6 * &b6)
        + 9 * Integer::from(&b2 * &b4) * &b6
}

/// Prime support of `|n|`; trial division to 2^16, then Pollard rho on what is left.
fn prime_support(n: &Integer) -> Result<Vec<u64>> {
    let mut m = Integer::from(n.abs_ref());
    let mut out = Vec::new();
    for q in crate::prime::simple_sieve(1 << 16) {
        if m.is_divisible_u(q as u32) {
            out.push(q);
            while m.is_divisible_u(q as u32) {
                m /= q as u32;
            }
        }
        if m == 1 {
            break;
        }
    }
    if m > 1 {
        let rest = m.to_u64().ok_or_else(|| Error::Unfactored(m.to_string()))?;
        out.extend(arith::factor(rest).into_iter().map(|(q, _)| q));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

impl CurveQ {
    pub fn new(label: impl Into<String>, coeffs: [i64; 5], declared_cm: bool) -> Result<Self> {
        let discriminant = discriminant_of(&coeffs);
        if discriminant == 0 {
            return Err(Error::Singular);
        }
        let bad_primes = prime_support(&discriminant)?;
        Ok(CurveQ {
            coeffs,
            label: label.into(),
            bad_primes,
            declared_cm,
            discriminant,
        })
    }

    /// A curve from the built-in corpus.
    pub fn builtin(label: &str) -> Option<Self> {
        CORPUS
            .iter()
            .find(|(l, _, _)| *l == label)
            .map(|&(l, c, cm)| CurveQ::new(l, c, cm).expect("corpus curves are nonsingular"))
    }

    pub fn corpus() -> Vec<Self> {
        CORPUS
            .iter()
            .map(|&(l, c, cm)| CurveQ::new(l, c, cm).expect("corpus curves are nonsingular"))
            .collect()
    }

    pub fn discriminant(&self) -> &Integer {
        &self.discriminant
    }

    /// `[b2, b4, b6, b8]`.
    pub fn b_invariants(&self) -> [Integer; 4] {
        b_invariants(&self.coeffs)
    }

    /// `[c4, c6]`.
    pub fn c_invariants(&self) -> [Integer; 2] {
        let [b2, b4, b6, _] = self.b_invariants();
        let c4 = Integer::from(&b2 * &b2) - 24 * Integer::from(&b4);
        let c6 = -(Integer::from(&b2 * &b2) * &b2) + 36 * Integer::from(&b2 * &b4) - 216 * b6;
        [c4, c6]
    }

    pub fn is_good(&self, p: u64) -> bool {
        p != 0 && !self.discriminant.is_divisible(&Integer::from(p))
    }

    /// Stable 64-bit key for this curve's label (first 8 bytes of SHA-256, little-endian).
    pub fn label_hash(&self) -> u64 {
        label_hash(&self.label)
    }

    pub fn reduce(&self, p: u64) -> Reduction {
        if p < 2 || !self.is_good(p) {
            return Reduction::Bad;
        }
        let a = self.coeffs.map(|c| reduce_i128(c as i128, p));
        let b = self.b_invariants().map(|b| mod_u64(&b, p));
        Reduction::Good(ReducedCurve { p, a, b })
    }

    pub(crate) fn reduce_good(&self, p: u64) -> Result<ReducedCurve> {
        match self.reduce(p) {
            Reduction::Good(r) => Ok(r),
            Reduction::Bad => Err(Error::BadReduction { p }),
        }
    }
}

pub fn label_hash(label: &str) -> u64 {
    let digest = Sha256::digest(label.as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

fn mod_u64(n: &Integer, p: u64) -> u64 {
    let (_, r) = n.clone().div_rem_euc(Integer::from(p));
    r.to_u64().expect("residue < p")
}

/// Result of reducing a curve modulo a prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    Good(ReducedCurve),
    Bad,
}

/// A curve over F_p with nonzero discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedCurve {
    pub p: u64,
    /// `[a1, a2, a3, a4, a6] mod p`.
    pub a: [u64; 5],
    /// `[b2, b4, b6, b8] mod p`.
    pub b: [u64; 4],
}

impl ReducedCurve {
    /// `(A, B)` of the isomorphic short model `Y^2 = X^3 + AX + B`
    /// (`A = -27 c4`, `B = -54 c6`); needs `p >= 5`.
    pub fn short_model(&self) -> (u64, u64) {
        let p = self.p;
        debug_assert!(p >= 5);
        let [b2, b4, b6, _] = self.b.map(|v| v as i128);
        let pi = p as i128;
        let c4 = (b2 * b2 % pi - 24 * b4).rem_euclid(pi);
        let c6 = (-(b2 * b2 % pi * b2 % pi) + 36 * (b2 * b4 % pi) - 216 * b6).rem_euclid(pi);
        (reduce_i128(-27 * c4, p), reduce_i128(-54 * c6, p))
    }
}
