//! Prime enumeration over half-open ranges `(lo, hi]` and the sub-window
//! partition of a dyadic window `(x, 2x]`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::isqrt;
use crate::error::{Error, Result};

/// Integers covered by one sieve segment.
pub const SEGMENT_LEN: u64 = 1 << 20;

const MAX_HI: u64 = i64::MAX as u64;

/// Plain sieve of Eratosthenes returning every prime `<= n`.
pub fn simple_sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

struct Segmenter {
    /// Odd base primes up to `√hi`.
    base: Vec<u64>,
    lo: u64,
    hi: u64,
    first: u64,
}

impl Segmenter {
    fn new(lo: u64, hi: u64) -> Result<Self> {
        if hi < lo {
            return Err(Error::EmptyRange { lo, hi });
        }
        if hi > MAX_HI {
            return Err(Error::param("hi", format!("{hi} exceeds 2^63 - 1")));
        }
        let mut base = simple_sieve(isqrt(hi));
        base.retain(|&q| q != 2);
        // segments start on an even integer so slot i holds start + 2i + 1
        let first = (lo + 1) & !1;
        Ok(Segmenter { base, lo, hi, first })
    }

    fn segment_count(&self) -> u64 {
        if self.hi <= self.lo {
            return 0;
        }
        (self.hi - self.first) / SEGMENT_LEN + 1
    }

    /// Sieve segment `k`, handing every prime in `(lo, hi]` it covers to `emit`.
    fn run(&self, k: u64, mut emit: impl FnMut(u64)) {
        let start = self.first + k * SEGMENT_LEN;
        let end = (start + SEGMENT_LEN).min(self.hi + 1);
        if start <= 2 && 2 > self.lo && 2 <= self.hi {
            emit(2);
        }
        // odd integers in [start, end)
        let slots = ((end - start) / 2) as usize;
        let mut composite = vec![false; slots];
        for &q in &self.base {
            let qq = q * q;
            if qq >= end {
                break;
            }
            let mut m = if qq >= start { qq } else { start.div_ceil(q) * q };
            if m % 2 == 0 {
                m += q;
            }
            let mut i = ((m - start) / 2) as usize;
            while i < slots {
                composite[i] = true;
                i += q as usize;
            }
        }
        for (i, &c) in composite.iter().enumerate() {
            let n = start + 2 * i as u64 + 1;
            if n > self.hi {
                break;
            }
            if !c && n > 1 && n > self.lo {
                emit(n);
            }
        }
    }
}

/// Ascending primes `p` with `lo < p <= hi`, segmented so the working memory
/// beyond the output is `O(√hi + SEGMENT_LEN)` per worker.
pub fn sieve_range(lo: u64, hi: u64) -> Result<Vec<u64>> {
    let seg = Segmenter::new(lo, hi)?;
    let chunks: Vec<Vec<u64>> = (0..seg.segment_count())
        .into_par_iter()
        .map(|k| {
            let mut v = Vec::new();
            seg.run(k, |p| v.push(p));
            v
        })
        .collect();
    Ok(chunks.concat())
}

/// Number of primes in `(lo, hi]`, without materializing them.
pub fn count_range(lo: u64, hi: u64) -> Result<u64> {
    let seg = Segmenter::new(lo, hi)?;
    Ok((0..seg.segment_count())
        .into_par_iter()
        .map(|k| {
            let mut c = 0u64;
            seg.run(k, |_| c += 1);
            c
        })
        .sum())
}

/// `π(x)`, the number of primes `<= x`.
pub fn prime_count(x: u64) -> u64 {
    count_range(0, x).expect("(0, x] is a valid range")
}

/// A half-integer `n + 1/2`, stored as `2n + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInteger {
    twice: u64,
}

impl HalfInteger {
    /// `n + 1/2`.
    pub fn above(n: u64) -> Self {
        HalfInteger { twice: 2 * n + 1 }
    }

    /// The integer part `n`; an integer `m` lies below this boundary iff `m <= n`.
    pub fn floor(self) -> u64 {
        self.twice / 2
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

/// The sub-window partition `x_j = [x(1 + j/B)] + 1/2`, `j = 0..=B`, `B = [ω]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeWindow {
    pub x: u64,
    pub omega: f64,
    pub b: u64,
    pub boundaries: Vec<HalfInteger>,
}

impl PrimeWindow {
    /// Integer ranges `(floor(x_j), floor(x_{j+1})]`, one per sub-window.
    pub fn subwindows(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.boundaries.windows(2).map(|w| (w[0].floor(), w[1].floor()))
    }

    /// The integer range `(floor(x_0), floor(x_B)]`, equal to `(x, 2x]`.
    pub fn span(&self) -> (u64, u64) {
        (
            self.boundaries[0].floor(),
            self.boundaries[self.boundaries.len() - 1].floor(),
        )
    }

    /// Index of the sub-window holding integer `n`, if any.
    pub fn locate(&self, n: u64) -> Option<usize> {
        let (lo, hi) = self.span();
        if n <= lo || n > hi {
            return None;
        }
        // first boundary whose floor is >= n closes the sub-window
        let idx = self.boundaries.partition_point(|b| b.floor() < n);
        Some(idx - 1)
    }
}

pub fn window_plan(x: u64, omega: f64) -> Result<PrimeWindow> {
    if x < 2 {
        return Err(Error::param("x", format!("window anchor must be >= 2, got {x}")));
    }
    if !omega.is_finite() || omega < 1.0 {
        return Err(Error::param(
            "omega",
            format!("must be a finite real >= 1, got {omega}"),
        ));
    }
    let b = omega.floor() as u64;
    if b > x {
        return Err(Error::param(
            "omega",
            format!("[omega] = {b} exceeds x = {x}; sub-windows would be empty"),
        ));
    }
    if x > MAX_HI / 2 {
        return Err(Error::param("x", "2x exceeds 2^63 - 1"));
    }
    let boundaries = (0..=b)
        .map(|j| HalfInteger::above(x + ((x as u128 * j as u128) / b as u128) as u64))
        .collect();
    Ok(PrimeWindow {
        x,
        omega,
        b,
        boundaries,
    })
}
