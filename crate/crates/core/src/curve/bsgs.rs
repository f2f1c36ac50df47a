//! Group order of `E(F_p)` by baby-step giant-step over the Hasse interval.
//!
//! Each random point `P` yields its exact order; the running lcm `L` of those
//! orders pins `#E(F_p)` once exactly one multiple of `L` lies in
//! `[p + 1 - [2√p], p + 1 + [2√p]]`.

use std::collections::HashMap;

use num_integer::Integer as _;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ReducedCurve;
use crate::arith::{add_mod, factor, inv_mod, isqrt, mul_mod, sqrt_mod, sub_mod};
use crate::error::{Error, Result};

/// Below this prime the Hasse interval is short enough relative to typical
/// point orders that several candidates are common; callers count naively.
pub const BSGS_MIN_PRIME: u64 = 230;

/// Random points tried before giving up with [`Error::Ambiguous`].
pub const BSGS_RETRIES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Point {
    Infinity,
    Affine(u64, u64),
}

/// `Y^2 = X^3 + AX + B` over F_p, `p >= 5`.
struct ShortCurve {
    p: u64,
    a: u64,
    b: u64,
}

impl ShortCurve {
    fn rhs(&self, x: u64) -> u64 {
        let p = self.p;
        let x2 = mul_mod(x, x, p);
        add_mod(add_mod(mul_mod(x2, x, p), mul_mod(self.a, x, p), p), self.b, p)
    }

    fn neg(&self, pt: Point) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x, sub_mod(0, y, self.p)),
        }
    }

    fn add(&self, u: Point, v: Point) -> Point {
        let p = self.p;
        let (x1, y1, x2, y2) = match (u, v) {
            (Point::Infinity, _) => return v,
            (_, Point::Infinity) => return u,
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if add_mod(y1, y2, p) == 0 {
                return Point::Infinity;
            }
            let num = add_mod(mul_mod(3, mul_mod(x1, x1, p), p), self.a, p);
            let den = inv_mod(add_mod(y1, y1, p), p).expect("2y is a unit when y != 0");
            mul_mod(num, den, p)
        } else {
            let den = inv_mod(sub_mod(x2, x1, p), p).expect("x2 - x1 is a unit");
            mul_mod(sub_mod(y2, y1, p), den, p)
        };
        let x3 = sub_mod(sub_mod(mul_mod(slope, slope, p), x1, p), x2, p);
        let y3 = sub_mod(mul_mod(slope, sub_mod(x1, x3, p), p), y1, p);
        Point::Affine(x3, y3)
    }

    fn mul(&self, mut k: u64, pt: Point) -> Point {
        let mut acc = Point::Infinity;
        let mut base = pt;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    fn random_point(&self, rng: &mut ChaCha8Rng) -> Point {
        loop {
            let x = rng.gen_range(0..self.p);
            if let Some(y) = sqrt_mod(self.rhs(x), self.p) {
                return Point::Affine(x, y);
            }
        }
    }

    /// Exact order of `pt`, given some positive multiple `n` of it.
    fn order_from_multiple(&self, pt: Point, n: u64) -> u64 {
        let mut ord = n;
        for (q, e) in factor(n) {
            for _ in 0..e {
                if self.mul(ord / q, pt) == Point::Infinity {
                    ord /= q;
                } else {
                    break;
                }
            }
        }
        ord
    }

    /// Order of `pt`, found by a baby-step giant-step search of `[lo, hi]`
    /// for an annihilating multiple. `None` when no multiple lies there.
    fn order_in_interval(&self, pt: Point, lo: u64, hi: u64) -> Option<u64> {
        let width = hi - lo + 1;
        let m = isqrt(width - 1) + 1;
        let mut baby: HashMap<Point, u64> = HashMap::with_capacity(m as usize);
        let mut cur = Point::Infinity;
        for j in 0..m {
            if j > 0 && cur == Point::Infinity {
                // order j < m: the first return to infinity is the order itself
                return Some(j);
            }
            baby.entry(cur).or_insert(j);
            cur = self.add(cur, pt);
        }
        // cur = m·P; giant steps walk -(lo + i·m)·P
        let step = self.neg(cur);
        let mut giant = self.neg(self.mul(lo, pt));
        let mut i = 0;
        while i * m <= width {
            if let Some(&j) = baby.get(&giant) {
                let n = lo + i * m + j;
                if n <= hi {
                    return Some(self.order_from_multiple(pt, n));
                }
            }
            giant = self.add(giant, step);
            i += 1;
        }
        None
    }
}

/// `#E(F_p)` by baby-step giant-step, for `p >= BSGS_MIN_PRIME`.
///
/// Points are drawn from a generator seeded by `p`, so the result does not
/// depend on thread scheduling.
pub fn group_order_bsgs(curve: &ReducedCurve) -> Result<u64> {
    let p = curve.p;
    if p < BSGS_MIN_PRIME {
        return Err(Error::param(
            "p",
            format!("baby-step giant-step needs p >= {BSGS_MIN_PRIME}"),
        ));
    }
    let (a, b) = curve.short_model();
    let short = ShortCurve { p, a, b };
    let w = isqrt(4 * p);
    let (lo, hi) = (p + 1 - w, p + 1 + w);
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mut lcm = 1u64;
    for _ in 0..BSGS_RETRIES {
        let pt = short.random_point(&mut rng);
        let ord = short
            .order_in_interval(pt, lo, hi)
            .expect("the group order annihilates every point and lies in the Hasse interval");
        lcm = lcm.lcm(&ord);
        let first = lo.div_ceil(lcm) * lcm;
        if first <= hi && first + lcm > hi {
            return Ok(first);
        }
    }
    Err(Error::Ambiguous {
        p,
        attempts: BSGS_RETRIES,
    })
}
