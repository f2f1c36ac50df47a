use super::CurveQ;
use crate::arith::{add_mod, mul_mod};
use crate::error::Result;

/// `#E(F_p)` by direct counting.
///
/// For odd `p` the equation is completed to `(2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6`,
/// so each `x` contributes `1 + χ(rhs)` points, read from a table of squares.
/// `p = 2` is enumerated pair by pair.
pub fn count_points_naive(curve: &CurveQ, p: u64) -> Result<u64> {
    let r = curve.reduce_good(p)?;
    if p == 2 {
        let [a1, a2, a3, a4, a6] = r.a;
        let mut affine = 0;
        for x in 0..2u64 {
            for y in 0..2u64 {
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                if (lhs + rhs) % 2 == 0 {
                    affine += 1;
                }
            }
        }
        return Ok(affine + 1);
    }
    let n = p as usize;
    let mut chi = vec![-1i8; n];
    chi[0] = 0;
    for x in 1..=(p - 1) / 2 {
        chi[mul_mod(x, x, p) as usize] = 1;
    }
    let [b2, b4, b6, _] = r.b;
    let two_b4 = add_mod(b4, b4, p);
    let four = 4 % p;
    let mut sum: i64 = 0;
    for x in 0..p {
        // Horner: ((4x + b2)x + 2b4)x + b6
        let mut v = add_mod(mul_mod(four, x, p), b2, p);
        v = add_mod(mul_mod(v, x, p), two_b4, p);
        v = add_mod(mul_mod(v, x, p), b6, p);
        sum += chi[v as usize] as i64;
    }
    Ok((p as i64 + 1 + sum) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    /// Every `(x, y)` pair against the long Weierstrass equation.
    fn brute_count(curve: &CurveQ, p: u64) -> u64 {
        let c = curve.coeffs.map(|v| v.rem_euclid(p as i64) as u64);
        let [a1, a2, a3, a4, a6] = c;
        let mut n = 1;
        for x in 0..p {
            for y in 0..p {
                let lhs = (y * y + a1 * x % p * y + a3 * y) % p;
                let rhs = (x * x % p * x + a2 * x % p * x + a4 * x + a6) % p;
                if lhs == rhs {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn examples_for_11a3() {
        let e = CurveQ::builtin("11a3").unwrap();
        assert_eq!(count_points_naive(&e, 2).unwrap(), 5);
        assert_eq!(count_points_naive(&e, 3).unwrap(), 5);
        assert_eq!(count_points_naive(&e, 5).unwrap(), 5);
        assert_eq!(count_points_naive(&e, 13).unwrap(), 10);
        assert!(matches!(count_points_naive(&e, 11), Err(Error::BadReduction { p: 11 })));
    }

    #[test]
    fn agrees_with_pair_enumeration() {
        let mut curves = CurveQ::corpus();
        curves.push(CurveQ::new("mixed", [1, -1, 1, -3, 5], false).unwrap());
        for e in &curves {
            for p in crate::prime::simple_sieve(150) {
                if e.is_good(p) {
                    assert_eq!(
                        count_points_naive(e, p).unwrap(),
                        brute_count(e, p),
                        "{} p={p}",
                        e.label
                    );
                }
            }
        }
    }
}
