//! Conjugacy classes of GL2(F_ℓ), ℓ odd, and the trace fibers
//! `C_ℓ(a) = {M : tr M ≡ a}`. Everything here is exact.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::legendre;
use crate::error::{Error, Result};
use crate::trace::check_odd_prime;

/// Largest ℓ for which [`enumerate_trace_fiber`] walks all ℓ^4 matrices.
pub const ENUMERATION_LIMIT: u64 = 11;

const MAX_ELL: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassKind {
    /// `λI`
    Central,
    /// `[[λ, 1], [0, λ]]`
    NonSemisimple,
    /// `diag(λ1, λ2)`, `λ1 != λ2`
    SplitSemisimple,
    /// `[[α, Dβ], [β, α]]`, `β != 0`, `D` a non-square
    NonSplit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFamily {
    pub kind: ClassKind,
    pub class_count: u128,
    pub class_size: u128,
}

impl ClassFamily {
    pub fn mass(&self) -> u128 {
        self.class_count * self.class_size
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFiber {
    pub ell: u64,
    pub a: u64,
    /// `|C_ℓ(a)| / |GL2(F_ℓ)|`.
    pub proportion: Ratio<i128>,
    pub class_count: u64,
    pub fiber_size: u128,
}

/// Row-major 2×2 matrix over F_ℓ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix2(pub [[u64; 2]; 2]);

impl Matrix2 {
    pub fn trace(&self, ell: u64) -> u64 {
        (self.0[0][0] + self.0[1][1]) % ell
    }

    pub fn det(&self, ell: u64) -> u64 {
        let [[a, b], [c, d]] = self.0;
        (a * d % ell + ell - b * c % ell) % ell
    }
}

fn check_ell(ell: u64) -> Result<()> {
    check_odd_prime(ell)?;
    if ell >= MAX_ELL {
        return Err(Error::param("ell", format!("ℓ = {ell} exceeds 2^31")));
    }
    Ok(())
}

/// `|GL2(F_ℓ)| = (ℓ^2 - 1)(ℓ^2 - ℓ)`.
pub fn group_order(ell: u64) -> Result<u128> {
    check_ell(ell)?;
    let l = ell as u128;
    Ok((l * l - 1) * (l * l - l))
}

pub fn class_inventory(ell: u64) -> Result<Vec<ClassFamily>> {
    check_ell(ell)?;
    let l = ell as u128;
    Ok(vec![
        ClassFamily {
            kind: ClassKind::Central,
            class_count: l - 1,
            class_size: 1,
        },
        ClassFamily {
            kind: ClassKind::NonSemisimple,
            class_count: l - 1,
            class_size: l * l - 1,
        },
        ClassFamily {
            kind: ClassKind::SplitSemisimple,
            class_count: (l - 1) * (l - 2) / 2,
            class_size: l * (l + 1),
        },
        ClassFamily {
            kind: ClassKind::NonSplit,
            class_count: l * (l - 1) / 2,
            class_size: l * (l - 1),
        },
    ])
}

/// Least positive quadratic non-residue mod ℓ.
pub fn least_nonresidue(ell: u64) -> Result<u64> {
    check_ell(ell)?;
    Ok((2..ell)
        .find(|&d| legendre(d, ell) == -1)
        .expect("odd primes have non-residues"))
}

/// One representative per conjugacy class, `ℓ^2 - 1` in all, using the least
/// positive non-residue as `D`.
pub fn class_representatives(ell: u64) -> Result<Vec<(ClassKind, Matrix2)>> {
    let d = least_nonresidue(ell)?;
    let mut out = Vec::with_capacity((ell * ell - 1) as usize);
    for lam in 1..ell {
        out.push((ClassKind::Central, Matrix2([[lam, 0], [0, lam]])));
    }
    for lam in 1..ell {
        out.push((ClassKind::NonSemisimple, Matrix2([[lam, 1], [0, lam]])));
    }
    for l1 in 1..ell {
        for l2 in l1 + 1..ell {
            out.push((ClassKind::SplitSemisimple, Matrix2([[l1, 0], [0, l2]])));
        }
    }
    // β and -β give conjugate matrices
    for alpha in 0..ell {
        for beta in 1..=(ell - 1) / 2 {
            out.push((ClassKind::NonSplit, Matrix2([[alpha, d * beta % ell], [beta, alpha]])));
        }
    }
    Ok(out)
}

fn class_size(kind: ClassKind, ell: u128) -> u128 {
    match kind {
        ClassKind::Central => 1,
        ClassKind::NonSemisimple => ell * ell - 1,
        ClassKind::SplitSemisimple => ell * (ell + 1),
        ClassKind::NonSplit => ell * (ell - 1),
    }
}

/// Closed form: `(ℓ²-ℓ-1)/((ℓ-1)²(ℓ+1))` for `a != 0`, `ℓ/((ℓ-1)(ℓ+1))` for `a = 0`.
pub fn fiber_proportion(ell: u64, a: u64) -> Result<Ratio<i128>> {
    check_ell(ell)?;
    if a >= ell {
        return Err(Error::param("a", format!("residue {a} not in [0, {ell})")));
    }
    let l = ell as i128;
    Ok(if a == 0 {
        Ratio::new(l, (l - 1) * (l + 1))
    } else {
        Ratio::new(l * l - l - 1, (l - 1) * (l - 1) * (l + 1))
    })
}

/// `C_ℓ(a)`: class count and size are summed over the classes whose
/// representative has trace `a`; the proportion is the closed form.
pub fn trace_fiber(ell: u64, a: u64) -> Result<TraceFiber> {
    let proportion = fiber_proportion(ell, a)?;
    let l = ell as u128;
    let (class_count, fiber_size) = if ell <= 1 << 12 {
        class_representatives(ell)?
            .into_iter()
            .filter(|(_, m)| m.trace(ell) == a)
            .fold((0u64, 0u128), |(c, s), (k, _)| (c + 1, s + class_size(k, l)))
    } else {
        // too many classes to list; same totals by counting per family
        if a == 0 {
            (ell - 1, l * l * (l - 1))
        } else {
            (ell, l * (l * l - l - 1))
        }
    };
    Ok(TraceFiber {
        ell,
        a,
        proportion,
        class_count,
        fiber_size,
    })
}

/// `#{M ∈ GL2(F_ℓ) : tr M ≡ a}` by walking all ℓ^4 matrices.
pub fn enumerate_trace_fiber(ell: u64, a: u64) -> Result<u64> {
    check_ell(ell)?;
    if ell > ENUMERATION_LIMIT {
        return Err(Error::param(
            "ell",
            format!(
                "enumeration visits ℓ^4 = {} matrices; limited to ℓ <= {ENUMERATION_LIMIT}",
                ell.pow(4)
            ),
        ));
    }
    if a >= ell {
        return Err(Error::param("a", format!("residue {a} not in [0, {ell})")));
    }
    let mut n = 0;
    for x in 0..ell {
        for y in 0..ell {
            for z in 0..ell {
                for w in 0..ell {
                    let m = Matrix2([[x, y], [z, w]]);
                    if m.det(ell) != 0 && m.trace(ell) == a {
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(n)
}
