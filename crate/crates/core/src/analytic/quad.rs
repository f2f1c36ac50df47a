//! Adaptive Gauss-Kronrod (7/15-point) quadrature by bisection.

// node tables are kept at their published precision
#![allow(clippy::excessive_precision)]

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Kronrod abscissae on `[-1, 1]`, descending; odd indices are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Bisection depth after which a panel is declared non-convergent.
pub const MAX_DEPTH: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    /// Leaf intervals evaluated.
    pub intervals: usize,
}

/// One 15-point rule on `[a, b]`: `(Kronrod value, |Kronrod - Gauss|)`.
pub fn kronrod15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adapt(f: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, abs_tol: f64, depth: u32) -> Result<Quadrature> {
    let (k, err) = kronrod15(f, a, b);
    if err <= (rel_tol * k.abs()).max(abs_tol) {
        return Ok(Quadrature {
            value: k,
            error_estimate: err,
            intervals: 1,
        });
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Quadrature {
            a,
            b,
            estimate: k,
            error_estimate: err,
        });
    }
    let m = 0.5 * (a + b);
    let l = adapt(f, a, m, rel_tol, abs_tol / 2.0, depth + 1)?;
    let r = adapt(f, m, b, rel_tol, abs_tol / 2.0, depth + 1)?;
    Ok(Quadrature {
        value: l.value + r.value,
        error_estimate: l.error_estimate + r.error_estimate,
        intervals: l.intervals + r.intervals,
    })
}

/// `∫_a^b f` to relative tolerance `rel_tol` on every leaf interval.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<Quadrature> {
    adapt(&f, a, b, rel_tol, f64::MIN_POSITIVE, 0)
}

/// `∫_a^b f` split first into equal panels no wider than `max_width`.
/// Panels run in parallel; their results are summed in panel order.
pub fn integrate_panels(
    f: impl Fn(f64) -> f64 + Sync,
    a: f64,
    b: f64,
    max_width: f64,
    rel_tol: f64,
) -> Result<Quadrature> {
    let n = ((b - a) / max_width).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    let parts: Vec<Result<Quadrature>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == n { b } else { a + h * (i + 1) as f64 };
            adapt(&f, lo, hi, rel_tol, f64::MIN_POSITIVE, 0)
        })
        .collect();
    let mut total = Quadrature {
        value: 0.0,
        error_estimate: 0.0,
        intervals: 0,
    };
    for q in parts {
        let q = q?;
        total.value += q.value;
        total.error_estimate += q.error_estimate;
        total.intervals += q.intervals;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-14);
        assert!((g - 2.0).abs() < 1e-14);
    }

    #[test]
    fn polynomials_are_exact() {
        for d in 0..=13 {
            let (k, err) = kronrod15(&|x: f64| x.powi(d), 0.0, 1.0);
            assert!((k - 1.0 / (d + 1) as f64).abs() < 1e-14, "degree {d}");
            assert!(err < 1e-13, "degree {d}");
        }
    }

    #[test]
    fn oscillatory_integrals() {
        let q = integrate(|t| (10.0 * t).cos(), 0.0, 3.0, 1e-10).unwrap();
        assert!((q.value - (30.0f64).sin() / 10.0).abs() < 1e-10);
        let q = integrate_panels(|t| (t * 50.0).sin().powi(2), 0.0, 10.0, 0.1, 1e-10).unwrap();
        let exact = 5.0 - (1000.0f64).sin() / 200.0;
        assert!((q.value - exact).abs() < 1e-9);
    }

    #[test]
    fn nonconvergence_is_reported() {
        let r = integrate(|t| if t < 0.3 { 0.0 } else { 1.0 / (t - 0.3).sqrt() }, 0.0, 1.0, 1e-15);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
