//! The Dirichlet polynomial `L(s)`, the kernel `H(s)` and the prime sum
//! `F(s)` attached to a fractional-part window, the mean-value check for
//! `∫ |L(1/2 + it)|² dt`, and error envelopes.

mod envelope;
pub mod quad;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frac::WindowSpec;

pub use envelope::{bound_envelope, BoundEnvelope, EnvelopeId, EnvelopeParams, SideCondition};

/// Relative tolerance of [`mean_value_check`].
pub const MEAN_VALUE_REL_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticParams {
    pub alpha: f64,
    pub theta: f64,
    pub x: f64,
    pub delta1: f64,
    pub delta: f64,
    pub omega: f64,
    pub n_l: f64,
    /// `αx^θ / δ`.
    pub u_minus: f64,
    /// `α(2x)^θ / δ`.
    pub u_plus: f64,
    /// `αx^θ`.
    pub t0: f64,
    /// `α^{3/4} x^{(1+3θ)/4} / ((n_L δ ω)^{1/2} log x)`.
    pub t1: f64,
    /// The sum in `L(s)` runs over `m_lo < m <= m_hi`.
    pub m_lo: i64,
    pub m_hi: i64,
    /// `α^{1/4} (ω n_L / δ)^{1/2} (log x)² <= x^{(1-θ)/4}`.
    pub constraint_holds: bool,
}

impl AnalyticParams {
    /// Parameters for the window `w` over `(x, 2x]`; the m-range is
    /// `(αx^θ/3 - δ1, 3αx^θ - δ1]`. Requires `αx^θ >= 1`.
    pub fn new(alpha: f64, theta: f64, x: f64, w: &WindowSpec, omega: f64, n_l: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::param("alpha", format!("α = {alpha} must be positive")));
        }
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::param("theta", format!("θ = {theta} not in [0, 1]")));
        }
        if !(x.is_finite() && x > 1.0) {
            return Err(Error::param("x", format!("x = {x} must exceed 1")));
        }
        if !(omega.is_finite() && omega >= 1.0) {
            return Err(Error::param("omega", format!("ω = {omega} must be at least 1")));
        }
        if !(n_l.is_finite() && n_l >= 1.0) {
            return Err(Error::param("n_l", format!("n_L = {n_l} must be at least 1")));
        }
        let t0 = alpha * x.powf(theta);
        if t0 < 1.0 {
            return Err(Error::param("alpha", format!("αx^θ = {t0} is below 1")));
        }
        let delta1 = w.delta1.to_f64();
        let delta = w.delta();
        let lx = x.ln();
        let t1 = alpha.powf(0.75) * x.powf((1.0 + 3.0 * theta) / 4.0) / ((n_l * delta * omega).sqrt() * lx);
        let constraint_holds = alpha.powf(0.25) * (omega * n_l / delta).sqrt() * lx * lx <= x.powf((1.0 - theta) / 4.0);
        Ok(AnalyticParams {
            alpha,
            theta,
            x,
            delta1,
            delta,
            omega,
            n_l,
            u_minus: t0 / delta,
            u_plus: alpha * (2.0 * x).powf(theta) / delta,
            t0,
            t1,
            m_lo: (t0 / 3.0 - delta1).floor() as i64,
            m_hi: (3.0 * t0 - delta1).floor() as i64,
            constraint_holds,
        })
    }

    /// Same parameters with the m-range replaced by `(m_lo, m_hi]`.
    pub fn with_m_range(mut self, m_lo: i64, m_hi: i64) -> Result<Self> {
        if m_lo >= m_hi {
            return Err(Error::EmptyRange {
                lo: m_lo.max(0) as u64,
                hi: m_hi.max(0) as u64,
            });
        }
        if (m_lo + 1) as f64 + self.delta1 <= 0.0 {
            return Err(Error::param(
                "m_lo",
                format!("m + δ1 must stay positive, m_lo = {m_lo}"),
            ));
        }
        self.m_lo = m_lo;
        self.m_hi = m_hi;
        Ok(self)
    }

    fn check_range(&self) -> Result<()> {
        if self.m_lo >= self.m_hi {
            return Err(Error::param(
                "m_range",
                format!("empty m-range ({}, {}]", self.m_lo, self.m_hi),
            ));
        }
        Ok(())
    }

    /// `(m + δ1)` over the m-range.
    fn shifts(&self) -> impl Iterator<Item = f64> + '_ {
        (self.m_lo + 1..=self.m_hi).map(move |m| m as f64 + self.delta1)
    }
}

/// `L(s) = α^s Σ_{m_lo < m <= m_hi} (m + δ1)^{-s}`.
pub fn eval_l(s: Complex64, ap: &AnalyticParams) -> Result<Complex64> {
    ap.check_range()?;
    let sum: Complex64 = ap.shifts().map(|v| (-s * v.ln()).exp()).sum();
    Ok((s * ap.alpha.ln()).exp() * sum)
}

/// `|L(1/2 + it)|²`, without forming the complex powers one by one.
fn l_half_norm_sq(t: f64, logs: &[(f64, f64)], alpha: f64) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for &(w, lv) in logs {
        let (s, c) = (t * lv).sin_cos();
        re += w * c;
        im -= w * s;
    }
    alpha * (re * re + im * im)
}

/// `H(s) = (1 - (1 - 1/U)^s) / s`, principal branch.
pub fn eval_h(s: Complex64, u: f64) -> Result<Complex64> {
    if s == Complex64::new(0.0, 0.0) {
        return Err(Error::param("s", "H has a removable singularity at s = 0"));
    }
    if !(u.is_finite() && u >= 1.0) {
        return Err(Error::param("U", format!("U = {u} must be at least 1")));
    }
    if u == 1.0 {
        if s.re <= 0.0 {
            return Err(Error::param("s", "0^s needs Re s > 0"));
        }
        return Ok(s.inv());
    }
    // 1 - e^w with w = s·log(1 - 1/U), kept accurate when |w| is small
    let w = s * (-1.0 / u).ln_1p();
    let (sb, cb) = w.im.sin_cos();
    let half = (0.5 * w.im).sin();
    let re = w.re.exp_m1() * cb - 2.0 * half * half;
    let im = w.re.exp() * sb;
    Ok(-Complex64::new(re, im) / s)
}

/// `F(s) = Σ p^{-s}` over the flagged primes.
pub fn eval_f(s: Complex64, traces: &[(u64, bool)]) -> Complex64 {
    traces
        .iter()
        .filter(|(_, flagged)| *flagged)
        .map(|&(p, _)| (-s * (p as f64).ln()).exp())
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanValue {
    pub integral: f64,
    pub error_estimate: f64,
    /// `αT' + α² x^θ log(αx^θ)`.
    pub bound: f64,
    pub ratio: f64,
    pub intervals: usize,
}

/// `∫_{T'}^{2T'} |L(1/2 + it)|² dt` by panelled adaptive quadrature,
/// against `αT' + α² x^θ log(αx^θ)`.
pub fn mean_value_check(t_prime: f64, ap: &AnalyticParams) -> Result<MeanValue> {
    if !(t_prime.is_finite() && t_prime > 0.0) {
        return Err(Error::param("t_prime", format!("T' = {t_prime} must be positive")));
    }
    ap.check_range()?;
    let logs: Vec<(f64, f64)> = ap.shifts().map(|v| (v.powf(-0.5), v.ln())).collect();
    let fastest = logs.last().expect("nonempty range").1;
    // one period of the fastest term per panel
    let width = 2.0 * PI / fastest.max(1e-12);
    let q = quad::integrate_panels(
        |t| l_half_norm_sq(t, &logs, ap.alpha),
        t_prime,
        2.0 * t_prime,
        width,
        MEAN_VALUE_REL_TOL,
    )?;
    let bound = ap.alpha * t_prime + ap.alpha * ap.t0 * ap.t0.ln();
    Ok(MeanValue {
        integral: q.value,
        error_estimate: q.error_estimate,
        bound,
        ratio: q.value / bound,
        intervals: q.intervals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(alpha: f64, theta: f64, x: f64, d1: f64) -> AnalyticParams {
        AnalyticParams::new(alpha, theta, x, &WindowSpec::new(d1, 1.0).unwrap(), 1.0, 1.0).unwrap()
    }

    /// `∫_{T'}^{2T'} |L(1/2+it)|² dt` term by term: the diagonal gives
    /// `T' Σ 1/(m+δ1)`, each off-diagonal pair a sine difference over `λ`.
    fn closed_form(t: f64, ap: &AnalyticParams) -> f64 {
        let v: Vec<f64> = ap.shifts().collect();
        let mut total = t * v.iter().map(|x| 1.0 / x).sum::<f64>();
        for (i, &a) in v.iter().enumerate() {
            for &b in &v[i + 1..] {
                let lam = (a / b).ln();
                let pair = ((2.0 * t * lam).sin() - (t * lam).sin()) / lam;
                total += 2.0 * pair / (a * b).sqrt();
            }
        }
        ap.alpha * total
    }

    #[test]
    fn parameter_record() {
        let ap = params(1.0, 0.5, 1e4, 0.0);
        assert_eq!(ap.t0, 100.0);
        assert_eq!((ap.m_lo, ap.m_hi), (33, 300));
        assert_eq!(ap.u_minus, 100.0);
        assert!((ap.u_plus - 100.0 * 2f64.sqrt()).abs() < 1e-9);
        assert!(AnalyticParams::new(0.001, 0.5, 100.0, &WindowSpec::full(), 1.0, 1.0).is_err());
    }

    #[test]
    fn l_examples() {
        let ap = params(1.0, 0.5, 1e4, 0.0);
        let z = eval_l(Complex64::new(0.0, 0.0), &ap).unwrap();
        assert!((z.re - (ap.m_hi - ap.m_lo) as f64).abs() < 1e-9 && z.im.abs() < 1e-12);

        let one = ap.clone().with_m_range(6, 7).unwrap();
        let v = eval_l(Complex64::new(0.5, 0.0), &one).unwrap();
        assert!((v.re - 7f64.powf(-0.5)).abs() < 1e-15);

        let s = Complex64::new(0.5, 3.0);
        let a = eval_l(s.conj(), &params(2.0, 1.0 / 3.0, 1e3, 0.5)).unwrap();
        let b = eval_l(s, &params(2.0, 1.0 / 3.0, 1e3, 0.5)).unwrap().conj();
        assert!((a - b).norm() < 1e-12);

        assert!(ap.clone().with_m_range(5, 5).is_err());
    }

    #[test]
    fn h_examples() {
        for u in [1.0, 2.0, 10.0, 1e3] {
            let h = eval_h(Complex64::new(1.0, 0.0), u).unwrap();
            assert!((h.re * u - 1.0).abs() <= f64::EPSILON, "U = {u}");
            let h2 = eval_h(Complex64::new(2.0, 0.0), u).unwrap();
            assert!((h2.re - (2.0 / u - 1.0 / (u * u)) / 2.0).abs() < 1e-15);
        }
        assert!(eval_h(Complex64::new(0.5, 10.0), 100.0).unwrap().norm() <= 5.0 / 100.0);
        assert!(eval_h(Complex64::new(0.0, 0.0), 10.0).is_err());
    }

    #[test]
    fn h_is_order_one_over_u() {
        for u in [10.0, 1e2, 1e3] {
            for i in 0..1000 {
                let t = 1.0 + (1e4 - 1.0) * i as f64 / 999.0;
                let h = eval_h(Complex64::new(0.5, t), u).unwrap();
                assert!(h.norm() <= 5.0 / u, "U = {u}, t = {t}");
            }
        }
    }

    #[test]
    fn f_examples() {
        let data = [(11, false), (13, true), (17, true)];
        assert_eq!(eval_f(Complex64::new(0.0, 0.0), &data).re, 2.0);
        let one = eval_f(Complex64::new(1.0, 0.0), &[(13, true)]);
        assert!((one.re - 1.0 / 13.0).abs() < 1e-16);
        assert_eq!(eval_f(Complex64::new(1.0, 0.0), &[]), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn single_term_mean_value() {
        let ap = params(2.0, 0.5, 1e4, 0.5).with_m_range(9, 10).unwrap();
        let mv = mean_value_check(100.0, &ap).unwrap();
        let exact = 100.0 * 2.0 / 10.5;
        assert!((mv.integral - exact).abs() <= 1e-6 * exact);
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for (alpha, theta, x, d1, t) in [
            (1.0, 0.5, 1e3, 0.0, 31.6),
            (0.5, 1.0 / 3.0, 1e4, 0.5, 21.5),
            (2.0, 0.5, 1e3, 0.5, 130.0),
        ] {
            let ap = params(alpha, theta, x, d1);
            let mv = mean_value_check(t, &ap).unwrap();
            let exact = closed_form(t, &ap);
            assert!(
                (mv.integral - exact).abs() <= 1e-6 * exact,
                "α={alpha} θ={theta} x={x}: {} vs {exact}",
                mv.integral
            );
        }
    }

    #[test]
    fn spec_point_ratio() {
        let ap = params(1.0, 0.5, 1e4, 0.0);
        let mv = mean_value_check(100.0, &ap).unwrap();
        assert!(mv.integral >= 0.0);
        assert!(mv.ratio <= 32.0, "ratio {}", mv.ratio);
    }

    proptest! {
        #[test]
        fn t0_below_t1_under_constraint(
            alpha in 0.01f64..100.0,
            theta in 0.0f64..=1.0,
            lx in 1.1f64..60.0,
            d1 in 0.0f64..0.9,
            omega in 1.0f64..50.0,
        ) {
            let x = lx.exp();
            let w = WindowSpec::new(d1, 1.0).unwrap();
            if let Ok(ap) = AnalyticParams::new(alpha, theta, x, &w, omega, 1.0) {
                prop_assert!(ap.u_minus <= ap.u_plus);
                if ap.constraint_holds {
                    prop_assert!(ap.t0 <= ap.t1 * (1.0 + 1e-12));
                }
            }
        }
    }
}
