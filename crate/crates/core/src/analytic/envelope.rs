//! Error envelopes of the counting statements, with every implied constant
//! set to 1, together with their parameter-range side conditions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which counting statement an envelope belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnvelopeId {
    /// `δ1 <= {αp^θ} < δ2` jointly with a Chebotarev class.
    JointWindow,
    /// `a_p ≡ [2√p] mod ℓ`.
    ResidueMatch,
    /// Upper bound for `a_p = [2√p]`.
    ExtremalUpper,
    /// `a_p ≡ [2√p] ≡ 0 mod ℓ`.
    ResidueMatchZero,
    /// `{αp^θ} < p^{-λ}` jointly with a Chebotarev class.
    LandauWindow,
    /// `{√p} < p^{-1/4+ε}` jointly with a Chebotarev class.
    LandauQuarter,
    /// `{√p} < δ` jointly with a Chebotarev class.
    SqrtWindow,
}

impl EnvelopeId {
    pub const ALL: [EnvelopeId; 7] = [
        EnvelopeId::JointWindow,
        EnvelopeId::ResidueMatch,
        EnvelopeId::ExtremalUpper,
        EnvelopeId::ResidueMatchZero,
        EnvelopeId::LandauWindow,
        EnvelopeId::LandauQuarter,
        EnvelopeId::SqrtWindow,
    ];
}

/// Inputs; each envelope reads only the fields it needs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeParams {
    pub x: Option<f64>,
    pub ell: Option<f64>,
    pub omega: Option<f64>,
    pub alpha: Option<f64>,
    pub theta: Option<f64>,
    pub delta: Option<f64>,
    pub lambda: Option<f64>,
    pub epsilon: Option<f64>,
    pub n_l: Option<f64>,
    pub log_d_l: Option<f64>,
    /// `|C| / |G|`.
    pub class_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideCondition {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

fn side(name: &str, lhs: f64, rhs: f64) -> SideCondition {
    SideCondition {
        name: name.into(),
        lhs,
        rhs,
        satisfied: lhs <= rhs,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEnvelope {
    pub theorem_id: EnvelopeId,
    pub params: EnvelopeParams,
    pub value: f64,
    pub terms: Vec<(String, f64)>,
    pub side_conditions: Vec<SideCondition>,
}

impl BoundEnvelope {
    pub fn all_satisfied(&self) -> bool {
        self.side_conditions.iter().all(|s| s.satisfied)
    }
}

fn need(v: Option<f64>, name: &'static str) -> Result<f64> {
    let v = v.ok_or(Error::MissingParameter(name))?;
    if !v.is_finite() {
        return Err(Error::param(name, format!("{v} is not finite")));
    }
    Ok(v)
}

fn positive(v: Option<f64>, name: &'static str) -> Result<f64> {
    let v = need(v, name)?;
    if v <= 0.0 {
        return Err(Error::param(name, format!("{v} must be positive")));
    }
    Ok(v)
}

fn nonneg(v: Option<f64>, name: &'static str) -> Result<f64> {
    let v = need(v, name)?;
    if v < 0.0 {
        return Err(Error::param(name, format!("{v} must be nonnegative")));
    }
    Ok(v)
}

/// The envelope `id` evaluated at `params`.
pub fn bound_envelope(id: EnvelopeId, params: &EnvelopeParams) -> Result<BoundEnvelope> {
    let x = need(params.x, "x")?;
    if x <= 1.0 {
        return Err(Error::param("x", format!("x = {x} must exceed 1")));
    }
    let lx = x.ln();
    let omega_ok = |w: f64| side("ω >= 1", 1.0, w);
    let (terms, sides): (Vec<(&str, f64)>, Vec<SideCondition>) = match id {
        EnvelopeId::JointWindow => {
            let cg = nonneg(params.class_ratio, "class_ratio")?;
            let n = positive(params.n_l, "n_l")?;
            let w = positive(params.omega, "omega")?;
            let a = positive(params.alpha, "alpha")?;
            let th = nonneg(params.theta, "theta")?;
            let d = positive(params.delta, "delta")?;
            (
                vec![
                    (
                        "class·n·log·window",
                        cg * n * lx * (d * w).sqrt() * a.powf(0.25) / n.sqrt() * x.powf((3.0 + th) / 4.0),
                    ),
                    (
                        "class·n·log·shift",
                        cg * n * lx * d * w / a.sqrt() * x.powf(1.0 - th / 2.0) * lx,
                    ),
                    (
                        "field",
                        (d * n * w).sqrt() * a.powf(0.25) * x.powf((1.0 + th) / 4.0) * lx,
                    ),
                    ("smoothing", cg * d * x / (w * lx)),
                ],
                vec![
                    side(
                        "α^{1/4}(ωn_L/δ)^{1/2}(log x)² <= x^{(1-θ)/4}",
                        a.powf(0.25) * (w * n / d).sqrt() * lx * lx,
                        x.powf((1.0 - th) / 4.0),
                    ),
                    omega_ok(w),
                ],
            )
        }
        EnvelopeId::ResidueMatch => {
            let l = positive(params.ell, "ell")?;
            let w = positive(params.omega, "omega")?;
            (
                vec![
                    ("smoothing", x / (w * l * lx)),
                    ("window", w.sqrt() * l.powf(1.25) * x.powf(0.875) * lx),
                    ("field", w * l.powf(3.5) * x.powf(0.75) * lx * lx),
                ],
                vec![
                    side("ℓ <= x^{1/18}", l, x.powf(1.0 / 18.0)),
                    side(
                        "ℓ <= x^{1/18} ω^{-2/9} (log x)^{-8/9}",
                        l,
                        x.powf(1.0 / 18.0) * w.powf(-2.0 / 9.0) * lx.powf(-8.0 / 9.0),
                    ),
                    omega_ok(w),
                ],
            )
        }
        EnvelopeId::ExtremalUpper => (vec![("bound", x.powf(17.0 / 18.0) * lx.powf(-1.0 / 9.0))], vec![]),
        EnvelopeId::ResidueMatchZero => {
            let l = positive(params.ell, "ell")?;
            let w = positive(params.omega, "omega")?;
            (
                vec![
                    ("smoothing", x / (l * l * w * lx)),
                    ("window", w.sqrt() * x.powf(0.875) * lx / l.powf(0.25)),
                    ("field", w * l.powf(1.5) * x.powf(0.75) * lx * lx),
                ],
                vec![
                    side("ℓ <= x^{1/14}", l, x.powf(1.0 / 14.0)),
                    side(
                        "ℓ <= x^{1/14} (log x)^{-8/7} ω^{-2/7}",
                        l,
                        x.powf(1.0 / 14.0) * lx.powf(-8.0 / 7.0) * w.powf(-2.0 / 7.0),
                    ),
                    omega_ok(w),
                ],
            )
        }
        EnvelopeId::LandauWindow => {
            let cg = nonneg(params.class_ratio, "class_ratio")?;
            let lam = positive(params.lambda, "lambda")?;
            let w = positive(params.omega, "omega")?;
            let a = positive(params.alpha, "alpha")?;
            let th = nonneg(params.theta, "theta")?;
            let ld = nonneg(params.log_d_l, "log_d_l")?;
            let n = positive(params.n_l, "n_l")?;
            let l3 = lx.powi(3);
            (
                vec![
                    ("smoothing", cg * x.powf(1.0 - lam) / (w * lx)),
                    ("discriminant", w * a.sqrt() * x.powf(th / 2.0) * ld * l3),
                    (
                        "field",
                        cg * a.sqrt()
                            * x.powf((1.0 + th) / 2.0)
                            * l3
                            * (ld + n * lx)
                            * (w * w + w * x.powf(0.5 - th - lam) / a.sqrt()),
                    ),
                ],
                vec![omega_ok(w)],
            )
        }
        EnvelopeId::LandauQuarter => {
            let cg = nonneg(params.class_ratio, "class_ratio")?;
            let eps = positive(params.epsilon, "epsilon")?;
            let w = positive(params.omega, "omega")?;
            let ld = nonneg(params.log_d_l, "log_d_l")?;
            let n = positive(params.n_l, "n_l")?;
            let l3 = lx.powi(3);
            (
                vec![
                    ("smoothing", cg * x.powf(0.75 + eps) / (w * lx)),
                    ("discriminant", w * x.powf(0.25) * ld * l3),
                    ("field", cg * w * w * x.powf(0.75) * l3 * (ld + n * lx)),
                ],
                vec![omega_ok(w), side("ε < 1/4", eps, 0.25)],
            )
        }
        EnvelopeId::SqrtWindow => {
            let cg = nonneg(params.class_ratio, "class_ratio")?;
            let d = positive(params.delta, "delta")?;
            let w = positive(params.omega, "omega")?;
            let n = positive(params.n_l, "n_l")?;
            (
                vec![
                    ("window", cg * (d * w * n).sqrt() * x.powf(0.875) * lx),
                    ("field", cg * n * d * w * x.powf(0.75) * lx * lx),
                    ("smoothing", cg * d * x / (w * lx)),
                ],
                vec![
                    side(
                        "(ωn_L/δ)^{1/2}(log x)² <= x^{1/8}",
                        (w * n / d).sqrt() * lx * lx,
                        x.powf(0.125),
                    ),
                    omega_ok(w),
                ],
            )
        }
    };
    let value = terms.iter().map(|t| t.1).sum();
    Ok(BoundEnvelope {
        theorem_id: id,
        params: params.clone(),
        value,
        terms: terms.into_iter().map(|(n, v)| (n.to_string(), v)).collect(),
        side_conditions: sides,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full() -> EnvelopeParams {
        EnvelopeParams {
            x: Some(1e6),
            ell: Some(3.0),
            omega: Some(1.0),
            alpha: Some(1.0),
            theta: Some(0.5),
            delta: Some(0.5),
            lambda: Some(0.5),
            epsilon: Some(0.01),
            n_l: Some(48.0),
            log_d_l: Some(20.0),
            class_ratio: Some(0.25),
        }
    }

    #[test]
    fn extremal_upper_at_a_million() {
        let e = bound_envelope(EnvelopeId::ExtremalUpper, &full()).unwrap();
        let want = 10f64.powf(17.0 / 3.0) * (1e6f64).ln().powf(-1.0 / 9.0);
        assert!((e.value - want).abs() < 1e-6 * want);
        assert!((e.value - 3.47e5).abs() < 0.01e5);
    }

    #[test]
    fn landau_first_term_degenerate() {
        let p = EnvelopeParams {
            x: Some(std::f64::consts::E),
            lambda: Some(1.0),
            omega: Some(1.0),
            class_ratio: Some(1.0),
            ..full()
        };
        let e = bound_envelope(EnvelopeId::LandauWindow, &p).unwrap();
        assert!((e.terms[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn residue_match_at_a_million() {
        let e = bound_envelope(EnvelopeId::ResidueMatch, &full()).unwrap();
        assert!(e.value.is_finite() && e.value > 0.0);
        assert_eq!(e.terms.len(), 3);
        // with constant 1, x^{1/18} = 10^{1/3} is already below ℓ = 3
        assert!((e.side_conditions[0].rhs - 10f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!(!e.side_conditions[0].satisfied);
        assert!(!e.side_conditions[1].satisfied);
        let big = EnvelopeParams {
            x: Some(1e12),
            ..full()
        };
        assert!(bound_envelope(EnvelopeId::ResidueMatch, &big).unwrap().side_conditions[0].satisfied);
        assert!(!e.all_satisfied());
    }

    #[test]
    fn every_envelope_is_nonnegative() {
        for id in EnvelopeId::ALL {
            let e = bound_envelope(id, &full()).unwrap();
            assert!(e.value >= 0.0, "{id:?}");
            assert!((e.value - e.terms.iter().map(|t| t.1).sum::<f64>()).abs() <= 1e-9 * e.value);
        }
    }

    #[test]
    fn missing_parameter_is_named() {
        let p = EnvelopeParams { ell: None, ..full() };
        assert!(matches!(
            bound_envelope(EnvelopeId::ResidueMatch, &p),
            Err(Error::MissingParameter("ell"))
        ));
        let p = EnvelopeParams { x: None, ..full() };
        assert!(matches!(
            bound_envelope(EnvelopeId::ExtremalUpper, &p),
            Err(Error::MissingParameter("x"))
        ));
    }
}
