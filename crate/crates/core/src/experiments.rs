//! End-to-end counts over prime windows, each set against its predicted
//! main term, a binomial standard deviation and an error envelope.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{bound_envelope, EnvelopeId, EnvelopeParams, SideCondition};
use crate::error::{Error, Result};
use crate::frac::{
    bridge_residue, frac_power, ks_statistic, ks_uniform, landau_indicator, star_discrepancy, Coefficient,
};
use crate::gl2::trace_fiber;
use crate::prime::{sieve_range, window_plan};
use crate::trace::{check_odd_prime, extremal_status, ExtremalStatus, TraceEngine, TraceRecord};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub statement_id: String,
    /// The range `(lo, hi]`.
    pub window: (u64, u64),
    pub observed: u64,
    pub main_term: f64,
    pub envelope: f64,
    /// `√(N q (1 - q))` with `q = main_term / N`.
    pub sigma_stat: f64,
    /// `(observed - main_term) / sigma_stat`; absent when `sigma_stat = 0`.
    pub z: Option<f64>,
    /// `N`: primes of good reduction in the window.
    pub trials: u64,
    pub side_conditions: Vec<SideCondition>,
    /// Bad primes skipped inside the window.
    pub excluded: Vec<u64>,
    pub notes: Vec<String>,
}

impl CountReport {
    fn build(statement_id: &str, window: (u64, u64), observed: u64, main_term: f64, trials: u64) -> Self {
        let q = if trials == 0 {
            0.0
        } else {
            (main_term / trials as f64).clamp(0.0, 1.0)
        };
        let sigma_stat = (trials as f64 * q * (1.0 - q)).sqrt();
        let z = (sigma_stat > 0.0).then(|| (observed as f64 - main_term) / sigma_stat);
        CountReport {
            statement_id: statement_id.into(),
            window,
            observed,
            main_term,
            envelope: 0.0,
            sigma_stat,
            z,
            trials,
            side_conditions: Vec::new(),
            excluded: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// `|observed - main_term| <= k·sigma_stat`.
    pub fn within_sigmas(&self, k: f64) -> bool {
        (self.observed as f64 - self.main_term).abs() <= k * self.sigma_stat
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramReport {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub observed_mass: Vec<f64>,
    pub reference_mass: Vec<f64>,
    /// Per-bin binomial z-score of the count against `N·reference_mass`.
    pub z: Vec<f64>,
    pub ks: f64,
    pub chi2: f64,
    pub trials: u64,
}

impl HistogramReport {
    fn build(bin_edges: Vec<f64>, counts: Vec<u64>, reference_mass: Vec<f64>, ks: f64) -> Self {
        let n: u64 = counts.iter().sum();
        let nf = n as f64;
        let observed_mass = counts
            .iter()
            .map(|&c| if n == 0 { 0.0 } else { c as f64 / nf })
            .collect();
        let mut chi2 = 0.0;
        let mut z = Vec::with_capacity(counts.len());
        for (&c, &q) in counts.iter().zip(&reference_mass) {
            let e = nf * q;
            if e > 0.0 {
                chi2 += (c as f64 - e).powi(2) / e;
            }
            let s = (nf * q * (1.0 - q)).sqrt();
            z.push(if s > 0.0 { (c as f64 - e) / s } else { 0.0 });
        }
        HistogramReport {
            bin_edges,
            counts,
            observed_mass,
            reference_mass,
            z,
            ks,
            chi2,
            trials: n,
        }
    }
}

/// Sato-Tate measure of `[a, b]`:
/// `(arcsin b - arcsin a + b√(1-b²) - a√(1-a²)) / π`.
pub fn st_measure(a: f64, b: f64) -> Result<f64> {
    if !(-1.0 <= a && a <= b && b <= 1.0) {
        return Err(Error::param("interval", format!("[{a}, {b}] is not inside [-1, 1]")));
    }
    let g = |t: f64| t.asin() + t * (1.0 - t * t).max(0.0).sqrt();
    Ok((g(b) - g(a)) / PI)
}

fn st_cdf(t: f64) -> f64 {
    st_measure(-1.0, t.clamp(-1.0, 1.0)).expect("inside [-1, 1]")
}

fn check_window_anchor(x: u64) -> Result<()> {
    if x < 4 {
        return Err(Error::param("x", format!("window anchor must be >= 4, got {x}")));
    }
    Ok(())
}

/// Good-prime traces in `(lo, hi]`, with the bad primes skipped.
fn window_traces(engine: &TraceEngine, lo: u64, hi: u64) -> Result<(Vec<TraceRecord>, Vec<u64>)> {
    let t = engine.traces(lo, hi)?;
    Ok((t.records, t.bad))
}

/// `(p, a_p ≡ [2√p] mod ℓ)` for each good `p ∈ (x, 2x]`.
pub fn joint_flags(engine: &TraceEngine, ell: u64, x: u64) -> Result<Vec<(u64, bool)>> {
    check_odd_prime(ell)?;
    let (recs, _) = window_traces(engine, x, 2 * x)?;
    let l = ell as i64;
    Ok(recs
        .par_iter()
        .map(|r| (r.p, r.ap.rem_euclid(l) as u64 == bridge_residue(r.p, ell)))
        .collect())
}

/// `counts[a][b]`: good `p ∈ (x, 2x]` with `a_p ≡ a` and `[2√p] ≡ b mod ℓ`.
pub fn residue_pair_table(engine: &TraceEngine, ell: u64, x: u64) -> Result<Vec<Vec<u64>>> {
    check_odd_prime(ell)?;
    let (recs, _) = window_traces(engine, x, 2 * x)?;
    let l = ell as usize;
    let mut table = vec![vec![0u64; l]; l];
    for r in &recs {
        let a = r.ap.rem_euclid(ell as i64) as usize;
        table[a][bridge_residue(r.p, ell) as usize] += 1;
    }
    Ok(table)
}

fn joint_report(engine: &TraceEngine, ell: u64, x: u64, omega: f64, zero: bool) -> Result<CountReport> {
    check_odd_prime(ell)?;
    check_window_anchor(x)?;
    window_plan(x, omega)?;
    let (recs, bad) = window_traces(engine, x, 2 * x)?;
    let l = ell as i64;
    let observed = recs
        .par_iter()
        .filter(|r| {
            let a = r.ap.rem_euclid(l) as u64;
            let b = bridge_residue(r.p, ell);
            a == b && (!zero || a == 0)
        })
        .count() as u64;
    let n = recs.len() as u64;
    let (id, env_id, main) = if zero {
        (
            "joint_zero",
            EnvelopeId::ResidueMatchZero,
            n as f64 / (ell * ell) as f64,
        )
    } else {
        ("joint", EnvelopeId::ResidueMatch, n as f64 / ell as f64)
    };
    let mut rep = CountReport::build(id, (x, 2 * x), observed, main, n);
    let env = bound_envelope(
        env_id,
        &EnvelopeParams {
            x: Some(x as f64),
            ell: Some(ell as f64),
            omega: Some(omega),
            ..Default::default()
        },
    )?;
    rep.envelope = env.value;
    rep.side_conditions = env.side_conditions;
    rep.excluded = bad;
    if engine.curve().declared_cm {
        rep.notes
            .push("curve is declared CM; the prediction assumes a non-CM curve".into());
    }
    Ok(rep)
}

/// `#{x < p <= 2x good : a_p ≡ [2√p] mod ℓ}` against `N/ℓ`.
pub fn joint_count(engine: &TraceEngine, ell: u64, x: u64, omega: f64) -> Result<CountReport> {
    joint_report(engine, ell, x, omega, false)
}

/// `#{x < p <= 2x good : a_p ≡ [2√p] ≡ 0 mod ℓ}` against `N/ℓ²`.
pub fn joint_zero_count(engine: &TraceEngine, ell: u64, x: u64, omega: f64) -> Result<CountReport> {
    joint_report(engine, ell, x, omega, true)
}

/// Conjectured extremal counting function, both signs together:
/// `(8/3π) t^{1/4} / log t`, or `(2/3π) t^{3/4} / log t` for CM curves.
pub fn extremal_counting_function(t: f64, cm: bool) -> f64 {
    if t <= 1.0 {
        return 0.0;
    }
    if cm {
        2.0 / (3.0 * PI) * t.powf(0.75) / t.ln()
    } else {
        8.0 / (3.0 * PI) * t.powf(0.25) / t.ln()
    }
}

/// Good primes `p ∈ [lo, hi]` with `a_p = +[2√p]` (`Plus`) or `-[2√p]` (`Minus`).
///
/// The main term is half the endpoint difference of
/// [`extremal_counting_function`], floored at 0.
pub fn extremal_count(engine: &TraceEngine, lo: u64, hi: u64, sign: ExtremalStatus) -> Result<CountReport> {
    if sign == ExtremalStatus::No {
        return Err(Error::param("sign", "extremal sign must be Plus or Minus"));
    }
    let from = lo.saturating_sub(1);
    if hi < from {
        return Err(Error::EmptyRange { lo, hi });
    }
    let (recs, bad) = window_traces(engine, from, hi)?;
    let observed = recs.iter().filter(|r| extremal_status(r.p, r.ap) == sign).count() as u64;
    let cm = engine.curve().declared_cm;
    let f = |t: u64| extremal_counting_function((t.max(2)) as f64, cm);
    let main = ((f(hi) - f(lo)) / 2.0).max(0.0);
    let id = match sign {
        ExtremalStatus::Plus => "extremal_plus",
        _ => "extremal_minus",
    };
    let mut rep = CountReport::build(id, (from, hi), observed, main, recs.len() as u64);
    if hi >= 2 {
        let env = bound_envelope(
            EnvelopeId::ExtremalUpper,
            &EnvelopeParams {
                x: Some(hi.max(3) as f64),
                ..Default::default()
            },
        )?;
        rep.envelope = env.value;
    }
    rep.excluded = bad;
    rep.notes
        .push("main term: half of the two-sign conjectured count per sign (assumed split)".into());
    if cm {
        rep.notes.push("CM branch t^{3/4}/log t; not gated".into());
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LangTrotterReport {
    pub t: i64,
    pub x: u64,
    pub observed: u64,
    /// `x^{1/2} / log x`; the constant in front is unknown.
    pub shape: f64,
    /// `observed / shape`.
    pub ratio: f64,
    pub trials: u64,
}

/// `#{p <= x good : a_p = t}` next to the shape `x^{1/2}/log x`.
pub fn lang_trotter_count(engine: &TraceEngine, t: i64, x: u64) -> Result<LangTrotterReport> {
    let (recs, _) = window_traces(engine, 0, x)?;
    let observed = recs.iter().filter(|r| r.ap == t).count() as u64;
    let shape = if x >= 3 {
        (x as f64).sqrt() / (x as f64).ln()
    } else {
        0.0
    };
    Ok(LangTrotterReport {
        t,
        x,
        observed,
        shape,
        ratio: if shape > 0.0 { observed as f64 / shape } else { 0.0 },
        trials: recs.len() as u64,
    })
}

/// Reference masses `|C_ℓ(a)| / |GL2(F_ℓ)|`, `a = 0..ℓ`, as floats.
pub fn residue_reference(ell: u64) -> Result<Vec<f64>> {
    (0..ell)
        .map(|a| {
            let q = trace_fiber(ell, a)?.proportion;
            Ok(*q.numer() as f64 / *q.denom() as f64)
        })
        .collect()
}

/// Frequencies of `a_p mod ℓ` over good `p <= x` against the trace-fiber
/// proportions.
pub fn residue_histogram(engine: &TraceEngine, ell: u64, x: u64) -> Result<HistogramReport> {
    let reference = residue_reference(ell)?;
    let (recs, _) = window_traces(engine, 0, x)?;
    let mut counts = vec![0u64; ell as usize];
    for r in &recs {
        counts[r.ap.rem_euclid(ell as i64) as usize] += 1;
    }
    let n = recs.len().max(1) as f64;
    let (mut co, mut cr, mut ks) = (0.0, 0.0, 0.0f64);
    for (c, q) in counts.iter().zip(&reference) {
        co += *c as f64 / n;
        cr += q;
        ks = ks.max((co - cr).abs());
    }
    let edges = (0..=ell).map(|a| a as f64).collect();
    Ok(HistogramReport::build(edges, counts, reference, ks))
}

/// `a_p / 2√p` over good `p <= x` in `bins` equal bins of `[-1, 1]`,
/// against the Sato-Tate measure of each bin.
pub fn sato_tate_histogram(engine: &TraceEngine, x: u64, bins: usize) -> Result<HistogramReport> {
    if bins < 1 {
        return Err(Error::param("bins", "need at least one bin"));
    }
    let edges: Vec<f64> = (0..=bins).map(|i| -1.0 + 2.0 * i as f64 / bins as f64).collect();
    let reference = edges
        .windows(2)
        .map(|w| st_measure(w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;
    let (recs, _) = window_traces(engine, 0, x)?;
    let samples: Vec<f64> = recs.iter().map(|r| r.ap as f64 / (2.0 * (r.p as f64).sqrt())).collect();
    let mut counts = vec![0u64; bins];
    for &s in &samples {
        let i = (((s + 1.0) / 2.0 * bins as f64).floor() as usize).min(bins - 1);
        counts[i] += 1;
    }
    let ks = if samples.is_empty() {
        0.0
    } else {
        ks_statistic(&samples, st_cdf)?
    };
    Ok(HistogramReport::build(edges, counts, reference, ks))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalogReport {
    pub n: u64,
    pub discrepancy: f64,
    pub ks: f64,
    /// Largest error bound among the samples.
    pub max_err: f64,
}

/// `{αp^θ}` for every prime `p <= x`, in order.
pub fn frac_samples(alpha: Coefficient, theta: f64, x: u64) -> Result<Vec<f64>> {
    let primes = sieve_range(0, x)?;
    primes
        .par_iter()
        .map(|&p| frac_power(alpha, theta, p).map(|v| v.value))
        .collect()
}

/// Star discrepancy and KS distance of `{αp^θ}` over `p <= x`.
pub fn balog_report(alpha: impl Into<Coefficient>, theta: f64, x: u64) -> Result<BalogReport> {
    let alpha = alpha.into();
    let primes = sieve_range(0, x)?;
    let vals: Vec<(f64, f64)> = primes
        .par_iter()
        .map(|&p| frac_power(alpha, theta, p).map(|v| (v.value, v.err)))
        .collect::<Result<_>>()?;
    let samples: Vec<f64> = vals.iter().map(|v| v.0).collect();
    let max_err = vals.iter().map(|v| v.1).fold(0.0, f64::max);
    if samples.is_empty() {
        return Ok(BalogReport {
            n: 0,
            discrepancy: 0.0,
            ks: 0.0,
            max_err,
        });
    }
    Ok(BalogReport {
        n: samples.len() as u64,
        discrepancy: star_discrepancy(&samples)?,
        ks: ks_uniform(&samples)?,
        max_err,
    })
}

/// `#{p <= x : {αp^θ} < p^{-λ}}` against `Σ_{p <= x} p^{-λ}`.
/// At `λ = 0` the condition `{·} < 1` always holds.
pub fn landau_count(alpha: impl Into<Coefficient>, theta: f64, lambda: f64, x: u64) -> Result<CountReport> {
    let alpha = alpha.into();
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::param("lambda", format!("λ = {lambda} must be nonnegative")));
    }
    let primes = sieve_range(0, x)?;
    let hits = if lambda == 0.0 {
        vec![true; primes.len()]
    } else {
        primes
            .par_iter()
            .map(|&p| landau_indicator(alpha, theta, lambda, p))
            .collect::<Result<Vec<bool>>>()?
    };
    let observed = hits.iter().filter(|&&h| h).count() as u64;
    let main: f64 = primes.iter().map(|&p| (p as f64).powf(-lambda)).sum();
    let mut rep = CountReport::build("landau", (0, x), observed, main, primes.len() as u64);
    if x >= 3 && lambda > 0.0 {
        let env = bound_envelope(
            EnvelopeId::LandauWindow,
            &EnvelopeParams {
                x: Some(x as f64),
                omega: Some(1.0),
                alpha: Some(alpha.to_f64()),
                theta: Some(theta),
                lambda: Some(lambda),
                n_l: Some(1.0),
                log_d_l: Some(0.0),
                class_ratio: Some(1.0),
                ..Default::default()
            },
        )?;
        rep.envelope = env.value;
        rep.side_conditions = env.side_conditions;
    }
    rep.notes
        .push("no field condition: n_L = 1, log d_L = 0, |C|/|G| = 1".into());
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::eval_f;
    use crate::curve::CurveQ;
    use num_complex::Complex64;

    fn e11() -> TraceEngine {
        TraceEngine::new(CurveQ::builtin("11a3").unwrap())
    }

    #[test]
    fn st_examples() {
        assert!((st_measure(-1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((st_measure(0.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((st_measure(-0.5, 0.5).unwrap() - 0.6090).abs() < 1e-4);
        assert!(st_measure(0.5, 0.2).is_err());
        assert!(st_measure(-1.5, 0.2).is_err());
    }

    #[test]
    fn st_measure_matches_quadrature() {
        let q = crate::analytic::quad::integrate(|t| 2.0 / PI * (1.0 - t * t).sqrt(), -0.5, 0.5, 1e-12).unwrap();
        assert!((q.value - st_measure(-0.5, 0.5).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn joint_examples() {
        let e = e11();
        let r = joint_count(&e, 3, 10, 1.0).unwrap();
        assert_eq!(r.observed, 1);
        assert_eq!(r.main_term, 1.0);
        assert_eq!(r.trials, 3);
        assert_eq!(r.excluded, vec![11]);
        let table = residue_pair_table(&e, 3, 10).unwrap();
        assert_eq!((0..3).map(|a| table[a][a]).sum::<u64>(), 1);

        let z = joint_zero_count(&e, 3, 10, 1.0).unwrap();
        assert_eq!(z.observed, 0);
        assert!(z.observed <= r.observed);

        assert!(joint_count(&e, 4, 10, 1.0).is_err());
    }

    #[test]
    fn empty_window_counts_zero() {
        // y² = x³ + 35: both primes of (4, 8] divide the discriminant
        let e = TraceEngine::new(CurveQ::new("y2=x3+35", [0, 0, 0, 0, 35], false).unwrap());
        let r = joint_count(&e, 3, 4, 1.0).unwrap();
        assert_eq!((r.observed, r.trials), (0, 0));
        assert_eq!(r.excluded, vec![5, 7]);
        assert_eq!(r.z, None);
    }

    #[test]
    fn window_identities() {
        let e = e11();
        for ell in [3, 5, 7] {
            for x in [1000, 5000] {
                let r = joint_count(&e, ell, x, 1.0).unwrap();
                let flags = joint_flags(&e, ell, x).unwrap();
                let hits = flags.iter().filter(|f| f.1).count() as u64;
                assert_eq!(hits, r.observed);
                assert_eq!(hits + flags.iter().filter(|f| !f.1).count() as u64, r.trials);
                let f0 = eval_f(Complex64::new(0.0, 0.0), &flags);
                assert_eq!(f0.re, r.observed as f64);
                let table = residue_pair_table(&e, ell, x).unwrap();
                assert_eq!(table.iter().flatten().sum::<u64>(), r.trials);
                assert_eq!((0..ell as usize).map(|a| table[a][a]).sum::<u64>(), r.observed);
                let plus = extremal_count(&e, x + 1, 2 * x, ExtremalStatus::Plus).unwrap();
                assert!(plus.observed <= r.observed);
            }
        }
    }

    #[test]
    fn observed_counts_ignore_thread_count() {
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| {
                let e = e11();
                (
                    joint_count(&e, 5, 20_000, 1.0).unwrap().observed,
                    balog_report(2.0, 0.5, 20_000).unwrap(),
                    landau_count(1.0, 0.5, 0.5, 20_000).unwrap().observed,
                )
            })
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn extremal_examples() {
        let e = e11();
        assert_eq!(extremal_count(&e, 2, 20, ExtremalStatus::Minus).unwrap().observed, 1);
        assert_eq!(extremal_count(&e, 2, 20, ExtremalStatus::Plus).unwrap().observed, 0);
        let empty = extremal_count(&e, 24, 28, ExtremalStatus::Plus).unwrap();
        assert_eq!(empty.observed, 0);
        assert!(empty.main_term >= 0.0);
        assert!(extremal_count(&e, 2, 20, ExtremalStatus::No).is_err());
    }

    #[test]
    fn lang_trotter_examples() {
        let e = e11();
        assert_eq!(lang_trotter_count(&e, 0, 20).unwrap().observed, 1);
        assert_eq!(lang_trotter_count(&e, 4, 20).unwrap().observed, 1);
        assert_eq!(lang_trotter_count(&e, 5, 20).unwrap().observed, 0);
    }

    #[test]
    fn residue_examples() {
        let r = residue_reference(5).unwrap();
        let want = [5.0 / 24.0, 19.0 / 96.0, 19.0 / 96.0, 19.0 / 96.0, 19.0 / 96.0];
        for (a, b) in r.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        for ell in [3, 5, 7, 11, 13] {
            assert!((residue_reference(ell).unwrap().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let h = residue_histogram(&e11(), 5, 10).unwrap();
        assert_eq!(h.counts, vec![0, 1, 0, 2, 1]);
        assert_eq!(h.observed_mass, vec![0.0, 0.25, 0.0, 0.5, 0.25]);
    }

    #[test]
    fn sato_tate_reference_masses() {
        let e = e11();
        let h = sato_tate_histogram(&e, 2000, 20).unwrap();
        assert!((h.reference_mass.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((h.observed_mass.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (w, m) in h.bin_edges.windows(2).zip(&h.reference_mass) {
            assert!((st_measure(w[0], w[1]).unwrap() - m).abs() < 1e-12);
        }
        let one = sato_tate_histogram(&e, 2000, 1).unwrap();
        assert!((one.reference_mass[0] - 1.0).abs() < 1e-15);
        let two = sato_tate_histogram(&e, 2000, 2).unwrap();
        assert!((two.reference_mass[1] - 0.5).abs() < 1e-15);
        assert!(sato_tate_histogram(&e, 2000, 0).is_err());
    }

    #[test]
    fn balog_examples() {
        let r = balog_report(2.0, 0.5, 10).unwrap();
        assert_eq!(r.n, 4);
        let s = frac_samples(Coefficient::F64(2.0), 0.5, 10).unwrap();
        for (got, want) in s.iter().zip([0.828, 0.464, 0.472, 0.292]) {
            assert!((got - want).abs() < 1e-3);
        }
        assert!((0.0..=1.0).contains(&r.discrepancy));
        assert_eq!(balog_report(2.0, 0.5, 1000).unwrap().n, crate::prime::prime_count(1000));
    }

    #[test]
    fn landau_examples() {
        assert_eq!(landau_count(1.0, 0.5, 0.5, 1000).unwrap().observed, 10);
        assert_eq!(landau_count(1.0, 0.5, 0.5, 2).unwrap().observed, 1);
        let r = landau_count(1.0, 0.5, 0.0, 1000).unwrap();
        assert_eq!(r.main_term, 168.0);
        assert_eq!(r.observed, 168);
    }

    #[test]
    fn report_json_roundtrip() {
        let r = joint_count(&e11(), 5, 1000, 2.0).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: CountReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
