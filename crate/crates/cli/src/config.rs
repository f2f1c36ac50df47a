//! Experiment configuration: a TOML document whose `[section]` tables are
//! flattened into one key space before validation.

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use exlab::arith::is_prime;
use exlab::curve::CurveQ;
use exlab::frac::WindowSpec;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Sieve,
    Ap,
    Classes,
    Joint,
    Jointzero,
    Extremal,
    Satotate,
    Residues,
    Balog,
    Landau,
    Meanvalue,
    Envelope,
    Verify,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Sieve => "sieve",
            Experiment::Ap => "ap",
            Experiment::Classes => "classes",
            Experiment::Joint => "joint",
            Experiment::Jointzero => "jointzero",
            Experiment::Extremal => "extremal",
            Experiment::Satotate => "satotate",
            Experiment::Residues => "residues",
            Experiment::Balog => "balog",
            Experiment::Landau => "landau",
            Experiment::Meanvalue => "meanvalue",
            Experiment::Envelope => "envelope",
            Experiment::Verify => "verify",
        }
    }
}

/// A built-in label, or the five Weierstrass coefficients `[a1, a2, a3, a4, a6]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveSpec {
    Label(String),
    Coeffs([i64; 5]),
}

impl CurveSpec {
    pub fn resolve(&self) -> Result<CurveQ> {
        match self {
            CurveSpec::Label(l) => match CurveQ::builtin(l) {
                Some(c) => Ok(c),
                None => CurveSpec::from_str(l)?.resolve(),
            },
            CurveSpec::Coeffs(c) => {
                let label = format!("[{},{},{},{},{}]", c[0], c[1], c[2], c[3], c[4]);
                Ok(CurveQ::new(label, *c, false)?)
            }
        }
    }
}

impl FromStr for CurveSpec {
    type Err = anyhow::Error;

    /// `11a3`, or `0,-1,1,0,0` with optional brackets.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if CurveQ::builtin(s).is_some() {
            return Ok(CurveSpec::Label(s.to_string()));
        }
        let body = s.trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            bail!("curve: `{s}` is neither a built-in label nor five coefficients");
        }
        let mut c = [0i64; 5];
        for (slot, part) in c.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .with_context(|| format!("curve: bad coefficient `{part}`"))?;
        }
        Ok(CurveSpec::Coeffs(c))
    }
}

/// Raw document keys; anything else is rejected.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub curve: Option<CurveSpec>,
    pub experiment: Option<Experiment>,
    pub x: Option<u64>,
    pub lo: Option<u64>,
    pub ell: Option<Vec<u64>>,
    pub omega: Option<f64>,
    pub alpha: Option<f64>,
    pub theta: Option<f64>,
    pub lambda: Option<f64>,
    pub epsilon: Option<f64>,
    pub delta1: Option<f64>,
    pub delta2: Option<f64>,
    pub t_prime: Option<f64>,
    pub bins: Option<usize>,
    pub threads: Option<usize>,
    pub cache: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl RawConfig {
    /// Fields set in `other` win.
    pub fn overlay(self, other: RawConfig) -> RawConfig {
        RawConfig {
            curve: other.curve.or(self.curve),
            experiment: other.experiment.or(self.experiment),
            x: other.x.or(self.x),
            lo: other.lo.or(self.lo),
            ell: other.ell.or(self.ell),
            omega: other.omega.or(self.omega),
            alpha: other.alpha.or(self.alpha),
            theta: other.theta.or(self.theta),
            lambda: other.lambda.or(self.lambda),
            epsilon: other.epsilon.or(self.epsilon),
            delta1: other.delta1.or(self.delta1),
            delta2: other.delta2.or(self.delta2),
            t_prime: other.t_prime.or(self.t_prime),
            bins: other.bins.or(self.bins),
            threads: other.threads.or(self.threads),
            cache: other.cache.or(self.cache),
            out: other.out.or(self.out),
            csv: other.csv.or(self.csv),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub curve: CurveSpec,
    pub experiment: Experiment,
    pub x: Option<u64>,
    pub lo: Option<u64>,
    pub ell: Vec<u64>,
    pub omega: f64,
    pub alpha: f64,
    pub theta: f64,
    pub lambda: f64,
    pub epsilon: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub t_prime: Option<f64>,
    pub bins: usize,
    pub threads: usize,
    pub cache: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn window(&self) -> Result<WindowSpec> {
        Ok(WindowSpec::new(self.delta1, self.delta2)?)
    }

    pub fn x(&self) -> Result<u64> {
        self.x
            .ok_or_else(|| anyhow!("x: required by `{}`", self.experiment.name()))
    }

    pub fn ells(&self) -> Result<&[u64]> {
        if self.ell.is_empty() {
            bail!("ell: `{}` needs at least one ℓ", self.experiment.name());
        }
        Ok(&self.ell)
    }
}

/// Merge every `[section]` table into the top level.
fn flatten(doc: toml::Table) -> Result<toml::Table> {
    let mut flat = toml::Table::new();
    for (k, v) in doc {
        match v {
            toml::Value::Table(inner) => {
                for (ik, iv) in inner {
                    if flat.insert(ik.clone(), iv).is_some() {
                        bail!("{ik}: set more than once");
                    }
                }
            }
            other => {
                if flat.insert(k.clone(), other).is_some() {
                    bail!("{k}: set more than once");
                }
            }
        }
    }
    Ok(flat)
}

pub fn parse_raw(text: &str) -> Result<RawConfig> {
    let doc: toml::Table = text
        .parse()
        .context("config is not a well-formed key = value document")?;
    let flat = flatten(doc)?;
    RawConfig::deserialize(toml::Value::Table(flat)).map_err(|e| anyhow!("config: {}", e.message()))
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    validate(parse_raw(text)?)
}

pub fn validate(raw: RawConfig) -> Result<ExperimentConfig> {
    let cfg = ExperimentConfig {
        curve: raw.curve.unwrap_or_else(|| CurveSpec::Label("11a3".into())),
        experiment: raw.experiment.ok_or_else(|| anyhow!("experiment: missing"))?,
        x: raw.x,
        lo: raw.lo,
        ell: raw.ell.unwrap_or_default(),
        omega: raw.omega.unwrap_or(1.0),
        alpha: raw.alpha.unwrap_or(1.0),
        theta: raw.theta.unwrap_or(0.5),
        lambda: raw.lambda.unwrap_or(0.5),
        epsilon: raw.epsilon.unwrap_or(0.01),
        delta1: raw.delta1.unwrap_or(0.0),
        delta2: raw.delta2.unwrap_or(1.0),
        t_prime: raw.t_prime,
        bins: raw.bins.unwrap_or(40),
        threads: match raw.threads {
            Some(t) => t,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
        cache: raw.cache,
        out: raw.out,
        csv: raw.csv,
    };
    for &l in &cfg.ell {
        if l == 2 || !is_prime(l) {
            bail!("ell: ℓ must be an odd prime, got {l}");
        }
    }
    cfg.window().map_err(|e| anyhow!("delta1/delta2: {e}"))?;
    if !(cfg.omega >= 1.0) {
        bail!("omega: ω = {} must be at least 1", cfg.omega);
    }
    if cfg.bins == 0 {
        bail!("bins: must be positive");
    }
    if cfg.threads == 0 {
        bail!("threads: must be positive");
    }
    if !(cfg.alpha.is_finite() && cfg.alpha > 0.0) {
        bail!("alpha: α = {} must be positive", cfg.alpha);
    }
    if !(0.0..=1.0).contains(&cfg.theta) {
        bail!("theta: θ = {} not in [0, 1]", cfg.theta);
    }
    cfg.curve.resolve()?;
    Ok(cfg)
}
