//! `exlab`: run one experiment from flags or from a config file.
//!
//! Exit status: 0 success, 1 usage or input error, 2 a real-number decision
//! stayed undecided at the highest precision, 3 `verify` found a mismatch.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use exlab_cli::config::{self, CurveSpec, Experiment, RawConfig};
use exlab_cli::run;

#[derive(Parser, Debug)]
#[command(name = "exlab", version, about = "Prime-indexed statistics of elliptic curve traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count primes in (lo, x].
    Sieve(Flags),
    /// Traces a_p for good p in [lo, x].
    Ap(Flags),
    /// GL2(F_ℓ) class inventory and trace fibers.
    Classes(Flags),
    /// a_p ≡ [2√p] mod ℓ over (x, 2x].
    Joint(Flags),
    /// a_p ≡ [2√p] ≡ 0 mod ℓ over (x, 2x].
    Jointzero(Flags),
    /// a_p = ±[2√p] over [lo, x].
    Extremal(Flags),
    /// a_p / 2√p against the Sato-Tate measure.
    Satotate(Flags),
    /// a_p mod ℓ against the trace-fiber proportions.
    Residues(Flags),
    /// Discrepancy of {αp^θ} for p <= x.
    Balog(Flags),
    /// {αp^θ} < p^(-λ) for p <= x.
    Landau(Flags),
    /// Mean square of L(1/2 + it) over [T', 2T'].
    Meanvalue(Flags),
    /// Error envelopes and their side conditions.
    Envelope(Flags),
    /// Every route against its oracle up to x (default 20000).
    Verify(Flags),
    /// Run the experiment named in a config file; flags override its keys.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Built-in label (11a3, 37a1, ...) or coefficients a1,a2,a3,a4,a6.
    #[arg(long)]
    curve: Option<CurveSpec>,
    #[arg(long)]
    x: Option<u64>,
    #[arg(long)]
    lo: Option<u64>,
    /// Odd primes, comma separated.
    #[arg(long, value_delimiter = ',')]
    ell: Option<Vec<u64>>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta1: Option<f64>,
    #[arg(long)]
    delta2: Option<f64>,
    #[arg(long)]
    t_prime: Option<f64>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, env = "EXLAB_CACHE")]
    cache: Option<PathBuf>,
    /// JSON report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-prime CSV rows.
    #[arg(long)]
    csv: Option<PathBuf>,
}

impl Flags {
    fn into_raw(self, experiment: Option<Experiment>) -> RawConfig {
        RawConfig {
            curve: self.curve,
            experiment,
            x: self.x,
            lo: self.lo,
            ell: self.ell,
            omega: self.omega,
            alpha: self.alpha,
            theta: self.theta,
            lambda: self.lambda,
            epsilon: self.epsilon,
            delta1: self.delta1,
            delta2: self.delta2,
            t_prime: self.t_prime,
            bins: self.bins,
            threads: self.threads,
            cache: self.cache,
            out: self.out,
            csv: self.csv,
        }
    }
}

fn raw_config(command: Command) -> Result<RawConfig> {
    let (exp, flags) = match command {
        Command::Run { config, flags } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("cannot read {}", config.display()))?;
            return Ok(config::parse_raw(&text)?.overlay(flags.into_raw(None)));
        }
        Command::Sieve(f) => (Experiment::Sieve, f),
        Command::Ap(f) => (Experiment::Ap, f),
        Command::Classes(f) => (Experiment::Classes, f),
        Command::Joint(f) => (Experiment::Joint, f),
        Command::Jointzero(f) => (Experiment::Jointzero, f),
        Command::Extremal(f) => (Experiment::Extremal, f),
        Command::Satotate(f) => (Experiment::Satotate, f),
        Command::Residues(f) => (Experiment::Residues, f),
        Command::Balog(f) => (Experiment::Balog, f),
        Command::Landau(f) => (Experiment::Landau, f),
        Command::Meanvalue(f) => (Experiment::Meanvalue, f),
        Command::Envelope(f) => (Experiment::Envelope, f),
        Command::Verify(f) => (Experiment::Verify, f),
    };
    Ok(flags.into_raw(Some(exp)))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let undecided = err
        .chain()
        .any(|e| matches!(e.downcast_ref::<exlab::Error>(), Some(exlab::Error::Uncertain { .. })));
    if undecided {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = raw_config(cli.command)
        .and_then(config::validate)
        .and_then(|cfg| run::run(&cfg));
    match result {
        Ok(outcome) if outcome.verified => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("error: verification failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
