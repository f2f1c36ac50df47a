//! Prime-indexed statistics of elliptic curve traces: sieving, point counts,
//! GL2 class data, fractional-part windows and analytic error envelopes.

pub mod analytic;
pub mod arith;
pub mod cache;
pub mod curve;
pub mod error;
pub mod experiments;
pub mod frac;
pub mod gl2;
pub mod prime;
pub mod trace;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/primes.md")]
    mod primes {}
    #[doc = include_str!("../../../book/src/traces.md")]
    mod traces {}
    #[doc = include_str!("../../../book/src/classes.md")]
    mod classes {}
    #[doc = include_str!("../../../book/src/fractional.md")]
    mod fractional {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/analytic.md")]
    mod analytic {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
