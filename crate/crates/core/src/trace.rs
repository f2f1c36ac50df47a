//! Frobenius traces `a_p = p + 1 - #E(F_p)`: two independent routes, a
//! caching dispatcher, and the integer-exact extremality test `a_p = ±[2√p]`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, isqrt};
use crate::cache::CacheEntry;
use crate::curve::{count_points_naive, group_order_bsgs, CurveQ, BSGS_MIN_PRIME};
use crate::error::{Error, Result};
use crate::prime::sieve_range;

/// Primes up to this bound are counted naively by [`TraceEngine::ap`].
pub const NAIVE_LIMIT: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Naive,
    Bsgs,
    Cache,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub p: u64,
    pub ap: i64,
    pub method: Method,
}

impl TraceRecord {
    fn new(p: u64, ap: i64, method: Method) -> Self {
        debug_assert!(satisfies_hasse(p, ap), "Hasse bound violated at p = {p}, a_p = {ap}");
        TraceRecord { p, ap, method }
    }
}

/// `a_p^2 <= 4p`.
pub fn satisfies_hasse(p: u64, ap: i64) -> bool {
    (ap as i128) * (ap as i128) <= 4 * p as i128
}

/// `[2√p] = isqrt(4p)`. For prime `p`, `4p` is never a square, so this is
/// strictly below `2√p`.
pub fn floor_two_sqrt(p: u64) -> u64 {
    isqrt(4 * p)
}

fn trace_from_order(p: u64, order: u64) -> i64 {
    (p + 1) as i64 - order as i64
}

pub fn ap_naive(curve: &CurveQ, p: u64) -> Result<TraceRecord> {
    let n = count_points_naive(curve, p)?;
    Ok(TraceRecord::new(p, trace_from_order(p, n), Method::Naive))
}

/// Trace via baby-step giant-step. Below [`BSGS_MIN_PRIME`], and whenever the
/// retry budget leaves several candidate orders, the count falls back to the
/// naive route and the record says so.
pub fn ap_bsgs(curve: &CurveQ, p: u64) -> Result<TraceRecord> {
    let reduced = curve.reduce_good(p)?;
    if p < BSGS_MIN_PRIME {
        return ap_naive(curve, p);
    }
    match group_order_bsgs(&reduced) {
        Ok(n) => Ok(TraceRecord::new(p, trace_from_order(p, n), Method::Bsgs)),
        Err(Error::Ambiguous { .. }) => ap_naive(curve, p),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtremalStatus {
    Plus,
    Minus,
    No,
}

pub fn extremal_status(p: u64, ap: i64) -> ExtremalStatus {
    let edge = floor_two_sqrt(p) as i64;
    if ap == edge {
        ExtremalStatus::Plus
    } else if ap == -edge {
        ExtremalStatus::Minus
    } else {
        ExtremalStatus::No
    }
}

pub(crate) fn check_odd_prime(ell: u64) -> Result<()> {
    if ell == 2 || !is_prime(ell) {
        return Err(Error::param("ell", format!("ℓ must be an odd prime, got {ell}")));
    }
    Ok(())
}

/// Shared trace store keyed by `(curve label hash, p)`.
///
/// Reads run concurrently; writes take the lock briefly. Entries added since
/// the last [`TraceCache::take_fresh`] are kept aside for persistence.
#[derive(Debug, Default)]
pub struct TraceCache {
    map: RwLock<HashMap<(u64, u64), i64>>,
    fresh: Mutex<Vec<CacheEntry>>,
    rejected: Mutex<u64>,
}

impl TraceCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// A Hasse-violating entry is dropped and counted, never served.
    pub fn get(&self, curve: u64, p: u64) -> Option<i64> {
        let ap = *self.map.read().expect("cache lock").get(&(curve, p))?;
        if satisfies_hasse(p, ap) {
            Some(ap)
        } else {
            self.map.write().expect("cache lock").remove(&(curve, p));
            *self.rejected.lock().expect("cache lock") += 1;
            None
        }
    }

    pub fn insert(&self, curve: u64, p: u64, ap: i64) -> Result<()> {
        if !satisfies_hasse(p, ap) {
            return Err(Error::CacheCorrupt { p, ap });
        }
        let prev = self.map.write().expect("cache lock").insert((curve, p), ap);
        if prev.is_none() {
            self.fresh.lock().expect("cache lock").push(CacheEntry {
                curve_hash: curve,
                p,
                ap,
            });
        }
        Ok(())
    }

    /// Seed from persisted entries without marking them fresh; returns how
    /// many were rejected by the Hasse gate.
    pub fn preload(&self, entries: impl IntoIterator<Item = CacheEntry>) -> u64 {
        let mut map = self.map.write().expect("cache lock");
        let mut bad = 0;
        for e in entries {
            if satisfies_hasse(e.p, e.ap) {
                map.insert((e.curve_hash, e.p), e.ap);
            } else {
                bad += 1;
            }
        }
        *self.rejected.lock().expect("cache lock") += bad;
        bad
    }

    pub fn take_fresh(&self) -> Vec<CacheEntry> {
        let mut v = std::mem::take(&mut *self.fresh.lock().expect("cache lock"));
        v.sort_by_key(|e| (e.curve_hash, e.p));
        v
    }

    pub fn rejected(&self) -> u64 {
        *self.rejected.lock().expect("cache lock")
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Traces of the good primes in a range, ascending, plus the bad primes skipped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceTable {
    pub records: Vec<TraceRecord>,
    pub bad: Vec<u64>,
}

/// A curve together with a (possibly shared) trace cache.
#[derive(Clone, Debug)]
pub struct TraceEngine {
    curve: CurveQ,
    key: u64,
    cache: Arc<TraceCache>,
}

impl TraceEngine {
    pub fn new(curve: CurveQ) -> Self {
        Self::with_cache(curve, Arc::new(TraceCache::new()))
    }

    pub fn with_cache(curve: CurveQ, cache: Arc<TraceCache>) -> Self {
        let key = curve.label_hash();
        TraceEngine { curve, key, cache }
    }

    pub fn curve(&self) -> &CurveQ {
        &self.curve
    }

    pub fn cache(&self) -> &Arc<TraceCache> {
        &self.cache
    }

    /// Cached trace if present; otherwise naive up to [`NAIVE_LIMIT`] and
    /// baby-step giant-step above, stored on the way out.
    pub fn ap(&self, p: u64) -> Result<TraceRecord> {
        if !self.curve.is_good(p) {
            return Err(Error::BadReduction { p });
        }
        if let Some(ap) = self.cache.get(self.key, p) {
            return Ok(TraceRecord::new(p, ap, Method::Cache));
        }
        let rec = if p <= NAIVE_LIMIT {
            ap_naive(&self.curve, p)?
        } else {
            ap_bsgs(&self.curve, p)?
        };
        self.cache.insert(self.key, p, rec.ap)?;
        Ok(rec)
    }

    pub fn is_extremal(&self, p: u64) -> Result<ExtremalStatus> {
        Ok(extremal_status(p, self.ap(p)?.ap))
    }

    /// `a_p mod ℓ` in `[0, ℓ)`.
    pub fn residue_ap_mod(&self, p: u64, ell: u64) -> Result<u64> {
        check_odd_prime(ell)?;
        Ok(self.ap(p)?.ap.rem_euclid(ell as i64) as u64)
    }

    /// Traces for every good prime in `(lo, hi]`, computed in parallel; the
    /// order of the output never depends on the thread count.
    pub fn traces(&self, lo: u64, hi: u64) -> Result<TraceTable> {
        let primes = sieve_range(lo, hi)?;
        let (good, bad): (Vec<u64>, Vec<u64>) = primes.into_iter().partition(|&p| self.curve.is_good(p));
        let records = good.into_par_iter().map(|p| self.ap(p)).collect::<Result<Vec<_>>>()?;
        Ok(TraceTable { records, bad })
    }

    /// Fraction of good `p <= 10^4` with `a_p = 0`; above 0.4 suggests CM.
    pub fn supersingular_fraction(&self) -> Result<f64> {
        let t = self.traces(0, NAIVE_LIMIT)?;
        let zeros = t.records.iter().filter(|r| r.ap == 0).count();
        Ok(zeros as f64 / t.records.len().max(1) as f64)
    }

    pub fn likely_cm(&self) -> Result<bool> {
        Ok(self.supersingular_fraction()? > 0.4)
    }
}
