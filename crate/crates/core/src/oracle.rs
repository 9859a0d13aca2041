//! Exact brute-force reference computations on a reconstructed signal.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::sketch::StreamUpdate;
use crate::sum::{neumaier_sum, Neumaier};

/// Sparse signal: index → value, exact zeros omitted.
pub type Signal = BTreeMap<u64, f64>;

/// Final signal A_t after applying every update, with zero entries pruned.
pub fn replay<I>(updates: I) -> Signal
where
    I: IntoIterator<Item = StreamUpdate>,
{
    let mut acc: BTreeMap<u64, Neumaier> = BTreeMap::new();
    for u in updates {
        acc.entry(u.index).or_default().add(u.increment);
    }
    acc.into_iter()
        .map(|(i, s)| (i, s.value()))
        .filter(|(_, v)| *v != 0.0)
        .collect()
}

/// F_(1) = Σ A[i] = Σ increments: a plain counter over the stream.
pub fn running_sum<I>(updates: I) -> f64
where
    I: IntoIterator<Item = StreamUpdate>,
{
    neumaier_sum(updates.into_iter().map(|u| u.increment))
}

/// F_(α) = Σ A[i]^α over the nonzero entries.
///
/// A negative entry means the stream left the strict-Turnstile model, under
/// which the sketch estimate is meaningless; that is reported as an error.
pub fn exact_moment(signal: &Signal, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    if let Some((i, v)) = signal.iter().find(|(_, v)| **v < 0.0) {
        return Err(Error::ModelViolation(format!("entry {i} is negative ({v})")));
    }
    Ok(neumaier_sum(signal.values().map(|v| v.powf(alpha))))
}

/// Σ log A[i]; every entry must be strictly positive.
pub fn exact_log_norm(signal: &Signal) -> Result<f64> {
    if let Some((i, v)) = signal.iter().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::Domain(format!("entry {i} is not strictly positive ({v})")));
    }
    Ok(neumaier_sum(signal.values().map(|v| v.ln())))
}

/// Entrywise difference A − B over the union of both supports.
pub fn difference(a: &Signal, b: &Signal) -> Signal {
    let mut out = a.clone();
    for (i, v) in b {
        *out.entry(*i).or_insert(0.0) -= v;
    }
    out
}

/// Σ log|A[i] − B[i]| over the union of supports; every difference must be
/// nonzero.
pub fn exact_log_distance(a: &Signal, b: &Signal) -> Result<f64> {
    let d = difference(a, b);
    if let Some((i, _)) = d.iter().find(|(_, v)| **v == 0.0) {
        return Err(Error::Domain(format!("difference at entry {i} is zero")));
    }
    Ok(neumaier_sum(d.values().map(|v| v.abs().ln())))
}
