//! Logarithmic norm Σ log A[i] and logarithmic distance Σ log|A[i] − B[i]|
//! through the small-α limit
//! `(D/α) log((1/D) Σ A[i]^α) → Σ log A[i]` as α → 0+.
//!
//! The approximation error is O((α/D)(Σ log A)² + α Σ log² A), so α should be
//! small; 0.01 is the default.

use serde::{Deserialize, Serialize};

use crate::alpha::AlphaParam;
use crate::bounds::{self, Side, TailEstimator};
use crate::error::{Error, Result};
use crate::estimators::{estimate_sketch, Estimate, EstimatorKind};
use crate::sketch::Sketch;
use crate::stable::ProjectionKind;

pub const DEFAULT_LOG_ALPHA: f64 = 0.01;
/// Largest α accepted for the log transform.
pub const MAX_LOG_ALPHA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNormEstimate {
    pub value: f64,
    pub alpha_used: f64,
    pub dimension: usize,
    /// The underlying αth-moment estimate.
    pub moment: Estimate,
}

/// (D/α) log(F/D).
pub fn log_norm_from_moment(moment_estimate: f64, alpha: f64, dimension: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    if dimension == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if !(moment_estimate > 0.0) || !moment_estimate.is_finite() {
        return Err(Error::Degenerate(format!(
            "moment estimate must be positive and finite, got {moment_estimate}"
        )));
    }
    let d = dimension as f64;
    Ok(d / alpha * (moment_estimate / d).ln())
}

fn check_small_alpha(sketch: &Sketch, kind: ProjectionKind) -> Result<AlphaParam> {
    let cfg = sketch.config();
    if cfg.kind != kind {
        return Err(Error::Unsupported(format!(
            "expected a {kind:?} sketch, got {:?}",
            cfg.kind
        )));
    }
    if cfg.alpha.value() > MAX_LOG_ALPHA {
        return Err(Error::Config(format!(
            "log functionals need alpha <= {MAX_LOG_ALPHA}, sketch has {}",
            cfg.alpha
        )));
    }
    Ok(cfg.alpha)
}

fn from_estimate(moment: Estimate, dimension: usize) -> Result<LogNormEstimate> {
    let alpha = moment.alpha.value();
    Ok(LogNormEstimate {
        value: log_norm_from_moment(moment.value, alpha, dimension)?,
        alpha_used: alpha,
        dimension,
        moment,
    })
}

/// Σ log A[i] from a skewed sketch with small α, via the bias-corrected
/// harmonic mean. Every one of the `dimension` entries must be strictly
/// positive; the sketch cannot check this.
pub fn estimate_log_norm(sketch: &Sketch, dimension: usize) -> Result<LogNormEstimate> {
    check_small_alpha(sketch, ProjectionKind::Skewed)?;
    from_estimate(estimate_sketch(sketch, EstimatorKind::HmC)?, dimension)
}

/// Σ log|A[i] − B[i]| from a symmetric sketch of the difference stream
/// (B's updates ingested with negated increments).
pub fn estimate_log_distance(sketch: &Sketch, dimension: usize) -> Result<LogNormEstimate> {
    check_small_alpha(sketch, ProjectionKind::Symmetric)?;
    from_estimate(estimate_sketch(sketch, EstimatorKind::SymGm)?, dimension)
}

/// Tail bounds for the log-norm estimate, stated in the moment domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNormBounds {
    /// Moment-domain deviation (F/D)^ε − 1 equivalent to a relative
    /// over-estimate ε of the log-norm.
    pub epsilon_right: f64,
    /// Moment-domain deviation 1 − (D/F)^ε for the under-estimate.
    pub epsilon_left: f64,
    /// Bound on Pr(L̂ ≥ (1+ε)L); 1 when the event is not a tail event.
    pub right: f64,
    /// Bound on Pr(L̂ ≤ (1−ε)L).
    pub left: f64,
}

/// Bounds `exp(−k ε'²/G(ε'))` where ε' is the moment-domain deviation and G
/// the tail constant of `estimator` at ε'.
pub fn log_norm_tail_bounds(
    alpha: AlphaParam,
    epsilon: f64,
    dimension: usize,
    f_alpha: f64,
    k: usize,
    estimator: TailEstimator,
) -> Result<LogNormBounds> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    if dimension == 0 || !(f_alpha > 0.0 && f_alpha.is_finite()) {
        return Err(Error::Domain(format!(
            "need dimension >= 1 and a positive moment (dimension = {dimension}, moment = {f_alpha})"
        )));
    }
    let ratio = f_alpha / dimension as f64;
    let epsilon_right = ratio.powf(epsilon) - 1.0;
    let epsilon_left = 1.0 - ratio.powf(-epsilon);
    let bound = |eps: f64, side: Side| -> Result<f64> {
        if eps <= 0.0 {
            return Ok(1.0);
        }
        Ok(bounds::solve(alpha, eps, side, estimator)?.probability_bound(k))
    };
    Ok(LogNormBounds {
        epsilon_right,
        epsilon_left,
        right: bound(epsilon_right, Side::Right)?,
        left: bound(epsilon_left, Side::Left)?,
    })
}
