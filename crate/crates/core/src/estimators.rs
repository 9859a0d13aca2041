//! Point estimators of F_(α) from k stable samples.
//!
//! Products of |x_j|^{α/k} are always formed as sums of logarithms; the
//! summands are sorted before accumulation so every estimator is an exactly
//! symmetric function of its samples.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alpha::AlphaParam;
use crate::error::{Error, Result};
use crate::sketch::Sketch;
use crate::special::{lgamma, EULER_GAMMA};
use crate::stable::ProjectionKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    /// Unbiased geometric mean.
    Gm,
    /// Geometric mean with the k → ∞ normalizing constant.
    GmB,
    /// Harmonic mean (α < 1).
    Hm,
    /// Bias-corrected harmonic mean (α < 1).
    HmC,
    /// Geometric mean for symmetric projections.
    SymGm,
}

impl EstimatorKind {
    /// Default estimator for a configuration: `HmC` below one, `Gm` above,
    /// `SymGm` for symmetric projections.
    pub fn recommended(alpha: AlphaParam, kind: ProjectionKind) -> Self {
        match kind {
            ProjectionKind::Symmetric => EstimatorKind::SymGm,
            ProjectionKind::Skewed if alpha.below_one() => EstimatorKind::HmC,
            ProjectionKind::Skewed => EstimatorKind::Gm,
        }
    }

    pub fn projection(self) -> ProjectionKind {
        match self {
            EstimatorKind::SymGm => ProjectionKind::Symmetric,
            _ => ProjectionKind::Skewed,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Gm => "gm",
            EstimatorKind::GmB => "gm_b",
            EstimatorKind::Hm => "hm",
            EstimatorKind::HmC => "hm_c",
            EstimatorKind::SymGm => "sym_gm",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub estimator: EstimatorKind,
    pub alpha: AlphaParam,
    pub k: usize,
    /// value · sqrt(V / k), using only the O(1/k) variance term.
    pub asymptotic_stderr: f64,
    /// Set when an exact-zero sample forced the value to 0.
    pub degenerate: bool,
}

impl Estimate {
    fn new(value: f64, estimator: EstimatorKind, alpha: AlphaParam, k: usize, degenerate: bool) -> Self {
        let v = match estimator {
            EstimatorKind::Gm | EstimatorKind::GmB => variance_factor_gm(alpha),
            EstimatorKind::Hm | EstimatorKind::HmC => {
                variance_factor_hm(alpha).expect("harmonic estimators are only built for alpha < 1")
            }
            EstimatorKind::SymGm => variance_factor_sym_gm(alpha),
        };
        Self {
            value,
            estimator,
            alpha,
            k,
            asymptotic_stderr: value * (v / k as f64).sqrt(),
            degenerate,
        }
    }
}

/// log of the bracketed constant
/// `[cos(κπ/2k) (2/π) Γ(α/k) Γ(1−1/k) sin(πα/2k)]^k`,
/// which tends to exp(−γ_e(α−1)) monotonically in k.
pub fn ln_gm_bracket(alpha: AlphaParam, k: usize) -> f64 {
    let kf = k as f64;
    kf * ((FRAC_PI_2 * alpha.kappa() / kf).cos().ln() + ln_sym_factor(alpha.value(), kf))
}

pub fn gm_bracket(alpha: AlphaParam, k: usize) -> f64 {
    ln_gm_bracket(alpha, k).exp()
}

/// log((2/π) sin(πα/2k) Γ(1−1/k) Γ(α/k))
fn ln_sym_factor(a: f64, kf: f64) -> f64 {
    FRAC_2_PI.ln() + (FRAC_PI_2 * a / kf).sin().ln() + lgamma(1.0 - 1.0 / kf) + lgamma(a / kf)
}

/// log D_gm.
pub fn ln_gm_denominator(alpha: AlphaParam, k: usize) -> f64 {
    ln_gm_bracket(alpha, k) - (FRAC_PI_2 * alpha.kappa()).cos().ln()
}

/// D_gm = cos^k(κπ/2k)/cos(κπ/2) · [(2/π) sin(πα/2k) Γ(1−1/k) Γ(α/k)]^k, k ≥ 2.
pub fn gm_denominator(alpha: AlphaParam, k: usize) -> Result<f64> {
    check_k(k)?;
    Ok(ln_gm_denominator(alpha, k).exp())
}

/// D_sym = [(2/π) sin(πα/2k) Γ(1−1/k) Γ(α/k)]^k, k ≥ 2.
pub fn sym_gm_denominator(alpha: AlphaParam, k: usize) -> Result<f64> {
    check_k(k)?;
    let kf = k as f64;
    Ok((kf * ln_sym_factor(alpha.value(), kf)).exp())
}

/// Asymptotic variance factor V of the geometric mean: (π²/12)(α² + 2 − 3κ²).
pub fn variance_factor_gm(alpha: AlphaParam) -> f64 {
    let (a, kappa) = (alpha.value(), alpha.kappa());
    PI * PI / 12.0 * (a * a + 2.0 - 3.0 * kappa * kappa)
}

/// Asymptotic variance factor of the harmonic mean: 2Γ²(1+α)/Γ(1+2α) − 1.
pub fn variance_factor_hm(alpha: AlphaParam) -> Result<f64> {
    require_below_one(alpha, "harmonic mean")?;
    let a = alpha.value();
    Ok(2.0 * (2.0 * lgamma(1.0 + a) - lgamma(1.0 + 2.0 * a)).exp() - 1.0)
}

/// Asymptotic variance factor of the symmetric geometric mean: (π²/12)(α² + 2).
pub fn variance_factor_sym_gm(alpha: AlphaParam) -> f64 {
    let a = alpha.value();
    PI * PI / 12.0 * (a * a + 2.0)
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Input(format!("at least two samples are required, got {k}")));
    }
    Ok(())
}

fn require_below_one(alpha: AlphaParam, what: &str) -> Result<()> {
    if alpha.below_one() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{what} requires alpha < 1, got {alpha}")))
    }
}

/// Sorted ln|x_j|, or `None` when some sample is exactly zero.
///
/// Infinite samples (accumulator overflow, common for α ≲ 0.02) are rejected
/// unless `allow_infinite`; NaN is always rejected.
fn sorted_ln_abs(samples: &[f64], allow_infinite: bool) -> Result<Option<Vec<f64>>> {
    check_k(samples.len())?;
    if let Some(bad) = samples.iter().find(|x| x.is_nan() || (!allow_infinite && x.is_infinite())) {
        return Err(Error::Degenerate(format!("non-finite sample {bad} (accumulator overflow)")));
    }
    if samples.contains(&0.0) {
        return Ok(None);
    }
    let mut logs: Vec<f64> = samples.iter().map(|x| x.abs().ln()).collect();
    logs.sort_by(f64::total_cmp);
    Ok(Some(logs))
}

/// (α/k) Σ ln|x_j|, or `None` for a degenerate sample.
fn mean_log_power(samples: &[f64], alpha: AlphaParam) -> Result<Option<f64>> {
    Ok(sorted_ln_abs(samples, false)?.map(|logs| alpha.value() * logs.iter().sum::<f64>() / logs.len() as f64))
}

/// Unbiased geometric mean estimator Π|x_j|^{α/k} / D_gm.
pub fn estimate_gm(samples: &[f64], alpha: AlphaParam) -> Result<Estimate> {
    let k = samples.len();
    let (value, degenerate) = match mean_log_power(samples, alpha)? {
        Some(m) => ((m - ln_gm_denominator(alpha, k)).exp(), false),
        None => (0.0, true),
    };
    Ok(Estimate::new(value, EstimatorKind::Gm, alpha, k, degenerate))
}

/// exp(γ_e(α−1)) cos(κπ/2) Π|x_j|^{α/k}; the form the tail bounds are proved for.
pub fn estimate_gm_b(samples: &[f64], alpha: AlphaParam) -> Result<Estimate> {
    let k = samples.len();
    let ln_const = EULER_GAMMA * (alpha.value() - 1.0) + (FRAC_PI_2 * alpha.kappa()).cos().ln();
    let (value, degenerate) = match mean_log_power(samples, alpha)? {
        Some(m) => ((m + ln_const).exp(), false),
        None => (0.0, true),
    };
    Ok(Estimate::new(value, EstimatorKind::GmB, alpha, k, degenerate))
}

/// Geometric mean for symmetric projections: Π|x_j|^{α/k} / D_sym.
pub fn estimate_sym_gm(samples: &[f64], alpha: AlphaParam) -> Result<Estimate> {
    let k = samples.len();
    let (value, degenerate) = match mean_log_power(samples, alpha)? {
        Some(m) => {
            let kf = k as f64;
            ((m - kf * ln_sym_factor(alpha.value(), kf)).exp(), false)
        }
        None => (0.0, true),
    };
    Ok(Estimate::new(value, EstimatorKind::SymGm, alpha, k, degenerate))
}

/// k cos(απ/2)/Γ(1+α) / Σ|x_j|^{−α}, without the correction factor.
fn harmonic_value(samples: &[f64], alpha: AlphaParam) -> Result<Option<f64>> {
    require_below_one(alpha, "harmonic mean")?;
    // An overflowed sample exceeds f64::MAX, so its term |x|^{−α} is below
    // f64::MAX^{−α}; it is taken as 0.
    let Some(logs) = sorted_ln_abs(samples, true)? else {
        return Ok(None);
    };
    let a = alpha.value();
    // Smallest terms first.
    let inv_sum: f64 = logs.iter().rev().map(|l| (-a * l).exp()).sum();
    if inv_sum == 0.0 {
        return Err(Error::Degenerate("every sample overflowed".into()));
    }
    let k = samples.len() as f64;
    Ok(Some(k * (FRAC_PI_2 * a).cos() / lgamma(1.0 + a).exp() / inv_sum))
}

/// Harmonic mean estimator (α < 1).
pub fn estimate_hm(samples: &[f64], alpha: AlphaParam) -> Result<Estimate> {
    let (value, degenerate) = match harmonic_value(samples, alpha)? {
        Some(v) => (v, false),
        None => (0.0, true),
    };
    Ok(Estimate::new(value, EstimatorKind::Hm, alpha, samples.len(), degenerate))
}

/// Multiplicative bias correction 1 − (2Γ²(1+α)/Γ(1+2α) − 1)/k.
pub fn hm_correction(alpha: AlphaParam, k: usize) -> Result<f64> {
    Ok(1.0 - variance_factor_hm(alpha)? / k as f64)
}

/// Bias-corrected harmonic mean estimator (α < 1); bias O(1/k²).
pub fn estimate_hm_c(samples: &[f64], alpha: AlphaParam) -> Result<Estimate> {
    let k = samples.len();
    let (value, degenerate) = match harmonic_value(samples, alpha)? {
        Some(v) => (v * hm_correction(alpha, k)?, false),
        None => (0.0, true),
    };
    Ok(Estimate::new(value, EstimatorKind::HmC, alpha, k, degenerate))
}

/// Dispatch on the estimator kind for raw samples.
pub fn estimate_with(kind: EstimatorKind, samples: &[f64], alpha: AlphaParam) -> Result<Estimate> {
    match kind {
        EstimatorKind::Gm => estimate_gm(samples, alpha),
        EstimatorKind::GmB => estimate_gm_b(samples, alpha),
        EstimatorKind::Hm => estimate_hm(samples, alpha),
        EstimatorKind::HmC => estimate_hm_c(samples, alpha),
        EstimatorKind::SymGm => estimate_sym_gm(samples, alpha),
    }
}

/// Estimate F_(α) from a sketch, checking that the estimator matches the
/// sketch's projection kind.
pub fn estimate_sketch(sketch: &Sketch, kind: EstimatorKind) -> Result<Estimate> {
    let cfg = sketch.config();
    if kind.projection() != cfg.kind {
        return Err(Error::Unsupported(format!(
            "estimator {kind} needs {:?} projections but the sketch uses {:?}",
            kind.projection(),
            cfg.kind
        )));
    }
    estimate_with(kind, sketch.samples(), cfg.alpha)
}
