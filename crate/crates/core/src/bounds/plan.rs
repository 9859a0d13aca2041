use serde::{Deserialize, Serialize};

use super::{solve, Side, TailBoundReport, TailEstimator};
use crate::alpha::AlphaParam;
use crate::error::{Error, Result};

/// Number of projections sufficient for `Pr(|F̂ − F| ≥ εF) ≤ δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub alpha: AlphaParam,
    pub epsilon: f64,
    pub delta: f64,
    pub estimator: TailEstimator,
    pub g_right: f64,
    pub g_left: f64,
    /// max(G_R, G_L)
    pub g: f64,
    pub k: usize,
}

impl SamplePlan {
    /// Union bound over both tails at the planned k.
    pub fn failure_bound(&self) -> f64 {
        let e2 = self.epsilon * self.epsilon;
        let kf = self.k as f64;
        (-kf * e2 / self.g_right).exp() + (-kf * e2 / self.g_left).exp()
    }
}

/// k = ceil(G log(2/δ) / ε²) with G = max(G_R, G_L), never below 2.
pub fn plan_samples(alpha: AlphaParam, epsilon: f64, delta: f64, estimator: TailEstimator) -> Result<SamplePlan> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    let right: TailBoundReport = solve(alpha, epsilon, Side::Right, estimator)?;
    let left = solve(alpha, epsilon, Side::Left, estimator)?;
    let g = right.g.max(left.g);
    let k = (g * (2.0 / delta).ln() / (epsilon * epsilon)).ceil();
    if !k.is_finite() || k > usize::MAX as f64 {
        return Err(Error::Domain(format!("planned k is not representable: {k}")));
    }
    Ok(SamplePlan {
        alpha,
        epsilon,
        delta,
        estimator,
        g_right: right.g,
        g_left: left.g,
        g,
        k: (k as usize).max(2),
    })
}
