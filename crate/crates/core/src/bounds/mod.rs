//! Exponential tail-bound constants and sample-size planning.
//!
//! For an estimator F̂ built from k projections,
//! `Pr(F̂ ≥ (1+ε)F) ≤ exp(−k ε²/G_R)` and `Pr(F̂ ≤ (1−ε)F) ≤ exp(−k ε²/G_L)`.
//! The constants come from optimizing a Markov (moment or MGF) bound; each
//! optimum is the root of a one-dimensional equation solved numerically here.

mod gm;
mod hm;
mod plan;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alpha::AlphaParam;

pub use gm::{gm_objective, gm_rate_approx, gm_rate_approx_delta, solve_gm_left, solve_gm_right};
pub use hm::{hm_mgf, solve_hm_left, solve_hm_right, MgfValue};
pub use plan::{plan_samples, SamplePlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Over-estimation: F̂ ≥ (1+ε)F.
    Right,
    /// Under-estimation: F̂ ≤ (1−ε)F.
    Left,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Right => "right",
            Side::Left => "left",
        })
    }
}

/// Estimator family whose tails are bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailEstimator {
    /// Geometric mean with the asymptotic constant (`gm_b`).
    GmB,
    /// Uncorrected harmonic mean (`hm`), α < 1 only.
    Hm,
}

impl fmt::Display for TailEstimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TailEstimator::GmB => "gm_b",
            TailEstimator::Hm => "hm",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBoundReport {
    pub alpha: AlphaParam,
    pub epsilon: f64,
    pub side: Side,
    pub estimator: TailEstimator,
    /// Optimal Markov exponent: C_R / C_L for the geometric mean, t1* / t2*
    /// for the harmonic mean.
    pub optimum: f64,
    /// G_R or G_L.
    pub g: f64,
    /// ε²/G.
    pub exponent_rate: f64,
    /// |optimality equation| at `optimum`.
    pub residual: f64,
}

impl TailBoundReport {
    /// exp(−k ε²/G).
    pub fn probability_bound(&self, k: usize) -> f64 {
        (-(k as f64) * self.exponent_rate).exp()
    }
}

/// Solve one tail for either estimator family.
pub fn solve(alpha: AlphaParam, epsilon: f64, side: Side, estimator: TailEstimator) -> crate::Result<TailBoundReport> {
    match (estimator, side) {
        (TailEstimator::GmB, Side::Right) => solve_gm_right(alpha, epsilon),
        (TailEstimator::GmB, Side::Left) => solve_gm_left(alpha, epsilon),
        (TailEstimator::Hm, Side::Right) => solve_hm_right(alpha, epsilon),
        (TailEstimator::Hm, Side::Left) => solve_hm_left(alpha, epsilon),
    }
}

pub(crate) fn check_epsilon(epsilon: f64, side: Side) -> crate::Result<()> {
    let ok = match side {
        Side::Right => epsilon.is_finite() && epsilon > 0.0,
        Side::Left => epsilon > 0.0 && epsilon < 1.0,
    };
    if ok {
        Ok(())
    } else {
        let range = if side == Side::Right { "(0, inf)" } else { "(0, 1)" };
        Err(crate::Error::Domain(format!("{side} tail needs epsilon in {range}, got {epsilon}")))
    }
}
