use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Validated moment order α ∈ (0, 2], α ≠ 1.
///
/// Every β = 1 formula branches on whether α is below or above one through
/// κ(α) = α (α < 1) or 2 − α (α > 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct AlphaParam(f64);

impl AlphaParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 2.0 {
            return Err(Error::Config(format!("alpha must lie in (0, 2], got {alpha}")));
        }
        if alpha == 1.0 {
            return Err(Error::Config(
                "alpha = 1 is a plain sum of increments; use a running counter instead of a sketch".into(),
            ));
        }
        Ok(Self(alpha))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn kappa(self) -> f64 {
        if self.0 < 1.0 {
            self.0
        } else {
            2.0 - self.0
        }
    }

    /// Δ = |α − 1|.
    #[inline]
    pub fn delta(self) -> f64 {
        (self.0 - 1.0).abs()
    }

    #[inline]
    pub fn below_one(self) -> bool {
        self.0 < 1.0
    }
}

impl TryFrom<f64> for AlphaParam {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<AlphaParam> for f64 {
    fn from(a: AlphaParam) -> f64 {
        a.0
    }
}

impl fmt::Display for AlphaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
