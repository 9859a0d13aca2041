//! Sampling from S(α, β, 1) for β ∈ {0, 1} and the lazily generated
//! projection matrix.
//!
//! The law S(α, β, F) has characteristic function
//! `exp(−F|t|^α (1 − iβ sign(t) tan(πα/2)))`. Samples come from the
//! Chambers–Mallows–Stuck transform of one uniform angle and one unit
//! exponential, evaluated in log space so that the extreme values produced
//! at small α do not overflow intermediate products.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alpha::AlphaParam;

/// Skewness of the projection entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionKind {
    /// β = 1: maximally skewed, used for frequency moments.
    Skewed,
    /// β = 0: symmetric, used for logarithmic distances.
    Symmetric,
}

impl ProjectionKind {
    pub fn beta(self) -> f64 {
        match self {
            ProjectionKind::Skewed => 1.0,
            ProjectionKind::Symmetric => 0.0,
        }
    }
}

/// Master seed of the projection matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeedSpec(pub u64);

/// CMS constants for one (α, β) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableLaw {
    alpha: f64,
    /// B = atan(β tan(πα/2)) / α
    shift: f64,
    /// log of (1 + β² tan²(πα/2))^{1/(2α)}
    log_scale: f64,
}

impl StableLaw {
    pub fn new(alpha: AlphaParam, kind: ProjectionKind) -> Self {
        let a = alpha.value();
        let (shift, log_scale) = match kind {
            ProjectionKind::Symmetric => (0.0, 0.0),
            ProjectionKind::Skewed if a == 2.0 => (0.0, 0.0),
            ProjectionKind::Skewed => {
                // atan(tan(πα/2)) folded into (−π/2, π/2): πα/2 for α < 1 and
                // −π(2 − α)/2 for α > 1, i.e. ±πκ/2.
                let half_kappa_pi = FRAC_PI_2 * alpha.kappa();
                let atan = if alpha.below_one() { half_kappa_pi } else { -half_kappa_pi };
                // 1 + tan² = sec², so the scale is |cos(πκ/2)|^{-1/α}.
                (atan / a, -half_kappa_pi.cos().ln() / a)
            }
        };
        Self { alpha: a, shift, log_scale }
    }

    /// Transform an angle `v ∈ (−π/2, π/2)` and an exponential `w > 0` into one
    /// S(α, β, 1) sample.
    pub fn transform(&self, v: f64, w: f64) -> f64 {
        let (sign, ln_abs) = self.transform_log(v, w);
        sign * ln_abs.exp()
    }

    /// Same as [`StableLaw::transform`], returning (sign, log|Z|).
    pub fn transform_log(&self, v: f64, w: f64) -> (f64, f64) {
        let a = self.alpha;
        let arg = a * (v + self.shift);
        let s = arg.sin();
        let inner = (v - arg).cos();
        let ln_abs = self.log_scale + s.abs().ln() - v.cos().ln() / a + (1.0 - a) / a * (inner.ln() - w.ln());
        (s.signum(), ln_abs)
    }

    /// Draw using an arbitrary generator.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        let (v, w) = angle_and_exponential(rng.next_u64(), rng.next_u64());
        self.transform(v, w)
    }
}

/// One S(α, β, 1) sample from a uniform angle in (−π/2, π/2) and a unit
/// exponential.
pub fn sample_stable(alpha: AlphaParam, kind: ProjectionKind, uniform: f64, exponential: f64) -> f64 {
    StableLaw::new(alpha, kind).transform(uniform, exponential)
}

/// Map a 64-bit word to the open interval (0, 1).
#[inline]
pub fn open_unit(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

#[inline]
fn angle_and_exponential(b1: u64, b2: u64) -> (f64, f64) {
    (PI * (open_unit(b1) - 0.5), -open_unit(b2).ln())
}

/// Generator for the entries of the (never materialized) projection matrix.
///
/// Entry (row, column) is a pure function of (seed, row, column): ChaCha8
/// keyed by the seed, stream number `row`, and block position `column`.
/// Each entry consumes two 64-bit words.
#[derive(Debug, Clone)]
pub struct ProjectionMatrix {
    base: ChaCha8Rng,
    law: StableLaw,
}

const WORDS_PER_ENTRY: u128 = 4;

impl ProjectionMatrix {
    pub fn new(seed: SeedSpec, alpha: AlphaParam, kind: ProjectionKind) -> Self {
        Self {
            base: ChaCha8Rng::seed_from_u64(seed.0),
            law: StableLaw::new(alpha, kind),
        }
    }

    pub fn law(&self) -> &StableLaw {
        &self.law
    }

    pub fn entry(&self, row: u64, column: usize) -> f64 {
        let mut rng = self.base.clone();
        rng.set_stream(row);
        rng.set_word_pos(column as u128 * WORDS_PER_ENTRY);
        self.law.sample(&mut rng)
    }

    /// Entries (row, 0), (row, 1), … in column order.
    pub fn row(&self, row: u64) -> RowEntries<'_> {
        let mut rng = self.base.clone();
        rng.set_stream(row);
        RowEntries { rng, law: &self.law }
    }
}

pub struct RowEntries<'a> {
    rng: ChaCha8Rng,
    law: &'a StableLaw,
}

impl Iterator for RowEntries<'_> {
    type Item = f64;

    #[inline]
    fn next(&mut self) -> Option<f64> {
        Some(self.law.sample(&mut self.rng))
    }
}

/// Entry r_{row,column} of the projection matrix for `seed`.
pub fn projection_entry(seed: SeedSpec, row: u64, column: usize, alpha: AlphaParam, kind: ProjectionKind) -> f64 {
    ProjectionMatrix::new(seed, alpha, kind).entry(row, column)
}
