//! Oracles and Monte-Carlo helpers shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use ccount_core::stable::StableLaw;
use ccount_core::{AlphaParam, ProjectionKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma;

pub fn alpha(a: f64) -> AlphaParam {
    AlphaParam::new(a).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// E|Z|^λ for Z ~ S(α, β, 1), −1 < λ < α, from the general-β closed form
/// `cos(λ/α·atan(β tan(απ/2))) (1 + β² tan²(απ/2))^{λ/2α} (2/π) sin(πλ/2) Γ(1−λ/α) Γ(λ)`.
/// Evaluated with statrs, independent of the crate's special functions.
pub fn stable_abs_moment(alpha: f64, beta: f64, lambda: f64) -> f64 {
    let t = (alpha * PI / 2.0).tan();
    let skew = (lambda / alpha * (beta * t).atan()).cos() * (1.0 + beta * beta * t * t).powf(lambda / (2.0 * alpha));
    skew * 2.0 / PI * (PI * lambda / 2.0).sin() * gamma(1.0 - lambda / alpha) * gamma(lambda)
}

#[derive(Debug, Clone, Copy)]
pub struct MeanStat {
    pub mean: f64,
    pub stderr: f64,
    pub variance: f64,
    pub n: usize,
}

impl MeanStat {
    /// |mean − target| in units of the standard error.
    pub fn z(&self, target: f64) -> f64 {
        (self.mean - target).abs() / self.stderr
    }
}

pub fn mean_stat(values: &[f64]) -> MeanStat {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    MeanStat {
        mean,
        stderr: (variance / n as f64).sqrt(),
        variance,
        n,
    }
}

pub fn draws(alpha: AlphaParam, kind: ProjectionKind, n: usize, seed: u64) -> Vec<f64> {
    let law = StableLaw::new(alpha, kind);
    let mut r = rng(seed);
    (0..n).map(|_| law.sample(&mut r)).collect()
}

/// k accumulators distributed exactly as a sketch of a signal with moment
/// `f_alpha`: by stability each equals F^{1/α} Z with Z ~ S(α, β, 1).
pub struct SyntheticSketches {
    law: StableLaw,
    scale: f64,
    rng: ChaCha8Rng,
}

impl SyntheticSketches {
    pub fn new(alpha: AlphaParam, kind: ProjectionKind, f_alpha: f64, seed: u64) -> Self {
        Self {
            law: StableLaw::new(alpha, kind),
            scale: f_alpha.powf(1.0 / alpha.value()),
            rng: rng(seed),
        }
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        for x in out.iter_mut() {
            *x = self.scale * self.law.sample(&mut self.rng);
        }
    }
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_statistic(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Critical KS distance at significance `level` for sample sizes n, m.
pub fn ks_critical(level: f64, n: usize, m: usize) -> f64 {
    let c = (-(level / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}
