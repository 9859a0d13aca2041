//! Real special functions: log-gamma, gamma and digamma on the positive axis.
//!
//! Both `ln_gamma` and `digamma` shift their argument upward with the
//! recurrences Γ(x+1) = xΓ(x) and ψ(x+1) = ψ(x) + 1/x until it reaches the
//! region where the Stirling / asymptotic series converge to double precision.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant γ_e.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Returns γ_e.
pub const fn euler_gamma() -> f64 {
    EULER_GAMMA
}

const SERIES_THRESHOLD: f64 = 10.0;

/// ln(2π)/2
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

// B_{2n} / (2n (2n-1)), n = 1..7
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

// B_{2n} / (2n), n = 1..7
const DIGAMMA_ASYMP: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} requires a positive finite argument, got {x}")))
    }
}

/// log Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive("ln_gamma", x)?;
    Ok(lgamma(x))
}

/// Γ(x) for x > 0; overflows to +∞ above x ≈ 171.6.
pub fn gamma(x: f64) -> Result<f64> {
    check_positive("gamma", x)?;
    Ok(lgamma(x).exp())
}

/// ψ(x) = Γ′(x)/Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive("digamma", x)?;
    Ok(psi(x))
}

/// log(Γ(x+a)/Γ(x)) for x > 0, x + a > 0, accurate when both arguments are
/// large (where subtracting two `ln_gamma` values would cancel).
pub fn ln_gamma_ratio(x: f64, a: f64) -> Result<f64> {
    check_positive("ln_gamma_ratio", x)?;
    check_positive("ln_gamma_ratio", x + a)?;
    Ok(lgamma_ratio(x, a))
}

fn stirling_tail(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in STIRLING.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

pub(crate) fn lgamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x >= SERIES_THRESHOLD {
        return (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + stirling_tail(x);
    }
    let mut prod = 1.0;
    let mut z = x;
    while z < SERIES_THRESHOLD {
        prod *= z;
        z += 1.0;
    }
    lgamma(z) - prod.ln()
}

pub(crate) fn lgamma_ratio(x: f64, a: f64) -> f64 {
    let y = x + a;
    if x >= SERIES_THRESHOLD && y >= SERIES_THRESHOLD {
        // (y-½)ln y − (x-½)ln x − a, rearranged to avoid cancellation.
        (x - 0.5) * (a / x).ln_1p() + a * y.ln() - a + (stirling_tail(y) - stirling_tail(x))
    } else {
        lgamma(y) - lgamma(x)
    }
}

pub(crate) fn psi(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut shift = 0.0;
    let mut z = x;
    while z < SERIES_THRESHOLD {
        shift -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut series = 0.0;
    for c in DIGAMMA_ASYMP.iter().rev() {
        series = series * inv2 + c;
    }
    shift + z.ln() - 0.5 / z - series * inv2
}

/// Γ(z)Γ(1−z) = π / sin(πz); exposed for tests of the reflection identity.
pub fn reflection_product(z: f64) -> f64 {
    PI / (PI * z).sin()
}
