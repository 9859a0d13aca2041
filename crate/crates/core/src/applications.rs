//! Method-of-moments estimation of a gamma shape parameter from an αth
//! moment: if X ~ Gamma(θ, 1) then E X^α = Γ(α+θ)/Γ(θ).

use crate::error::{Error, Result};
use crate::roots::Bracketing;
use crate::special::{lgamma_ratio, psi};

const THETA_MIN: f64 = 1e-8;
const THETA_MAX: f64 = 1e8;

fn ln_moment_map(theta: f64, alpha: f64) -> f64 {
    lgamma_ratio(theta, alpha)
}

/// θ̂ solving Γ(α+θ̂)/Γ(θ̂) = `moment_mean`; the map is increasing in θ.
pub fn gamma_shape_from_moment(moment_mean: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    if !(moment_mean > 0.0 && moment_mean.is_finite()) {
        return Err(Error::Domain(format!("moment must be positive, got {moment_mean}")));
    }
    let target = moment_mean.ln();
    let f = |ln_theta: f64| ln_moment_map(ln_theta.exp(), alpha) - target;
    let (mut lo, mut hi) = (THETA_MIN.ln(), THETA_MAX.ln());
    // Geometric expansion; the map tends to 0 as θ → 0 and to ∞ as θ → ∞.
    for _ in 0..8 {
        if f(lo) < 0.0 {
            break;
        }
        lo *= 2.0;
    }
    for _ in 0..8 {
        if f(hi) > 0.0 {
            break;
        }
        hi *= 2.0;
    }
    if !(f(lo) < 0.0 && f(hi) > 0.0) {
        return Err(Error::Domain(format!(
            "no shape parameter reproduces moment {moment_mean} at alpha = {alpha}"
        )));
    }
    let solver = Bracketing { x_tol: 1e-15, ..Bracketing::default() };
    Ok(solver.solve(f, lo, hi, None)?.x.exp())
}

/// Delta-method variance of θ̂ from D gamma samples:
/// `(1/D)(Γ(2α+θ)Γ(θ)/Γ²(α+θ) − 1)/(ψ(α+θ) − ψ(θ))²`.
pub fn gamma_shape_variance(theta: f64, alpha: f64, dimension: usize) -> Result<f64> {
    if !(theta > 0.0 && theta.is_finite() && alpha > 0.0 && alpha.is_finite()) || dimension == 0 {
        return Err(Error::Domain(format!(
            "theta, alpha and dimension must be positive (theta = {theta}, alpha = {alpha}, dimension = {dimension})"
        )));
    }
    let ratio = (lgamma_ratio(theta, 2.0 * alpha) - 2.0 * lgamma_ratio(theta, alpha)).exp_m1();
    let slope = psi(alpha + theta) - psi(theta);
    Ok(ratio / (slope * slope) / dimension as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::lgamma;

    #[test]
    fn closed_forms() {
        for m in [0.01, 0.7, 3.0, 250.0] {
            assert!((gamma_shape_from_moment(m, 1.0).unwrap() - m).abs() < 1e-10 * m);
            let expect = (-1.0 + (1.0 + 4.0 * m).sqrt()) / 2.0;
            assert!((gamma_shape_from_moment(m, 2.0).unwrap() - expect).abs() < 1e-10 * expect);
        }
    }

    #[test]
    fn round_trip() {
        for theta in [0.5, 1.0, 3.0, 10.0] {
            for alpha in [0.5, 0.9, 1.0, 1.5] {
                let m = (lgamma(alpha + theta) - lgamma(theta)).exp();
                let back = gamma_shape_from_moment(m, alpha).unwrap();
                assert!((back - theta).abs() < 1e-8 * theta, "theta={theta} alpha={alpha}: {back}");
            }
        }
    }

    #[test]
    fn variance_reference() {
        // Γ(4)Γ(2)/Γ(3)² − 1 = 1/2, ψ(3) − ψ(2) = 1/2.
        let v = gamma_shape_variance(2.0, 1.0, 1000).unwrap();
        assert!((v - 0.002).abs() < 1e-14);
        let half = gamma_shape_variance(2.0, 1.0, 2000).unwrap();
        assert!((half - v / 2.0).abs() < 1e-18);
    }

    #[test]
    fn variance_grows_with_alpha() {
        let vs: Vec<f64> = [0.5, 1.0, 1.5, 2.0]
            .iter()
            .map(|&a| gamma_shape_variance(2.0, a, 1000).unwrap())
            .collect();
        assert!(vs.windows(2).all(|w| w[0] < w[1]), "{vs:?}");
    }

    #[test]
    fn domain_errors() {
        assert!(gamma_shape_from_moment(0.0, 1.0).is_err());
        assert!(gamma_shape_from_moment(1.0, -1.0).is_err());
        assert!(gamma_shape_variance(2.0, 1.0, 0).is_err());
    }
}
