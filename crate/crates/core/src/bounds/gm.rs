//! Tail constants of the geometric mean estimator `gm_b`.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2};

use super::{check_epsilon, Side, TailBoundReport, TailEstimator};
use crate::alpha::AlphaParam;
use crate::error::{Error, Result};
use crate::estimators::variance_factor_gm;
use crate::roots::{Bracketing, SolveError};
use crate::special::{lgamma, psi, EULER_GAMMA};

const EDGE: f64 = 1e-9;
/// Largest C_L tried when α < 1 (the root grows like exp(−log(1−ε)/Δ)).
const MAX_LEFT_OPTIMUM: f64 = 1e300;

/// Logarithm of the Markov moment bound for the right tail as a function of
/// the moment order t ∈ (0, k):
/// `tγ_e(α−1) − t log(1+ε) + k log(cos(κπt/2k) (2/π) Γ(αt/k) Γ(1−t/k) sin(παt/2k))`.
/// Convex in t; its minimizer is `C_R·k`.
pub fn gm_objective(alpha: AlphaParam, epsilon: f64, k: usize, t: f64) -> f64 {
    let (a, kappa) = (alpha.value(), alpha.kappa());
    let kf = k as f64;
    let c = t / kf;
    t * EULER_GAMMA * (a - 1.0) - t * epsilon.ln_1p()
        + kf * ((FRAC_PI_2 * kappa * c).cos().ln()
            + FRAC_2_PI.ln()
            + lgamma(a * c)
            + lgamma(1.0 - c)
            + (FRAC_PI_2 * a * c).sin().ln())
}

fn right_equation(a: f64, kappa: f64, ln1p_eps: f64, c: f64) -> f64 {
    -EULER_GAMMA * (a - 1.0) + ln1p_eps + FRAC_PI_2 * kappa * (FRAC_PI_2 * kappa * c).tan()
        - FRAC_PI_2 * a / (FRAC_PI_2 * a * c).tan()
        - a * psi(a * c)
        + psi(1.0 - c)
}

fn right_rate(a: f64, kappa: f64, ln1p_eps: f64, c: f64) -> f64 {
    c * ln1p_eps
        - c * EULER_GAMMA * (a - 1.0)
        - ((FRAC_PI_2 * kappa * c).cos().ln()
            + FRAC_2_PI.ln()
            + lgamma(a * c)
            + lgamma(1.0 - c)
            + (FRAC_PI_2 * a * c).sin().ln())
}

/// G_{R,gm}: right-tail constant of `gm_b`, with C_R ∈ (0, 1) the unique root
/// of the optimality equation.
pub fn solve_gm_right(alpha: AlphaParam, epsilon: f64) -> Result<TailBoundReport> {
    check_epsilon(epsilon, Side::Right)?;
    let (a, kappa) = (alpha.value(), alpha.kappa());
    let l = epsilon.ln_1p();
    let h = |c: f64| right_equation(a, kappa, l, c);
    // Minimizer of the asymptotic (k → ∞) bound; only a starting point.
    let guess = (l / variance_factor_gm(alpha)).clamp(EDGE, 1.0 - EDGE);
    let root = Bracketing::default().solve(h, EDGE, 1.0 - EDGE, Some(guess))?;
    let rate = right_rate(a, kappa, l, root.x);
    report(alpha, epsilon, Side::Right, root.x, rate, h(root.x).abs())
}

fn left_equation(alpha: AlphaParam, ln1m_eps: f64, c: f64) -> f64 {
    let (a, kappa) = (alpha.value(), alpha.kappa());
    let base = ln1m_eps - EULER_GAMMA * (a - 1.0) - a * psi(a * c) + psi(c);
    if alpha.below_one() {
        // κ = α: the two tangent terms cancel identically.
        base
    } else {
        base - FRAC_PI_2 * kappa * (FRAC_PI_2 * kappa * c).tan() + FRAC_PI_2 * a * (FRAC_PI_2 * a * c).tan()
    }
}

fn left_rate(alpha: AlphaParam, ln1m_eps: f64, c: f64) -> f64 {
    let (a, kappa) = (alpha.value(), alpha.kappa());
    let base = -c * ln1m_eps + c * EULER_GAMMA * (a - 1.0) + a.ln() - lgamma(c) + lgamma(a * c);
    if alpha.below_one() {
        base
    } else {
        base - (FRAC_PI_2 * kappa * c).cos().ln() + (FRAC_PI_2 * a * c).cos().ln()
    }
}

/// G_{L,gm}: left-tail constant of `gm_b`, 0 < ε < 1.
///
/// For α > 1 the optimum lies in (0, 1/α). For α < 1 it is unbounded above
/// and can be astronomically large near α = 1, so the search runs over
/// log C_L with a geometrically growing bracket.
pub fn solve_gm_left(alpha: AlphaParam, epsilon: f64) -> Result<TailBoundReport> {
    check_epsilon(epsilon, Side::Left)?;
    let l = (-epsilon).ln_1p();
    let h = |c: f64| left_equation(alpha, l, c);
    let (c, residual) = if alpha.below_one() {
        let hy = |y: f64| h(y.exp());
        let lo = EDGE.ln();
        let mut hi = 0.0_f64;
        while hy(hi) < 0.0 {
            hi += 4f64.ln();
            if hi > MAX_LEFT_OPTIMUM.ln() {
                return Err(Error::Solver(SolveError::new(
                    "left optimum exceeds the search range",
                    EDGE,
                    hi.exp(),
                    hy(lo),
                    hy(hi),
                )));
            }
        }
        let root = Bracketing::default().solve(hy, lo, hi, None)?;
        let c = root.x.exp();
        (c, h(c).abs())
    } else {
        let upper = 1.0 / alpha.value() - EDGE;
        let root = Bracketing::default().solve(h, EDGE, upper, None)?;
        (root.x, h(root.x).abs())
    };
    report(alpha, epsilon, Side::Left, c, left_rate(alpha, l, c), residual)
}

fn report(alpha: AlphaParam, epsilon: f64, side: Side, optimum: f64, rate: f64, residual: f64) -> Result<TailBoundReport> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::Solver(SolveError::new(
            format!("non-positive exponent rate {rate} at optimum {optimum}"),
            optimum,
            optimum,
            rate,
            rate,
        )));
    }
    Ok(TailBoundReport {
        alpha,
        epsilon,
        side,
        estimator: TailEstimator::GmB,
        optimum,
        g: epsilon * epsilon / rate,
        exponent_rate: rate,
        residual,
    })
}

/// Small-Δ closed forms for G_{R,gm} and G_{L,gm}, with Δ = |α − 1| given
/// explicitly so that the Δ = 0 limit is available.
pub fn gm_rate_approx_delta(delta: f64, above_one: bool, epsilon: f64, side: Side) -> Result<f64> {
    check_epsilon(epsilon, side)?;
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Domain(format!("delta must lie in [0, 1), got {delta}")));
    }
    let eps2 = epsilon * epsilon;
    let denom = match side {
        Side::Right => {
            let l = epsilon.ln_1p();
            l - 2.0 * (delta * l).sqrt()
        }
        Side::Left if above_one || delta == 0.0 => {
            let l = -(-epsilon).ln_1p();
            l - 2.0 * (2.0 * delta * l).sqrt()
        }
        Side::Left => {
            let l = -(-epsilon).ln_1p();
            delta * (l / delta - 1.0 - EULER_GAMMA).exp()
        }
    };
    if denom > 0.0 && denom.is_finite() {
        Ok(eps2 / denom)
    } else {
        Err(Error::Domain(format!(
            "small-delta approximation out of regime (delta = {delta}, epsilon = {epsilon}, {side} side)"
        )))
    }
}

/// Small-Δ approximation of the geometric-mean tail constant; diagnostic only.
pub fn gm_rate_approx(alpha: AlphaParam, epsilon: f64, side: Side) -> Result<f64> {
    gm_rate_approx_delta(alpha.delta(), !alpha.below_one(), epsilon, side)
}
