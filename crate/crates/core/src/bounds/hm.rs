//! Tail constants of the harmonic mean estimator (α < 1).
//!
//! Each summand of the harmonic mean, scaled to unit expectation, has the
//! Mittag-Leffler moment generating function
//! `M(s) = Σ_m Γ(1+α)^m s^m / Γ(1+mα) = E_α(Γ(1+α) s)`.

use std::f64::consts::PI;

use super::{check_epsilon, Side, TailBoundReport, TailEstimator};
use crate::alpha::AlphaParam;
use crate::error::{Error, Result};
use crate::roots::{Bracketing, SolveError};
use crate::special::lgamma;
use crate::sum::Neumaier;

const MAX_TERMS: usize = 100_000;
/// Beyond this ratio of largest term to alternating sum, the series has
/// lost too many digits and the integral representation is used.
const CANCELLATION_LIMIT: f64 = 1e6;
/// Above this value of z^{1/α} the algebraic part of E_α(z) is below e^{−60}
/// relative to the exponential part, so only the latter is kept.
const ASYMPTOTIC_EXPONENT: f64 = 60.0;

/// `ln M(s)` together with the logarithmic derivative `M'(s)/M(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgfValue {
    pub ln_value: f64,
    pub log_derivative: f64,
}

/// Moment generating function of the normalized harmonic-mean summand.
pub fn hm_mgf(alpha: AlphaParam, s: f64) -> Result<MgfValue> {
    if !alpha.below_one() {
        return Err(Error::Unsupported(format!("harmonic mean needs alpha < 1, got {alpha}")));
    }
    if !s.is_finite() {
        return Err(Error::Domain(format!("argument must be finite, got {s}")));
    }
    let a = alpha.value();
    let c = lgamma(1.0 + a).exp();
    if s == 0.0 {
        return Ok(MgfValue { ln_value: 0.0, log_derivative: 1.0 });
    }
    if s > 0.0 {
        positive_series(a, c * s).map(|(ln_e, ratio)| MgfValue {
            ln_value: ln_e,
            log_derivative: c * ratio,
        })
    } else {
        let x = -c * s;
        let (e, de) = match alternating_series(a, x) {
            Some(v) => v,
            None => integral(a, x),
        };
        if !(e > 0.0) {
            return Err(Error::Solver(SolveError::new(
                "Mittag-Leffler value underflowed",
                s,
                s,
                e,
                de,
            )));
        }
        Ok(MgfValue {
            ln_value: e.ln(),
            log_derivative: c * de / e,
        })
    }
}

/// (ln E_α(z), E_α'(z)/E_α(z)) for z > 0, summed in log space.
fn positive_series(a: f64, z: f64) -> Result<(f64, f64)> {
    let lz = z.ln();
    let w = (lz / a).exp();
    if w > ASYMPTOTIC_EXPONENT {
        // E_α(z) = exp(z^{1/α})/α − Σ_j z^{−j}/Γ(1−jα).
        return Ok((w - a.ln(), w / (a * z)));
    }
    let mut ln_sum = 0.0_f64; // m = 0 term
    let mut weighted = 0.0_f64; // Σ m T_m / Σ T_m
    let mut m = 1usize;
    loop {
        let mf = m as f64;
        let ln_t = mf * lz - lgamma(1.0 + mf * a);
        let hi = ln_sum.max(ln_t);
        let s_old = (ln_sum - hi).exp();
        let s_new = (ln_t - hi).exp();
        let total = s_old + s_new;
        weighted = (weighted * s_old + mf * s_new) / total;
        ln_sum = hi + total.ln();
        // Terms are log-concave in m, so once past the peak and negligible, stop.
        if ln_t < ln_sum - 40.0 && mf * a > z.powf(1.0 / a) {
            break;
        }
        m += 1;
        if m > MAX_TERMS {
            return Err(Error::Solver(SolveError::new(
                "Mittag-Leffler series did not converge",
                z,
                z,
                ln_sum,
                ln_t,
            )));
        }
    }
    Ok((ln_sum, weighted / z))
}

/// (E_α(−x), E_α'(−x)) by direct summation with compensation, or `None`
/// if cancellation is too severe.
fn alternating_series(a: f64, x: f64) -> Option<(f64, f64)> {
    let lx = x.ln();
    let mut sum = Neumaier::default();
    let mut dsum = Neumaier::default();
    sum.add(1.0);
    let mut biggest = 1.0_f64;
    for m in 1..MAX_TERMS {
        let mf = m as f64;
        let ln_t = mf * lx - lgamma(1.0 + mf * a);
        let mag = ln_t.exp();
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        sum.add(sign * mag);
        // d/dz z^m = m z^{m-1}; at z = −x the sign flips relative to the term.
        dsum.add(-sign * mf * mag / x);
        biggest = biggest.max(mag * mf.max(1.0));
        if !biggest.is_finite() {
            return None;
        }
        if ln_t < -40.0 && mf * a > x.powf(1.0 / a) {
            let (e, de) = (sum.value(), dsum.value());
            if e > 0.0 && biggest / e.abs().min(de.abs()) < CANCELLATION_LIMIT {
                return Some((e, de));
            }
            return None;
        }
    }
    None
}

/// E_α(−x) = ∫ exp(−u r) K(r) dr with u = x^{1/α} and the completely
/// monotone spectral density `K(r) = sin(απ) r^{α−1} / (π (r^{2α} + 2 r^α cos απ + 1))`,
/// integrated over y = ln r.
fn integral(a: f64, x: f64) -> (f64, f64) {
    let u = x.powf(1.0 / a);
    let (sin_ap, cos_ap) = (a * PI).sin_cos();
    let density = |y: f64| {
        let ra = (a * y).exp();
        sin_ap / PI * ra / (ra * ra + 2.0 * ra * cos_ap + 1.0)
    };
    let value = |y: f64| density(y) * (-u * y.exp()).exp();
    let moment = |y: f64| y.exp() * density(y) * (-u * y.exp()).exp();
    let lo = -40.0 / a;
    let hi = (800.0 / u).ln().max(1.0);
    let e = integrate(&value, lo, hi);
    let d = integrate(&moment, lo, hi);
    // dE/dz at z = −x is +(u/(αx)) ∫ r K e^{−ur}.
    (e, u / (a * x) * d)
}

fn integrate(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    // The density peaks near y = 0 (r = 1), sharply so for α near 1.
    let pieces: &[(f64, f64)] = if lo < 0.0 && hi > 0.0 { &[(lo, 0.0), (0.0, hi)] } else { &[(lo, hi)] };
    let mut total = Neumaier::default();
    for &(p, q) in pieces {
        const PANELS: usize = 64;
        let h = (q - p) / PANELS as f64;
        for i in 0..PANELS {
            let (x0, x1) = (p + i as f64 * h, p + (i + 1) as f64 * h);
            let (f0, f1, fm) = (f(x0), f(x1), f(0.5 * (x0 + x1)));
            let whole = simpson(x0, x1, f0, fm, f1);
            total.add(adaptive(f, x0, x1, f0, fm, f1, whole, 1e-15, 40));
        }
    }
    total.value()
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Grow `hi` geometrically until `f(hi)` changes sign relative to `f(lo)`.
fn expand<F: FnMut(f64) -> f64>(mut f: F, lo: f64, mut hi: f64) -> Result<f64> {
    let f_lo = f(lo);
    for _ in 0..300 {
        let f_hi = f(hi);
        if f_hi.is_nan() {
            break;
        }
        if f_hi.signum() != f_lo.signum() {
            return Ok(hi);
        }
        hi *= 4.0;
    }
    Err(Error::Solver(SolveError::new("could not bracket the optimum", lo, hi, f_lo, f(hi))))
}

/// G_{R,hm}: right-tail constant of the harmonic mean, with t1* solving
/// `M'(−t)/M(−t) = 1/(1+ε)`.
pub fn solve_hm_right(alpha: AlphaParam, epsilon: f64) -> Result<TailBoundReport> {
    check_epsilon(epsilon, Side::Right)?;
    hm_mgf(alpha, 0.0)?;
    let target = 1.0 / (1.0 + epsilon);
    let h = |t: f64| hm_mgf(alpha, -t).map_or(f64::NAN, |m| m.log_derivative - target);
    let lo = 1e-9;
    let hi = expand(h, lo, 1.0)?;
    let root = Bracketing::default().solve(h, lo, hi, None)?;
    let m = hm_mgf(alpha, -root.x)?;
    let rate = -m.ln_value - root.x * target;
    report(alpha, epsilon, Side::Right, root.x, rate, (m.log_derivative - target).abs())
}

/// G_{L,hm}: left-tail constant of the harmonic mean, with t2* solving
/// `M'(t)/M(t) = 1/(1−ε)`.
pub fn solve_hm_left(alpha: AlphaParam, epsilon: f64) -> Result<TailBoundReport> {
    check_epsilon(epsilon, Side::Left)?;
    hm_mgf(alpha, 0.0)?;
    let target = 1.0 / (1.0 - epsilon);
    let h = |t: f64| hm_mgf(alpha, t).map_or(f64::NAN, |m| m.log_derivative - target);
    let lo = 1e-9;
    let hi = expand(h, lo, 1.0)?;
    let root = Bracketing::default().solve(h, lo, hi, None)?;
    let m = hm_mgf(alpha, root.x)?;
    let rate = root.x * target - m.ln_value;
    report(alpha, epsilon, Side::Left, root.x, rate, (m.log_derivative - target).abs())
}

fn report(alpha: AlphaParam, epsilon: f64, side: Side, optimum: f64, rate: f64, residual: f64) -> Result<TailBoundReport> {
    if !(rate > 0.0 && rate.is_finite()) {
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
        estimator: TailEstimator::Hm,
        optimum,
        g: epsilon * epsilon / rate,
        exponent_rate: rate,
        residual,
    })
}
