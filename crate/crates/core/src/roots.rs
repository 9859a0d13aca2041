//! Bracketing root finder: bisection safeguarding secant steps.
//!
//! Every equation solved in this crate mixes tangents, digamma terms and
//! power series, so the solver only ever evaluates the function; it never
//! needs a derivative.

use std::fmt;

/// Maximum number of function evaluations after the bracket is established.
pub const MAX_ITERATIONS: usize = 200;

/// Default bracket width at which iteration stops.
pub const BRACKET_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveError {
    pub message: String,
    pub lower: f64,
    pub upper: f64,
    pub f_lower: f64,
    pub f_upper: f64,
    pub iterations: usize,
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (bracket [{:e}, {:e}], f = [{:e}, {:e}], {} iterations)",
            self.message, self.lower, self.upper, self.f_lower, self.f_upper, self.iterations
        )
    }
}

impl std::error::Error for SolveError {}

impl SolveError {
    pub(crate) fn new(message: impl Into<String>, lower: f64, upper: f64, f_lower: f64, f_upper: f64) -> Self {
        Self {
            message: message.into(),
            lower,
            upper,
            f_lower,
            f_upper,
            iterations: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    /// |f(x)| at the returned point.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Bracketing {
    pub x_tol: f64,
    /// Stop as soon as |f| falls below this.
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for Bracketing {
    fn default() -> Self {
        Self {
            x_tol: BRACKET_TOLERANCE,
            f_tol: 0.0,
            max_iter: MAX_ITERATIONS,
        }
    }
}

impl Bracketing {
    /// Find a root of `f` in `[lower, upper]`, where `f(lower)` and `f(upper)`
    /// have opposite signs. An optional interior `guess` is evaluated first and
    /// used to shrink the bracket.
    pub fn solve<F>(&self, mut f: F, lower: f64, upper: f64, guess: Option<f64>) -> Result<Root, SolveError>
    where
        F: FnMut(f64) -> f64,
    {
        let (mut a, mut b) = (lower, upper);
        let (mut fa, mut fb) = (f(a), f(b));
        if fa.is_nan() || fb.is_nan() {
            return Err(SolveError::new("function is not finite at the bracket ends", a, b, fa, fb));
        }
        if fa == 0.0 {
            return Ok(Root { x: a, residual: 0.0, iterations: 0 });
        }
        if fb == 0.0 {
            return Ok(Root { x: b, residual: 0.0, iterations: 0 });
        }
        if fa.signum() == fb.signum() {
            return Err(SolveError::new("root is not bracketed", a, b, fa, fb));
        }

        let mut iterations = 0;
        if let Some(g) = guess.filter(|g| *g > a && *g < b) {
            let fg = f(g);
            iterations += 1;
            if fg == 0.0 {
                return Ok(Root { x: g, residual: 0.0, iterations });
            }
            if fg.is_finite() {
                if fg.signum() == fa.signum() {
                    a = g;
                    fa = fg;
                } else {
                    b = g;
                    fb = fg;
                }
            }
        }

        let mut secant_ok = true;
        while iterations < self.max_iter {
            let width = b - a;
            let scale = a.abs().max(b.abs()).max(1.0);
            if width <= self.x_tol * scale {
                break;
            }
            // Secant through the bracket ends, unless the previous secant step failed
            // to halve the bracket; then plain bisection.
            let mid = 0.5 * (a + b);
            let secant = if fa.is_finite() && fb.is_finite() { b - fb * (b - a) / (fb - fa) } else { mid };
            let margin = 1e-3 * width;
            let took_secant = secant_ok && secant.is_finite() && secant > a + margin && secant < b - margin;
            let x = if took_secant { secant } else { mid };
            let fx = f(x);
            iterations += 1;
            if fx.is_nan() {
                return Err(SolveError {
                    message: format!("function evaluated to NaN at {x:e}"),
                    lower: a,
                    upper: b,
                    f_lower: fa,
                    f_upper: fb,
                    iterations,
                });
            }
            if fx == 0.0 || fx.abs() <= self.f_tol {
                return Ok(Root { x, residual: fx.abs(), iterations });
            }
            if fx.signum() == fa.signum() {
                a = x;
                fa = fx;
            } else {
                b = x;
                fb = fx;
            }
            secant_ok = !took_secant || (b - a) <= 0.5 * width;
        }

        let (x, fx) = if fa.abs() <= fb.abs() { (a, fa) } else { (b, fb) };
        let scale = a.abs().max(b.abs()).max(1.0);
        if b - a > self.x_tol * scale * 1e3 {
            return Err(SolveError {
                message: "iteration cap reached before the bracket converged".into(),
                lower: a,
                upper: b,
                f_lower: fa,
                f_upper: fb,
                iterations,
            });
        }
        Ok(Root { x, residual: fx.abs(), iterations })
    }
}

/// Root of `f` in `[lower, upper]` with default settings.
pub fn find_root<F>(f: F, lower: f64, upper: f64) -> Result<Root, SolveError>
where
    F: FnMut(f64) -> f64,
{
    Bracketing::default().solve(f, lower, upper, None)
}
