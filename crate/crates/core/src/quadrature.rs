//! Double-exponential quadrature.
//!
//! `tanh_sinh` integrates over a finite interval and tolerates integrable
//! endpoint singularities; `exp_sinh` integrates over `[a, inf)` and copes
//! with algebraically decaying integrands. Both halve the step size level by
//! level until two successive estimates agree to the absolute tolerance.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const MIN_LEVEL: u32 = 3;
const MAX_LEVEL: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Difference between the last two refinement levels.
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Repeatedly halves the step of a trapezoid rule in the variable `t`.
///
/// `term(t)` returns the transformed integrand `f(x(t)) x'(t)`.
fn refine(term: impl Fn(f64) -> f64, t_lo: f64, t_hi: f64, tol: f64) -> Result<Quadrature> {
    let mut h = 1.0;
    let mut evaluations = 0usize;
    let mut sum = 0.0;
    let k_lo = (t_lo / h).ceil() as i64;
    let k_hi = (t_hi / h).floor() as i64;
    for k in k_lo..=k_hi {
        sum += term(k as f64 * h);
        evaluations += 1;
    }
    let mut estimate = sum * h;
    let mut diff = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        // Only the odd multiples of the new step are new nodes.
        let k_lo = (t_lo / h).ceil() as i64;
        let k_hi = (t_hi / h).floor() as i64;
        let mut k = if k_lo % 2 == 0 { k_lo + 1 } else { k_lo };
        while k <= k_hi {
            sum += term(k as f64 * h);
            evaluations += 1;
            k += 2;
        }
        let next = sum * h;
        diff = (next - estimate).abs();
        estimate = next;
        if !estimate.is_finite() {
            break;
        }
        if level >= MIN_LEVEL && diff <= tol {
            return Ok(Quadrature {
                value: estimate,
                error_estimate: diff,
                evaluations,
            });
        }
    }
    Err(Error::QuadratureNonConvergence {
        estimate,
        error: diff,
    })
}

/// `int_a^b f(x) dx` for finite `a < b`.
///
/// The integrand is never evaluated at the endpoints themselves.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    assert!(a.is_finite() && b.is_finite() && a < b, "finite interval required");
    let half = 0.5 * (b - a);
    let term = |t: f64| {
        let s = FRAC_PI_2 * t.sinh();
        // Distance to the nearer endpoint, computed without cancellation.
        let gap = 2.0 * half / (1.0 + (2.0 * s.abs()).exp());
        let x = if t < 0.0 { a + gap } else { b - gap };
        if x <= a || x >= b {
            return 0.0;
        }
        let cosh_s = s.cosh();
        let w = half * FRAC_PI_2 * t.cosh() / (cosh_s * cosh_s);
        if w == 0.0 {
            0.0
        } else {
            w * f(x)
        }
    };
    refine(term, -4.0, 4.0, tol)
}

/// `int_a^inf f(x) dx`.
pub fn exp_sinh(f: impl Fn(f64) -> f64, a: f64, tol: f64) -> Result<Quadrature> {
    assert!(a.is_finite(), "finite lower limit required");
    let term = |t: f64| {
        let e = (FRAC_PI_2 * t.sinh()).exp();
        let x = a + e;
        if x <= a || !x.is_finite() {
            return 0.0;
        }
        let w = FRAC_PI_2 * t.cosh() * e;
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            w * v
        }
    };
    refine(term, -4.5, 6.0, tol)
}

/// `int_{-inf}^inf f(x) dx`, split at zero.
pub fn real_line(f: impl Fn(f64) -> f64, tol: f64) -> Result<Quadrature> {
    let right = exp_sinh(&f, 0.0, 0.5 * tol)?;
    let left = exp_sinh(|x| f(-x), 0.0, 0.5 * tol)?;
    Ok(Quadrature {
        value: right.value + left.value,
        error_estimate: right.error_estimate + left.error_estimate,
        evaluations: right.evaluations + left.evaluations,
    })
}
