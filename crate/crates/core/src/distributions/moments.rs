//! Closed-form moments of `u(X)` for the model/transform pairs that have them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// `E[u(X)]`, `Var(u(X))` and the u-mean `u^{-1}(E[u(X)])`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UMoments {
    pub mean: f64,
    pub variance: f64,
    pub predictor: f64,
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}

/// Shifted Pareto(`alpha`) under `u_b(x) = (1+x)^(-b)`.
///
/// Valid for every `b > 0`; the reference analysis only considers `b >= 1`.
pub fn pareto_u_moment(alpha: f64, b: f64) -> Result<UMoments> {
    let alpha = positive("alpha", alpha)?;
    let b = positive("b", b)?;
    Ok(UMoments {
        mean: alpha / (b + alpha),
        variance: alpha * b * b / ((2.0 * b + alpha) * (b + alpha) * (b + alpha)),
        predictor: ((b / alpha).ln_1p() / b).exp_m1(),
    })
}

/// First passage time to `level` under `u(t) = exp(-b / (2t))`.
pub fn crossing_expinv_moment(level: f64, b: f64) -> Result<UMoments> {
    let l = positive("L", level)?;
    let b = positive("b", b)?;
    let l2 = l * l;
    Ok(UMoments {
        mean: l / (b + l2).sqrt(),
        variance: l / (2.0 * b + l2).sqrt() - l2 / (b + l2),
        predictor: b / (b / l2).ln_1p(),
    })
}

/// First passage time to `level` under `u(t) = exp(-c t)`.
pub fn crossing_exprate_moment(level: f64, c: f64) -> Result<UMoments> {
    let l = positive("L", level)?;
    let c = positive("c", c)?;
    Ok(UMoments {
        mean: (-(2.0 * c).sqrt() * l).exp(),
        variance: (-2.0 * c.sqrt() * l).exp() - (-2.0 * (2.0 * c).sqrt() * l).exp(),
        predictor: (2.0 / c).sqrt() * l,
    })
}

/// Positive stable law with Laplace transform `exp(-b^alpha)` under `u_b(x) = exp(-b x)`.
pub fn stable_u_moment(alpha: f64, b: f64) -> Result<UMoments> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "stability index must lie in (0, 1)",
        });
    }
    let b = positive("b", b)?;
    let ba = b.powf(alpha);
    Ok(UMoments {
        mean: (-ba).exp(),
        variance: (-(2.0 * b).powf(alpha)).exp() - (-2.0 * ba).exp(),
        predictor: b.powf(alpha - 1.0),
    })
}

/// `E[(1 + X^2/nu)^(-b)]` for the half Student-t, as a quotient of gamma functions.
fn half_t_kernel_mean(nu: f64, b: f64) -> f64 {
    (ln_gamma(b + 0.5 * nu) + ln_gamma(0.5 * (nu + 1.0))
        - ln_gamma(b + 0.5 * (nu + 1.0))
        - ln_gamma(0.5 * nu))
    .exp()
}

/// Half Student-t(`nu`) under `u_b(x) = (1 + x^2/nu)^(-b)`.
pub fn half_t_u_moment(nu: f64, b: f64) -> Result<UMoments> {
    let nu = positive("nu", nu)?;
    let b = positive("b", b)?;
    let mean = half_t_kernel_mean(nu, b);
    let second = half_t_kernel_mean(nu, 2.0 * b);
    Ok(UMoments {
        mean,
        variance: (second - mean * mean).max(0.0),
        predictor: (nu * (-mean.ln() / b).exp_m1()).sqrt(),
    })
}

/// `X = s^(-1/2)`, `s ~ U(0,1)`, under `u(x) = 1/x`: the harmonic mean is 3/2.
pub fn power_law_reciprocal_moment() -> UMoments {
    UMoments {
        mean: 2.0 / 3.0,
        variance: 0.5 - 4.0 / 9.0,
        predictor: 1.5,
    }
}
