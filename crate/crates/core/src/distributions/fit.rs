//! Maximum-likelihood fits for the shifted Pareto and Student-t laws.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize::nelder_mead;
use crate::sample::SampleVector;
use crate::special::ln_gamma;

/// Upper cap on the fitted degrees of freedom.
pub const NU_CAP: f64 = 200.0;
const NU_FLOOR: f64 = 0.05;

/// `n / sum ln(1 + x_i)`, the closed-form maximizer of the shifted Pareto
/// log-likelihood.
pub fn pareto_mle(x: &SampleVector) -> Result<f64> {
    if let Some(index) = x.iter().position(|&v| v < 0.0) {
        return Err(Error::ObservationOutsideDomain {
            index,
            value: x[index],
            domain: "[0, inf)".into(),
        });
    }
    let s: f64 = x.iter().map(|v| v.ln_1p()).sum();
    if s <= 0.0 {
        return Err(Error::DegenerateData("all observations are zero"));
    }
    Ok(x.len() as f64 / s)
}

pub fn pareto_log_likelihood(alpha: f64, x: &[f64]) -> f64 {
    let s: f64 = x.iter().map(|v| v.ln_1p()).sum();
    x.len() as f64 * alpha.ln() - (alpha + 1.0) * s
}

/// Log-likelihood of the location-scale Student-t law.
pub fn student_t_log_likelihood(nu: f64, location: f64, scale: f64, y: &[f64]) -> f64 {
    if !(nu > 0.0 && scale > 0.0) {
        return f64::NEG_INFINITY;
    }
    let n = y.len() as f64;
    let log_c = ln_gamma(0.5 * (nu + 1.0))
        - ln_gamma(0.5 * nu)
        - 0.5 * (nu * std::f64::consts::PI).ln()
        - scale.ln();
    let tail: f64 = y
        .iter()
        .map(|&v| {
            let z = (v - location) / scale;
            (z * z / nu).ln_1p()
        })
        .sum();
    n * log_c - 0.5 * (nu + 1.0) * tail
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudentTFit {
    pub nu: f64,
    pub location: f64,
    pub scale: f64,
    pub log_likelihood: f64,
    pub initial_log_likelihood: f64,
    pub iterations: usize,
    /// Set when the fitted degrees of freedom sit on [`NU_CAP`]; the
    /// likelihood is nearly flat in `1/nu` for normal-like data.
    pub nu_at_cap: bool,
    /// Asymptotic standard errors of `(nu, location, scale)` from the observed
    /// information. `None` when the information matrix is not invertible or
    /// the fit sits on the cap.
    pub standard_errors: Option<[f64; 3]>,
}

fn decode(theta: &[f64]) -> (f64, f64, f64) {
    let nu = theta[0].exp().clamp(NU_FLOOR, NU_CAP);
    (nu, theta[1], theta[2].exp())
}

fn moment_start(y: &[f64]) -> (f64, f64, f64) {
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let m2 = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m4 = y.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    let excess = m4 / (m2 * m2) - 3.0;
    // Excess kurtosis of a t law is 6 / (nu - 4).
    let nu = if excess > 0.0 {
        (4.0 + 6.0 / excess).clamp(2.5, NU_CAP)
    } else {
        NU_CAP
    };
    let scale = (m2 * (nu - 2.0) / nu).sqrt();
    (nu, mean, scale)
}

fn observed_information_se(nu: f64, location: f64, scale: f64, y: &[f64]) -> Option<[f64; 3]> {
    let p = [nu, location, scale];
    let h = [1e-3 * nu, 1e-4 * scale, 1e-4 * scale];
    let nll = |q: [f64; 3]| -student_t_log_likelihood(q[0], q[1], q[2], y);
    let mut hess = Matrix3::zeros();
    for i in 0..3 {
        for j in i..3 {
            let shifted = |di: f64, dj: f64| {
                let mut q = p;
                q[i] += di * h[i];
                q[j] += dj * h[j];
                nll(q)
            };
            let v = (shifted(1.0, 1.0) - shifted(1.0, -1.0) - shifted(-1.0, 1.0)
                + shifted(-1.0, -1.0))
                / (4.0 * h[i] * h[j]);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    let cov = hess.try_inverse()?;
    let se = [cov[(0, 0)], cov[(1, 1)], cov[(2, 2)]];
    se.iter()
        .all(|v| v.is_finite() && *v > 0.0)
        .then(|| se.map(f64::sqrt))
}

/// Location-scale Student-t fit by Nelder–Mead on `(ln nu, location, ln scale)`,
/// started from method-of-moments values.
pub fn student_t_mle(y: &SampleVector) -> Result<StudentTFit> {
    if y.len() < 10 {
        return Err(Error::InsufficientSample {
            needed: 10,
            got: y.len(),
        });
    }
    let (nu0, loc0, scale0) = moment_start(y);
    if scale0.is_nan() || scale0 <= 0.0 {
        return Err(Error::DegenerateData("sample has zero spread"));
    }
    let objective = |theta: &[f64]| {
        let (nu, loc, scale) = decode(theta);
        -student_t_log_likelihood(nu, loc, scale, y)
    };
    let start = [nu0.ln(), loc0, scale0.ln()];
    let initial_log_likelihood = -objective(&start);
    let steps = [0.5, 0.5 * scale0, 0.3];

    const MAX_ITER: usize = 20_000;
    let first = nelder_mead(objective, &start, &steps, 1e-13, MAX_ITER);
    // One restart from the best vertex to escape a collapsed simplex.
    let second = nelder_mead(objective, &first.x, &steps, 1e-13, MAX_ITER);
    let iterations = first.iterations + second.iterations;
    if !second.converged {
        return Err(Error::NoConvergence {
            method: "Nelder-Mead",
            iterations,
        });
    }
    let (nu, location, scale) = decode(&second.x);
    let nu_at_cap = nu >= NU_CAP * (1.0 - 1e-6);
    let standard_errors = if nu_at_cap {
        None
    } else {
        observed_information_se(nu, location, scale, y)
    };
    Ok(StudentTFit {
        nu,
        location,
        scale,
        log_likelihood: -second.fx,
        initial_log_likelihood,
        iterations,
        nu_at_cap,
        standard_errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Model;
    use std::f64::consts::E;

    fn sample(v: &[f64]) -> SampleVector {
        SampleVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn pareto_closed_form_examples() {
        assert!((pareto_mle(&sample(&[E - 1.0, E - 1.0])).unwrap() - 1.0).abs() < 1e-12);
        assert!((pareto_mle(&sample(&[0.0, E * E - 1.0])).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            pareto_mle(&sample(&[0.0, 0.0])),
            Err(Error::DegenerateData(_))
        ));
        assert!(matches!(
            pareto_mle(&sample(&[1.0, -0.5])),
            Err(Error::ObservationOutsideDomain { index: 1, .. })
        ));
    }

    #[test]
    fn pareto_mle_maximizes_likelihood() {
        let x = Model::pareto(0.8).unwrap().sample(300, 5).unwrap();
        let a = pareto_mle(&x).unwrap();
        let best = pareto_log_likelihood(a, &x);
        for d in [-1e-3, 1e-3, -0.1, 0.1] {
            assert!(pareto_log_likelihood(a + d, &x) < best);
        }
    }

    #[test]
    fn pareto_mle_is_consistent() {
        let x = Model::pareto(0.5).unwrap().sample(100_000, 11).unwrap();
        let a = pareto_mle(&x).unwrap();
        assert!((0.49..=0.51).contains(&a), "{a}");
    }

    #[test]
    fn t_fit_improves_on_start() {
        let y = Model::log_student_t(4.0, 0.0, 1.0)
            .unwrap()
            .sample(2000, 3)
            .unwrap()
            .iter()
            .map(|v| v.ln())
            .collect();
        let fit = student_t_mle(&SampleVector::new(y).unwrap()).unwrap();
        assert!(fit.log_likelihood >= fit.initial_log_likelihood);
        assert!(!fit.nu_at_cap);
        assert!(fit.standard_errors.is_some());
    }

    #[test]
    fn normal_like_data_hits_the_cap() {
        // Normal quantiles at the plotting positions: a sample with exactly
        // Gaussian shape and no sampling noise in the tails.
        let n = 3000;
        let y: Vec<f64> = (0..n)
            .map(|i| 5.0 + 2.0 * crate::special::normal_quantile((i as f64 + 0.5) / n as f64))
            .collect();
        let fit = student_t_mle(&SampleVector::new(y).unwrap()).unwrap();
        assert!(fit.nu_at_cap, "{}", fit.nu);
        assert!(fit.standard_errors.is_none());
        assert!((fit.location - 5.0).abs() < 1e-6);
    }

    #[test]
    fn t_fit_needs_ten_points() {
        assert!(matches!(
            student_t_mle(&sample(&[1.0; 9])),
            Err(Error::InsufficientSample { needed: 10, got: 9 })
        ));
        assert!(matches!(
            student_t_mle(&sample(&[1.0; 12])),
            Err(Error::DegenerateData(_))
        ));
    }
}
