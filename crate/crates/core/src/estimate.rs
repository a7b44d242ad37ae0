//! Sample u-means, prediction error and back-mapped confidence intervals.
//!
//! For a sample `x_1..x_n` and transform `u`, the estimator of the u-mean
//! `u^{-1}(E[u(X)])` is `u^{-1}(ubar)` with `ubar = (1/n) sum u(x_k)`. All
//! interval work happens in the transformed frame, where the central limit
//! theorem applies, and is then carried back through `u^{-1}`.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::distributions::Model;
use crate::error::{Error, Result};
use crate::sample::SampleVector;
use crate::special::two_sided_z;
use crate::transform::{Direction, Transform};

/// Dispersion of the transformed sample. Undefined for a single observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dispersion {
    /// `sum (u(x_k) - ubar)^2 / (n - 1)`
    pub var_unbiased: f64,
    pub sd_unbiased: f64,
    /// `sum (u(x_k) - ubar)^2 / n`
    pub var_biased: f64,
}

#[derive(Debug, Clone)]
pub struct UMeanEstimate {
    transform: Transform,
    n: usize,
    transformed_mean: f64,
    u_mean: f64,
    dispersion: Option<Dispersion>,
}

impl UMeanEstimate {
    pub fn transform(&self) -> &Transform {
        &self.transform
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `ubar`, the mean in transformed coordinates.
    pub fn transformed_mean(&self) -> f64 {
        self.transformed_mean
    }

    /// `u^{-1}(ubar)`
    pub fn u_mean(&self) -> f64 {
        self.u_mean
    }

    /// `None` when `n = 1`.
    pub fn dispersion(&self) -> Option<Dispersion> {
        self.dispersion
    }

    pub fn transformed_sd_unbiased(&self) -> Option<f64> {
        self.dispersion.map(|d| d.sd_unbiased)
    }

    pub fn transformed_var_biased(&self) -> Option<f64> {
        self.dispersion.map(|d| d.var_biased)
    }
}

fn transformed_values(t: &Transform, x: &SampleVector) -> Result<Vec<f64>> {
    x.check_domain(t)?;
    Ok(x.iter().map(|&v| t.eval(v)).collect())
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Root-mean-square distance between paired samples in transformed coordinates.
pub fn u_distance(t: &Transform, x: &SampleVector, y: &SampleVector) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let ux = transformed_values(t, x)?;
    let uy = transformed_values(t, y)?;
    let ss: f64 = ux.iter().zip(&uy).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok((ss / x.len() as f64).sqrt())
}

/// The sample u-mean together with the transformed-frame dispersion.
pub fn u_mean(t: &Transform, x: &SampleVector) -> Result<UMeanEstimate> {
    let u = transformed_values(t, x)?;
    Ok(estimate_from_transformed(t, &u))
}

/// Assumes `u` holds `t`-values of in-domain observations.
pub(crate) fn estimate_from_transformed(t: &Transform, u: &[f64]) -> UMeanEstimate {
    let n = u.len();
    let (min, max) = u
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    // Rounding must not push the average past the extreme observations.
    let ubar = mean(u).clamp(min, max);
    let dispersion = (n >= 2).then(|| {
        let ss: f64 = u.iter().map(|v| (v - ubar) * (v - ubar)).sum();
        let var_unbiased = ss / (n - 1) as f64;
        Dispersion {
            var_unbiased,
            sd_unbiased: var_unbiased.sqrt(),
            var_biased: ss / n as f64,
        }
    });
    UMeanEstimate {
        transform: t.clone(),
        n,
        transformed_mean: ubar,
        u_mean: t
            .inverse(ubar)
            .expect("mean of attained transformed values lies in the image"),
        dispersion,
    }
}

/// Unbiased sample variance of `u(X)`.
pub fn sample_prediction_error(t: &Transform, x: &SampleVector) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::InsufficientSample {
            needed: 2,
            got: x.len(),
        });
    }
    let est = u_mean(t, x)?;
    Ok(est.dispersion.expect("n >= 2").var_unbiased)
}

/// Where the prediction error `Var(u(X))` comes from.
#[derive(Debug, Clone, Copy)]
pub enum PredictionSource<'a> {
    Sample(&'a SampleVector),
    Model(&'a Model),
}

/// `Var(u(X))`: the population value from a model oracle, or the unbiased
/// sample estimate.
pub fn prediction_error(t: &Transform, source: PredictionSource<'_>) -> Result<f64> {
    match source {
        PredictionSource::Sample(x) => sample_prediction_error(t, x),
        PredictionSource::Model(m) => m.u_moments(t).map(|m| m.variance),
    }
}

/// Per-group u-means over a finite partition given by `labels`.
pub fn conditional_u_mean<K>(
    t: &Transform,
    y: &SampleVector,
    labels: &[K],
) -> Result<BTreeMap<K, UMeanEstimate>>
where
    K: Ord + Clone,
{
    if y.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: labels.len(),
        });
    }
    let u = transformed_values(t, y)?;
    let mut groups: BTreeMap<K, Vec<f64>> = BTreeMap::new();
    for (label, v) in labels.iter().zip(u) {
        groups.entry(label.clone()).or_default().push(v);
    }
    Ok(groups
        .into_iter()
        .map(|(k, vals)| (k, estimate_from_transformed(t, &vals)))
        .collect())
}

/// Like [`conditional_u_mean`], but every group in `groups` must be populated.
pub fn conditional_u_mean_over<K>(
    t: &Transform,
    y: &SampleVector,
    labels: &[K],
    groups: &[K],
) -> Result<BTreeMap<K, UMeanEstimate>>
where
    K: Ord + Clone + Display,
{
    let map = conditional_u_mean(t, y, labels)?;
    if let Some(missing) = groups.iter().find(|g| !map.contains_key(*g)) {
        return Err(Error::EmptyGroup(missing.to_string()));
    }
    Ok(map)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Transformed,
    Original,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    /// Nominal coverage probability.
    pub level: f64,
    pub frame: Frame,
    pub clamped_low: bool,
    pub clamped_high: bool,
}

impl ConfidenceInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "level",
            value: level,
            reason: "coverage level must lie in (0, 1)",
        })
    }
}

/// `ubar -/+ z * sd / sqrt(n)`, clamped to the image of the transform.
///
/// `z` is the standard normal quantile at `(1 + level) / 2`.
pub fn ci_transformed(est: &UMeanEstimate, level: f64) -> Result<ConfidenceInterval> {
    check_level(level)?;
    let d = est.dispersion.ok_or(Error::InsufficientSample {
        needed: 2,
        got: est.n,
    })?;
    let half = two_sided_z(level) * d.sd_unbiased / (est.n as f64).sqrt();
    let (a, b) = est.transform.image_bounds();
    let raw_lo = est.transformed_mean - half;
    let raw_hi = est.transformed_mean + half;
    Ok(ConfidenceInterval {
        lower: raw_lo.max(a),
        upper: raw_hi.min(b),
        level,
        frame: Frame::Transformed,
        clamped_low: raw_lo < a,
        clamped_high: raw_hi > b,
    })
}

/// Carries a transformed-frame interval back through `u^{-1}`.
///
/// For a decreasing transform the endpoints (and their clamp flags) swap.
/// An endpoint sitting on a non-attained image bound maps to the matching
/// domain endpoint, which may be infinite.
pub fn ci_original(t: &Transform, ci: &ConfidenceInterval) -> Result<ConfidenceInterval> {
    if ci.frame != Frame::Transformed {
        return Err(Error::WrongFrame {
            expected: "transformed",
        });
    }
    for v in [ci.lower, ci.upper] {
        if !t.image().closure_contains(v) {
            return Err(Error::OutsideImage {
                value: v,
                image: t.image().to_string(),
            });
        }
    }
    let lo = t.inverse_extended(ci.lower)?;
    let hi = t.inverse_extended(ci.upper)?;
    Ok(match t.direction() {
        Direction::Increasing => ConfidenceInterval {
            lower: lo,
            upper: hi,
            frame: Frame::Original,
            ..*ci
        },
        Direction::Decreasing => ConfidenceInterval {
            lower: hi,
            upper: lo,
            level: ci.level,
            frame: Frame::Original,
            clamped_low: ci.clamped_high,
            clamped_high: ci.clamped_low,
        },
    })
}
