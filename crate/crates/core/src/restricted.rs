//! Best prediction within a linear class after a change of variables.
//!
//! With features `phi_k` applied to `s = u(x)`, the best predictor of `Y` in
//! the class `u^{-1}(sum a_k phi_k(u(X)))` is found by ordinary least squares
//! of `u(y)` on the features, then mapped back through `u^{-1}`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::sample::SampleVector;
use crate::transform::Transform;

/// Relative singular-value floor below which the design is rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// A feature map applied to the transformed regressor `s = u(x)`.
#[derive(Clone)]
pub enum BasisFunction {
    Constant,
    Linear,
    Power(i32),
    Custom {
        name: String,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl BasisFunction {
    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Custom {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Self::Constant => 1.0,
            Self::Linear => s,
            Self::Power(k) => s.powi(*k),
            Self::Custom { f, .. } => f(s),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Constant => "1".into(),
            Self::Linear => "s".into(),
            Self::Power(k) => format!("s^{k}"),
            Self::Custom { name, .. } => name.clone(),
        }
    }
}

impl fmt::Debug for BasisFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// `{1, s}`: a straight line in transformed coordinates.
pub fn affine_basis() -> Vec<BasisFunction> {
    vec![BasisFunction::Constant, BasisFunction::Linear]
}

#[derive(Debug, Clone)]
pub struct RegressionModel {
    transform: Transform,
    basis: Vec<BasisFunction>,
    coefficients: Vec<f64>,
    residual_rms: f64,
}

impl RegressionModel {
    pub fn transform(&self) -> &Transform {
        &self.transform
    }

    pub fn basis(&self) -> &[BasisFunction] {
        &self.basis
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// RMS of `u(y) - fit` over the training data.
    pub fn residual_rms(&self) -> f64 {
        self.residual_rms
    }

    /// `sum a_k phi_k(u(x))` before mapping back.
    pub fn predict_transformed(&self, x: f64) -> Result<f64> {
        let s = self.transform.forward(x)?;
        Ok(linear_combination(&self.basis, &self.coefficients, s))
    }
}

fn linear_combination(basis: &[BasisFunction], a: &[f64], s: f64) -> f64 {
    basis.iter().zip(a).map(|(phi, a)| a * phi.eval(s)).sum()
}

/// Least-squares fit of `u(y)` on `phi_k(u(x))`, solved through the SVD of the
/// design matrix.
pub fn fit_in_u(
    t: &Transform,
    x: &SampleVector,
    y: &SampleVector,
    basis: &[BasisFunction],
) -> Result<RegressionModel> {
    if basis.is_empty() {
        return Err(Error::InvalidParameter {
            name: "basis",
            value: 0.0,
            reason: "basis must contain at least one function",
        });
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let (n, k) = (x.len(), basis.len());
    if n < k {
        return Err(Error::InsufficientSample { needed: k, got: n });
    }
    x.check_domain(t)?;
    y.check_domain(t)?;

    let s: Vec<f64> = x.iter().map(|&v| t.eval(v)).collect();
    let target = DVector::from_iterator(n, y.iter().map(|&v| t.eval(v)));
    let design = DMatrix::from_fn(n, k, |i, j| basis[j].eval(s[i]));
    if design.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateData("a basis function is not finite on the data"));
    }

    let svd = design.clone().svd(true, true);
    let sv = &svd.singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    if smin.is_nan() || smin <= RANK_TOLERANCE * smax {
        return Err(Error::RankDeficient {
            ratio: if smax > 0.0 { smin / smax } else { 0.0 },
        });
    }
    let a = svd
        .solve(&target, 0.0)
        .map_err(|_| Error::RankDeficient { ratio: smin / smax })?;
    let residual = &target - &design * &a;
    let residual_rms = (residual.norm_squared() / n as f64).sqrt();
    let coefficients: Vec<f64> = a.iter().copied().collect();
    if coefficients.iter().any(|c| !c.is_finite()) {
        return Err(Error::DegenerateData("non-finite coefficients"));
    }
    Ok(RegressionModel {
        transform: t.clone(),
        basis: basis.to_vec(),
        coefficients,
        residual_rms,
    })
}

/// `u^{-1}(sum a_k phi_k(u(x_new)))`.
///
/// A fitted value outside the image of `u` is reported with the raw value so
/// the caller can decide whether to clamp.
pub fn predict_restricted(m: &RegressionModel, x_new: f64) -> Result<f64> {
    let raw = m.predict_transformed(x_new)?;
    let image = m.transform.image();
    if !image.contains(raw) {
        return Err(Error::FittedOutsideImage {
            raw,
            image: image.to_string(),
        });
    }
    m.transform.inverse(raw)
}
