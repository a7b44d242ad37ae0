//! Generalized means for heavy-tailed data.
//!
//! When `X` has no finite mean (or no finite variance) the arithmetic mean is
//! a poor predictor. Choosing a strictly monotone transform `u` under which
//! `u(X)` has finite second moment, the best predictor of `X` in the
//! distance `(E[(u(X) - u(Y))^2])^(1/2)` is the u-mean `u^{-1}(E[u(X)])`.
//! Its sample version `u^{-1}(mean of u(x_k))` is consistent, and confidence
//! intervals built in the transformed frame carry back through `u^{-1}`.
//!
//! ```
//! use umean::{ci_original, ci_transformed, u_mean, SampleVector, Transform};
//!
//! // The log transform gives the geometric mean.
//! let x = SampleVector::new(vec![1.0, 4.0]).unwrap();
//! let est = u_mean(&Transform::log(), &x).unwrap();
//! assert!((est.u_mean() - 2.0).abs() < 1e-12);
//!
//! let t = Transform::reciprocal_power(1.0).unwrap();
//! let x = SampleVector::new(vec![0.2, 0.9, 3.5, 14.0]).unwrap();
//! let est = u_mean(&t, &x).unwrap();
//! let ci = ci_original(&t, &ci_transformed(&est, 0.95).unwrap()).unwrap();
//! assert!(ci.lower <= est.u_mean() && est.u_mean() <= ci.upper);
//! ```

pub mod calibration;
pub mod distributions;
pub mod error;
pub mod estimate;
pub mod interval;
pub mod optimize;
pub mod quadrature;
pub mod restricted;
pub mod sample;
pub mod seed;
pub mod special;
pub mod transform;

pub use calibration::{
    crossing_exprate_c_star, crossing_xi_star, default_grid, find_variance_extremum, log_grid,
    recommend_parameter, scan_parameter, stable_b_e, ExtremumKind, ExtremumReport, ScanResult,
    ScanRow, ScanSource, SourceKind, Target,
};
pub use distributions::{quadrature_u_moment, Model, UMoments};
pub use error::{Error, Result};
pub use estimate::{
    ci_original, ci_transformed, conditional_u_mean, prediction_error, sample_prediction_error,
    u_distance, u_mean, ConfidenceInterval, Dispersion, Frame, PredictionSource, UMeanEstimate,
};
pub use interval::Interval;
pub use restricted::{fit_in_u, predict_restricted, BasisFunction, RegressionModel};
pub use sample::SampleVector;
pub use transform::{make_transform, Direction, Transform, TransformFamily, TransformSpec};
