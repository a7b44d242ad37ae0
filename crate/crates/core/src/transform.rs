//! Monotone bijective coordinate changes.
//!
//! A [`Transform`] is a continuous, strictly monotone map `u: J -> u(J)` with
//! a closed-form inverse. The direction is stored explicitly because
//! back-mapping an interval through a decreasing `u` swaps its endpoints.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A user supplied cumulative distribution function.
///
/// Inversion falls back to bisection on the support.
pub struct CustomCdf {
    name: String,
    support: Interval,
    cdf: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    density: Option<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
}

impl CustomCdf {
    /// `cdf` must be continuous and strictly increasing on `support`, and
    /// must accept the (possibly infinite) endpoints of the support.
    pub fn new(
        name: impl Into<String>,
        support: Interval,
        cdf: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            support,
            cdf: Box::new(cdf),
            density: None,
        }
    }

    pub fn with_density(mut self, density: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.density = Some(Box::new(density));
        self
    }
}

impl fmt::Debug for CustomCdf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomCdf")
            .field("name", &self.name)
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

/// Distribution functions usable as the transform `u = F`.
#[derive(Debug, Clone)]
pub enum Cdf {
    /// `F(x) = 1 - (1+x)^(-alpha)` on `[0, inf)`.
    Pareto { alpha: f64 },
    /// Right-continuous step function with value `k/n` at the k-th order statistic.
    Empirical(Arc<[f64]>),
    Custom(Arc<CustomCdf>),
}

#[derive(Debug, Clone)]
pub enum TransformKind {
    /// `x -> (1+x)^(-b)`
    ReciprocalPower { b: f64 },
    /// `t -> exp(-c t)`
    ExpRate { c: f64 },
    /// `t -> exp(-b / (2t))`
    ExpInverse { b: f64 },
    Log,
    /// `x -> x^b`
    Power { b: f64 },
    /// `x -> 1/x`
    Reciprocal,
    /// `x -> arctan(x) / pi`
    BoundedArctan,
    /// `x -> x / (1 + |x|)`
    BoundedRatio,
    /// `x -> (1 + x^2/nu)^(-b)`
    StudentKernel { b: f64, nu: f64 },
    Cdf(Cdf),
}

/// A monotone bijection between two intervals of the real line.
#[derive(Debug, Clone)]
pub struct Transform {
    kind: TransformKind,
    domain: Interval,
    image: Interval,
    direction: Direction,
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

fn unit_open() -> Interval {
    Interval::open(0.0, 1.0).expect("valid interval")
}

fn unit_half_open() -> Interval {
    Interval::new(0.0, 1.0, true, false).expect("valid interval")
}

impl Transform {
    pub fn reciprocal_power(b: f64) -> Result<Self> {
        Ok(Self {
            kind: TransformKind::ReciprocalPower {
                b: positive("b", b)?,
            },
            domain: Interval::nonnegative(),
            image: unit_half_open(),
            direction: Direction::Decreasing,
        })
    }

    pub fn exp_rate(c: f64) -> Result<Self> {
        Ok(Self {
            kind: TransformKind::ExpRate {
                c: positive("c", c)?,
            },
            domain: Interval::nonnegative(),
            image: unit_half_open(),
            direction: Direction::Decreasing,
        })
    }

    pub fn exp_inverse(b: f64) -> Result<Self> {
        Ok(Self {
            kind: TransformKind::ExpInverse {
                b: positive("b", b)?,
            },
            domain: Interval::positive(),
            image: unit_open(),
            direction: Direction::Increasing,
        })
    }

    pub fn log() -> Self {
        Self {
            kind: TransformKind::Log,
            domain: Interval::positive(),
            image: Interval::real_line(),
            direction: Direction::Increasing,
        }
    }

    pub fn power(b: f64) -> Result<Self> {
        Ok(Self {
            kind: TransformKind::Power {
                b: positive("b", b)?,
            },
            domain: Interval::positive(),
            image: Interval::positive(),
            direction: Direction::Increasing,
        })
    }

    pub fn reciprocal() -> Self {
        Self {
            kind: TransformKind::Reciprocal,
            domain: Interval::positive(),
            image: Interval::positive(),
            direction: Direction::Decreasing,
        }
    }

    pub fn bounded_arctan() -> Self {
        Self {
            kind: TransformKind::BoundedArctan,
            domain: Interval::real_line(),
            image: Interval::open(-0.5, 0.5).expect("valid interval"),
            direction: Direction::Increasing,
        }
    }

    pub fn bounded_ratio() -> Self {
        Self {
            kind: TransformKind::BoundedRatio,
            domain: Interval::real_line(),
            image: Interval::open(-1.0, 1.0).expect("valid interval"),
            direction: Direction::Increasing,
        }
    }

    pub fn student_kernel(b: f64, nu: f64) -> Result<Self> {
        Ok(Self {
            kind: TransformKind::StudentKernel {
                b: positive("b", b)?,
                nu: positive("nu", nu)?,
            },
            domain: Interval::nonnegative(),
            image: unit_half_open(),
            direction: Direction::Decreasing,
        })
    }

    /// The shifted Pareto distribution function as a transform.
    pub fn pareto_cdf(alpha: f64) -> Result<Self> {
        Ok(Self {
            kind: TransformKind::Cdf(Cdf::Pareto {
                alpha: positive("alpha", alpha)?,
            }),
            domain: Interval::nonnegative(),
            image: Interval::new(0.0, 1.0, false, true).expect("valid interval"),
            direction: Direction::Increasing,
        })
    }

    /// The empirical distribution function of `values`.
    ///
    /// The domain is the closed sample range and the image is `[1/n, 1]`.
    pub fn empirical_cdf(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let (lo, hi) = (sorted[0], sorted[n - 1]);
        if lo == hi {
            return Err(Error::DegenerateData(
                "empirical distribution function needs two distinct values",
            ));
        }
        Ok(Self {
            kind: TransformKind::Cdf(Cdf::Empirical(sorted.into())),
            domain: Interval::closed(lo, hi)?,
            image: Interval::closed(1.0 / n as f64, 1.0)?,
            direction: Direction::Increasing,
        })
    }

    pub fn custom_cdf(cdf: CustomCdf) -> Result<Self> {
        let support = cdf.support;
        let lo = (cdf.cdf)(support.lo());
        let hi = (cdf.cdf)(support.hi());
        let image = Interval::new(lo, hi, support.lo_open(), support.hi_open())?;
        Ok(Self {
            kind: TransformKind::Cdf(Cdf::Custom(Arc::new(cdf))),
            domain: support,
            image,
            direction: Direction::Increasing,
        })
    }

    pub fn kind(&self) -> &TransformKind {
        &self.kind
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn image(&self) -> Interval {
        self.image
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn is_increasing(&self) -> bool {
        self.direction == Direction::Increasing
    }

    /// `(inf u(J), sup u(J))`
    pub fn image_bounds(&self) -> (f64, f64) {
        (self.image.lo(), self.image.hi())
    }

    pub fn name(&self) -> &'static str {
        match &self.kind {
            TransformKind::ReciprocalPower { .. } => "reciprocal_power",
            TransformKind::ExpRate { .. } => "exp_rate",
            TransformKind::ExpInverse { .. } => "exp_inverse",
            TransformKind::Log => "log",
            TransformKind::Power { .. } => "power",
            TransformKind::Reciprocal => "reciprocal",
            TransformKind::BoundedArctan => "bounded_arctan",
            TransformKind::BoundedRatio => "bounded_ratio",
            TransformKind::StudentKernel { .. } => "student_kernel",
            TransformKind::Cdf(Cdf::Pareto { .. }) => "cdf_pareto",
            TransformKind::Cdf(Cdf::Empirical(_)) => "cdf_empirical",
            TransformKind::Cdf(Cdf::Custom(_)) => "cdf_custom",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match &self.kind {
            TransformKind::ReciprocalPower { b }
            | TransformKind::ExpInverse { b }
            | TransformKind::Power { b } => vec![*b],
            TransformKind::ExpRate { c } => vec![*c],
            TransformKind::StudentKernel { b, nu } => vec![*b, *nu],
            TransformKind::Cdf(Cdf::Pareto { alpha }) => vec![*alpha],
            _ => Vec::new(),
        }
    }

    pub fn spec(&self) -> TransformSpec {
        TransformSpec {
            name: self.name().to_string(),
            params: self.params(),
        }
    }

    /// `u(x)`; closed endpoints of the domain are valid inputs.
    pub fn forward(&self, x: f64) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(Error::OutsideDomain {
                value: x,
                domain: self.domain.to_string(),
            });
        }
        Ok(self.eval(x))
    }

    /// `u(x)` without the domain check.
    pub(crate) fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            TransformKind::ReciprocalPower { b } => (-b * x.ln_1p()).exp(),
            TransformKind::ExpRate { c } => (-c * x).exp(),
            TransformKind::ExpInverse { b } => (-b / (2.0 * x)).exp(),
            TransformKind::Log => x.ln(),
            TransformKind::Power { b } => x.powf(*b),
            TransformKind::Reciprocal => x.recip(),
            TransformKind::BoundedArctan => x.atan() / std::f64::consts::PI,
            TransformKind::BoundedRatio => x / (1.0 + x.abs()),
            TransformKind::StudentKernel { b, nu } => (-b * (x * x / nu).ln_1p()).exp(),
            TransformKind::Cdf(Cdf::Pareto { alpha }) => -(-alpha * x.ln_1p()).exp_m1(),
            TransformKind::Cdf(Cdf::Empirical(sorted)) => {
                sorted.partition_point(|&v| v <= x) as f64 / sorted.len() as f64
            }
            TransformKind::Cdf(Cdf::Custom(c)) => (c.cdf)(x),
        }
    }

    /// `u^{-1}(y)`; image endpoints are accepted only when attained.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !self.image.contains(y) {
            return Err(Error::OutsideImage {
                value: y,
                image: self.image.to_string(),
            });
        }
        Ok(self.invert(y))
    }

    /// Like [`inverse`](Self::inverse), but a non-attained image endpoint is
    /// mapped to the matching domain endpoint, which may be infinite.
    pub fn inverse_extended(&self, y: f64) -> Result<f64> {
        if self.image.contains(y) {
            return Ok(self.invert(y));
        }
        let at_lo = y == self.image.lo();
        let at_hi = y == self.image.hi();
        if !(at_lo || at_hi) {
            return Err(Error::OutsideImage {
                value: y,
                image: self.image.to_string(),
            });
        }
        Ok(match (at_lo, self.direction) {
            (true, Direction::Increasing) | (false, Direction::Decreasing) => self.domain.lo(),
            _ => self.domain.hi(),
        })
    }

    fn invert(&self, y: f64) -> f64 {
        match &self.kind {
            TransformKind::ReciprocalPower { b } => (-y.ln() / b).exp_m1(),
            TransformKind::ExpRate { c } => -y.ln() / c,
            TransformKind::ExpInverse { b } => b / (-2.0 * y.ln()),
            TransformKind::Log => y.exp(),
            TransformKind::Power { b } => y.powf(b.recip()),
            TransformKind::Reciprocal => y.recip(),
            TransformKind::BoundedArctan => (std::f64::consts::PI * y).tan(),
            TransformKind::BoundedRatio => y / (1.0 - y.abs()),
            TransformKind::StudentKernel { b, nu } => (nu * (-y.ln() / b).exp_m1()).sqrt(),
            TransformKind::Cdf(Cdf::Pareto { alpha }) => (-(-y).ln_1p() / alpha).exp_m1(),
            TransformKind::Cdf(Cdf::Empirical(sorted)) => {
                let n = sorted.len();
                // Generalized inverse: smallest order statistic with k/n >= y.
                let k = (y * n as f64 - 1e-9).ceil().clamp(1.0, n as f64) as usize;
                sorted[k - 1]
            }
            TransformKind::Cdf(Cdf::Custom(_)) => self.bisect_inverse(y),
        }
    }

    /// `du/dx`. Defined at closed domain endpoints when the formula is finite.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(Error::OutsideDomain {
                value: x,
                domain: self.domain.to_string(),
            });
        }
        let d = match &self.kind {
            TransformKind::ReciprocalPower { b } => -b * (-(b + 1.0) * x.ln_1p()).exp(),
            TransformKind::ExpRate { c } => -c * (-c * x).exp(),
            TransformKind::ExpInverse { b } => (-b / (2.0 * x)).exp() * b / (2.0 * x * x),
            TransformKind::Log => x.recip(),
            TransformKind::Power { b } => b * x.powf(b - 1.0),
            TransformKind::Reciprocal => -(x * x).recip(),
            TransformKind::BoundedArctan => (std::f64::consts::PI * (1.0 + x * x)).recip(),
            TransformKind::BoundedRatio => (1.0 + x.abs()).powi(-2),
            TransformKind::StudentKernel { b, nu } => {
                -b * (2.0 * x / nu) * (-(b + 1.0) * (x * x / nu).ln_1p()).exp()
            }
            TransformKind::Cdf(Cdf::Pareto { alpha }) => {
                alpha * (-(alpha + 1.0) * x.ln_1p()).exp()
            }
            TransformKind::Cdf(Cdf::Empirical(_)) => f64::NAN,
            TransformKind::Cdf(Cdf::Custom(c)) => match &c.density {
                Some(density) => density(x),
                None => f64::NAN,
            },
        };
        if d.is_finite() {
            Ok(d)
        } else {
            Err(Error::DerivativeUndefined(x))
        }
    }

    /// Inverse by bisection on the domain, to 1e-12 in the image coordinate.
    ///
    /// Every catalog entry has a closed-form inverse; this is the fallback for
    /// user supplied distribution functions.
    pub fn bisect_inverse(&self, y: f64) -> f64 {
        const TOL: f64 = 1e-12;
        let increasing = self.is_increasing();
        // `below(x)` is true when x lies left of the solution.
        let below = |x: f64| {
            let v = self.eval(x);
            if increasing {
                v < y
            } else {
                v > y
            }
        };
        let mut lo = self.domain.lo();
        let mut hi = self.domain.hi();
        if lo.is_infinite() {
            let mut step = 1.0;
            lo = hi.min(0.0) - step;
            while !below(lo) && lo > -1e300 {
                step *= 2.0;
                lo -= step;
            }
        }
        if hi.is_infinite() {
            let mut step = 1.0;
            hi = lo.max(0.0) + step;
            while below(hi) && hi < 1e300 {
                step *= 2.0;
                hi += step;
            }
        }
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = self.eval(mid);
            if (v - y).abs() <= TOL * y.abs().max(1.0) && (hi - lo) <= 1e-12 * mid.abs().max(1.0)
            {
                return mid;
            }
            if below(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec().fmt(f)
    }
}

/// A transform name plus its parameter list, written `name` or `name:p1,p2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformSpec {
    pub name: String,
    pub params: Vec<f64>,
}

impl TransformSpec {
    pub fn new(name: impl Into<String>, params: impl Into<Vec<f64>>) -> Self {
        Self {
            name: name.into(),
            params: params.into(),
        }
    }
}

/// Splits `name:p1,p2,...` into a name and parsed real parameters.
pub(crate) fn parse_name_params(s: &str) -> Result<(String, Vec<f64>)> {
    let malformed = |reason: &str| Error::MalformedSpec {
        spec: s.to_string(),
        reason: reason.to_string(),
    };
    let (name, rest) = match s.split_once(':') {
        Some((name, rest)) => (name.trim(), Some(rest)),
        None => (s.trim(), None),
    };
    if name.is_empty() {
        return Err(malformed("missing name"));
    }
    let params = match rest {
        None => Vec::new(),
        Some(rest) => rest
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| malformed("parameters must be real numbers"))?,
    };
    Ok((name.to_string(), params))
}

impl FromStr for TransformSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = parse_name_params(s)?;
        Ok(Self { name, params })
    }
}

impl fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for (i, p) in self.params.iter().enumerate() {
            f.write_str(if i == 0 { ":" } else { "," })?;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

fn expect_params(spec: &TransformSpec, n: usize) -> Result<()> {
    if spec.params.len() == n {
        Ok(())
    } else {
        Err(Error::MalformedSpec {
            spec: spec.to_string(),
            reason: format!("expected {n} parameter(s), got {}", spec.params.len()),
        })
    }
}

/// Builds a catalog transform from its specification.
///
/// `cdf_empirical` needs a sample and is built with [`Transform::empirical_cdf`].
pub fn make_transform(spec: &TransformSpec) -> Result<Transform> {
    let p = &spec.params;
    match spec.name.as_str() {
        "reciprocal_power" => expect_params(spec, 1).and_then(|_| Transform::reciprocal_power(p[0])),
        "exp_rate" => expect_params(spec, 1).and_then(|_| Transform::exp_rate(p[0])),
        "exp_inverse" => expect_params(spec, 1).and_then(|_| Transform::exp_inverse(p[0])),
        "power" => expect_params(spec, 1).and_then(|_| Transform::power(p[0])),
        "student_kernel" => {
            expect_params(spec, 2).and_then(|_| Transform::student_kernel(p[0], p[1]))
        }
        "cdf_pareto" => expect_params(spec, 1).and_then(|_| Transform::pareto_cdf(p[0])),
        "log" => expect_params(spec, 0).map(|_| Transform::log()),
        "reciprocal" => expect_params(spec, 0).map(|_| Transform::reciprocal()),
        "bounded_arctan" => expect_params(spec, 0).map(|_| Transform::bounded_arctan()),
        "bounded_ratio" => expect_params(spec, 0).map(|_| Transform::bounded_ratio()),
        "cdf_empirical" => Err(Error::MalformedSpec {
            spec: spec.to_string(),
            reason: "the empirical distribution function is built from a sample".into(),
        }),
        other => Err(Error::UnknownTransform(other.to_string())),
    }
}

/// A one-parameter family of transforms `b -> u_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TransformFamily {
    ReciprocalPower,
    ExpRate,
    ExpInverse,
    Power,
    /// `b -> student_kernel(b, nu)` with `nu` held fixed.
    StudentKernel { nu: f64 },
}

impl TransformFamily {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ReciprocalPower => "reciprocal_power",
            Self::ExpRate => "exp_rate",
            Self::ExpInverse => "exp_inverse",
            Self::Power => "power",
            Self::StudentKernel { .. } => "student_kernel",
        }
    }

    pub fn param_range(&self) -> Interval {
        Interval::positive()
    }

    pub fn instantiate(&self, param: f64) -> Result<Transform> {
        match *self {
            Self::ReciprocalPower => Transform::reciprocal_power(param),
            Self::ExpRate => Transform::exp_rate(param),
            Self::ExpInverse => Transform::exp_inverse(param),
            Self::Power => Transform::power(param),
            Self::StudentKernel { nu } => Transform::student_kernel(param, nu),
        }
    }
}

impl FromStr for TransformFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = parse_name_params(s)?;
        let spec = TransformSpec::new(name.clone(), params.clone());
        let family = match name.as_str() {
            "reciprocal_power" => Self::ReciprocalPower,
            "exp_rate" => Self::ExpRate,
            "exp_inverse" => Self::ExpInverse,
            "power" => Self::Power,
            "student_kernel" => {
                expect_params(&spec, 1)?;
                Self::StudentKernel {
                    nu: positive("nu", params[0])?,
                }
            }
            other => return Err(Error::UnknownTransform(other.to_string())),
        };
        if !matches!(family, Self::StudentKernel { .. }) {
            expect_params(&spec, 0)?;
        }
        Ok(family)
    }
}

impl fmt::Display for TransformFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::StudentKernel { nu } => write!(f, "student_kernel:{nu}"),
            other => f.write_str(other.name()),
        }
    }
}
