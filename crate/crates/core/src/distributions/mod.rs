//! Heavy-tailed models with exact samplers and moment oracles for `u(X)`.

mod fit;
mod moments;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Open01, StandardNormal, StudentT};

pub use fit::{
    pareto_log_likelihood, pareto_mle, student_t_log_likelihood, student_t_mle, StudentTFit,
    NU_CAP,
};
pub use moments::{
    crossing_expinv_moment, crossing_exprate_moment, half_t_u_moment, pareto_u_moment,
    power_law_reciprocal_moment, stable_u_moment, UMoments,
};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::quadrature;
use crate::sample::SampleVector;
use crate::seed::rng_from_seed;
use crate::special::ln_gamma;
use crate::transform::{Transform, TransformKind};

/// Absolute tolerance of the quadrature oracle.
pub const QUADRATURE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    /// Density `alpha (1+x)^(-(1+alpha))` on `[0, inf)`.
    ParetoShifted { alpha: f64 },
    /// Hitting time of `level` by standard Brownian motion.
    FirstPassage { level: f64 },
    /// One-sided stable law with Laplace transform `exp(-b^alpha)`.
    PositiveStable { alpha: f64 },
    /// `|T|` for Student-t `T` with `nu` degrees of freedom.
    HalfStudentT { nu: f64 },
    /// `X = s^(-1/2)` with `s` uniform on the unit interval.
    PowerLawOnUnit,
    /// `X = exp(location + scale * T)`.
    LogStudentT { nu: f64, location: f64, scale: f64 },
    /// Resampling from observed data.
    Empirical(SampleVector),
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

/// Inverse CDF of the shifted Pareto law: `(1-s)^(-1/alpha) - 1`.
pub fn pareto_from_uniform(alpha: f64, s: f64) -> f64 {
    (-(-s).ln_1p() / alpha).exp_m1()
}

/// Reflection identity: `tau_L` has the law of `L^2 / Z^2`.
pub fn first_passage_from_normal(level: f64, z: f64) -> f64 {
    level * level / (z * z)
}

/// Kanter's form of the Chambers–Mallows–Stuck construction for a totally
/// skewed stable variable with `E[exp(-bX)] = exp(-b^alpha)`.
///
/// `angle` is uniform on `(0, pi)`, `exp` is standard exponential.
pub fn positive_stable_from_uniform_exp(alpha: f64, angle: f64, exp: f64) -> f64 {
    let a = (alpha * angle).sin() / angle.sin().powf(alpha.recip());
    let b = ((1.0 - alpha) * angle).sin() / exp;
    a * b.powf((1.0 - alpha) / alpha)
}

pub fn power_law_from_uniform(s: f64) -> f64 {
    s.powf(-0.5)
}

fn student_t_density(nu: f64, y: f64) -> f64 {
    let log_c = ln_gamma(0.5 * (nu + 1.0)) - ln_gamma(0.5 * nu) - 0.5 * (nu * PI).ln();
    (log_c - 0.5 * (nu + 1.0) * (y * y / nu).ln_1p()).exp()
}

impl Model {
    pub fn pareto(alpha: f64) -> Result<Self> {
        Ok(Self::ParetoShifted {
            alpha: positive("alpha", alpha)?,
        })
    }

    pub fn first_passage(level: f64) -> Result<Self> {
        Ok(Self::FirstPassage {
            level: positive("L", level)?,
        })
    }

    pub fn positive_stable(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Self::PositiveStable { alpha })
        } else {
            Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "stability index must lie in (0, 1)",
            })
        }
    }

    pub fn half_student_t(nu: f64) -> Result<Self> {
        Ok(Self::HalfStudentT {
            nu: positive("nu", nu)?,
        })
    }

    pub fn log_student_t(nu: f64, location: f64, scale: f64) -> Result<Self> {
        if !location.is_finite() {
            return Err(Error::InvalidParameter {
                name: "location",
                value: location,
                reason: "must be finite",
            });
        }
        Ok(Self::LogStudentT {
            nu: positive("nu", nu)?,
            location,
            scale: positive("scale", scale)?,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::ParetoShifted { .. } => "pareto",
            Self::FirstPassage { .. } => "first_passage",
            Self::PositiveStable { .. } => "positive_stable",
            Self::HalfStudentT { .. } => "half_student_t",
            Self::PowerLawOnUnit => "power_law_unit",
            Self::LogStudentT { .. } => "log_student_t",
            Self::Empirical(_) => "empirical",
        }
    }

    pub fn support(&self) -> Interval {
        match self {
            Self::ParetoShifted { .. } | Self::HalfStudentT { .. } => Interval::nonnegative(),
            Self::FirstPassage { .. } | Self::PositiveStable { .. } | Self::LogStudentT { .. } => {
                Interval::positive()
            }
            Self::PowerLawOnUnit => Interval::new(1.0, f64::INFINITY, false, true).expect("valid"),
            Self::Empirical(x) => {
                let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                Interval::closed(lo, if hi > lo { hi } else { lo.next_up() }).expect("valid")
            }
        }
    }

    /// Probability density, where one is available in closed form.
    pub fn density(&self, x: f64) -> Option<f64> {
        if !self.support().contains(x) {
            return match self {
                Self::PositiveStable { .. } | Self::Empirical(_) => None,
                _ => Some(0.0),
            };
        }
        match *self {
            Self::ParetoShifted { alpha } => Some(alpha * (-(1.0 + alpha) * x.ln_1p()).exp()),
            Self::FirstPassage { level } => Some(
                level / (2.0 * PI * x * x * x).sqrt() * (-level * level / (2.0 * x)).exp(),
            ),
            Self::HalfStudentT { nu } => Some(2.0 * student_t_density(nu, x)),
            Self::PowerLawOnUnit => Some(2.0 * x.powi(-3)),
            Self::LogStudentT {
                nu,
                location,
                scale,
            } => Some(student_t_density(nu, (x.ln() - location) / scale) / (scale * x)),
            Self::PositiveStable { .. } | Self::Empirical(_) => None,
        }
    }

    /// Draws `n` values with a generator seeded by `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<SampleVector> {
        if n == 0 {
            return Err(Error::InsufficientSample { needed: 1, got: 0 });
        }
        let mut rng = rng_from_seed(seed);
        SampleVector::new(self.sample_with(&mut rng, n))
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        match self {
            Self::ParetoShifted { alpha } => (0..n)
                .map(|_| pareto_from_uniform(*alpha, rng.sample(Open01)))
                .collect(),
            Self::FirstPassage { level } => (0..n)
                .map(|_| first_passage_from_normal(*level, rng.sample(StandardNormal)))
                .collect(),
            Self::PositiveStable { alpha } => (0..n)
                .map(|_| {
                    let angle = PI * rng.sample::<f64, _>(Open01);
                    positive_stable_from_uniform_exp(*alpha, angle, rng.sample(Exp1))
                })
                .collect(),
            Self::HalfStudentT { nu } => {
                let t = StudentT::new(*nu).expect("validated degrees of freedom");
                (0..n).map(|_| t.sample(rng).abs()).collect()
            }
            Self::PowerLawOnUnit => (0..n)
                .map(|_| power_law_from_uniform(rng.sample(Open01)))
                .collect(),
            Self::LogStudentT {
                nu,
                location,
                scale,
            } => {
                let t = StudentT::new(*nu).expect("validated degrees of freedom");
                (0..n)
                    .map(|_| (location + scale * t.sample(rng)).exp())
                    .collect()
            }
            Self::Empirical(x) => (0..n).map(|_| x[rng.random_range(0..x.len())]).collect(),
        }
    }

    /// Closed-form moments of `u(X)` when the pair has them.
    pub fn analytic_u_moments(&self, t: &Transform) -> Option<Result<UMoments>> {
        Some(match (self, t.kind()) {
            (Self::ParetoShifted { alpha }, TransformKind::ReciprocalPower { b }) => {
                pareto_u_moment(*alpha, *b)
            }
            (Self::FirstPassage { level }, TransformKind::ExpInverse { b }) => {
                crossing_expinv_moment(*level, *b)
            }
            (Self::FirstPassage { level }, TransformKind::ExpRate { c }) => {
                crossing_exprate_moment(*level, *c)
            }
            (Self::PositiveStable { alpha }, TransformKind::ExpRate { c }) => {
                stable_u_moment(*alpha, *c)
            }
            (Self::HalfStudentT { nu }, TransformKind::StudentKernel { b, nu: k }) if nu == k => {
                half_t_u_moment(*nu, *b)
            }
            (Self::PowerLawOnUnit, TransformKind::Reciprocal) => Ok(power_law_reciprocal_moment()),
            _ => return None,
        })
    }

    /// Moments of `u(X)`: closed form when available, quadrature otherwise.
    pub fn u_moments(&self, t: &Transform) -> Result<UMoments> {
        if let Some(m) = self.analytic_u_moments(t) {
            return m;
        }
        self.quadrature_u_moments(t)
    }

    /// Moments of `u(X)` by quadrature only.
    pub fn quadrature_u_moments(&self, t: &Transform) -> Result<UMoments> {
        let mean = quadrature_u_moment(self, t, 1)?;
        let second = quadrature_u_moment(self, t, 2)?;
        Ok(UMoments {
            mean,
            variance: (second - mean * mean).max(0.0),
            predictor: t.inverse_extended(t.image().clamp(mean))?,
        })
    }
}

fn support_within(model: &Model, t: &Transform) -> bool {
    let s = model.support();
    let d = t.domain();
    let lo_ok = s.lo() > d.lo() || (s.lo() == d.lo() && (!d.lo_open() || s.lo_open()));
    let hi_ok = s.hi() < d.hi() || (s.hi() == d.hi() && (!d.hi_open() || s.hi_open()));
    lo_ok && hi_ok
}

/// `E[u(X)^power]` by double-exponential quadrature.
///
/// The first passage time is integrated in `z` with `t = L^2 / z^2`, which
/// turns the density into `2 phi(z)`. The power law on the unit interval is
/// integrated against its defining uniform variable. The stable law has a
/// density only for `alpha = 1/2`, where it coincides with the first passage
/// time to `1/sqrt(2)`.
pub fn quadrature_u_moment(model: &Model, t: &Transform, power: i32) -> Result<f64> {
    if !(power == 1 || power == 2) {
        return Err(Error::InvalidParameter {
            name: "power",
            value: power as f64,
            reason: "only the first two moments are supported",
        });
    }
    let unavailable = || Error::OracleUnavailable {
        model: model.name().to_string(),
        transform: t.to_string(),
    };
    if !support_within(model, t) {
        return Err(unavailable());
    }
    let u_pow = |x: f64| {
        if x.is_finite() {
            t.eval(x).powi(power)
        } else {
            0.0
        }
    };
    let q = match *model {
        Model::ParetoShifted { .. } | Model::HalfStudentT { .. } => quadrature::exp_sinh(
            |x| u_pow(x) * model.density(x).expect("closed-form density"),
            0.0,
            QUADRATURE_TOL,
        )?,
        Model::FirstPassage { level } => first_passage_quadrature(level, &u_pow)?,
        Model::PositiveStable { alpha: 0.5 } => {
            first_passage_quadrature(FRAC_1_SQRT_2, &u_pow)?
        }
        Model::PositiveStable { .. } => return Err(unavailable()),
        Model::PowerLawOnUnit => quadrature::tanh_sinh(
            |s| u_pow(power_law_from_uniform(s)),
            0.0,
            1.0,
            QUADRATURE_TOL,
        )?,
        Model::LogStudentT {
            nu,
            location,
            scale,
        } => quadrature::real_line(
            |y| u_pow((location + scale * y).exp()) * student_t_density(nu, y),
            QUADRATURE_TOL,
        )?,
        Model::Empirical(ref x) => {
            return Ok(x.iter().map(|&v| u_pow(v)).sum::<f64>() / x.len() as f64);
        }
    };
    Ok(q.value)
}

fn first_passage_quadrature(level: f64, u_pow: &impl Fn(f64) -> f64) -> Result<quadrature::Quadrature> {
    let two_phi = |z: f64| (2.0 / PI).sqrt() * (-0.5 * z * z).exp();
    quadrature::exp_sinh(
        |z| u_pow(first_passage_from_normal(level, z)) * two_phi(z),
        0.0,
        QUADRATURE_TOL,
    )
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ParetoShifted { alpha } => write!(f, "pareto:{alpha}"),
            Self::FirstPassage { level } => write!(f, "first_passage:{level}"),
            Self::PositiveStable { alpha } => write!(f, "positive_stable:{alpha}"),
            Self::HalfStudentT { nu } => write!(f, "half_student_t:{nu}"),
            Self::PowerLawOnUnit => f.write_str("power_law_unit"),
            Self::LogStudentT {
                nu,
                location,
                scale,
            } => write!(f, "log_student_t:{nu},{location},{scale}"),
            Self::Empirical(x) => write!(f, "empirical(n={})", x.len()),
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    /// Parses `name:params`, e.g. `pareto:0.5` or `log_student_t:14,12.74,2.81`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, p) = crate::transform::parse_name_params(s)?;
        let arity = |n: usize| {
            if p.len() == n {
                Ok(())
            } else {
                Err(Error::MalformedSpec {
                    spec: s.to_string(),
                    reason: format!("expected {n} parameter(s), got {}", p.len()),
                })
            }
        };
        match name.as_str() {
            "pareto" => arity(1).and_then(|_| Self::pareto(p[0])),
            "first_passage" => arity(1).and_then(|_| Self::first_passage(p[0])),
            "positive_stable" => arity(1).and_then(|_| Self::positive_stable(p[0])),
            "half_student_t" => arity(1).and_then(|_| Self::half_student_t(p[0])),
            "power_law_unit" => arity(0).map(|_| Self::PowerLawOnUnit),
            "log_student_t" => arity(3).and_then(|_| Self::log_student_t(p[0], p[1], p[2])),
            other => Err(Error::UnknownModel(other.to_string())),
        }
    }
}
