//! Choosing the transform parameter.
//!
//! A scan evaluates the prediction error `Var(u_b(X))` and the u-mean over a
//! grid of `b`, either from a model's moments, from one sample, or averaged
//! over many simulated samples. [`find_variance_extremum`] locates an
//! interior critical point of the model variance, and the closed-form
//! optimal parameters of the crossing and stable examples are exposed
//! directly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{crossing_exprate_moment, Model};
use crate::error::{Error, Result};
use crate::estimate::{ci_original, ci_transformed, estimate_from_transformed};
use crate::interval::Interval;
use crate::optimize::{bisect_root, central_difference, golden_section};
use crate::sample::SampleVector;
use crate::seed::replication_rng;
use crate::transform::{Transform, TransformFamily};

/// Replications used for averaged curves unless overridden.
pub const DEFAULT_REPLICATIONS: usize = 5000;

/// `n` points from `lo` to `hi` inclusive, evenly spaced in `ln b`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    check_grid_bounds(lo, hi, n)?;
    if lo <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "grid lower bound",
            value: lo,
            reason: "a log-spaced grid needs positive bounds",
        });
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok(spaced(n, |f| (a + f * (b - a)).exp(), lo, hi))
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    check_grid_bounds(lo, hi, n)?;
    Ok(spaced(n, |f| lo + f * (hi - lo), lo, hi))
}

/// 50 log-spaced points over `[1, 100]`.
pub fn default_grid() -> Vec<f64> {
    log_grid(1.0, 100.0, 50).expect("valid constant grid")
}

fn check_grid_bounds(lo: f64, hi: f64, n: usize) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter {
            name: "grid",
            value: hi,
            reason: "bounds must be finite with lo < hi",
        });
    }
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "grid size",
            value: n as f64,
            reason: "need at least two points",
        });
    }
    Ok(())
}

fn spaced(n: usize, at: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut g: Vec<f64> = (0..n).map(|i| at(i as f64 / (n - 1) as f64)).collect();
    // Pin the endpoints exactly.
    g[0] = lo;
    g[n - 1] = hi;
    g
}

/// Where the curve values come from.
#[derive(Debug, Clone)]
pub enum ScanSource {
    /// Population moments of a model (closed form or quadrature).
    Analytic(Model),
    /// One observed sample.
    Sample(SampleVector),
    /// `reps` independent samples of size `n` drawn from `model`; replication
    /// `r` uses stream `r` of the master `seed`.
    Replicated {
        model: Model,
        n: usize,
        reps: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Analytic,
    Sample,
    Replicated(usize),
}

/// One grid point of a scan.
///
/// In replicated mode `u_mean` is `u^{-1}` of the average transformed mean,
/// `variance` is the average of the per-sample unbiased variances and the
/// interval endpoints are averaged endpoint by endpoint. The plain average of
/// the per-sample u-means is kept in `mean_of_u_means`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub b: f64,
    pub u_mean: f64,
    pub variance: f64,
    pub ci_lo: Option<f64>,
    pub ci_hi: Option<f64>,
    pub transformed_mean: f64,
    pub transformed_ci_lo: Option<f64>,
    pub transformed_ci_hi: Option<f64>,
    pub u_mean_se: Option<f64>,
    pub variance_se: Option<f64>,
    pub mean_of_u_means: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub family: TransformFamily,
    pub level: f64,
    pub source: SourceKind,
    pub rows: Vec<ScanRow>,
}

impl ScanResult {
    pub fn parameter_grid(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.b).collect()
    }

    pub fn u_means(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.u_mean).collect()
    }

    pub fn variances(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.variance).collect()
    }

    pub fn ci_lowers(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.ci_lo).collect()
    }

    pub fn ci_uppers(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.ci_hi).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn check_grid(family: &TransformFamily, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "grid",
            value: f64::NAN,
            reason: "grid is empty",
        });
    }
    let range = family.param_range();
    for &b in grid {
        if !range.contains(b) {
            return Err(Error::OutsideDomain {
                value: b,
                domain: format!("{} parameter range {range}", family.name()),
            });
        }
    }
    Ok(())
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

/// Per-sample quantities at one grid point.
#[derive(Clone, Copy)]
struct Single {
    ubar: f64,
    u_mean: f64,
    variance: f64,
    ci: (f64, f64),
    tci: (f64, f64),
}

fn single(t: &Transform, u: &[f64], level: f64) -> Result<Single> {
    let est = estimate_from_transformed(t, u);
    let tci = ci_transformed(&est, level)?;
    let oci = ci_original(t, &tci)?;
    Ok(Single {
        ubar: est.transformed_mean(),
        u_mean: est.u_mean(),
        variance: est
            .dispersion()
            .map(|d| d.var_unbiased)
            .expect("n >= 2 checked by ci_transformed"),
        ci: (oci.lower, oci.upper),
        tci: (tci.lower, tci.upper),
    })
}

/// Mean and standard error of the mean.
fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let ss: f64 = v.iter().map(|x| (x - m) * (x - m)).sum();
    (m, (ss / (n - 1.0) / n).sqrt())
}

/// Evaluates the u-mean, the prediction error and the confidence interval at
/// every grid point. Rows come back in grid order.
pub fn scan_parameter(
    family: TransformFamily,
    source: &ScanSource,
    grid: &[f64],
    level: f64,
) -> Result<ScanResult> {
    check_grid(&family, grid)?;
    check_level(level)?;
    let transforms: Vec<Transform> = grid
        .iter()
        .map(|&b| family.instantiate(b))
        .collect::<Result<_>>()?;

    let (kind, rows) = match source {
        ScanSource::Analytic(model) => {
            let rows = grid
                .par_iter()
                .zip(&transforms)
                .map(|(&b, t)| {
                    let m = model.u_moments(t)?;
                    Ok(ScanRow {
                        b,
                        u_mean: m.predictor,
                        variance: m.variance,
                        ci_lo: None,
                        ci_hi: None,
                        transformed_mean: m.mean,
                        transformed_ci_lo: None,
                        transformed_ci_hi: None,
                        u_mean_se: None,
                        variance_se: None,
                        mean_of_u_means: None,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            (SourceKind::Analytic, rows)
        }
        ScanSource::Sample(x) => {
            if x.len() < 2 {
                return Err(Error::InsufficientSample {
                    needed: 2,
                    got: x.len(),
                });
            }
            let rows = grid
                .par_iter()
                .zip(&transforms)
                .map(|(&b, t)| {
                    x.check_domain(t)?;
                    let u: Vec<f64> = x.iter().map(|&v| t.eval(v)).collect();
                    let s = single(t, &u, level)?;
                    Ok(ScanRow {
                        b,
                        u_mean: s.u_mean,
                        variance: s.variance,
                        ci_lo: Some(s.ci.0),
                        ci_hi: Some(s.ci.1),
                        transformed_mean: s.ubar,
                        transformed_ci_lo: Some(s.tci.0),
                        transformed_ci_hi: Some(s.tci.1),
                        u_mean_se: None,
                        variance_se: None,
                        mean_of_u_means: None,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            (SourceKind::Sample, rows)
        }
        ScanSource::Replicated {
            model,
            n,
            reps,
            seed,
        } => (
            SourceKind::Replicated(*reps),
            replicated_rows(model, *n, *reps, *seed, grid, &transforms, level)?,
        ),
    };
    Ok(ScanResult {
        family,
        level,
        source: kind,
        rows,
    })
}

fn replicated_rows(
    model: &Model,
    n: usize,
    reps: usize,
    seed: u64,
    grid: &[f64],
    transforms: &[Transform],
    level: f64,
) -> Result<Vec<ScanRow>> {
    if n < 2 {
        return Err(Error::InsufficientSample { needed: 2, got: n });
    }
    if reps < 2 {
        return Err(Error::InvalidParameter {
            name: "reps",
            value: reps as f64,
            reason: "need at least two replications for a standard error",
        });
    }
    // Each replication draws one sample and reuses it across the whole grid,
    // so neighbouring grid points share their Monte Carlo noise.
    let per_rep: Vec<Vec<Single>> = (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replication_rng(seed, r);
            let x = model.sample_with(&mut rng, n);
            let mut u = vec![0.0; n];
            transforms
                .iter()
                .map(|t| {
                    for (dst, &v) in u.iter_mut().zip(&x) {
                        if !t.domain().contains(v) {
                            return Err(Error::OutsideDomain {
                                value: v,
                                domain: t.domain().to_string(),
                            });
                        }
                        *dst = t.eval(v);
                    }
                    single(t, &u, level)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(grid.len());
    let column = |j: usize, f: fn(&Single) -> f64| -> Vec<f64> {
        per_rep.iter().map(|rep| f(&rep[j])).collect()
    };
    for (j, (&b, t)) in grid.iter().zip(transforms).enumerate() {
        let (ubar, ubar_se) = mean_se(&column(j, |s| s.ubar));
        let (variance, variance_se) = mean_se(&column(j, |s| s.variance));
        let (mean_of_u_means, _) = mean_se(&column(j, |s| s.u_mean));
        let (ci_lo, _) = mean_se(&column(j, |s| s.ci.0));
        let (ci_hi, _) = mean_se(&column(j, |s| s.ci.1));
        let (tci_lo, _) = mean_se(&column(j, |s| s.tci.0));
        let (tci_hi, _) = mean_se(&column(j, |s| s.tci.1));
        let u_mean = t.inverse(ubar)?;
        // Delta method: the slope of u^{-1} at ubar is 1/u'(u_mean).
        let u_mean_se = t
            .derivative(u_mean)
            .map(|d| ubar_se / d.abs())
            .unwrap_or(f64::NAN);
        rows.push(ScanRow {
            b,
            u_mean,
            variance,
            ci_lo: Some(ci_lo),
            ci_hi: Some(ci_hi),
            transformed_mean: ubar,
            transformed_ci_lo: Some(tci_lo),
            transformed_ci_hi: Some(tci_hi),
            u_mean_se: Some(u_mean_se),
            variance_se: Some(variance_se),
            mean_of_u_means: Some(mean_of_u_means),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtremumKind {
    InteriorCriticalPoint,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremumReport {
    pub parameter_star: f64,
    pub value_star: f64,
    pub kind: ExtremumKind,
    pub bracket: Interval,
    pub iterations: usize,
    /// For an interior point, whether the variance peaks there (as it does in
    /// the crossing and stable examples) rather than dips.
    pub local_maximum: bool,
    /// Golden-section estimate, kept as a cross-check on `parameter_star`.
    pub golden_estimate: f64,
    pub gradient_at_star: f64,
}

const COARSE_POINTS: usize = 65;

/// Locates the critical point of `b -> Var(u_b(X))` inside `bracket`.
///
/// A coarse scan picks the grid cell holding the interior extremum.
/// Golden-section search narrows it, and the reported parameter is the root of
/// a central-difference gradient found by bisection on the same cell. When the
/// variance is monotone over the bracket, the endpoint with the smaller
/// variance is returned with kind [`ExtremumKind::Boundary`].
pub fn find_variance_extremum(
    family: TransformFamily,
    model: &Model,
    bracket: Interval,
) -> Result<ExtremumReport> {
    let (lo, hi) = (bracket.lo(), bracket.hi());
    if !bracket.is_bounded() {
        return Err(Error::InvalidParameter {
            name: "bracket",
            value: hi,
            reason: "bracket must be finite",
        });
    }
    let range = family.param_range();
    if !(range.closure_contains(lo) && range.contains(hi)) || !(lo > 0.0 || range.contains(lo)) {
        return Err(Error::OutsideDomain {
            value: lo,
            domain: format!("{} parameter range {range}", family.name()),
        });
    }
    let var_at = |b: f64| -> Result<f64> { Ok(model.u_moments(&family.instantiate(b)?)?.variance) };
    let var = |b: f64| var_at(b).unwrap_or(f64::NAN);

    let grid = if lo > 0.0 && hi / lo > 10.0 {
        log_grid(lo, hi, COARSE_POINTS)?
    } else {
        linear_grid(lo, hi, COARSE_POINTS)?
    };
    let values: Vec<f64> = grid.iter().map(|&b| var_at(b)).collect::<Result<_>>()?;
    let last = values.len() - 1;
    let argmax = (0..=last).max_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap();
    let argmin = (0..=last).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap();

    let (centre, maximize) = if argmax != 0 && argmax != last {
        (argmax, true)
    } else if argmin != 0 && argmin != last {
        (argmin, false)
    } else {
        let at_lo = values[0] <= values[last];
        let (b, v) = if at_lo { (lo, values[0]) } else { (hi, values[last]) };
        return Ok(ExtremumReport {
            parameter_star: b,
            value_star: v,
            kind: ExtremumKind::Boundary,
            bracket,
            iterations: COARSE_POINTS,
            local_maximum: false,
            golden_estimate: b,
            gradient_at_star: central_difference(var, b, 1e-3 * b.abs().max(1e-6)),
        });
    };

    let (a, b) = (grid[centre - 1], grid[centre + 1]);
    let golden = golden_section(var, a, b, 1e-10, maximize);
    let gradient = |x: f64| central_difference(var, x, 1e-3 * x.abs().max(1e-6));
    let root = bisect_root(gradient, a, b, 1e-14 * b.abs().max(1.0))?;
    let star = root.x;
    Ok(ExtremumReport {
        parameter_star: star,
        value_star: var_at(star)?,
        kind: ExtremumKind::InteriorCriticalPoint,
        bracket,
        iterations: COARSE_POINTS + golden.iterations + root.iterations,
        local_maximum: maximize,
        golden_estimate: golden.x,
        gradient_at_star: gradient(star),
    })
}

/// The positive root of `(xi + 1)^4 = (2 xi + 1)^3`.
///
/// Under `u_b(t) = exp(-b/(2t))` the first-passage variance depends on `b`
/// and the level only through `xi = b / L^2`, and is extremal at this root.
pub fn crossing_xi_star() -> f64 {
    let g = |xi: f64| (xi + 1.0).powi(4) - (2.0 * xi + 1.0).powi(3);
    bisect_root(g, 1.0, 20.0, 1e-12)
        .expect("sign change on [1, 20]")
        .x
}

/// Rate `c*` at which the first-passage variance under `u(t) = exp(-c t)` is
/// extremal: `sqrt(c*) L = ln 2 (sqrt 2 + 1) / 4`.
pub fn crossing_exprate_c_star(level: f64) -> Result<f64> {
    // Validates the level.
    crossing_exprate_moment(level, 1.0)?;
    let s = std::f64::consts::LN_2 * (2f64.sqrt() + 1.0) / (4.0 * level);
    Ok(s * s)
}

/// `b_e = ((ln 2 - ln 2^alpha) / (2 - 2^alpha))^(1/alpha)`, the extremal
/// parameter of `Var(exp(-b X))` for the positive stable law of index `alpha`.
pub fn stable_b_e(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "stability index must lie in (0, 1)",
        });
    }
    let ln2 = std::f64::consts::LN_2;
    Ok(((1.0 - alpha) * ln2 / (2.0 - 2f64.powf(alpha))).powf(1.0 / alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// Original-frame confidence interval no wider than this.
    MaxCiWidth(f64),
    /// Sample variance of `u_b(X)` no larger than this.
    MaxVariance(f64),
}

/// The smallest grid parameter whose sample curve meets `target`.
///
/// Smaller `b` distorts the data less, so the search runs upward through the
/// sorted grid. When no grid point qualifies the error carries the best value
/// achieved and where.
pub fn recommend_parameter(
    family: TransformFamily,
    sample: &SampleVector,
    target: Target,
    grid: &[f64],
    level: f64,
) -> Result<f64> {
    let threshold = match target {
        Target::MaxCiWidth(w) | Target::MaxVariance(w) => w,
    };
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "target",
            value: threshold,
            reason: "threshold must be positive",
        });
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    let scan = scan_parameter(family, &ScanSource::Sample(sample.clone()), &sorted, level)?;
    let score = |r: &ScanRow| match target {
        Target::MaxVariance(_) => r.variance,
        Target::MaxCiWidth(_) => r.ci_hi.unwrap() - r.ci_lo.unwrap(),
    };
    let mut best = (f64::INFINITY, f64::NAN);
    for row in &scan.rows {
        let s = score(row);
        if s <= threshold {
            return Ok(row.b);
        }
        if s < best.0 {
            best = (s, row.b);
        }
    }
    Err(Error::TargetUnachievable {
        best: best.0,
        parameter: best.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pareto() -> Model {
        Model::pareto(0.5).unwrap()
    }

    #[test]
    fn grids() {
        let g = default_grid();
        assert_eq!(g.len(), 50);
        assert_eq!((g[0], g[49]), (1.0, 100.0));
        assert!((g[1] / g[0] - g[49] / g[48]).abs() < 1e-12);
        assert_eq!(linear_grid(0.0, 1.0, 5).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(log_grid(0.0, 1.0, 5).is_err());
        assert!(linear_grid(1.0, 1.0, 5).is_err());
    }

    #[test]
    fn analytic_pareto_scan() {
        let s = scan_parameter(
            TransformFamily::ReciprocalPower,
            &ScanSource::Analytic(pareto()),
            &[1.0, 2.0, 4.0],
            0.95,
        )
        .unwrap();
        let v = s.variances();
        assert!(v[0] > v[1] && v[1] > v[2]);
        assert!((s.rows[0].u_mean - 2.0).abs() < 1e-14);
        assert!((v[0] - 0.088_888_888_888_888_89).abs() < 1e-15);
        assert_eq!(s.source, SourceKind::Analytic);
        assert!(s.ci_lowers().iter().all(Option::is_none));
    }

    #[test]
    fn grid_outside_range_is_rejected() {
        let r = scan_parameter(
            TransformFamily::ReciprocalPower,
            &ScanSource::Analytic(pareto()),
            &[1.0, -1.0],
            0.95,
        );
        assert!(matches!(r, Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn sample_scan_orders_interval() {
        let x = pareto().sample(500, 9).unwrap();
        let s = scan_parameter(
            TransformFamily::ReciprocalPower,
            &ScanSource::Sample(x),
            &default_grid(),
            0.95,
        )
        .unwrap();
        for r in &s.rows {
            assert!(r.variance >= 0.0);
            assert!(r.ci_lo.unwrap() <= r.u_mean && r.u_mean <= r.ci_hi.unwrap());
        }
    }

    #[test]
    fn replicated_scan_is_deterministic() {
        let src = ScanSource::Replicated {
            model: pareto(),
            n: 200,
            reps: 40,
            seed: 123,
        };
        let grid = [1.0, 3.0, 10.0];
        let a = scan_parameter(TransformFamily::ReciprocalPower, &src, &grid, 0.9).unwrap();
        let b = scan_parameter(TransformFamily::ReciprocalPower, &src, &grid, 0.9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.source, SourceKind::Replicated(40));
    }

    #[test]
    fn crossing_root() {
        let xi = crossing_xi_star();
        assert!(((xi + 1.0).powi(4) - (2.0 * xi + 1.0).powi(3)).abs() < 1e-6);
        assert!((xi - 5.222_262_523_120_399).abs() < 1e-10);
    }

    #[test]
    fn crossing_extremum_matches_root() {
        let r = find_variance_extremum(
            TransformFamily::ExpInverse,
            &Model::first_passage(2.0).unwrap(),
            Interval::closed(1.0, 200.0).unwrap(),
        )
        .unwrap();
        assert_eq!(r.kind, ExtremumKind::InteriorCriticalPoint);
        assert!(r.local_maximum);
        assert!((r.parameter_star / 4.0 - crossing_xi_star()).abs() < 1e-8);
        assert!((r.golden_estimate - r.parameter_star).abs() < 1e-6 * r.parameter_star);
        assert!(r.gradient_at_star.abs() < 1e-10);
    }

    #[test]
    fn stable_closed_form() {
        assert!((stable_b_e(0.5).unwrap() - 0.350_035_672_310_863).abs() < 1e-14);
        let near_one = stable_b_e(0.999).unwrap();
        assert!(near_one.is_finite() && (near_one - 0.499_826_559_8).abs() < 1e-8);
        assert!(stable_b_e(1.0).is_err() && stable_b_e(0.0).is_err());
        let m = Model::positive_stable(0.5).unwrap();
        let var = |b| {
            m.u_moments(&Transform::exp_rate(b).unwrap())
                .unwrap()
                .variance
        };
        let be = stable_b_e(0.5).unwrap();
        assert!(var(be) >= var(0.5 * be) && var(be) >= var(2.0 * be));
    }

    #[test]
    fn pareto_extremum_is_boundary() {
        let r = find_variance_extremum(
            TransformFamily::ReciprocalPower,
            &pareto(),
            Interval::closed(1.0, 100.0).unwrap(),
        )
        .unwrap();
        assert_eq!(r.kind, ExtremumKind::Boundary);
        assert_eq!(r.parameter_star, 100.0);
    }

    #[test]
    fn pareto_variance_peaks_at_golden_multiple() {
        // d/db ln Var = 0 reduces to b^2 - alpha b - alpha^2 = 0.
        let alpha = 2.0;
        let r = find_variance_extremum(
            TransformFamily::ReciprocalPower,
            &Model::pareto(alpha).unwrap(),
            Interval::closed(0.5, 20.0).unwrap(),
        )
        .unwrap();
        assert_eq!(r.kind, ExtremumKind::InteriorCriticalPoint);
        assert!(r.local_maximum);
        assert!((r.parameter_star - alpha * (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn recommendation_crosses_threshold() {
        let x = pareto().sample(400, 2).unwrap();
        let grid = default_grid();
        let scan = scan_parameter(
            TransformFamily::ReciprocalPower,
            &ScanSource::Sample(x.clone()),
            &grid,
            0.95,
        )
        .unwrap();
        let v = scan.variances();
        let threshold = 0.5 * (v[10] + v[11]);
        let b = recommend_parameter(
            TransformFamily::ReciprocalPower,
            &x,
            Target::MaxVariance(threshold),
            &grid,
            0.95,
        )
        .unwrap();
        let first = scan.rows.iter().find(|r| r.variance <= threshold).unwrap().b;
        assert_eq!(b, first);

        let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
        match recommend_parameter(
            TransformFamily::ReciprocalPower,
            &x,
            Target::MaxVariance(0.5 * min),
            &grid,
            0.95,
        ) {
            Err(Error::TargetUnachievable { best, .. }) => assert_eq!(best, min),
            other => panic!("{other:?}"),
        }
    }
}
