use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use umean::distributions::{pareto_log_likelihood, pareto_mle, student_t_mle, StudentTFit};
use umean::seed::replication_rng;
use umean::special::two_sided_z;
use umean::{
    ci_original, ci_transformed, make_transform, scan_parameter, u_mean, Model, SampleVector,
    ScanResult, ScanSource, Transform, TransformFamily, TransformSpec,
};

use crate::config::{
    EstimateArgs, Figure, FitArgs, FitFamily, ReproduceArgs, ScanArgs, SimulateArgs,
};
use crate::dataset::read_dataset;
use crate::error::{CliError, Result};
use crate::output::{self as out, io_err, open_out, write_json, Column, IntervalRecord, Num};

/// Stream offset for single-sample curves, far above any replication index.
const SINGLE_SAMPLE_STREAM: u64 = 1 << 40;

/// Rewrites a core domain error so it names the 1-based data row.
fn with_row(e: umean::Error) -> CliError {
    match e {
        umean::Error::ObservationOutsideDomain {
            index,
            value,
            domain,
        } => CliError::input(format!(
            "row {}: value {value} lies outside the transform domain {domain}",
            index + 1
        )),
        other => other.into(),
    }
}

fn build_transform(spec: &TransformSpec, data: &SampleVector) -> Result<Transform> {
    if spec.name == "cdf_empirical" {
        if !spec.params.is_empty() {
            return Err(CliError::input("cdf_empirical takes no parameters"));
        }
        return Ok(Transform::empirical_cdf(data)?);
    }
    Ok(make_transform(spec)?)
}

#[derive(Debug, Serialize)]
pub struct EstimateReport {
    pub transform: String,
    pub n: usize,
    pub u_mean: Num,
    pub transformed_mean: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sd_transformed: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub var_transformed: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub var_transformed_biased: Option<Num>,
    pub level: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci_transformed: Option<IntervalRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci_original: Option<IntervalRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci_unavailable: Option<&'static str>,
}

pub fn estimate_report(t: &Transform, x: &SampleVector, level: f64) -> Result<EstimateReport> {
    let est = u_mean(t, x).map_err(with_row)?;
    let d = est.dispersion();
    let (tci, oci) = if d.is_some() {
        let tci = ci_transformed(&est, level)?;
        let oci = ci_original(t, &tci)?;
        (Some((&tci).into()), Some((&oci).into()))
    } else {
        (None, None)
    };
    Ok(EstimateReport {
        transform: t.to_string(),
        n: est.n(),
        u_mean: Num(est.u_mean()),
        transformed_mean: Num(est.transformed_mean()),
        sd_transformed: d.map(|d| Num(d.sd_unbiased)),
        var_transformed: d.map(|d| Num(d.var_unbiased)),
        var_transformed_biased: d.map(|d| Num(d.var_biased)),
        level,
        ci_transformed: tci,
        ci_original: oci,
        ci_unavailable: d
            .is_none()
            .then_some("a confidence interval needs at least two observations"),
    })
}

pub fn estimate(args: &EstimateArgs) -> Result<()> {
    let ds = read_dataset(&args.data)?;
    let t = build_transform(&args.transform, &ds.values)?;
    let report = estimate_report(&t, &ds.values, args.level)?;
    write_json(&report, args.out.as_deref())
}

fn single_sample(model: &Model, n: usize, seed: u64) -> Result<SampleVector> {
    let mut rng = replication_rng(seed, SINGLE_SAMPLE_STREAM + n as u64);
    Ok(SampleVector::new(model.sample_with(&mut rng, n))?)
}

pub fn scan_source(args: &ScanArgs) -> Result<ScanSource> {
    Ok(match (&args.model, &args.data, args.n) {
        (_, Some(path), _) => ScanSource::Sample(read_dataset(path)?.values),
        (Some(model), None, Some(n)) if args.reps == 1 => {
            ScanSource::Sample(single_sample(model, n, args.seed)?)
        }
        (Some(model), None, Some(n)) => ScanSource::Replicated {
            model: model.clone(),
            n,
            reps: args.reps,
            seed: args.seed,
        },
        (Some(model), None, None) => ScanSource::Analytic(model.clone()),
        (None, None, _) => return Err(CliError::input("scan needs --model or --data")),
    })
}

pub fn scan(args: &ScanArgs) -> Result<()> {
    let source = scan_source(args)?;
    let grid = args.grid.points()?;
    let result = scan_parameter(args.transform, &source, &grid, args.level).map_err(with_row)?;
    let path = args.out.as_deref();
    out::write_scan_csv(&result, open_out(path)?)
}

#[derive(Debug, Serialize)]
pub struct ParetoReport {
    pub alpha: f64,
    pub standard_error: f64,
    pub interval: [f64; 2],
}

#[derive(Debug, Serialize)]
pub struct FitReport {
    pub model: &'static str,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pareto: Option<ParetoReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub student_t: Option<StudentTFit>,
    pub log_likelihood: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<EstimateReport>,
    /// Population u-mean of the fitted model under the follow-on transform.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_u_mean: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_u_mean_unavailable: Option<String>,
}

pub fn fit_report(
    family: FitFamily,
    x: &SampleVector,
    transform: Option<&TransformSpec>,
    level: f64,
) -> Result<FitReport> {
    let mut warnings = Vec::new();
    let (name, pareto, student_t, log_likelihood, fitted) = match family {
        FitFamily::Pareto => {
            let alpha = pareto_mle(x).map_err(with_row)?;
            let se = alpha / (x.len() as f64).sqrt();
            let z = two_sided_z(level);
            let report = ParetoReport {
                alpha,
                standard_error: se,
                interval: [alpha - z * se, alpha + z * se],
            };
            if alpha <= 1.0 {
                warnings.push(format!("alpha = {alpha} <= 1: the fitted law has no finite mean"));
            }
            let ll = pareto_log_likelihood(alpha, x);
            ("pareto", Some(report), None, ll, Model::pareto(alpha)?)
        }
        FitFamily::StudentT | FitFamily::LogStudentT => {
            let y = if family == FitFamily::LogStudentT {
                if let Some(i) = x.iter().position(|&v| v <= 0.0) {
                    return Err(CliError::input(format!(
                        "row {}: value {} has no logarithm",
                        i + 1,
                        x[i]
                    )));
                }
                SampleVector::new(x.iter().map(|v| v.ln()).collect())?
            } else {
                x.clone()
            };
            let fit = student_t_mle(&y)?;
            if fit.nu_at_cap {
                warnings.push(format!(
                    "degrees of freedom reached the cap {}; the data look normal",
                    umean::distributions::NU_CAP
                ));
            }
            let ll = fit.log_likelihood;
            let (name, model) = if family == FitFamily::LogStudentT {
                (
                    "log_student_t",
                    Some(Model::log_student_t(fit.nu, fit.location, fit.scale)?),
                )
            } else {
                ("student_t", None)
            };
            return finish_fit(name, x, Some(fit), ll, warnings, model, transform, level);
        }
    };
    let mut r = finish_fit(name, x, student_t, log_likelihood, warnings, Some(fitted), transform, level)?;
    r.pareto = pareto;
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn finish_fit(
    model: &'static str,
    x: &SampleVector,
    student_t: Option<StudentTFit>,
    log_likelihood: f64,
    warnings: Vec<String>,
    fitted: Option<Model>,
    transform: Option<&TransformSpec>,
    level: f64,
) -> Result<FitReport> {
    let mut report = FitReport {
        model,
        n: x.len(),
        pareto: None,
        student_t,
        log_likelihood,
        warnings,
        estimate: None,
        model_u_mean: None,
        model_u_mean_unavailable: None,
    };
    if let Some(spec) = transform {
        let t = build_transform(spec, x)?;
        report.estimate = Some(estimate_report(&t, x, level)?);
        match fitted.map(|m| m.u_moments(&t)) {
            Some(Ok(m)) => report.model_u_mean = Some(Num(m.predictor)),
            Some(Err(e)) => report.model_u_mean_unavailable = Some(e.to_string()),
            None => {}
        }
    }
    Ok(report)
}

pub fn fit(args: &FitArgs) -> Result<()> {
    let ds = read_dataset(&args.data)?;
    let report = fit_report(args.model, &ds.values, args.transform.as_ref(), args.level)?;
    write_json(&report, args.out.as_deref())
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let x = args.model.sample(args.n, args.seed)?;
    let path = args.out.as_deref();
    let mut w = open_out(path)?;
    let write = |w: &mut dyn Write| -> std::io::Result<()> {
        writeln!(w, "x")?;
        for v in x.iter() {
            writeln!(w, "{v}")?;
        }
        w.flush()
    };
    write(&mut w).map_err(io_err(path))
}

/// Curves behind one figure: the population reference plus, for each sample
/// size, one single-sample curve and one replication average.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub analytic: ScanResult,
    pub single: Vec<(usize, ScanResult)>,
    pub averaged: Vec<(usize, ScanResult)>,
}

pub fn compute_bundle(args: &ReproduceArgs) -> Result<Bundle> {
    let grid = args.grid.points()?;
    let family: TransformFamily = args.transform;
    let analytic = scan_parameter(family, &ScanSource::Analytic(args.model.clone()), &grid, args.level)?;
    let mut single = Vec::new();
    let mut averaged = Vec::new();
    for &n in &args.n {
        let x = single_sample(&args.model, n, args.seed)?;
        single.push((n, scan_parameter(family, &ScanSource::Sample(x), &grid, args.level)?));
        let source = ScanSource::Replicated {
            model: args.model.clone(),
            n,
            reps: args.reps,
            seed: args.seed,
        };
        averaged.push((n, scan_parameter(family, &source, &grid, args.level)?));
    }
    Ok(Bundle {
        analytic,
        single,
        averaged,
    })
}

struct FigureColumns {
    analytic: &'static [Column],
    single: &'static [Column],
    averaged: &'static [Column],
}

fn figure_columns(figure: Figure) -> FigureColumns {
    use out::*;
    match figure {
        Figure::VarVsB => FigureColumns {
            analytic: &[B, VARIANCE],
            single: &[B, VARIANCE],
            averaged: &[B, VARIANCE, VARIANCE_SE],
        },
        Figure::MeanVsB => FigureColumns {
            analytic: &[B, U_MEAN, TRANSFORMED_MEAN],
            single: &[B, U_MEAN, TRANSFORMED_MEAN],
            averaged: &[B, U_MEAN, U_MEAN_SE, MEAN_OF_U_MEANS, TRANSFORMED_MEAN],
        },
        Figure::CiVsB => FigureColumns {
            analytic: &[B, U_MEAN],
            single: &[
                B,
                U_MEAN,
                CI_LO,
                CI_HI,
                CI_WIDTH,
                TRANSFORMED_CI_LO,
                TRANSFORMED_CI_HI,
            ],
            averaged: &[
                B,
                U_MEAN,
                CI_LO,
                CI_HI,
                CI_WIDTH,
                TRANSFORMED_CI_LO,
                TRANSFORMED_CI_HI,
            ],
        },
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    figure: &'static str,
    model: String,
    transform: String,
    grid: String,
    sample_sizes: &'a [usize],
    replications: usize,
    replications_default: usize,
    seed: u64,
    level: f64,
    files: Vec<String>,
}

pub fn write_bundle(args: &ReproduceArgs, bundle: &Bundle, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let cols = figure_columns(args.figure);
    let id = args.figure.id();
    let mut tables: Vec<(String, &ScanResult, &[Column])> =
        vec![(format!("{id}_analytic.csv"), &bundle.analytic, cols.analytic)];
    for (n, s) in &bundle.single {
        tables.push((format!("{id}_single_n{n}.csv"), s, cols.single));
    }
    for (n, s) in &bundle.averaged {
        tables.push((format!("{id}_averaged_n{n}.csv"), s, cols.averaged));
    }
    let mut written = Vec::new();
    for (name, scan, columns) in &tables {
        let path = dir.join(name);
        out::write_columns(scan, columns, open_out(Some(&path))?)?;
        written.push(path);
    }
    let manifest = Manifest {
        figure: id,
        model: args.model.to_string(),
        transform: args.transform.to_string(),
        grid: args.grid.to_string(),
        sample_sizes: &args.n,
        replications: args.reps,
        replications_default: umean::calibration::DEFAULT_REPLICATIONS,
        seed: args.seed,
        level: args.level,
        files: tables.into_iter().map(|t| t.0).collect(),
    };
    let path = dir.join(format!("{id}_manifest.json"));
    write_json(&manifest, Some(&path))?;
    written.push(path);
    Ok(written)
}

pub fn reproduce(args: &ReproduceArgs) -> Result<()> {
    let bundle = compute_bundle(args)?;
    for path in write_bundle(args, &bundle, &args.out)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[f64]) -> SampleVector {
        SampleVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn geometric_mean_report() {
        let r = estimate_report(&Transform::log(), &sv(&[1.0, 4.0]), 0.95).unwrap();
        assert!((r.u_mean.0 - 2.0).abs() < 1e-12);
        let ci = r.ci_original.unwrap();
        assert!(ci.lower.0.is_finite() && ci.upper.0.is_finite());
        assert!(r.ci_unavailable.is_none());
    }

    #[test]
    fn single_observation_has_no_interval() {
        let r = estimate_report(&Transform::log(), &sv(&[3.0]), 0.95).unwrap();
        assert!(r.ci_original.is_none() && r.ci_transformed.is_none());
        assert!(r.ci_unavailable.is_some());
        let json = serde_json::to_value(&r).unwrap();
        assert!(json.get("ci_original").is_none());
    }

    #[test]
    fn domain_error_names_row_one() {
        let t = Transform::reciprocal_power(1.0).unwrap();
        let e = estimate_report(&t, &sv(&[-1.0, 2.0]), 0.95).unwrap_err();
        assert!(e.to_string().starts_with("row 1:"), "{e}");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn empirical_cdf_needs_no_parameters() {
        let x = sv(&[1.0, 2.0, 3.0]);
        let spec: TransformSpec = "cdf_empirical".parse().unwrap();
        assert!(build_transform(&spec, &x).is_ok());
    }

    #[test]
    fn pareto_fit_of_zeros_is_degenerate() {
        let e = fit_report(FitFamily::Pareto, &sv(&[0.0, 0.0]), None, 0.95).unwrap_err();
        assert!(matches!(e, CliError::Core(umean::Error::DegenerateData(_))));
    }
}
