//! Command-line arguments.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use umean::calibration::{linear_grid, log_grid};
use umean::{Model, TransformFamily, TransformSpec};

#[derive(Debug, Parser)]
#[command(name = "umean", version, about = "Generalized-mean estimation for heavy-tailed data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// u-mean, transformed dispersion and confidence intervals for a dataset (JSON).
    Estimate(EstimateArgs),
    /// Variance and u-mean over a grid of transform parameters (CSV).
    Scan(ScanArgs),
    /// Maximum-likelihood fit of a parametric model to a dataset (JSON).
    Fit(FitArgs),
    /// Draw a sample from a model (CSV with header `x`).
    Simulate(SimulateArgs),
    /// Write the curve tables behind one of the calibration figures.
    Reproduce(ReproduceArgs),
}

fn level_in_unit(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err("level must lie strictly between 0 and 1".into())
    }
}

fn at_least_two(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v >= 2 {
        Ok(v)
    } else {
        Err("must be at least 2".into())
    }
}

fn positive_count(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v >= 1 {
        Ok(v)
    } else {
        Err("must be at least 1".into())
    }
}

fn parse_core<T: FromStr<Err = umean::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: umean::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Transform as `name:params`, e.g. `reciprocal_power:1` or `log`.
    #[arg(long, value_parser = parse_core::<TransformSpec>)]
    pub transform: TransformSpec,
    #[arg(long, default_value_t = 0.95, value_parser = level_in_unit)]
    pub level: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `lo:hi:n` or `lo:hi:n:log`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn points(&self) -> umean::Result<Vec<f64>> {
        if self.log {
            log_grid(self.lo, self.hi, self.n)
        } else {
            linear_grid(self.lo, self.hi, self.n)
        }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            lo: 1.0,
            hi: 100.0,
            n: 50,
            log: true,
        }
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || format!("grid {s:?} is not lo:hi:n[:log]");
        let log = match parts.len() {
            3 => false,
            4 if parts[3] == "log" => true,
            _ => return Err(bad()),
        };
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) || n < 2 || (log && lo <= 0.0) {
            return Err(format!(
                "grid {s:?}: need finite lo < hi, n >= 2 and lo > 0 for log spacing"
            ));
        }
        Ok(Self { lo, hi, n, log })
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.n)?;
        if self.log {
            f.write_str(":log")?;
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Transform family, e.g. `reciprocal_power` or `student_kernel:2`.
    #[arg(long, default_value = "reciprocal_power", value_parser = parse_core::<TransformFamily>)]
    pub transform: TransformFamily,
    /// Model as `name:params`. Alone it gives the population curve; with
    /// `--n` it drives simulated samples.
    #[arg(long, value_parser = parse_core::<Model>, conflicts_with = "data")]
    pub model: Option<Model>,
    /// Dataset for a single-sample curve.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, default_value_t = GridSpec::default())]
    pub grid: GridSpec,
    /// Sample size for simulated curves.
    #[arg(long, requires = "model", value_parser = at_least_two)]
    pub n: Option<usize>,
    /// Number of simulated samples averaged; 1 gives a single-sample curve.
    #[arg(long, requires = "n", default_value_t = umean::calibration::DEFAULT_REPLICATIONS, value_parser = positive_count)]
    pub reps: usize,
    #[arg(long, default_value_t = 0.95, value_parser = level_in_unit)]
    pub level: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitFamily {
    /// Shifted Pareto on `[0, inf)`.
    Pareto,
    /// Location-scale Student-t on the raw values.
    StudentT,
    /// Student-t on the natural logarithm of the values.
    LogStudentT,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum)]
    pub model: FitFamily,
    /// Optional follow-on estimate with this transform.
    #[arg(long, value_parser = parse_core::<TransformSpec>)]
    pub transform: Option<TransformSpec>,
    #[arg(long, default_value_t = 0.95, value_parser = level_in_unit)]
    pub level: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_parser = parse_core::<Model>)]
    pub model: Model,
    #[arg(long, value_parser = positive_count)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    VarVsB,
    MeanVsB,
    CiVsB,
}

impl Figure {
    pub fn id(self) -> &'static str {
        match self {
            Self::VarVsB => "var-vs-b",
            Self::MeanVsB => "mean-vs-b",
            Self::CiVsB => "ci-vs-b",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    #[arg(long, default_value = "pareto:0.5", value_parser = parse_core::<Model>)]
    pub model: Model,
    #[arg(long, default_value = "reciprocal_power", value_parser = parse_core::<TransformFamily>)]
    pub transform: TransformFamily,
    #[arg(long, default_value_t = GridSpec::default())]
    pub grid: GridSpec,
    /// Sample sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [100, 500, 1000, 5000], value_parser = at_least_two)]
    pub n: Vec<usize>,
    /// Replications per averaged curve. Smaller counts trade precision for
    /// time; the standard errors scale as `1/sqrt(reps)`.
    #[arg(long, default_value_t = umean::calibration::DEFAULT_REPLICATIONS, value_parser = at_least_two)]
    pub reps: usize,
    #[arg(long, default_value_t = 0.95, value_parser = level_in_unit)]
    pub level: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn grid_specs() {
        let g: GridSpec = "1:100:50:log".parse().unwrap();
        assert_eq!(g, GridSpec::default());
        assert_eq!(g.to_string().parse::<GridSpec>().unwrap(), g);
        assert!(!"0:1:5".parse::<GridSpec>().unwrap().log);
        for bad in ["0:1:5:log", "1:1:5", "1:2", "1:2:1", "a:2:3", "1:2:3:lin"] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn levels() {
        assert!(level_in_unit("0.9").is_ok());
        assert!(level_in_unit("1").is_err() && level_in_unit("0").is_err());
    }
}
