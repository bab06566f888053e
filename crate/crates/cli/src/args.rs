use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lsxgc::{LsxgcConfig, Method, Ridge, SignConvention};

#[derive(Debug, Parser)]
#[command(name = "lsxgc", version, about = "Directed connectivity (lsXGC) and connectivity-based classification")]
pub struct Cli {
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, env = "LSXGC_THREADS", default_value_t = 0)]
    pub threads: usize,

    #[arg(long, global = true, default_value = "info")]
    pub log_level: log::LevelFilter,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate an N×N connectivity matrix from one ROI time-series matrix.
    Connectivity(ConnectivityArgs),
    /// Generate a synthetic two-class VAR cohort with ground truth.
    Simulate(SimulateArgs),
    /// Cross-validate connectivity-feature classification on a cohort.
    Mvpa(MvpaArgs),
    /// Plot one or more cross-validation reports side by side.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Lsxgc,
    Correlation,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Lsxgc => Method::Lsxgc,
            MethodArg::Correlation => Method::CrossCorrelation,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SignArg {
    Standard,
    PaperLiteral,
}

#[derive(Debug, Args)]
pub struct EstimatorArgs {
    #[arg(long, value_enum, default_value = "lsxgc")]
    pub method: MethodArg,
    /// Retained principal components.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub p: u64,
    /// Model order (lags).
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    #[arg(long, value_enum, default_value = "standard")]
    pub sign: SignArg,
    /// Skip per-series z-scoring before estimation.
    #[arg(long)]
    pub no_standardize: bool,
    /// Ridge relative to the mean Gram diagonal.
    #[arg(long, default_value_t = 1e-8, value_parser = non_negative)]
    pub ridge: f64,
}

impl EstimatorArgs {
    pub fn config(&self) -> LsxgcConfig {
        LsxgcConfig {
            p: self.p as usize,
            m: self.m as usize,
            sign_convention: match self.sign {
                SignArg::Standard => SignConvention::Standard,
                SignArg::PaperLiteral => SignConvention::PaperLiteral,
            },
            ridge: Ridge::Relative(self.ridge),
            standardize_input: !self.no_standardize,
        }
    }
}

#[derive(Debug, Args)]
pub struct ConnectivityArgs {
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    /// CSV (rows = series) or LSXGCMAT binary matrix.
    #[arg(long)]
    pub input: PathBuf,
    /// Output CSV; a JSON sidecar is written next to it.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 15)]
    pub n: usize,
    #[arg(long, default_value_t = 400)]
    pub t: usize,
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    #[arg(long, default_value_t = 0.15, value_parser = unit_interval)]
    pub density: f64,
    #[arg(long, default_value_t = 63)]
    pub subjects_per_class: usize,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub coupling_delta: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Write subject matrices in the LSXGCMAT binary format.
    #[arg(long)]
    pub binary: bool,
}

#[derive(Debug, Args)]
pub struct MvpaArgs {
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub splits: u64,
    #[arg(long, default_value_t = 0.1, value_parser = open_unit_interval)]
    pub test_frac: f64,
    /// Feature counts as `start:end:step` or a comma list.
    #[arg(long, default_value = "5:175:5", value_parser = feature_counts)]
    pub features: FeatureCounts,
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Cross-validation report JSON files.
    #[arg(long = "in", num_args = 1.., required = true)]
    pub inputs: Vec<PathBuf>,
    /// Output SVG chart.
    #[arg(long)]
    pub out: PathBuf,
    /// Output CSV with the plotted values.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureCounts(pub Vec<usize>);

fn feature_counts(s: &str) -> Result<FeatureCounts, String> {
    let bad = || format!("expected start:end:step or a comma list of positive integers, got {s:?}");
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| bad());
    let counts: Vec<usize> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, end, step] = parts.as_slice() else {
            return Err(bad());
        };
        let (start, end, step) = (parse(start)?, parse(end)?, parse(step)?);
        if step == 0 || start > end {
            return Err(bad());
        }
        (start..=end).step_by(step).collect()
    } else {
        s.split(',').map(parse).collect::<Result<_, _>>()?
    };
    if counts.is_empty() || counts.contains(&0) {
        return Err(bad());
    }
    Ok(FeatureCounts(counts))
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|e| e.to_string())
}

fn positive(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 && v.is_finite() { Ok(v) } else { Err(format!("{v} is not positive")) }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v >= 0.0 && v.is_finite() { Ok(v) } else { Err(format!("{v} is negative")) }
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if (0.0..=1.0).contains(&v) { Ok(v) } else { Err(format!("{v} is outside [0, 1]")) }
}

fn open_unit_interval(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 && v < 1.0 { Ok(v) } else { Err(format!("{v} is outside (0, 1)")) }
}
