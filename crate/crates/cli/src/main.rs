mod args;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Parser;
use lsxgc::io::{load_dataset_manifest, load_matrix, write_matrix_binary, write_matrix_csv, Manifest, ManifestEntry};
use lsxgc::mvpa::cv::SCHEMA_VERSION;
use lsxgc::report::{comparison_csv, comparison_svg};
use lsxgc::{connectivity, gen_cohort, run_cv, CohortSpec, CvConfig, CvReport, LsxgcConfig, Method};
use serde::Serialize;

use args::{Cli, Command, ConnectivityArgs, MvpaArgs, ReportArgs, SimulateArgs};
use output::{write_atomic, write_json};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help / --version exit 0, usage errors exit 2
            e.exit();
        }
    };
    env_logger::Builder::new()
        .filter_level(cli.log_level)
        .format_timestamp(None)
        .init();

    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(1);
    }

    let result = match &cli.command {
        Command::Connectivity(a) => run_connectivity(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Mvpa(a) => run_mvpa(a),
        Command::Report(a) => run_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn sidecar_path(output: &Path) -> PathBuf {
    let candidate = output.with_extension("json");
    if candidate == output {
        let mut s = output.as_os_str().to_owned();
        s.push(".meta.json");
        PathBuf::from(s)
    } else {
        candidate
    }
}

#[derive(Serialize)]
struct ConnectivitySidecar<'a> {
    schema_version: &'static str,
    method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    config: Option<LsxgcConfig>,
    input: String,
    n: usize,
    t: usize,
    roi_names: &'a [String],
    warnings: &'a [String],
    timing_ms: f64,
}

fn run_connectivity(a: &ConnectivityArgs) -> Result<()> {
    let method: Method = a.estimator.method.into();
    let cfg = a.estimator.config();
    let x = load_matrix(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    log::info!("{}: {} series x {} samples", a.input.display(), x.n_series(), x.n_samples());

    let start = Instant::now();
    let conn = connectivity(&x, method, &cfg)?;
    let timing_ms = start.elapsed().as_secs_f64() * 1e3;
    for w in &conn.warnings {
        log::warn!("{w}");
    }

    let mut csv = Vec::new();
    write_matrix_csv(&conn.values, &mut csv)?;
    write_atomic(&a.output, &csv)?;
    let sidecar = ConnectivitySidecar {
        schema_version: SCHEMA_VERSION,
        method,
        config: conn.config,
        input: a.input.display().to_string(),
        n: x.n_series(),
        t: x.n_samples(),
        roi_names: &conn.roi_names,
        warnings: &conn.warnings,
        timing_ms,
    };
    write_json(&sidecar_path(&a.output), &sidecar)?;
    log::info!("wrote {} ({timing_ms:.1} ms)", a.output.display());
    Ok(())
}

#[derive(Serialize)]
struct SimulatedManifest {
    schema_version: &'static str,
    cohort: CohortSpec,
    #[serde(flatten)]
    manifest: Manifest,
}

fn run_simulate(a: &SimulateArgs) -> Result<()> {
    let spec = CohortSpec {
        subjects_per_class: a.subjects_per_class,
        coupling_delta: a.coupling_delta,
        t: a.t,
        n: a.n,
        q: a.q,
        density: a.density,
        seed: a.seed,
    };
    let cohort = gen_cohort(&spec)?;
    let ext = if a.binary { "bin" } else { "csv" };
    let mut entries = Vec::with_capacity(cohort.dataset.len());
    for r in cohort.dataset.records() {
        let rel = PathBuf::from("subjects").join(format!("{}.{ext}", r.subject_id));
        let mut buf = Vec::new();
        if a.binary {
            write_matrix_binary(r.ensemble.data(), &mut buf)?;
        } else {
            write_matrix_csv(r.ensemble.data(), &mut buf)?;
        }
        write_atomic(&a.out_dir.join(&rel), &buf)?;
        entries.push(ManifestEntry {
            id: r.subject_id.clone(),
            label: i64::from(r.label),
            path: rel,
        });
    }
    let mut adjacency = Vec::new();
    write_matrix_csv(&cohort.control_model.adjacency.mapv(f64::from), &mut adjacency)?;
    write_atomic(&a.out_dir.join("adjacency.csv"), &adjacency)?;
    write_json(
        &a.out_dir.join("manifest.json"),
        &SimulatedManifest {
            schema_version: SCHEMA_VERSION,
            cohort: spec,
            manifest: Manifest { subjects: entries },
        },
    )?;
    let n_edges = cohort.control_model.adjacency.iter().filter(|&&v| v == 1).count();
    log::info!(
        "wrote {} subjects ({n_edges} planted edges) to {}",
        cohort.dataset.len(),
        a.out_dir.display()
    );
    Ok(())
}

fn run_mvpa(a: &MvpaArgs) -> Result<()> {
    let cfg = CvConfig {
        method: a.estimator.method.into(),
        lsxgc: a.estimator.config(),
        feature_counts: a.features.0.clone(),
        n_splits: a.splits as usize,
        test_fraction: a.test_frac,
        gamma: a.gamma,
        seed: a.seed,
    };
    let dataset = load_dataset_manifest(&a.manifest)?;
    log::info!("{} subjects, {} series each", dataset.len(), dataset.n_series());
    let report = run_cv(&dataset, &cfg)?;
    for w in &report.warnings {
        log::warn!("{w}");
    }
    if let Some(best) = report.best() {
        log::info!(
            "{}: best mean AUC {:.3} ± {:.3} at k = {}",
            cfg.method,
            best.mean_auc,
            best.ci95_auc,
            best.k
        );
    }
    write_json(&a.out, &report)
}

fn run_report(a: &ReportArgs) -> Result<()> {
    let mut series = Vec::new();
    for path in &a.inputs {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let report: CvReport =
            serde_json::from_str(&text).with_context(|| format!("{} is not a cross-validation report", path.display()))?;
        series.push((report.config.cv.method.to_string(), report));
    }
    let mut seen = std::collections::HashSet::new();
    if !series.iter().all(|(name, _)| seen.insert(name.clone())) {
        for ((name, _), path) in series.iter_mut().zip(&a.inputs) {
            *name = path.file_stem().map_or_else(|| name.clone(), |s| s.to_string_lossy().into_owned());
        }
    }
    write_atomic(&a.out, comparison_svg(&series).as_bytes())?;
    if let Some(csv) = &a.csv {
        write_atomic(csv, comparison_csv(&series).as_bytes())?;
    }
    log::info!("wrote {}", a.out.display());
    Ok(())
}
