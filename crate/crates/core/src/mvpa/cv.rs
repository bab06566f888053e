//! Repeated stratified hold-out evaluation of the connectivity classifier.
//!
//! Connectivity is computed once per subject. Each split then ranks features
//! by |tau| on its training subjects only, z-scores the selected features
//! with training statistics, fits the LS-SVM and scores the held-out
//! subjects by decision value.

use ndarray::{Array2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connectivity::{connectivity, LsxgcConfig, Method};
use crate::error::{Error, Result};
use crate::mvpa::features::{rank_features, FeatureTable, TauRanking};
use crate::mvpa::lssvm::LssvmModel;
use crate::mvpa::metrics::{accuracy, mean_ci95, roc_auc};
use crate::mvpa::split::{stratified_split, Split};
use crate::rng::hash64;
use crate::timeseries::SubjectDataset;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    pub method: Method,
    pub lsxgc: LsxgcConfig,
    pub feature_counts: Vec<usize>,
    pub n_splits: usize,
    pub test_fraction: f64,
    pub gamma: f64,
    pub seed: u64,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            method: Method::Lsxgc,
            lsxgc: LsxgcConfig::default(),
            feature_counts: (5..=175).step_by(5).collect(),
            n_splits: 100,
            test_fraction: 0.1,
            gamma: 1.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitScore {
    pub split: usize,
    pub accuracy: f64,
    pub auc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSummary {
    pub k: usize,
    /// `k` capped at the number of available features.
    pub k_used: usize,
    pub mean_auc: f64,
    pub ci95_auc: f64,
    pub mean_accuracy: f64,
    pub ci95_accuracy: f64,
    pub per_split: Vec<SplitScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    #[serde(flatten)]
    pub cv: CvConfig,
    pub n_subjects: usize,
    pub n_features: usize,
}

/// Per-k summaries; `ci95_*` are half-widths of `mean ± 1.96·sd/√n_splits`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub schema_version: String,
    pub config: ReportConfig,
    pub per_k: Vec<KSummary>,
    pub warnings: Vec<String>,
}

impl CvReport {
    pub fn best(&self) -> Option<&KSummary> {
        self.per_k.iter().max_by(|a, b| a.mean_auc.total_cmp(&b.mean_auc))
    }
}

#[derive(Debug, Clone)]
pub struct KFit {
    pub k: usize,
    /// Selected feature indices, best first.
    pub selected: Vec<usize>,
    pub model: LssvmModel,
    /// Decision values of the test subjects, in `split.test` order.
    pub decision: Vec<f64>,
    pub accuracy: f64,
    pub auc: f64,
}

#[derive(Debug, Clone)]
pub struct SplitFit {
    pub ranking: TauRanking,
    /// One entry per requested `k`, in request order.
    pub per_k: Vec<KFit>,
}

/// Trains and scores one split for every `k` in `ks` (each `1..=F`).
///
/// Only rows in `split.train` influence ranking, scaling and training.
pub fn fit_split(table: &FeatureTable, split: &Split, ks: &[usize], gamma: f64) -> Result<SplitFit> {
    let f = table.n_features();
    if let Some(&bad) = ks.iter().find(|&&k| k == 0 || k > f) {
        return Err(Error::Config(format!("feature count {bad} outside 1..={f}")));
    }
    let train = table.subset(&split.train);
    let test = table.subset(&split.test);
    let ranking = rank_features(&train)?;
    let k_max = ks.iter().copied().max().unwrap_or(0);
    let top = &ranking.order[..k_max];

    let mut xtr = train.rows.select(Axis(1), top);
    let mut xte = test.rows.select(Axis(1), top);
    zscore_with_train_stats(&mut xtr, &mut xte);

    let mut sorted: Vec<usize> = ks.to_vec();
    sorted.sort_unstable();
    sorted.dedup();

    // linear kernel grown one feature block at a time
    let n_train = xtr.nrows();
    let mut gram = Array2::<f64>::zeros((n_train, n_train));
    let mut done = 0;
    let mut fits: Vec<KFit> = Vec::with_capacity(sorted.len());
    for &k in &sorted {
        for j in done..k {
            let col = xtr.column(j);
            for a in 0..n_train {
                let ca = col[a];
                if ca == 0.0 {
                    continue;
                }
                for b in 0..n_train {
                    gram[[a, b]] += ca * col[b];
                }
            }
        }
        done = k;
        let feats = xtr.slice(ndarray::s![.., ..k]);
        let model = LssvmModel::train_with_gram(feats, &gram, &train.labels, gamma)?;
        let decision = model.decision(xte.slice(ndarray::s![.., ..k]));
        let predicted: Vec<u8> = decision.iter().map(|&d| u8::from(d > 0.0)).collect();
        fits.push(KFit {
            k,
            selected: top[..k].to_vec(),
            model,
            accuracy: accuracy(&predicted, &test.labels),
            auc: roc_auc(&decision, &test.labels)?,
            decision,
        });
    }
    let per_k = ks
        .iter()
        .map(|k| fits[sorted.binary_search(k).expect("k present")].clone())
        .collect();
    Ok(SplitFit { ranking, per_k })
}

/// Standardizes columns with the training mean and population sd; columns
/// constant on the training rows become zero in both matrices.
fn zscore_with_train_stats(train: &mut Array2<f64>, test: &mut Array2<f64>) {
    let n = train.nrows() as f64;
    for j in 0..train.ncols() {
        let mean = train.column(j).sum() / n;
        let var = train.column(j).iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let sd = var.sqrt();
        if sd > 0.0 {
            train.column_mut(j).mapv_inplace(|v| (v - mean) / sd);
            test.column_mut(j).mapv_inplace(|v| (v - mean) / sd);
        } else {
            train.column_mut(j).fill(0.0);
            test.column_mut(j).fill(0.0);
        }
    }
}

/// Computes connectivity for every subject (in parallel, in dataset order)
/// and runs the cross-validation.
pub fn run_cv(dataset: &SubjectDataset, cfg: &CvConfig) -> Result<CvReport> {
    let conns = dataset
        .records()
        .par_iter()
        .map(|r| {
            connectivity(&r.ensemble, cfg.method, &cfg.lsxgc).map_err(|e| Error::Subject {
                subject: r.subject_id.clone(),
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut warnings: Vec<String> = dataset
        .records()
        .iter()
        .zip(&conns)
        .flat_map(|(r, c)| c.warnings.iter().map(move |w| format!("{}: {w}", r.subject_id)))
        .collect();
    let table = FeatureTable::from_connectivity(&conns, &dataset.labels())?;
    let mut report = run_cv_on_table(&table, cfg)?;
    warnings.append(&mut report.warnings);
    report.warnings = warnings;
    Ok(report)
}

pub fn run_cv_on_table(table: &FeatureTable, cfg: &CvConfig) -> Result<CvReport> {
    if cfg.feature_counts.is_empty() || cfg.feature_counts.contains(&0) {
        return Err(Error::Config("feature counts must be a non-empty list of positive integers".into()));
    }
    if cfg.n_splits == 0 {
        return Err(Error::Config("n_splits must be positive".into()));
    }
    let f = table.n_features();
    let mut warnings = Vec::new();
    let ks: Vec<usize> = cfg.feature_counts.iter().map(|&k| k.min(f)).collect();
    if cfg.feature_counts.iter().any(|&k| k > f) {
        warnings.push(format!("feature counts above {f} use all {f} features"));
    }

    let splits = (0..cfg.n_splits)
        .into_par_iter()
        .map(|s| {
            let wrap = |e| Error::CvSplit { split: s, source: Box::new(e) };
            let split = stratified_split(&table.labels, cfg.test_fraction, hash64(cfg.seed, &[s as u64])).map_err(wrap)?;
            let fit = fit_split(table, &split, &ks, cfg.gamma).map_err(wrap)?;
            Ok(fit.per_k.into_iter().map(|k| (k.accuracy, k.auc)).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;

    let per_k = cfg
        .feature_counts
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let per_split: Vec<SplitScore> = splits
                .iter()
                .enumerate()
                .map(|(s, scores)| SplitScore {
                    split: s,
                    accuracy: scores[i].0,
                    auc: scores[i].1,
                })
                .collect();
            let accs: Vec<f64> = per_split.iter().map(|s| s.accuracy).collect();
            let aucs: Vec<f64> = per_split.iter().map(|s| s.auc).collect();
            let (mean_accuracy, ci95_accuracy) = mean_ci95(&accs);
            let (mean_auc, ci95_auc) = mean_ci95(&aucs);
            KSummary {
                k,
                k_used: ks[i],
                mean_auc,
                ci95_auc,
                mean_accuracy,
                ci95_accuracy,
                per_split,
            }
        })
        .collect();

    Ok(CvReport {
        schema_version: SCHEMA_VERSION.into(),
        config: ReportConfig {
            cv: cfg.clone(),
            n_subjects: table.n_subjects(),
            n_features: f,
        },
        per_k,
        warnings,
    })
}
