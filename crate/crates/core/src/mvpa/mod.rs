//! Connectivity-based classification: feature vectorization, Kendall tau-b
//! ranking, a linear least-squares SVM, stratified resampling and metrics.

pub mod cv;
pub mod features;
pub mod kendall;
pub mod lssvm;
pub mod metrics;
pub mod split;

pub use cv::{fit_split, run_cv, run_cv_on_table, CvConfig, CvReport, KSummary, SplitScore};
pub use features::{rank_features, vectorize, FeatureTable, TauRanking};
pub use kendall::kendall_tau_b;
pub use lssvm::LssvmModel;
pub use metrics::{accuracy, mean_ci95, roc_auc};
pub use split::{stratified_split, Split};
