//! Directed functional connectivity with large-scale extended Granger
//! causality (lsXGC), a zero-lag correlation baseline, synthetic VAR cohorts
//! with known ground truth, and a connectivity-feature classification
//! pipeline (Kendall tau-b selection, linear LS-SVM, repeated stratified
//! hold-out).

pub mod connectivity;
pub mod error;
pub mod io;
pub mod linalg;
pub mod mvpa;
pub mod report;
pub mod rng;
pub mod synth;
pub mod timeseries;

pub use connectivity::{
    build_lag_vectorization, connectivity, cross_correlation_matrix, lsxgc_matrix, ConnectivityMatrix, LsxgcConfig,
    Method, SignConvention,
};
pub use error::{Error, Result};
pub use linalg::{least_squares_affine, pca_fit, solve_symmetric, AffineFit, PcaResult, Ridge};
pub use mvpa::{run_cv, CvConfig, CvReport};
pub use synth::{edge_recovery_auc, gen_cohort, gen_var_model, simulate, CohortSpec, SyntheticCohort, VarModel};
pub use timeseries::{Label, SubjectDataset, SubjectRecord, TimeSeriesEnsemble};
