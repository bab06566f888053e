//! Shared fixtures for the benchmarks.

use lsxgc::{gen_cohort, gen_var_model, simulate, CohortSpec, SubjectDataset, TimeSeriesEnsemble};

/// A simulated VAR(2) ensemble of `n` series and `t` samples.
pub fn var_ensemble(n: usize, t: usize, seed: u64) -> TimeSeriesEnsemble {
    let model = gen_var_model(n, 2, 0.15, seed).expect("valid model parameters");
    simulate(&model, t, seed ^ 0x5eed).expect("stable model")
}

/// A balanced two-class cohort with a strong coupling difference.
pub fn cohort(subjects_per_class: usize, n: usize, t: usize) -> SubjectDataset {
    gen_cohort(&CohortSpec {
        subjects_per_class,
        coupling_delta: 1.0,
        t,
        n,
        q: 2,
        density: 0.15,
        seed: 7,
    })
    .expect("valid cohort spec")
    .dataset
}
