//! Synthetic VAR(q) networks with planted directed edges, two-class cohorts
//! derived from them, and edge-recovery scoring of connectivity estimates.

use ndarray::{Array1, Array2};
use rand::Rng as _;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connectivity::{ConnectivityMatrix, Method};
use crate::error::{Error, Result};
use crate::mvpa::metrics::roc_auc;
use crate::rng::{hash64, rng_from_seed};
use crate::timeseries::{SubjectDataset, SubjectRecord, TimeSeriesEnsemble};

pub const MAX_SPECTRAL_RADIUS: f64 = 0.95;
pub const BURN_IN: usize = 200;
const SELF_LAG: f64 = 0.3;
const COEFF_RANGE: (f64, f64) = (0.2, 0.5);
const RADIUS_ITERATIONS: usize = 200;
const BLOWUP: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct VarModel {
    /// `coeffs[l][[j, i]]` is the influence of series `i` at lag `l + 1` on series `j`.
    pub coeffs: Vec<Array2<f64>>,
    pub noise_sd: f64,
    /// `adjacency[[i, j]] == 1` iff series `i` drives series `j` (`i != j`).
    pub adjacency: Array2<u8>,
}

impl VarModel {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn n(&self) -> usize {
        self.coeffs[0].nrows()
    }

    /// The (N·q)×(N·q) companion matrix of the process.
    pub fn companion(&self) -> Array2<f64> {
        let (n, q) = (self.n(), self.order());
        let mut c = Array2::zeros((n * q, n * q));
        for (l, a) in self.coeffs.iter().enumerate() {
            c.slice_mut(ndarray::s![..n, l * n..(l + 1) * n]).assign(a);
        }
        for i in n..n * q {
            c[[i, i - n]] = 1.0;
        }
        c
    }

    fn refresh_adjacency(&mut self) {
        let n = self.n();
        self.adjacency = Array2::from_shape_fn((n, n), |(i, j)| {
            u8::from(i != j && self.coeffs.iter().any(|a| a[[j, i]] != 0.0))
        });
    }

    fn scale(&mut self, factor: f64) {
        for a in &mut self.coeffs {
            a.mapv_inplace(|v| v * factor);
        }
    }

    /// Shrinks all coefficients by a common factor until the spectral radius
    /// bound holds.
    fn stabilize(&mut self) {
        for _ in 0..10_000 {
            let rho = spectral_radius_bound(&self.companion());
            if rho <= MAX_SPECTRAL_RADIUS {
                return;
            }
            self.scale((MAX_SPECTRAL_RADIUS / rho).min(0.99));
        }
    }
}

/// Upper estimate of the spectral radius: `‖C^k‖_F^{1/k}` after `k = 200`
/// power steps applied to the full basis (normalized each step).
///
/// Every matrix norm satisfies `ρ(C)^k ≤ ‖C^k‖`, so the estimate never falls
/// below the true radius.
pub fn spectral_radius_bound(c: &Array2<f64>) -> f64 {
    let mut b = Array2::<f64>::eye(c.nrows());
    let mut log_norm = 0.0;
    for _ in 0..RADIUS_ITERATIONS {
        b = c.dot(&b);
        let s = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        if s == 0.0 {
            return 0.0;
        }
        b /= s;
        log_norm += s.ln();
    }
    (log_norm / RADIUS_ITERATIONS as f64).exp()
}

/// Samples a random stable VAR(q) network.
///
/// Each ordered pair `i → j` is an edge with probability `density`; an edge
/// gets one coefficient, uniform in ±[0.2, 0.5], at a lag drawn uniformly
/// from `1..=q`. Every series has self-coefficient 0.3 at lag 1. The whole
/// model is then shrunk until stable.
pub fn gen_var_model(n: usize, q: usize, density: f64, seed: u64) -> Result<VarModel> {
    if n < 2 || q == 0 {
        return Err(Error::Config(format!("need N >= 2 and q >= 1, got N = {n}, q = {q}")));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Config(format!("density {density} outside [0, 1]")));
    }
    let mut rng = rng_from_seed(seed);
    let mut coeffs = vec![Array2::zeros((n, n)); q];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if rng.random::<f64>() < density {
                let lag = rng.random_range(0..q);
                let mag = rng.random_range(COEFF_RANGE.0..=COEFF_RANGE.1);
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                coeffs[lag][[j, i]] = sign * mag;
            }
        }
    }
    for i in 0..n {
        coeffs[0][[i, i]] = SELF_LAG;
    }
    let mut model = VarModel {
        coeffs,
        noise_sd: 1.0,
        adjacency: Array2::zeros((n, n)),
    };
    model.refresh_adjacency();
    model.stabilize();
    Ok(model)
}

/// Simulates `t` samples after a 200-sample burn-in from a zero start.
pub fn simulate(model: &VarModel, t: usize, seed: u64) -> Result<TimeSeriesEnsemble> {
    let (n, q) = (model.n(), model.order());
    if t < 10 * q {
        return Err(Error::Config(format!("T = {t} must be at least 10·q = {}", 10 * q)));
    }
    let total = BURN_IN + t;
    let mut rng = rng_from_seed(seed);
    let mut x = Array2::<f64>::zeros((n, total));
    for step in 0..total {
        let mut next = Array1::<f64>::zeros(n);
        for (l, a) in model.coeffs.iter().enumerate() {
            if step > l {
                next += &a.dot(&x.column(step - l - 1));
            }
        }
        for v in next.iter_mut() {
            let e: f64 = rng.sample(StandardNormal);
            *v += model.noise_sd * e;
            if v.abs() > BLOWUP {
                return Err(Error::Stability(format!("|x| exceeded {BLOWUP:e} at step {step}")));
            }
        }
        x.column_mut(step).assign(&next);
    }
    TimeSeriesEnsemble::new(x.slice(ndarray::s![.., BURN_IN..]).to_owned())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CohortSpec {
    pub subjects_per_class: usize,
    /// Class-1 subjects scale the strongest quarter of edges by `1 + coupling_delta`.
    pub coupling_delta: f64,
    pub t: usize,
    pub n: usize,
    pub q: usize,
    pub density: f64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SyntheticCohort {
    pub dataset: SubjectDataset,
    pub control_model: VarModel,
    pub case_model: VarModel,
}

/// Off-diagonal edges as `(source, target)`, strongest first (ties by index).
fn edges_by_strength(model: &VarModel) -> Vec<(usize, usize)> {
    let n = model.n();
    let strength = |i: usize, j: usize| {
        model.coeffs.iter().fold(0.0_f64, |m, a| m.max(a[[j, i]].abs()))
    };
    let mut edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| model.adjacency[[i, j]] == 1)
        .collect();
    edges.sort_by(|&(a, b), &(c, d)| strength(c, d).total_cmp(&strength(a, b)));
    edges
}

pub fn gen_cohort(spec: &CohortSpec) -> Result<SyntheticCohort> {
    if spec.coupling_delta <= -1.0 || !spec.coupling_delta.is_finite() {
        return Err(Error::Config(format!("coupling_delta {} must be > -1", spec.coupling_delta)));
    }
    if spec.subjects_per_class == 0 {
        return Err(Error::Config("subjects_per_class must be positive".into()));
    }
    let control_model = gen_var_model(spec.n, spec.q, spec.density, hash64(spec.seed, &[u64::MAX]))?;

    let mut case_model = control_model.clone();
    let edges = edges_by_strength(&control_model);
    let n_mod = (edges.len() as f64 * 0.25).ceil() as usize;
    for &(i, j) in &edges[..n_mod] {
        for a in &mut case_model.coeffs {
            a[[j, i]] *= 1.0 + spec.coupling_delta;
        }
    }
    case_model.stabilize();

    let jobs: Vec<(u8, usize)> = (0..2u8)
        .flat_map(|c| (0..spec.subjects_per_class).map(move |i| (c, i)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(class, idx)| {
            let model = if class == 0 { &control_model } else { &case_model };
            let seed = hash64(spec.seed, &[class as u64, idx as u64]);
            Ok(SubjectRecord {
                subject_id: format!("c{class}_s{idx:03}"),
                label: class,
                ensemble: simulate(model, spec.t, seed)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SyntheticCohort {
        dataset: SubjectDataset::new(records)?,
        control_model,
        case_model,
    })
}

/// ROC AUC of off-diagonal connectivity scores against a ground-truth
/// adjacency. Correlation scores are ranked by magnitude.
pub fn edge_recovery_auc(scores: &ConnectivityMatrix, truth: &Array2<u8>) -> Result<f64> {
    let n = scores.n();
    if truth.dim() != (n, n) {
        return Err(Error::Dimension(format!(
            "scores are {n}x{n}, truth is {:?}",
            truth.dim()
        )));
    }
    let mut s = Vec::with_capacity(n * (n - 1));
    let mut y = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let v = scores.values[[i, j]];
            s.push(match scores.method {
                Method::Lsxgc => v,
                Method::CrossCorrelation => v.abs(),
            });
            y.push(truth[[i, j]]);
        }
    }
    roc_auc(&s, &y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_density_has_only_self_lags() {
        let m = gen_var_model(5, 2, 0.0, 3).unwrap();
        assert!(m.adjacency.iter().all(|&a| a == 0));
        assert_eq!(m.coeffs[0][[2, 2]], SELF_LAG);
        assert!(m.coeffs[1].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn two_series_full_density_is_stable() {
        let m = gen_var_model(2, 1, 1.0, 11).unwrap();
        assert_eq!(m.adjacency, ndarray::array![[0, 1], [1, 0]]);
        // eigenvalues of a 2x2 matrix from the quadratic formula
        let a = &m.coeffs[0];
        let tr = a[[0, 0]] + a[[1, 1]];
        let det = a[[0, 0]] * a[[1, 1]] - a[[0, 1]] * a[[1, 0]];
        let disc = tr * tr / 4.0 - det;
        let rho = if disc >= 0.0 {
            (tr / 2.0).abs() + disc.sqrt()
        } else {
            det.sqrt()
        };
        assert!(rho <= MAX_SPECTRAL_RADIUS + 1e-12, "rho = {rho}");
    }

    #[test]
    fn same_seed_same_model() {
        assert_eq!(gen_var_model(8, 2, 0.3, 5).unwrap(), gen_var_model(8, 2, 0.3, 5).unwrap());
        assert_ne!(gen_var_model(8, 2, 0.3, 5).unwrap(), gen_var_model(8, 2, 0.3, 6).unwrap());
    }

    #[test]
    fn radius_bound_of_diagonal_matrix() {
        let c = Array2::from_diag(&ndarray::array![0.5, -0.8, 0.1]);
        let rho = spectral_radius_bound(&c);
        assert!((0.8..0.81).contains(&rho), "{rho}");
    }

    #[test]
    fn simulate_requires_enough_samples() {
        let m = gen_var_model(3, 2, 0.5, 1).unwrap();
        assert!(matches!(simulate(&m, 19, 0), Err(Error::Config(_))));
        assert_eq!(simulate(&m, 20, 0).unwrap().n_samples(), 20);
    }

    fn lag1_autocorr(x: &[f64]) -> f64 {
        let mu = x.iter().sum::<f64>() / x.len() as f64;
        let num: f64 = x.windows(2).map(|w| (w[0] - mu) * (w[1] - mu)).sum();
        let den: f64 = x.iter().map(|v| (v - mu).powi(2)).sum();
        num / den
    }

    #[test]
    fn white_noise_has_no_autocorrelation() {
        let model = VarModel {
            coeffs: vec![Array2::zeros((2, 2))],
            noise_sd: 1.0,
            adjacency: Array2::zeros((2, 2)),
        };
        let x = simulate(&model, 2000, 9).unwrap();
        for i in 0..2 {
            let r = lag1_autocorr(&x.series(i).to_vec());
            assert!(r.abs() < 0.1, "{r}");
        }
    }

    #[test]
    fn ar1_autocorrelation_near_coefficient() {
        let model = VarModel {
            coeffs: vec![ndarray::array![[0.9, 0.0], [0.0, 0.0]]],
            noise_sd: 1.0,
            adjacency: Array2::zeros((2, 2)),
        };
        let x = simulate(&model, 5000, 4).unwrap();
        let r = lag1_autocorr(&x.series(0).to_vec());
        assert!((0.85..=0.95).contains(&r), "{r}");
    }

    #[test]
    fn cohort_shape_and_determinism() {
        let spec = CohortSpec {
            subjects_per_class: 63,
            coupling_delta: 0.5,
            t: 40,
            n: 4,
            q: 1,
            density: 0.5,
            seed: 2,
        };
        let a = gen_cohort(&spec).unwrap();
        let b = gen_cohort(&spec).unwrap();
        assert_eq!(a.dataset.len(), 126);
        assert_eq!(a.dataset.labels().iter().filter(|&&l| l == 1).count(), 63);
        for (ra, rb) in a.dataset.records().iter().zip(b.dataset.records()) {
            assert_eq!(ra.ensemble, rb.ensemble);
        }
        assert_eq!(a.control_model.adjacency, a.case_model.adjacency);
    }

    #[test]
    fn edge_recovery_extremes() {
        let truth = ndarray::array![[0u8, 1, 0], [0, 0, 1], [1, 0, 0]];
        let mut conn = ConnectivityMatrix {
            values: truth.mapv(f64::from),
            method: Method::Lsxgc,
            config: None,
            roi_names: vec![],
            warnings: vec![],
        };
        assert_eq!(edge_recovery_auc(&conn, &truth).unwrap(), 1.0);
        conn.values.mapv_inplace(|v| -v);
        assert_eq!(edge_recovery_auc(&conn, &truth).unwrap(), 0.0);
        let empty = Array2::<u8>::zeros((3, 3));
        assert!(matches!(edge_recovery_auc(&conn, &empty), Err(Error::UndefinedMetric(_))));
    }
}
