//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the library's numerical kernels: eigenproblems
//! and least squares go through nalgebra, and rank statistics are counted
//! pair by pair.

#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| rng.sample(StandardNormal))
}

pub fn to_na(a: &Array2<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

/// Sample covariance (rows as variables) by explicit summation, then a
/// nalgebra symmetric eigensolve. Eigenvalues descending; eigenvectors as
/// rows in matching order.
pub fn covariance_eigen(x: &Array2<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let (n, t) = x.dim();
    let means: Vec<f64> = (0..n).map(|i| (0..t).map(|j| x[[i, j]]).sum::<f64>() / t as f64).collect();
    let mut cov = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut s = 0.0;
            for j in 0..t {
                s += (x[[a, j]] - means[a]) * (x[[b, j]] - means[b]);
            }
            cov[(a, b)] = s / (t as f64 - 1.0);
        }
    }
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(c, order[r])]);
    (values, vectors)
}

/// sin of the largest principal angle between the row spaces of `a` and `b`
/// (both with orthonormal rows).
pub fn max_principal_angle_sin(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let proj = b.transpose() * (b * a.transpose());
    let resid = a.transpose() - proj;
    resid.svd(false, false).singular_values.max()
}

/// Residual Frobenius norm of the minimum-norm least-squares affine fit,
/// via the pseudoinverse of the design augmented with a row of ones.
pub fn pseudoinverse_affine_residual(design: &Array2<f64>, targets: &Array2<f64>) -> f64 {
    let (d, t) = design.dim();
    let aug = DMatrix::from_fn(d + 1, t, |i, j| if i == d { 1.0 } else { design[[i, j]] });
    let pinv = aug.clone().pseudo_inverse(1e-12).expect("svd converges");
    let tg = to_na(targets);
    let coef = &tg * pinv;
    (tg - coef * aug).norm()
}

/// Kendall tau-b by enumerating every pair.
pub fn kendall_pairs(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let (mut c, mut d, mut tx, mut ty) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let dx = x[i] - x[j];
            let dy = y[i] - y[j];
            if dx == 0.0 && dy == 0.0 {
                tx += 1;
                ty += 1;
            } else if dx == 0.0 {
                tx += 1;
            } else if dy == 0.0 {
                ty += 1;
            } else if (dx > 0.0) == (dy > 0.0) {
                c += 1;
            } else {
                d += 1;
            }
        }
    }
    let n0 = (n * (n - 1) / 2) as i64;
    let den = ((n0 - tx) as f64) * ((n0 - ty) as f64);
    if den == 0.0 {
        0.0
    } else {
        (c - d) as f64 / den.sqrt()
    }
}

/// AUC by comparing every (positive, negative) pair.
pub fn auc_pairs(scores: &[f64], labels: &[u8]) -> f64 {
    let mut num = 0.0;
    let mut pairs = 0.0;
    for (i, &si) in scores.iter().enumerate() {
        if labels[i] == 0 {
            continue;
        }
        for (j, &sj) in scores.iter().enumerate() {
            if labels[j] != 0 {
                continue;
            }
            pairs += 1.0;
            if si > sj {
                num += 1.0;
            } else if si == sj {
                num += 0.5;
            }
        }
    }
    num / pairs
}

fn ols_residual_variance(target: &[f64], regressors: &[&[f64]]) -> f64 {
    let t = target.len();
    let k = regressors.len() + 1;
    let x = DMatrix::from_fn(t, k, |r, c| if c == 0 { 1.0 } else { regressors[c - 1][r] });
    let y = DMatrix::from_fn(t, 1, |r, _| target[r]);
    let beta = x.clone().svd(true, true).solve(&y, 1e-14).expect("svd solve");
    let e = y - x * beta;
    let mean = e.mean();
    e.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / t as f64
}

/// Bivariate lag-1 Granger index `ln(var_restricted / var_full)` for
/// `source → target`, from two explicit OLS fits.
pub fn bivariate_granger(source: &[f64], target: &[f64]) -> f64 {
    let y = &target[1..];
    let own = &target[..target.len() - 1];
    let other = &source[..source.len() - 1];
    let restricted = ols_residual_variance(y, &[own]);
    let full = ols_residual_variance(y, &[own, other]);
    (restricted / full).ln()
}

/// Two series where the second follows `0.9·x₁(t−1) + 0.1·ε`.
pub fn driven_pair(t: usize, seed: u64) -> Array2<f64> {
    let mut r = rng(seed);
    let mut x = Array2::zeros((2, t));
    for j in 0..t {
        x[[0, j]] = r.sample::<f64, _>(StandardNormal);
        let e: f64 = r.sample(StandardNormal);
        x[[1, j]] = if j == 0 { 0.1 * e } else { 0.9 * x[[0, j - 1]] + 0.1 * e };
    }
    x
}

/// A random stable bivariate VAR(1) sample path of length `t`.
pub fn random_bivariate_var(t: usize, seed: u64) -> Array2<f64> {
    let mut r = rng(seed);
    let a = loop {
        let a: [f64; 4] = std::array::from_fn(|_| r.random_range(-0.9..0.9));
        let tr = a[0] + a[3];
        let det = a[0] * a[3] - a[1] * a[2];
        let disc = tr * tr / 4.0 - det;
        let rho = if disc >= 0.0 { tr.abs() / 2.0 + disc.sqrt() } else { det.sqrt() };
        if rho < 0.95 {
            break a;
        }
    };
    let burn = 200;
    let mut x = Array2::zeros((2, t + burn));
    for j in 1..t + burn {
        let (p0, p1) = (x[[0, j - 1]], x[[1, j - 1]]);
        x[[0, j]] = a[0] * p0 + a[1] * p1 + r.sample::<f64, _>(StandardNormal);
        x[[1, j]] = a[2] * p0 + a[3] * p1 + r.sample::<f64, _>(StandardNormal);
    }
    x.slice(ndarray::s![.., burn..]).to_owned()
}

/// Random vector with deliberate ties: values drawn from a small grid.
pub fn tied_vector(n: usize, levels: u32, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| f64::from(rng.random_range(0..levels))).collect()
}

/// Spectral radius estimate by vector power iteration, max over restarts.
pub fn power_iteration_radius(c: &Array2<f64>, restarts: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let n = c.nrows();
    let mut best = 0.0_f64;
    for _ in 0..restarts {
        let mut v: ndarray::Array1<f64> = (0..n).map(|_| r.sample(StandardNormal)).collect();
        v /= v.dot(&v).sqrt();
        let mut log_growth = 0.0;
        let iters = 1000;
        for _ in 0..iters {
            v = c.dot(&v);
            let s = v.dot(&v).sqrt();
            if s == 0.0 {
                log_growth = f64::NEG_INFINITY;
                break;
            }
            v /= s;
            log_growth += s.ln();
        }
        best = best.max((log_growth / iters as f64).exp());
    }
    best
}
