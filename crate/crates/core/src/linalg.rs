//! Dense numerical kernels: symmetric eigendecomposition (cyclic Jacobi),
//! PCA, affine least squares and a Cholesky-based symmetric solver.
//!
//! All routines are single-threaded and deterministic.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timeseries::TimeSeriesEnsemble;

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in nonincreasing order and the matching unit
/// eigenvectors as the *rows* of the second matrix. Equal eigenvalues keep
/// their diagonal order.
pub fn symmetric_eigen(m: ArrayView2<'_, f64>) -> (Vec<f64>, Array2<f64>) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "symmetric_eigen needs a square matrix");
    let mut a = m.to_owned();
    let mut v = Array2::<f64>::eye(n);

    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[[p, q]] * a[[p, q]];
            }
        }
        if off.sqrt() <= f64::EPSILON * frob || frob == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[j, j]].total_cmp(&a[[i, i]]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[[i, i]]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (r, &i) in order.iter().enumerate() {
        vectors.row_mut(r).assign(&v.column(i));
    }
    (values, vectors)
}

/// Flips each row so its largest-magnitude entry (lowest index on ties) is positive.
pub fn apply_sign_convention(rows: &mut Array2<f64>) {
    for mut row in rows.rows_mut() {
        let mut best = 0;
        for (j, v) in row.iter().enumerate() {
            if v.abs() > row[best].abs() {
                best = j;
            }
        }
        if row[best] < 0.0 {
            row.mapv_inplace(|x| -x);
        }
    }
}

#[derive(Debug, Clone)]
pub struct PcaResult {
    /// p×N projection; rows are orthonormal principal directions.
    pub coefficients: Array2<f64>,
    /// p×T component time-series of the centered input.
    pub components: Array2<f64>,
    /// Eigenvalues of the sample covariance, nonincreasing.
    pub explained_variance: Vec<f64>,
    /// Per-series means removed before projection.
    pub means: Array1<f64>,
}

impl PcaResult {
    pub fn n_components(&self) -> usize {
        self.coefficients.nrows()
    }
}

/// Subtracts each row's mean; returns the centered copy and the means.
pub fn center_rows(x: ArrayView2<'_, f64>) -> (Array2<f64>, Array1<f64>) {
    let means = x.mean_axis(Axis(1)).expect("non-empty rows");
    let mut c = x.to_owned();
    for (mut row, mu) in c.rows_mut().into_iter().zip(means.iter()) {
        row.mapv_inplace(|v| v - mu);
    }
    (c, means)
}

pub fn pca_fit(x: &TimeSeriesEnsemble, p: usize) -> Result<PcaResult> {
    pca_fit_matrix(x.data().view(), p)
}

/// PCA of the rows-as-variables matrix `x` (N×T) via eigendecomposition of
/// the N×N sample covariance (1/(T−1)).
pub fn pca_fit_matrix(x: ArrayView2<'_, f64>, p: usize) -> Result<PcaResult> {
    let (n, t) = x.dim();
    if p == 0 || p > n || p + 1 > t {
        return Err(Error::Dimension(format!(
            "p = {p} outside 1..=min(N = {n}, T - 1 = {})",
            t.saturating_sub(1)
        )));
    }
    let (xc, means) = center_rows(x);
    let cov = xc.dot(&xc.t()) / (t as f64 - 1.0);
    let (values, vectors) = symmetric_eigen(cov.view());
    let mut coefficients = vectors.slice(ndarray::s![..p, ..]).to_owned();
    apply_sign_convention(&mut coefficients);
    let components = coefficients.dot(&xc);
    let explained_variance = values[..p].iter().map(|&v| v.max(0.0)).collect();
    Ok(PcaResult {
        coefficients,
        components,
        explained_variance,
        means,
    })
}

/// Regularization applied to the centered Gram matrix of a regression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Ridge {
    /// Add `λ·I`.
    Absolute(f64),
    /// Add `c·trace(G)/d·I`.
    Relative(f64),
}

impl Default for Ridge {
    fn default() -> Self {
        Ridge::Relative(1e-8)
    }
}

#[derive(Debug, Clone)]
pub struct AffineFit {
    /// N_out×d coefficient matrix.
    pub coefficients: Array2<f64>,
    pub bias: Array1<f64>,
    /// N_out×T_eff prediction errors `targets − (A·design + b)`.
    pub residuals: Array2<f64>,
}

impl AffineFit {
    /// Population (1/T_eff) variance of each residual row.
    pub fn residual_variances(&self) -> Vec<f64> {
        let t = self.residuals.ncols() as f64;
        self.residuals
            .rows()
            .into_iter()
            .map(|r| {
                let mu = r.sum() / t;
                r.iter().map(|e| (e - mu).powi(2)).sum::<f64>() / t
            })
            .collect()
    }
}

/// Least-squares affine map from `design` (d×T) to `targets` (N_out×T),
/// minimizing the squared error plus `λ‖A‖²_F` via centered normal equations.
pub fn least_squares_affine(
    design: ArrayView2<'_, f64>,
    targets: ArrayView2<'_, f64>,
    ridge: Ridge,
) -> Result<AffineFit> {
    let (d, t) = design.dim();
    if d == 0 || t == 0 {
        return Err(Error::Dimension(format!("design is {d}x{t}")));
    }
    if targets.ncols() != t {
        return Err(Error::Dimension(format!(
            "design has {t} samples, targets have {}",
            targets.ncols()
        )));
    }
    if design.iter().chain(targets.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite regression input".into()));
    }

    let (dc, dmean) = center_rows(design);
    let (tc, tmean) = center_rows(targets);
    let mut gram = dc.dot(&dc.t());
    let cross = dc.dot(&tc.t());
    let trace: f64 = gram.diag().sum();
    let lambda = match ridge {
        Ridge::Absolute(l) => l,
        Ridge::Relative(c) => c * trace / d as f64,
    };
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::Config(format!("ridge must be nonnegative, got {lambda}")));
    }

    let coefficients = if trace == 0.0 && lambda == 0.0 {
        Array2::zeros((targets.nrows(), d))
    } else {
        for i in 0..d {
            gram[[i, i]] += lambda;
        }
        Cholesky::factor(gram.view())?.solve_matrix(&cross).reversed_axes()
    };

    let bias = &tmean - &coefficients.dot(&dmean);
    let mut residuals = targets.to_owned() - coefficients.dot(&design);
    for (mut row, b) in residuals.rows_mut().into_iter().zip(bias.iter()) {
        row.mapv_inplace(|e| e - b);
    }
    Ok(AffineFit {
        coefficients,
        bias,
        residuals,
    })
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    pub fn factor(m: ArrayView2<'_, f64>) -> Result<Self> {
        let n = m.nrows();
        if n == 0 || n != m.ncols() {
            return Err(Error::Dimension(format!("expected a square matrix, got {:?}", m.dim())));
        }
        let scale = m.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        for i in 0..n {
            for j in 0..i {
                if (m[[i, j]] - m[[j, i]]).abs() > 1e-10 * (1.0 + scale) {
                    return Err(Error::Numerical(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        let max_diag = (0..n).fold(0.0_f64, |a, i| a.max(m[[i, i]]));
        let tol = n as f64 * f64::EPSILON * max_diag;

        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut diag = m[[j, j]];
            for k in 0..j {
                diag -= l[j * n + k] * l[j * n + k];
            }
            if diag.is_nan() || diag <= tol {
                return Err(Error::SingularMatrix(format!(
                    "pivot {diag:.3e} at column {j} is not positive"
                )));
            }
            let ljj = diag.sqrt();
            l[j * n + j] = ljj;
            for i in j + 1..n {
                let mut s = m[[i, j]];
                let (ri, rj) = (&l[i * n..i * n + j], &l[j * n..j * n + j]);
                for k in 0..j {
                    s -= ri[k] * rj[k];
                }
                l[i * n + j] = s / ljj;
            }
        }
        Ok(Self { n, l })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(rhs.len(), n);
        let mut y = rhs.to_vec();
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            let s: f64 = row.iter().zip(&y[..i]).map(|(a, b)| a * b).sum();
            y[i] = (y[i] - s) / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for (k, yk) in y.iter().enumerate().skip(i + 1) {
                s -= self.l[k * n + i] * yk;
            }
            y[i] = s / self.l[i * n + i];
        }
        y
    }

    /// Solves for every column of `rhs`.
    pub fn solve_matrix(&self, rhs: &Array2<f64>) -> Array2<f64> {
        let mut out = Array2::zeros(rhs.dim());
        for (j, col) in rhs.columns().into_iter().enumerate() {
            let x = self.solve(&col.to_vec());
            out.column_mut(j).assign(&Array1::from(x));
        }
        out
    }
}

/// Solves `M x = rhs` for symmetric positive definite `M`.
pub fn solve_symmetric(m: ArrayView2<'_, f64>, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != m.nrows() {
        return Err(Error::Dimension(format!(
            "rhs length {} for a {}x{} matrix",
            rhs.len(),
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(Cholesky::factor(m)?.solve(rhs))
}
