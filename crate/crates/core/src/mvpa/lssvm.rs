//! Least-squares SVM classifier with a linear kernel.
//!
//! Training solves the bordered system
//!
//! ```text
//! [ 0  yᵀ ] [b]   [0]
//! [ y  H  ] [α] = [1],   H = Ω∘(yyᵀ) + I/γ,  Ω_ij = x_i·x_j
//! ```
//!
//! by block elimination with one Cholesky factorization of `H`:
//! `a = H⁻¹1`, `c = H⁻¹y`, `b = (yᵀa)/(yᵀc)`, `α = a − b·c`.

use ndarray::{Array1, Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::linalg::Cholesky;
use crate::timeseries::Label;

#[derive(Debug, Clone)]
pub struct LssvmModel {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub gamma: f64,
    /// Training features (subjects × k).
    pub support: Array2<f64>,
    /// Training labels as ±1.
    pub targets: Vec<f64>,
    /// Primal weights `Σ α_i y_i x_i`.
    pub weights: Array1<f64>,
}

pub fn signed_labels(labels: &[Label]) -> Vec<f64> {
    labels.iter().map(|&l| if l == 0 { -1.0 } else { 1.0 }).collect()
}

impl LssvmModel {
    pub fn train(features: ArrayView2<'_, f64>, labels: &[Label], gamma: f64) -> Result<Self> {
        let gram = features.dot(&features.t());
        Self::train_with_gram(features, &gram, labels, gamma)
    }

    /// Trains from a precomputed linear kernel `gram = X·Xᵀ`.
    pub fn train_with_gram(
        features: ArrayView2<'_, f64>,
        gram: &Array2<f64>,
        labels: &[Label],
        gamma: f64,
    ) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::Config(format!("gamma must be positive, got {gamma}")));
        }
        let n = features.nrows();
        if labels.len() != n || gram.dim() != (n, n) || features.ncols() == 0 {
            return Err(Error::Dimension(format!(
                "{n} training rows, {} labels, gram {:?}, k = {}",
                labels.len(),
                gram.dim(),
                features.ncols()
            )));
        }
        let y = signed_labels(labels);
        if y.iter().all(|&v| v > 0.0) || y.iter().all(|&v| v < 0.0) {
            return Err(Error::InvalidLabels("LS-SVM training needs both classes".into()));
        }

        let h = hessian(gram, &y, gamma);
        let chol = Cholesky::factor(h.view())?;
        let a = chol.solve(&vec![1.0; n]);
        let c = chol.solve(&y);
        let ya: f64 = y.iter().zip(&a).map(|(p, q)| p * q).sum();
        let yc: f64 = y.iter().zip(&c).map(|(p, q)| p * q).sum();
        if yc == 0.0 {
            return Err(Error::SingularMatrix("yᵀH⁻¹y vanished".into()));
        }
        let bias = ya / yc;
        let alpha: Vec<f64> = a.iter().zip(&c).map(|(ai, ci)| ai - bias * ci).collect();

        let mut weights = Array1::zeros(features.ncols());
        for (i, row) in features.rows().into_iter().enumerate() {
            weights.scaled_add(alpha[i] * y[i], &row);
        }
        Ok(Self {
            alpha,
            bias,
            gamma,
            support: features.to_owned(),
            targets: y,
            weights,
        })
    }

    /// Decision values `d(x) = Σ α_i y_i (x_i·x) + b` for each row of `x`.
    pub fn decision(&self, x: ArrayView2<'_, f64>) -> Vec<f64> {
        x.dot(&self.weights).iter().map(|v| v + self.bias).collect()
    }

    pub fn predict(&self, x: ArrayView2<'_, f64>) -> Vec<Label> {
        self.decision(x).iter().map(|&d| u8::from(d > 0.0)).collect()
    }

    /// Relative residual `‖K s − r‖ / (‖K‖_F ‖s‖ + ‖r‖)` of the assembled
    /// bordered system with solution `s = [b; α]`.
    pub fn kkt_residual(&self) -> f64 {
        let n = self.alpha.len();
        let gram = self.support.dot(&self.support.t());
        let h = hessian(&gram, &self.targets, self.gamma);
        let mut k = Array2::zeros((n + 1, n + 1));
        for i in 0..n {
            k[[0, i + 1]] = self.targets[i];
            k[[i + 1, 0]] = self.targets[i];
        }
        k.slice_mut(ndarray::s![1.., 1..]).assign(&h);
        let mut sol = vec![self.bias];
        sol.extend_from_slice(&self.alpha);
        let sol = Array1::from(sol);
        let mut rhs = Array1::ones(n + 1);
        rhs[0] = 0.0;
        let r = k.dot(&sol) - &rhs;
        let norm = |v: &Array1<f64>| v.dot(v).sqrt();
        let k_norm = k.iter().map(|v| v * v).sum::<f64>().sqrt();
        norm(&r) / (k_norm * norm(&sol) + norm(&rhs))
    }
}

fn hessian(gram: &Array2<f64>, y: &[f64], gamma: f64) -> Array2<f64> {
    let n = y.len();
    Array2::from_shape_fn((n, n), |(i, j)| {
        let v = y[i] * y[j] * gram[[i, j]];
        if i == j {
            v + 1.0 / gamma
        } else {
            v
        }
    })
}
