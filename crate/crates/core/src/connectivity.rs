//! Directed connectivity by large-scale extended Granger causality (lsXGC)
//! and undirected zero-lag cross-correlation.
//!
//! For every source series `s` the ensemble is compressed by PCA to `p`
//! components. Two affine lagged predictors of all `N` series are fit: one
//! on the components augmented with the raw source (`with`), and one on the
//! components recomputed without the source's column of the PCA coefficient
//! matrix (`without`). The index for `s → t` compares the residual variances
//! of target `t` under both models.

use std::fmt;
use std::ops::Range;

use ndarray::{s, Array2, ArrayView2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{center_rows, least_squares_affine, pca_fit_matrix, Ridge};
use crate::timeseries::TimeSeriesEnsemble;

/// Residual variances below this are clamped before taking logarithms.
pub const VARIANCE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// `log(var_without / var_with)`: positive when the source helps.
    #[default]
    Standard,
    /// The negation of `Standard`.
    PaperLiteral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "lsxgc")]
    Lsxgc,
    #[serde(rename = "correlation")]
    CrossCorrelation,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Lsxgc => "lsxgc",
            Method::CrossCorrelation => "correlation",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LsxgcConfig {
    /// Retained principal components.
    pub p: usize,
    /// Model order (number of lags).
    pub m: usize,
    pub sign_convention: SignConvention,
    pub ridge: Ridge,
    pub standardize_input: bool,
}

impl Default for LsxgcConfig {
    fn default() -> Self {
        Self {
            p: 8,
            m: 4,
            sign_convention: SignConvention::Standard,
            ridge: Ridge::default(),
            standardize_input: true,
        }
    }
}

impl LsxgcConfig {
    pub fn validate(&self, n: usize, t: usize) -> Result<()> {
        if self.p == 0 || self.m == 0 {
            return Err(Error::Config("p and m must be at least 1".into()));
        }
        if self.m >= t {
            return Err(Error::Dimension(format!("m = {} must be < T = {t}", self.m)));
        }
        let max_p = n.saturating_sub(1).min(t.saturating_sub(1));
        if self.p > max_p {
            return Err(Error::Dimension(format!(
                "p = {} exceeds min(N - 1, T - 1) = {max_p}",
                self.p
            )));
        }
        Ok(())
    }
}

/// An N×N connectivity matrix; `values[[s, t]]` is the influence of `s` on `t`.
#[derive(Debug, Clone)]
pub struct ConnectivityMatrix {
    pub values: Array2<f64>,
    pub method: Method,
    pub config: Option<LsxgcConfig>,
    pub roi_names: Vec<String>,
    pub warnings: Vec<String>,
}

impl ConnectivityMatrix {
    pub fn n(&self) -> usize {
        self.values.nrows()
    }
}

/// Stacks `m` lagged copies of `y` (r×T) into an `(m·r)×(T−m)` design.
///
/// Column `c` serves target time `t = m + c` (0-based) and holds
/// `y(t−1), y(t−2), …, y(t−m)`, each lag block in the row order of `y`.
/// The returned range lists those target times.
pub fn build_lag_vectorization(y: ArrayView2<'_, f64>, m: usize) -> Result<(Array2<f64>, Range<usize>)> {
    let (r, t) = y.dim();
    if m == 0 || t <= m {
        return Err(Error::Dimension(format!("need 1 <= m < T, got m = {m}, T = {t}")));
    }
    let t_eff = t - m;
    let mut design = Array2::zeros((m * r, t_eff));
    for lag in 1..=m {
        let block = y.slice(s![.., m - lag..t - lag]);
        design
            .slice_mut(s![(lag - 1) * r..lag * r, ..])
            .assign(&block);
    }
    Ok((design, m..t))
}

struct SourceRow {
    values: Vec<f64>,
    warnings: Vec<String>,
}

pub fn lsxgc_matrix(x: &TimeSeriesEnsemble, cfg: &LsxgcConfig) -> Result<ConnectivityMatrix> {
    let (n, t) = (x.n_series(), x.n_samples());
    cfg.validate(n, t)?;

    let mut warnings = Vec::new();
    let input = if cfg.standardize_input {
        let (z, constant) = x.standardize();
        warnings.extend(constant.iter().map(|i| format!("series {i} is constant")));
        z.into_data()
    } else {
        x.data().clone()
    };

    let pca = pca_fit_matrix(input.view(), cfg.p)?;
    let (centered, _) = center_rows(input.view());
    let targets = input.slice(s![.., cfg.m..]);

    let rows = (0..n)
        .into_par_iter()
        .map(|src| source_influence(src, &input, &centered, &pca.coefficients, &pca.components, targets, cfg))
        .collect::<Result<Vec<SourceRow>>>()?;

    let mut values = Array2::zeros((n, n));
    for (src, row) in rows.into_iter().enumerate() {
        values.row_mut(src).assign(&ndarray::Array1::from(row.values));
        warnings.extend(row.warnings);
    }
    Ok(ConnectivityMatrix {
        values,
        method: Method::Lsxgc,
        config: Some(*cfg),
        roi_names: x.roi_names().to_vec(),
        warnings,
    })
}

fn source_influence(
    src: usize,
    input: &Array2<f64>,
    centered: &Array2<f64>,
    w: &Array2<f64>,
    z: &Array2<f64>,
    targets: ArrayView2<'_, f64>,
    cfg: &LsxgcConfig,
) -> Result<SourceRow> {
    let (n, t) = input.dim();
    let p = w.nrows();

    let mut augmented = Array2::zeros((p + 1, t));
    augmented.slice_mut(s![..p, ..]).assign(z);
    augmented.row_mut(p).assign(&input.row(src));
    let (design_with, _) = build_lag_vectorization(augmented.view(), cfg.m)?;
    let var_with = least_squares_affine(design_with.view(), targets, cfg.ridge)?.residual_variances();

    let keep: Vec<usize> = (0..n).filter(|&i| i != src).collect();
    let w_reduced = w.select(Axis(1), &keep);
    let z_reduced = w_reduced.dot(&centered.select(Axis(0), &keep));
    let (design_without, _) = build_lag_vectorization(z_reduced.view(), cfg.m)?;
    let var_without =
        least_squares_affine(design_without.view(), targets, cfg.ridge)?.residual_variances();

    let mut warnings = Vec::new();
    let mut clamp = |v: f64, tgt: usize, which: &str| {
        if v < VARIANCE_FLOOR {
            warnings.push(format!("entry ({src}, {tgt}): {which} residual variance clamped"));
            VARIANCE_FLOOR
        } else {
            v
        }
    };
    let mut values = vec![0.0; n];
    for tgt in 0..n {
        if tgt == src {
            continue;
        }
        let vw = clamp(var_with[tgt], tgt, "with-source");
        let vo = clamp(var_without[tgt], tgt, "without-source");
        let f = (vo / vw).ln();
        values[tgt] = match cfg.sign_convention {
            SignConvention::Standard => f,
            SignConvention::PaperLiteral => -f,
        };
    }
    Ok(SourceRow { values, warnings })
}

/// Zero-lag Pearson correlation between every pair of series.
///
/// Constant series correlate 0 with every other series; the diagonal is 1.
pub fn cross_correlation_matrix(x: &TimeSeriesEnsemble) -> Result<ConnectivityMatrix> {
    let (n, t) = (x.n_series(), x.n_samples());
    if t < 3 {
        return Err(Error::Dimension(format!("cross-correlation needs T >= 3, got {t}")));
    }
    let (z, constant) = x.standardize();
    let z = z.data();
    let mut values = Array2::eye(n);
    for i in 0..n {
        for j in i + 1..n {
            let r = z.row(i).dot(&z.row(j)) / t as f64;
            let r = r.clamp(-1.0, 1.0);
            values[[i, j]] = r;
            values[[j, i]] = r;
        }
    }
    Ok(ConnectivityMatrix {
        values,
        method: Method::CrossCorrelation,
        config: None,
        roi_names: x.roi_names().to_vec(),
        warnings: constant
            .iter()
            .map(|i| format!("series {i} is constant; correlations set to 0"))
            .collect(),
    })
}

pub fn connectivity(x: &TimeSeriesEnsemble, method: Method, cfg: &LsxgcConfig) -> Result<ConnectivityMatrix> {
    match method {
        Method::Lsxgc => lsxgc_matrix(x, cfg),
        Method::CrossCorrelation => cross_correlation_matrix(x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn lag_vectorization_by_hand() {
        let y = array![[1.0, 2.0, 3.0, 4.0]];
        let (d, idx) = build_lag_vectorization(y.view(), 2).unwrap();
        assert_eq!(d, array![[2.0, 3.0], [1.0, 2.0]]);
        assert_eq!(idx, 2..4);
    }

    #[test]
    fn lag_vectorization_shapes() {
        let y = Array2::from_shape_fn((3, 10), |(i, j)| (i * 10 + j) as f64);
        let (d, _) = build_lag_vectorization(y.view(), 4).unwrap();
        assert_eq!(d.dim(), (12, 6));
        // lag-major: row 3 + 1 is series 1 at lag 2
        assert_eq!(d[[4, 0]], y[[1, 2]]);
        let (d, idx) = build_lag_vectorization(y.view(), 9).unwrap();
        assert_eq!(d.ncols(), 1);
        assert_eq!(idx, 9..10);
        assert!(build_lag_vectorization(y.view(), 10).is_err());
    }

    #[test]
    fn config_validation() {
        let cfg = LsxgcConfig { p: 3, m: 2, ..Default::default() };
        assert!(cfg.validate(4, 100).is_ok());
        assert!(cfg.validate(3, 100).is_err());
        assert!(LsxgcConfig { m: 100, ..cfg }.validate(10, 100).is_err());
        assert!(LsxgcConfig { p: 0, ..cfg }.validate(10, 100).is_err());
    }

    #[test]
    fn correlation_identical_and_opposite_rows() {
        let x = TimeSeriesEnsemble::new(array![
            [1.0, 3.0, 2.0, 5.0],
            [1.0, 3.0, 2.0, 5.0],
            [-1.0, -3.0, -2.0, -5.0]
        ])
        .unwrap();
        let c = cross_correlation_matrix(&x).unwrap();
        assert!((c.values[[0, 1]] - 1.0).abs() < 1e-12);
        assert!((c.values[[0, 2]] + 1.0).abs() < 1e-12);
        assert_eq!(c.values.diag().to_vec(), vec![1.0; 3]);
    }

    #[test]
    fn correlation_matches_direct_formula() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [1.0, 2.0, 3.0, 100.0];
        // direct Pearson: covariance over product of standard deviations
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (ma, mb) = (mean(&a), mean(&b));
        let sab: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let saa: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let sbb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        let oracle = sab / (saa * sbb).sqrt();
        let x = TimeSeriesEnsemble::new(array![a, b]).unwrap();
        let c = cross_correlation_matrix(&x).unwrap();
        assert!((c.values[[0, 1]] - oracle).abs() < 1e-10);
        assert_eq!(c.values[[0, 1]], c.values[[1, 0]]);
    }

    #[test]
    fn constant_series_correlates_zero() {
        let x = TimeSeriesEnsemble::new(array![[2.0, 2.0, 2.0], [1.0, 0.0, 4.0]]).unwrap();
        let c = cross_correlation_matrix(&x).unwrap();
        assert_eq!(c.values[[0, 1]], 0.0);
        assert_eq!(c.values[[0, 0]], 1.0);
        assert_eq!(c.warnings.len(), 1);
    }
}
