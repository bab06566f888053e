use ndarray::{Array2, Axis};

use crate::connectivity::{ConnectivityMatrix, Method};
use crate::error::{Error, Result};
use crate::mvpa::kendall::kendall_tau_b;
use crate::timeseries::Label;

/// Flattens a connectivity matrix into a feature vector.
///
/// lsXGC matrices yield every off-diagonal entry in row-major order
/// (`N·(N−1)` features); correlation matrices yield the strict upper
/// triangle in row-major order (`N·(N−1)/2`). Ids are 0-based
/// `(source, target)` pairs.
pub fn vectorize(conn: &ConnectivityMatrix) -> (Vec<f64>, Vec<(usize, usize)>) {
    let n = conn.n();
    let mut values = Vec::new();
    let mut ids = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let keep = match conn.method {
                Method::Lsxgc => i != j,
                Method::CrossCorrelation => j > i,
            };
            if keep {
                values.push(conn.values[[i, j]]);
                ids.push((i, j));
            }
        }
    }
    (values, ids)
}

#[derive(Debug, Clone)]
pub struct FeatureTable {
    /// subjects × F
    pub rows: Array2<f64>,
    pub labels: Vec<Label>,
    pub feature_ids: Vec<(usize, usize)>,
}

impl FeatureTable {
    pub fn from_connectivity(conns: &[ConnectivityMatrix], labels: &[Label]) -> Result<Self> {
        if conns.len() != labels.len() || conns.is_empty() {
            return Err(Error::Dimension(format!(
                "{} connectivity matrices for {} labels",
                conns.len(),
                labels.len()
            )));
        }
        let (first, feature_ids) = vectorize(&conns[0]);
        let f = first.len();
        let mut rows = Array2::zeros((conns.len(), f));
        for (r, conn) in conns.iter().enumerate() {
            let (v, ids) = vectorize(conn);
            if ids != feature_ids {
                return Err(Error::Dimension(format!("subject {r} has a different feature layout")));
            }
            rows.row_mut(r).assign(&ndarray::Array1::from(v));
        }
        Ok(Self {
            rows,
            labels: labels.to_vec(),
            feature_ids,
        })
    }

    pub fn n_features(&self) -> usize {
        self.rows.ncols()
    }

    pub fn n_subjects(&self) -> usize {
        self.rows.nrows()
    }

    /// The table restricted to the given subjects, in the given order.
    pub fn subset(&self, subjects: &[usize]) -> FeatureTable {
        FeatureTable {
            rows: self.rows.select(Axis(0), subjects),
            labels: subjects.iter().map(|&i| self.labels[i]).collect(),
            feature_ids: self.feature_ids.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TauRanking {
    /// Tau-b of each feature against the labels.
    pub tau: Vec<f64>,
    /// Feature indices by descending |tau|, ties by ascending index.
    pub order: Vec<usize>,
    /// Features that were constant across subjects (tau set to 0).
    pub constant_features: Vec<usize>,
}

/// Ranks every column of `table` by |Kendall tau-b| against its labels.
pub fn rank_features(table: &FeatureTable) -> Result<TauRanking> {
    let n1 = table.labels.iter().filter(|&&l| l == 1).count();
    if n1 == 0 || n1 == table.labels.len() {
        return Err(Error::InvalidLabels("feature ranking needs both classes".into()));
    }
    let y: Vec<f64> = table.labels.iter().map(|&l| f64::from(l)).collect();
    let mut constant_features = Vec::new();
    let tau: Vec<f64> = table
        .rows
        .columns()
        .into_iter()
        .enumerate()
        .map(|(j, col)| {
            let x = col.to_vec();
            if x.iter().all(|&v| v == x[0]) {
                constant_features.push(j);
            }
            kendall_tau_b(&x, &y)
        })
        .collect();
    let mut order: Vec<usize> = (0..tau.len()).collect();
    order.sort_by(|&a, &b| tau[b].abs().total_cmp(&tau[a].abs()).then(a.cmp(&b)));
    Ok(TauRanking {
        tau,
        order,
        constant_features,
    })
}
