//! Multivariate time-series ensembles and labelled cohorts.

use ndarray::{Array2, ArrayView1, Axis};

use crate::error::{Error, Result};

/// An N×T ensemble: one row per series (ROI), one column per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesEnsemble {
    data: Array2<f64>,
    roi_names: Vec<String>,
}

pub fn default_roi_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("roi_{i}")).collect()
}

impl TimeSeriesEnsemble {
    /// Builds an ensemble with default names `roi_0 … roi_{N-1}`.
    pub fn new(data: Array2<f64>) -> Result<Self> {
        let n = data.nrows();
        Self::with_names(data, default_roi_names(n))
    }

    pub fn with_names(data: Array2<f64>, roi_names: Vec<String>) -> Result<Self> {
        let (n, t) = data.dim();
        if n < 2 || t < 2 {
            return Err(Error::Dimension(format!(
                "ensemble needs N >= 2 and T >= 2, got {n}x{t}"
            )));
        }
        if roi_names.len() != n {
            return Err(Error::Dimension(format!(
                "{} roi names for {n} series",
                roi_names.len()
            )));
        }
        if let Some(((i, j), v)) = data.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite value {v} at series {i}, sample {j}"
            )));
        }
        Ok(Self { data, roi_names })
    }

    pub fn data(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn into_data(self) -> Array2<f64> {
        self.data
    }

    pub fn roi_names(&self) -> &[String] {
        &self.roi_names
    }

    pub fn n_series(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_samples(&self) -> usize {
        self.data.ncols()
    }

    pub fn series(&self, i: usize) -> ArrayView1<'_, f64> {
        self.data.row(i)
    }

    /// Per-row z-scoring with population (1/T) standard deviation.
    ///
    /// Constant rows become all zeros; their indices are returned alongside
    /// the standardized ensemble.
    pub fn standardize(&self) -> (TimeSeriesEnsemble, Vec<usize>) {
        let t = self.n_samples() as f64;
        let mut out = self.data.clone();
        let mut constant = Vec::new();
        for (i, mut row) in out.axis_iter_mut(Axis(0)).enumerate() {
            let mean = row.sum() / t;
            let var = row.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / t;
            let sd = var.sqrt();
            let scale = row.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            if sd <= 1e-12 * scale || sd == 0.0 {
                row.fill(0.0);
                constant.push(i);
            } else {
                row.mapv_inplace(|x| (x - mean) / sd);
            }
        }
        if !constant.is_empty() {
            log::warn!("constant series mapped to zeros: {constant:?}");
        }
        let ens = TimeSeriesEnsemble {
            data: out,
            roi_names: self.roi_names.clone(),
        };
        (ens, constant)
    }

    /// Reorders series by `perm` (new row `i` is old row `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<TimeSeriesEnsemble> {
        let n = self.n_series();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Dimension("not a permutation of the series".into()));
        }
        let data = self.data.select(Axis(0), perm);
        let names = perm.iter().map(|&p| self.roi_names[p].clone()).collect();
        TimeSeriesEnsemble::with_names(data, names)
    }
}

/// Binary class label: 0 = control, 1 = case.
pub type Label = u8;

#[derive(Debug, Clone)]
pub struct SubjectRecord {
    pub subject_id: String,
    pub label: Label,
    pub ensemble: TimeSeriesEnsemble,
}

/// An ordered cohort of labelled subjects sharing N and ROI names.
#[derive(Debug, Clone)]
pub struct SubjectDataset {
    records: Vec<SubjectRecord>,
}

impl SubjectDataset {
    pub fn new(records: Vec<SubjectRecord>) -> Result<Self> {
        let Some(first) = records.first() else {
            return Err(Error::Dimension("dataset has no subjects".into()));
        };
        let n = first.ensemble.n_series();
        let names = first.ensemble.roi_names().to_vec();
        for r in &records {
            if r.label > 1 {
                return Err(Error::Manifest {
                    subject: r.subject_id.clone(),
                    msg: format!("label {} is not 0 or 1", r.label),
                });
            }
            if r.ensemble.n_series() != n {
                return Err(Error::Manifest {
                    subject: r.subject_id.clone(),
                    msg: format!("N mismatch ({} vs {n})", r.ensemble.n_series()),
                });
            }
            if r.ensemble.roi_names() != names.as_slice() {
                return Err(Error::Manifest {
                    subject: r.subject_id.clone(),
                    msg: "roi names differ from the first subject".into(),
                });
            }
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[SubjectRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.records.iter().map(|r| r.label).collect()
    }

    pub fn n_series(&self) -> usize {
        self.records[0].ensemble.n_series()
    }

    pub fn roi_names(&self) -> &[String] {
        self.records[0].ensemble.roi_names()
    }
}
