use crate::error::{Error, Result};

/// ROC AUC in the Mann–Whitney form: the fraction of (positive, negative)
/// pairs ordered correctly, ties counting one half.
///
/// Pairs are counted exactly with integers after one sort.
pub fn roc_auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::Dimension(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::Numerical("NaN score".into()));
    }
    let n_pos = labels.iter().filter(|&&l| l != 0).count() as u128;
    let n_neg = labels.len() as u128 - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedMetric("ROC AUC needs both classes".into()));
    }

    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| (scores[a] + 0.0).total_cmp(&(scores[b] + 0.0)));

    // twice the Mann–Whitney U statistic
    let mut u2: u128 = 0;
    let mut neg_below: u128 = 0;
    let mut start = 0;
    while start < idx.len() {
        let mut end = start;
        while end < idx.len() && scores[idx[end]] == scores[idx[start]] {
            end += 1;
        }
        let pos = idx[start..end].iter().filter(|&&i| labels[i] != 0).count() as u128;
        let neg = (end - start) as u128 - pos;
        u2 += 2 * pos * neg_below + pos * neg;
        neg_below += neg;
        start = end;
    }
    Ok(u2 as f64 / (2 * n_pos * n_neg) as f64)
}

/// Fraction of `predicted == truth`.
pub fn accuracy(predicted: &[u8], truth: &[u8]) -> f64 {
    assert_eq!(predicted.len(), truth.len());
    let hits = predicted.iter().zip(truth).filter(|(a, b)| a == b).count();
    hits as f64 / truth.len() as f64
}

/// Mean and normal-approximation 95% half-width `1.96·sd/√n` (sample sd).
pub fn mean_ci95(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, 1.96 * var.sqrt() / (n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_pair_example() {
        // pairs (0.35,0.1) (0.35,0.4) (0.8,0.1) (0.8,0.4): 3 of 4 correct
        let auc = roc_auc(&[0.1, 0.4, 0.35, 0.8], &[0, 0, 1, 1]).unwrap();
        assert_eq!(auc, 0.75);
    }

    #[test]
    fn separated_and_tied() {
        assert_eq!(roc_auc(&[0.0, 1.0, 5.0, 6.0], &[0, 0, 1, 1]).unwrap(), 1.0);
        assert_eq!(roc_auc(&[2.0; 5], &[0, 1, 0, 1, 1]).unwrap(), 0.5);
    }

    #[test]
    fn single_class_is_undefined() {
        assert!(matches!(roc_auc(&[1.0, 2.0], &[1, 1]), Err(Error::UndefinedMetric(_))));
    }

    #[test]
    fn accuracy_is_one_minus_hamming_rate() {
        let p = [1, 0, 1, 1, 0];
        let t = [1, 1, 1, 0, 0];
        let hamming = p.iter().zip(&t).filter(|(a, b)| a != b).count() as f64 / 5.0;
        assert_eq!(accuracy(&p, &t), 1.0 - hamming);
    }

    #[test]
    fn ci_of_constant_is_zero() {
        assert_eq!(mean_ci95(&[0.5, 0.5, 0.5]), (0.5, 0.0));
        let (m, h) = mean_ci95(&[0.0, 1.0]);
        assert_eq!(m, 0.5);
        assert!((h - 1.96 * 0.5_f64.sqrt() / 2.0_f64.sqrt()).abs() < 1e-15);
    }
}
