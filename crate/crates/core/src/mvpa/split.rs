use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use crate::timeseries::Label;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Random train/test partition preserving class proportions.
///
/// Each class contributes `max(1, round(count·test_fraction))` test subjects
/// and must keep at least one training subject. Index lists are ascending.
pub fn stratified_split(labels: &[Label], test_fraction: f64, seed: u64) -> Result<Split> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::Config(format!("test fraction {test_fraction} outside (0, 1)")));
    }
    let mut rng = rng_from_seed(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in [0u8, 1] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        let count = members.len();
        let n_test = ((count as f64 * test_fraction).round() as usize).max(1);
        if n_test >= count {
            return Err(Error::Split(format!(
                "class {class} has {count} subjects; cannot hold out {n_test} and still train"
            )));
        }
        members.shuffle(&mut rng);
        test.extend_from_slice(&members[..n_test]);
        train.extend_from_slice(&members[n_test..]);
    }
    if labels.iter().any(|&l| l > 1) {
        return Err(Error::InvalidLabels("labels must be 0 or 1".into()));
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Split { train, test })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn balanced(per_class: usize) -> Vec<Label> {
        let mut v = vec![0; per_class];
        v.extend(vec![1; per_class]);
        v
    }

    #[test]
    fn paper_cohort_counts() {
        let labels = balanced(63);
        let s = stratified_split(&labels, 0.1, 1).unwrap();
        let count = |idx: &[usize], c| idx.iter().filter(|&&i| labels[i] == c).count();
        assert_eq!((count(&s.test, 0), count(&s.test, 1)), (6, 6));
        assert_eq!((count(&s.train, 0), count(&s.train, 1)), (57, 57));
        let mut all: Vec<usize> = s.train.iter().chain(&s.test).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..126).collect::<Vec<_>>());
    }

    #[test]
    fn half_split_of_four() {
        let s = stratified_split(&balanced(2), 0.5, 3).unwrap();
        assert_eq!(s.test.len(), 2);
        assert_eq!(s.train.len(), 2);
    }

    #[test]
    fn seeded_determinism() {
        let labels = balanced(63);
        assert_eq!(stratified_split(&labels, 0.1, 5).unwrap(), stratified_split(&labels, 0.1, 5).unwrap());
        assert_ne!(stratified_split(&labels, 0.1, 5).unwrap(), stratified_split(&labels, 0.1, 6).unwrap());
    }

    #[test]
    fn too_small_class() {
        assert!(matches!(stratified_split(&[0, 0, 1], 0.1, 0), Err(Error::Split(_))));
        assert!(matches!(stratified_split(&[0, 0, 0], 0.1, 0), Err(Error::Split(_))));
    }
}
