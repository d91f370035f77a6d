use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::{self, stream};

/// Per-class index lists, classes in order of first appearance.
fn by_class(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &l) in labels.iter().enumerate() {
        match order.iter().position(|&c| c == l) {
            Some(g) => groups[g].push(i),
            None => {
                order.push(l);
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Splits indices into `k` disjoint folds preserving class proportions.
///
/// Each class is shuffled and dealt round-robin, the dealing position carrying
/// over between classes so fold sizes stay balanced.
pub fn stratified_kfold(labels: &[usize], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::invalid(format!("k-fold needs k >= 2, got {k}")));
    }
    let mut groups = by_class(labels);
    if let Some(small) = groups.iter().find(|g| g.len() < k) {
        return Err(Error::invalid(format!(
            "class of sample {} has {} members, fewer than k = {k}",
            small[0],
            small.len()
        )));
    }
    let mut rng = rng::seeded(seed, stream::FOLDS);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for group in groups.iter_mut() {
        group.shuffle(&mut rng);
        for &i in group.iter() {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}

/// Stratified train/test split; each class contributes `round(test_fraction * count)`
/// members to the test side, at least one and leaving at least one for training.
pub fn stratified_split(labels: &[usize], test_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::invalid(format!("test fraction must be in (0, 1), got {test_fraction}")));
    }
    let mut rng = rng::seeded(seed, stream::SPLIT);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for mut group in by_class(labels) {
        if group.len() < 2 {
            return Err(Error::invalid("every class needs at least 2 members to split"));
        }
        group.shuffle(&mut rng);
        let n_test = ((group.len() as f64 * test_fraction).round() as usize).clamp(1, group.len() - 1);
        test.extend_from_slice(&group[..n_test]);
        train.extend_from_slice(&group[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_two_class() {
        let labels: Vec<usize> = (0..12).map(|i| i % 2).collect();
        let folds = stratified_kfold(&labels, 6, 3).unwrap();
        assert_eq!(folds.len(), 6);
        for f in &folds {
            assert_eq!(f.len(), 2);
            assert_eq!(f.iter().filter(|&&i| labels[i] == 0).count(), 1);
        }
    }

    #[test]
    fn partition_and_determinism() {
        let labels: Vec<usize> = (0..47).map(|i| (i * 7) % 3).collect();
        let folds = stratified_kfold(&labels, 5, 11).unwrap();
        let mut all: Vec<usize> = folds.iter().flatten().cloned().collect();
        all.sort_unstable();
        assert_eq!(all, (0..47).collect::<Vec<_>>());
        assert_eq!(folds, stratified_kfold(&labels, 5, 11).unwrap());
        assert_ne!(folds, stratified_kfold(&labels, 5, 12).unwrap());
    }

    #[test]
    fn too_small_class() {
        let labels = vec![0, 0, 0, 1, 1, 0, 0];
        assert!(stratified_kfold(&labels, 3, 0).is_err());
        assert!(stratified_kfold(&labels, 1, 0).is_err());
    }

    #[test]
    fn split_proportions() {
        let labels: Vec<usize> = (0..60).map(|i| i / 20).collect();
        let (train, test) = stratified_split(&labels, 0.3, 1).unwrap();
        assert_eq!(test.len(), 18);
        assert_eq!(train.len(), 42);
        for c in 0..3 {
            assert_eq!(test.iter().filter(|&&i| labels[i] == c).count(), 6);
        }
    }
}
