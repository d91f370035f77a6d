use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::LabeledSet;

/// Per-column mean and population standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    pub fn fit(vectors: &[Vec<f64>]) -> Result<Self> {
        let first = vectors.first().ok_or_else(|| Error::invalid("cannot standardize an empty set"))?;
        let n = vectors.len() as f64;
        let dim = first.len();
        let mean: Vec<f64> = (0..dim)
            .map(|j| vectors.iter().map(|v| v[j]).sum::<f64>() / n)
            .collect();
        let std = (0..dim)
            .map(|j| {
                (vectors.iter().map(|v| (v[j] - mean[j]).powi(2)).sum::<f64>() / n).sqrt()
            })
            .collect();
        Ok(Self { mean, std })
    }

    /// Zero-variance columns map to 0.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        v.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(x, (m, s))| if *s > 0.0 { (x - m) / s } else { 0.0 })
            .collect()
    }

    pub fn transform(&self, set: &LabeledSet) -> LabeledSet {
        LabeledSet {
            vectors: set.vectors.iter().map(|v| self.apply(v)).collect(),
            labels: set.labels.clone(),
            class_names: set.class_names.clone(),
            normalization: Some(self.clone()),
        }
    }
}

/// Standardizes `train` with its own statistics and applies the same
/// transform to every set in `others`.
pub fn zscore_fit_apply(
    train: &LabeledSet,
    others: &[&LabeledSet],
) -> Result<(LabeledSet, Vec<LabeledSet>)> {
    let scaler = Standardizer::fit(&train.vectors)?;
    Ok((
        scaler.transform(train),
        others.iter().map(|s| scaler.transform(s)).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rows: Vec<Vec<f64>>) -> LabeledSet {
        let n = rows.len();
        LabeledSet::from_pairs(rows.into_iter().zip((0..n).map(|i| if i % 2 == 0 { "a" } else { "b" })).map(|(v, l)| (l, v))).unwrap()
    }

    #[test]
    fn train_columns_are_standard() {
        let train = set(vec![
            vec![1.0, 5.0, 2.0],
            vec![2.0, 5.0, -1.0],
            vec![4.0, 5.0, 0.5],
            vec![8.0, 5.0, 3.0],
        ]);
        let test = set(vec![vec![3.0, 7.0, 0.0], vec![0.0, 5.0, 1.0]]);
        let (t, others) = zscore_fit_apply(&train, &[&test]).unwrap();
        for j in [0, 2] {
            let col: Vec<f64> = t.vectors.iter().map(|v| v[j]).collect();
            let m = col.iter().sum::<f64>() / 4.0;
            let var = col.iter().map(|x| (x - m).powi(2)).sum::<f64>() / 4.0;
            assert!(m.abs() < 1e-9 && (var - 1.0).abs() < 1e-9);
        }
        assert!(t.vectors.iter().all(|v| v[1] == 0.0));
        // constant train column maps everything to 0, even unseen values
        assert!(others[0].vectors.iter().all(|v| v[1] == 0.0));
        assert!(t.normalization.is_some());
    }

    #[test]
    fn refit_is_idempotent() {
        let train = set(vec![vec![1.0, 3.0], vec![2.0, -3.0], vec![7.0, 0.0], vec![-2.0, 1.0]]);
        let (once, _) = zscore_fit_apply(&train, &[]).unwrap();
        let (twice, _) = zscore_fit_apply(&once, &[]).unwrap();
        for (a, b) in once.vectors.iter().flatten().zip(twice.vectors.iter().flatten()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_train_rejected() {
        let empty = LabeledSet {
            vectors: vec![],
            labels: vec![],
            class_names: vec![],
            normalization: None,
        };
        assert!(zscore_fit_apply(&empty, &[]).is_err());
    }
}
