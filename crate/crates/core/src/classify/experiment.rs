use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::XtSeries;

use super::{
    accuracy, build_features, grid_search, stratified_split, svm_train, zscore_fit_apply,
    FeatureMode, Grid, LabeledSet, DEFAULT_FOLDS,
};

/// Share of each class held out for testing.
pub const TEST_FRACTION: f64 = 0.3;

/// Minimum number of windows per class.
pub const MIN_PER_CLASS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    pub c: f64,
    pub kernel_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub mode: super::FeatureMode,
    pub validation_mean: f64,
    pub validation_std: f64,
    pub test_accuracy: f64,
    pub best_hyperparams: Hyperparams,
    /// Rows: true class, columns: predicted class, both in `class_names` order.
    pub confusion_matrix: Vec<Vec<usize>>,
    pub class_names: Vec<String>,
    pub n_train: usize,
    pub n_test: usize,
}

/// Split, standardize, grid-search and test on precomputed features.
pub fn classify_features(
    set: &LabeledSet,
    mode: FeatureMode,
    grid: &Grid,
    split_seed: u64,
) -> Result<ExperimentReport> {
    set.validate()?;
    if set.n_classes() < 2 {
        return Err(Error::invalid("classification needs at least 2 classes"));
    }
    if let Some(c) = set.class_counts().iter().position(|&n| n < MIN_PER_CLASS) {
        return Err(Error::invalid(format!(
            "class `{}` has fewer than {MIN_PER_CLASS} windows",
            set.class_names[c]
        )));
    }
    let (train_idx, test_idx) = stratified_split(&set.labels, TEST_FRACTION, split_seed)?;
    let (train, others) = zscore_fit_apply(&set.subset(&train_idx), &[&set.subset(&test_idx)])?;
    let test = &others[0];

    let search = grid_search(&train, grid, DEFAULT_FOLDS, split_seed)?;
    let model = svm_train(&train, search.best.c, search.best.kernel_width)?;

    let k = set.n_classes();
    let mut confusion = vec![vec![0; k]; k];
    for (v, &l) in test.vectors.iter().zip(&test.labels) {
        confusion[l][model.predict(v)] += 1;
    }
    Ok(ExperimentReport {
        mode,
        validation_mean: search.best.mean,
        validation_std: search.best.std,
        test_accuracy: accuracy(&model, test),
        best_hyperparams: Hyperparams {
            c: search.best.c,
            kernel_width: search.best.kernel_width,
        },
        confusion_matrix: confusion,
        class_names: set.class_names.clone(),
        n_train: train.len(),
        n_test: test.len(),
    })
}

/// Full experiment on labeled windows with the default 8 x 8 grid.
pub fn classify_experiment<S: AsRef<str>>(
    windows: &[(S, XtSeries)],
    mode: FeatureMode,
    split_seed: u64,
) -> Result<ExperimentReport> {
    let pairs = windows
        .iter()
        .map(|(label, w)| Ok((label.as_ref(), build_features(w, mode)?.values)))
        .collect::<Result<Vec<_>>>()?;
    let set = LabeledSet::from_pairs(pairs)?;
    classify_features(&set, mode, &Grid::default(), split_seed)
}
