//! Source-signal classification from step-distribution features.
//!
//! Windows of crosstalk are summarized either by the four sample moments of
//! their dB steps, by the three fitted pseudo-Voigt coefficients, or by both.
//! Features are standardized with training-split statistics and fed to a
//! one-vs-rest RBF support vector machine whose `(C, width)` pair is chosen
//! by grid search under stratified k-fold cross-validation.

mod experiment;
mod features;
mod folds;
mod grid;
mod scaling;
mod svm;

pub use experiment::{
    classify_experiment, classify_features, ExperimentReport, Hyperparams, MIN_PER_CLASS,
    TEST_FRACTION,
};
pub use features::{build_features, FeatureMode, FeatureVector};
pub use folds::{stratified_kfold, stratified_split};
pub use grid::{grid_search, Grid, GridPoint, GridResult, DEFAULT_FOLDS};
pub use scaling::{zscore_fit_apply, Standardizer};
pub use svm::{svm_train, svm_train_with, SvmModel, SvmParams};

use crate::error::{Error, Result};

/// Feature vectors with categorical labels.
///
/// Class ids are assigned in order of first appearance, so renaming labels
/// never changes the class structure.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSet {
    pub vectors: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
    /// Standardization applied to `vectors`, if any.
    pub normalization: Option<Standardizer>,
}

impl LabeledSet {
    pub fn from_pairs<S: AsRef<str>>(pairs: impl IntoIterator<Item = (S, Vec<f64>)>) -> Result<Self> {
        let mut class_names: Vec<String> = Vec::new();
        let mut vectors = Vec::new();
        let mut labels = Vec::new();
        for (name, v) in pairs {
            let name = name.as_ref();
            let id = match class_names.iter().position(|c| c == name) {
                Some(id) => id,
                None => {
                    class_names.push(name.to_string());
                    class_names.len() - 1
                }
            };
            labels.push(id);
            vectors.push(v);
        }
        let set = Self {
            vectors,
            labels,
            class_names,
            normalization: None,
        };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vectors.len() != self.labels.len() {
            return Err(Error::invalid("vector and label counts differ"));
        }
        if let Some(first) = self.vectors.first() {
            let dim = first.len();
            if self.vectors.iter().any(|v| v.len() != dim) {
                return Err(Error::invalid("feature vectors have different lengths"));
            }
            if self.vectors.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::invalid("feature vectors must be finite"));
            }
        }
        if self.labels.iter().any(|&l| l >= self.class_names.len()) {
            return Err(Error::invalid("label outside the class list"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Rows at `indices`, keeping the class list.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            vectors: indices.iter().map(|&i| self.vectors[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            class_names: self.class_names.clone(),
            normalization: self.normalization.clone(),
        }
    }

    /// Keeps the given feature columns.
    pub fn select_columns(&self, columns: &[usize]) -> Self {
        Self {
            vectors: self
                .vectors
                .iter()
                .map(|v| columns.iter().map(|&c| v[c]).collect())
                .collect(),
            labels: self.labels.clone(),
            class_names: self.class_names.clone(),
            normalization: None,
        }
    }
}

pub(crate) fn accuracy(model: &SvmModel, set: &LabeledSet) -> f64 {
    let correct = set
        .vectors
        .iter()
        .zip(&set.labels)
        .filter(|(v, &l)| model.predict(v) == l)
        .count();
    correct as f64 / set.len() as f64
}
