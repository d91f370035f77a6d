use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{accuracy, stratified_kfold, svm_train, LabeledSet};

pub const DEFAULT_FOLDS: usize = 6;

/// Hyperparameter grid: every `c` paired with every `kernel_width`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub c: Vec<f64>,
    pub kernel_width: Vec<f64>,
}

impl Default for Grid {
    /// 8 x 8 logarithmic grid: `C` in `1e-2 ..= 1e5`, width in `1e-4 ..= 1e3`.
    fn default() -> Self {
        Self {
            c: (-2..=5).map(|e| 10f64.powi(e)).collect(),
            kernel_width: (-4..=3).map(|e| 10f64.powi(e)).collect(),
        }
    }
}

impl Grid {
    pub fn single(c: f64, kernel_width: f64) -> Self {
        Self {
            c: vec![c],
            kernel_width: vec![kernel_width],
        }
    }

    pub fn len(&self) -> usize {
        self.c.len() * self.kernel_width.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub c: f64,
    pub kernel_width: f64,
    pub fold_accuracies: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation over folds.
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub best: GridPoint,
    pub points: Vec<GridPoint>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (m, (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt())
}

/// Exhaustive cross-validated search.
///
/// The best point has the highest mean fold accuracy; ties go to the smaller
/// `c`, then the smaller width.
pub fn grid_search(train: &LabeledSet, grid: &Grid, k: usize, seed: u64) -> Result<GridResult> {
    if grid.is_empty() {
        return Err(Error::invalid("empty hyperparameter grid"));
    }
    let folds = stratified_kfold(&train.labels, k, seed)?;
    let splits: Vec<(LabeledSet, LabeledSet)> = folds
        .iter()
        .map(|held_out| {
            let fit: Vec<usize> = (0..train.len()).filter(|i| held_out.binary_search(i).is_err()).collect();
            (train.subset(&fit), train.subset(held_out))
        })
        .collect();

    let mut cs = grid.c.clone();
    let mut widths = grid.kernel_width.clone();
    cs.sort_by(f64::total_cmp);
    widths.sort_by(f64::total_cmp);

    let mut points: Vec<GridPoint> = Vec::with_capacity(grid.len());
    let mut best = 0;
    for &c in &cs {
        for &w in &widths {
            let fold_accuracies = splits
                .iter()
                .map(|(fit, held)| Ok(accuracy(&svm_train(fit, c, w)?, held)))
                .collect::<Result<Vec<f64>>>()?;
            let (mean, std) = mean_std(&fold_accuracies);
            if points.is_empty() || mean > points[best].mean {
                best = points.len();
            }
            points.push(GridPoint {
                c,
                kernel_width: w,
                fold_accuracies,
                mean,
                std,
            });
        }
    }
    Ok(GridResult {
        best: points[best].clone(),
        points,
    })
}
