//! Soft-margin RBF support vector machine trained with SMO.
//!
//! The binary solver follows the working-set selection of Fan, Chen and Lin
//! (second-order information, as used by LIBSVM): pick the maximal violating
//! `i`, then the `j` giving the largest objective decrease. Training stops when
//! the KKT violation `m(alpha) - M(alpha)` drops below the tolerance.

use crate::error::{Error, Result};

use super::LabeledSet;

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    /// Box constraint.
    pub c: f64,
    /// RBF width `w` in `exp(-|x - y|^2 / (2 w^2))`.
    pub kernel_width: f64,
    /// KKT violation tolerance.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl SvmParams {
    pub fn new(c: f64, kernel_width: f64) -> Self {
        Self {
            c,
            kernel_width,
            tolerance: 1e-3,
            max_iterations: 10_000_000,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::invalid(format!("C must be > 0, got {}", self.c)));
        }
        if !(self.kernel_width > 0.0 && self.kernel_width.is_finite()) {
            return Err(Error::invalid(format!(
                "kernel width must be > 0, got {}",
                self.kernel_width
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance must be > 0"));
        }
        Ok(())
    }
}

fn rbf(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    (-gamma * d2).exp()
}

#[derive(Debug, Clone)]
struct BinaryModel {
    /// Indices into the model's support vector store, with `alpha_i y_i`.
    support: Vec<(usize, f64)>,
    rho: f64,
}

/// One-vs-rest multiclass model. Immutable once trained.
#[derive(Debug, Clone)]
pub struct SvmModel {
    gamma: f64,
    vectors: Vec<Vec<f64>>,
    models: Vec<BinaryModel>,
}

impl SvmModel {
    pub fn n_classes(&self) -> usize {
        self.models.len()
    }

    /// Decision value of each one-vs-rest machine.
    pub fn decision_values(&self, x: &[f64]) -> Vec<f64> {
        self.models
            .iter()
            .map(|m| {
                m.support
                    .iter()
                    .map(|&(i, coef)| coef * rbf(&self.vectors[i], x, self.gamma))
                    .sum::<f64>()
                    - m.rho
            })
            .collect()
    }

    /// Class with the largest decision value (lowest id on ties).
    pub fn predict(&self, x: &[f64]) -> usize {
        let d = self.decision_values(x);
        let mut best = 0;
        for (k, &v) in d.iter().enumerate().skip(1) {
            if v > d[best] {
                best = k;
            }
        }
        best
    }
}

/// Solves the C-SVC dual for labels `y` in {-1, +1}. Returns `(alpha, rho)`.
fn solve_binary(kernel: &[Vec<f64>], y: &[f64], c: f64, eps: f64, max_iter: usize) -> (Vec<f64>, f64) {
    let n = y.len();
    let q = |i: usize, j: usize| y[i] * y[j] * kernel[i][j];
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];

    let is_upper = |a: f64| a >= c;
    let is_lower = |a: f64| a <= 0.0;

    for _ in 0..max_iter {
        // i: maximal violating index in I_up
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel = None;
        for t in 0..n {
            if y[t] > 0.0 {
                if !is_upper(alpha[t]) && -grad[t] >= gmax {
                    gmax = -grad[t];
                    i_sel = Some(t);
                }
            } else if !is_lower(alpha[t]) && grad[t] >= gmax {
                gmax = grad[t];
                i_sel = Some(t);
            }
        }
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j_sel = None;
        let mut obj_min = f64::INFINITY;
        if let Some(i) = i_sel {
            for t in 0..n {
                if y[t] > 0.0 {
                    if !is_lower(alpha[t]) {
                        let grad_diff = gmax + grad[t];
                        gmax2 = gmax2.max(grad[t]);
                        if grad_diff > 0.0 {
                            let quad = q(i, i) + q(t, t) - 2.0 * y[i] * q(i, t);
                            let obj = -(grad_diff * grad_diff) / if quad > 0.0 { quad } else { TAU };
                            if obj <= obj_min {
                                obj_min = obj;
                                j_sel = Some(t);
                            }
                        }
                    }
                } else if !is_upper(alpha[t]) {
                    let grad_diff = gmax - grad[t];
                    gmax2 = gmax2.max(-grad[t]);
                    if grad_diff > 0.0 {
                        let quad = q(i, i) + q(t, t) + 2.0 * y[i] * q(i, t);
                        let obj = -(grad_diff * grad_diff) / if quad > 0.0 { quad } else { TAU };
                        if obj <= obj_min {
                            obj_min = obj;
                            j_sel = Some(t);
                        }
                    }
                }
            }
        }
        let (i, j) = match (i_sel, j_sel) {
            (Some(i), Some(j)) if gmax + gmax2 >= eps => (i, j),
            _ => break,
        };

        let (old_i, old_j) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let mut quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let mut quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for (k, g) in grad.iter_mut().enumerate() {
            *g += q(i, k) * di + q(j, k) * dj;
        }
    }

    // rho: mean of y_i G_i over free vectors, else midpoint of the feasible range
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum_free, mut n_free) = (0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if is_upper(alpha[t]) {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if is_lower(alpha[t]) {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    let rho = if n_free > 0 {
        sum_free / n_free as f64
    } else {
        0.5 * (ub + lb)
    };
    (alpha, rho)
}

pub fn svm_train(set: &LabeledSet, c: f64, kernel_width: f64) -> Result<SvmModel> {
    svm_train_with(set, &SvmParams::new(c, kernel_width))
}

pub fn svm_train_with(set: &LabeledSet, params: &SvmParams) -> Result<SvmModel> {
    params.validate()?;
    set.validate()?;
    let present = set.class_counts().iter().filter(|&&c| c > 0).count();
    if present < 2 {
        return Err(Error::degenerate("training set holds fewer than 2 classes"));
    }
    let gamma = 1.0 / (2.0 * params.kernel_width * params.kernel_width);
    let x = &set.vectors;
    let kernel: Vec<Vec<f64>> = x
        .iter()
        .map(|a| x.iter().map(|b| rbf(a, b, gamma)).collect())
        .collect();

    let mut models = Vec::with_capacity(set.n_classes());
    let mut used = vec![false; x.len()];
    for class in 0..set.n_classes() {
        let y: Vec<f64> = set
            .labels
            .iter()
            .map(|&l| if l == class { 1.0 } else { -1.0 })
            .collect();
        if y.iter().all(|&v| v < 0.0) {
            // class absent from this training set: never predicted
            models.push(BinaryModel {
                support: vec![],
                rho: f64::INFINITY,
            });
            continue;
        }
        let (alpha, rho) = solve_binary(&kernel, &y, params.c, params.tolerance, params.max_iterations);
        let support: Vec<(usize, f64)> = alpha
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0.0)
            .map(|(i, &a)| (i, a * y[i]))
            .collect();
        support.iter().for_each(|&(i, _)| used[i] = true);
        models.push(BinaryModel { support, rho });
    }

    // compact the support vector store
    let mut remap = vec![usize::MAX; x.len()];
    let mut vectors = Vec::new();
    for (i, &u) in used.iter().enumerate() {
        if u {
            remap[i] = vectors.len();
            vectors.push(x[i].clone());
        }
    }
    for m in models.iter_mut() {
        m.support.iter_mut().for_each(|(i, _)| *i = remap[*i]);
    }
    Ok(SvmModel {
        gamma,
        vectors,
        models,
    })
}
