//! Multinomial logistic regression trained with L-BFGS.
//!
//! Objective: summed cross-entropy plus `‖W‖² / (2C)`; intercepts are not
//! penalized. Parameters are laid out class-major, each class block holding
//! its weights followed by its intercept.

use serde::{Deserialize, Serialize};

use super::lbfgs::{minimize, LbfgsOptions, Termination};
use super::tfidf::SparseVector;
use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRegParams {
    /// Inverse regularization strength.
    pub c: f64,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for LogRegParams {
    fn default() -> Self {
        LogRegParams {
            c: 3.0,
            max_iter: 1000,
            tol: 1e-6,
        }
    }
}

/// Regularized negative log-likelihood over a fixed training set.
pub struct LogisticObjective<'a> {
    rows: &'a [SparseVector],
    targets: &'a [usize],
    n_classes: usize,
    n_features: usize,
    c: f64,
}

fn log_sum_exp(z: &[f64]) -> f64 {
    let m = z.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    m + z.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

impl<'a> LogisticObjective<'a> {
    pub fn new(
        rows: &'a [SparseVector],
        targets: &'a [usize],
        n_classes: usize,
        n_features: usize,
        c: f64,
    ) -> Result<Self, EvalError> {
        if rows.len() != targets.len() {
            return Err(EvalError::LengthMismatch(rows.len(), targets.len()));
        }
        if rows.is_empty() {
            return Err(EvalError::EmptyDataset);
        }
        if n_features == 0 {
            return Err(EvalError::NoFeatures);
        }
        if !(c > 0.0) {
            return Err(EvalError::InvalidRegularization(c));
        }
        if let Some(&t) = targets.iter().find(|&&t| t >= n_classes) {
            return Err(EvalError::UnknownClass(t.to_string()));
        }
        Ok(LogisticObjective {
            rows,
            targets,
            n_classes,
            n_features,
            c,
        })
    }

    pub fn n_params(&self) -> usize {
        self.n_classes * (self.n_features + 1)
    }

    fn logits(&self, params: &[f64], row: &SparseVector, out: &mut [f64]) {
        let block = self.n_features + 1;
        for (k, z) in out.iter_mut().enumerate() {
            let w = &params[k * block..(k + 1) * block];
            *z = w[self.n_features] + row.iter().map(|(i, v)| w[i] * v).sum::<f64>();
        }
    }

    /// Objective value; writes the gradient into `grad`.
    pub fn value_and_gradient(&self, params: &[f64], grad: &mut [f64]) -> f64 {
        let block = self.n_features + 1;
        let mut value = 0.0;
        for (k, g) in grad.chunks_mut(block).enumerate() {
            let w = &params[k * block..(k + 1) * block];
            let mut penalty = 0.0;
            for (gi, wi) in g[..self.n_features].iter_mut().zip(w) {
                *gi = wi / self.c;
                penalty += wi * wi;
            }
            g[self.n_features] = 0.0;
            value += penalty / (2.0 * self.c);
        }
        let mut z = vec![0.0; self.n_classes];
        for (row, &y) in self.rows.iter().zip(self.targets) {
            self.logits(params, row, &mut z);
            let lse = log_sum_exp(&z);
            value += lse - z[y];
            for (k, &zk) in z.iter().enumerate() {
                let resid = (zk - lse).exp() - if k == y { 1.0 } else { 0.0 };
                let g = &mut grad[k * block..(k + 1) * block];
                for (i, v) in row.iter() {
                    g[i] += resid * v;
                }
                g[self.n_features] += resid;
            }
        }
        value
    }

    pub fn value(&self, params: &[f64]) -> f64 {
        let mut g = vec![0.0; params.len()];
        self.value_and_gradient(params, &mut g)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub iterations: usize,
    pub termination: Termination,
    pub objective: f64,
    pub grad_norm: f64,
    #[serde(skip)]
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    classes: Vec<String>,
    n_features: usize,
    params: LogRegParams,
    /// classes × features, row-major.
    weights: Vec<f64>,
    intercepts: Vec<f64>,
    fit: FitSummary,
}

/// Fits on `rows` with string labels; classes are ordered lexicographically.
pub fn train_logreg<S: AsRef<str>>(
    rows: &[SparseVector],
    labels: &[S],
    n_features: usize,
    params: &LogRegParams,
) -> Result<LinearModel, EvalError> {
    let mut classes: Vec<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
    classes.sort();
    classes.dedup();
    if classes.len() < 2 {
        return Err(EvalError::SingleClass(classes.len()));
    }
    let targets: Vec<usize> = labels
        .iter()
        .map(|l| classes.binary_search_by(|c| c.as_str().cmp(l.as_ref())).expect("class listed"))
        .collect();
    let objective = LogisticObjective::new(rows, &targets, classes.len(), n_features, params.c)?;
    let opts = LbfgsOptions {
        max_iter: params.max_iter,
        grad_tol: params.tol,
        ..LbfgsOptions::default()
    };
    let result = minimize(
        |x, g| objective.value_and_gradient(x, g),
        vec![0.0; objective.n_params()],
        &opts,
    );
    let block = n_features + 1;
    let mut weights = Vec::with_capacity(classes.len() * n_features);
    let mut intercepts = Vec::with_capacity(classes.len());
    for chunk in result.x.chunks(block) {
        weights.extend_from_slice(&chunk[..n_features]);
        intercepts.push(chunk[n_features]);
    }
    if weights.iter().chain(&intercepts).any(|w| !w.is_finite()) {
        return Err(EvalError::NonFinite);
    }
    Ok(LinearModel {
        classes,
        n_features,
        params: *params,
        weights,
        intercepts,
        fit: FitSummary {
            iterations: result.iterations,
            termination: result.termination,
            objective: result.value,
            grad_norm: result.grad_norm,
            trace: result.trace,
        },
    })
}

impl LinearModel {
    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn params(&self) -> &LogRegParams {
        &self.params
    }

    pub fn fit_summary(&self) -> &FitSummary {
        &self.fit
    }

    pub fn weight(&self, class: usize, feature: usize) -> f64 {
        self.weights[class * self.n_features + feature]
    }

    pub fn intercept(&self, class: usize) -> f64 {
        self.intercepts[class]
    }

    /// Class probabilities, in `classes()` order.
    pub fn predict_scores(&self, row: &SparseVector) -> Vec<f64> {
        let mut z: Vec<f64> = self
            .intercepts
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let w = &self.weights[k * self.n_features..(k + 1) * self.n_features];
                b + row.iter().filter(|(i, _)| *i < self.n_features).map(|(i, v)| w[i] * v).sum::<f64>()
            })
            .collect();
        let lse = log_sum_exp(&z);
        z.iter_mut().for_each(|v| *v = (*v - lse).exp());
        z
    }

    /// Highest-scoring class; ties go to the earlier class.
    pub fn predict(&self, row: &SparseVector) -> &str {
        let scores = self.predict_scores(row);
        let mut best = 0;
        for (k, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = k;
            }
        }
        &self.classes[best]
    }
}
