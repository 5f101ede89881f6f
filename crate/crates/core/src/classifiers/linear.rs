//! Logistic regression and linear SVM. Both train by full-batch gradient
//! descent from zero weights on standardized features and score with
//! `sigmoid(w·x + b)`.

use serde::{Deserialize, Serialize};

use super::{ClassifierError, Result};

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn dot(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LogRegParams {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
}

impl Default for LogRegParams {
    fn default() -> Self {
        Self { learning_rate: 0.1, epochs: 500, l2: 1e-4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SvmParams {
    pub c: f64,
    pub learning_rate: f64,
    pub epochs: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self { c: 1.0, learning_rate: 0.01, epochs: 500 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    pub fn zeros(dim: usize) -> Self {
        Self { weights: vec![0.0; dim], bias: 0.0 }
    }

    pub fn margin(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        sigmoid(self.margin(x))
    }
}

/// Mean binary cross-entropy plus `l2/2 · ‖w‖²`, with its gradient
/// `(∂/∂w, ∂/∂b)`.
pub fn logreg_loss_and_gradient(
    model: &LinearModel,
    rows: &[Vec<f64>],
    labels: &[u8],
    l2: f64,
) -> (f64, Vec<f64>, f64) {
    let n = rows.len() as f64;
    let mut loss = 0.0;
    let mut gw = vec![0.0; model.weights.len()];
    let mut gb = 0.0;
    for (x, &y) in rows.iter().zip(labels) {
        let z = model.margin(x);
        let y = y as f64;
        loss += softplus(z) - y * z;
        let r = sigmoid(z) - y;
        for (g, xi) in gw.iter_mut().zip(x) {
            *g += r * xi;
        }
        gb += r;
    }
    let reg = 0.5 * l2 * model.weights.iter().map(|w| w * w).sum::<f64>();
    for (g, w) in gw.iter_mut().zip(&model.weights) {
        *g = *g / n + l2 * w;
    }
    (loss / n + reg, gw, gb / n)
}

/// Mean hinge loss (labels mapped to ±1) plus `‖w‖² / (2C)`, with a
/// subgradient. Samples exactly on the margin contribute nothing.
pub fn svm_objective_and_subgradient(
    model: &LinearModel,
    rows: &[Vec<f64>],
    labels: &[u8],
    c: f64,
) -> (f64, Vec<f64>, f64) {
    let n = rows.len() as f64;
    let mut loss = 0.0;
    let mut gw = vec![0.0; model.weights.len()];
    let mut gb = 0.0;
    for (x, &y) in rows.iter().zip(labels) {
        let y = if y == 1 { 1.0 } else { -1.0 };
        let m = y * model.margin(x);
        if m < 1.0 {
            loss += 1.0 - m;
            for (g, xi) in gw.iter_mut().zip(x) {
                *g -= y * xi;
            }
            gb -= y;
        }
    }
    let reg = model.weights.iter().map(|w| w * w).sum::<f64>() / (2.0 * c);
    for (g, w) in gw.iter_mut().zip(&model.weights) {
        *g = *g / n + w / c;
    }
    (loss / n + reg, gw, gb / n)
}

fn descend(
    dim: usize,
    epochs: usize,
    lr: f64,
    mut objective: impl FnMut(&LinearModel) -> (f64, Vec<f64>, f64),
) -> Result<LinearModel> {
    let mut model = LinearModel::zeros(dim);
    for epoch in 0..epochs {
        let (loss, gw, gb) = objective(&model);
        if !loss.is_finite() {
            return Err(ClassifierError::NonFiniteLoss { epoch });
        }
        for (w, g) in model.weights.iter_mut().zip(&gw) {
            *w -= lr * g;
        }
        model.bias -= lr * gb;
    }
    if model.weights.iter().any(|w| !w.is_finite()) || !model.bias.is_finite() {
        return Err(ClassifierError::NonFiniteLoss { epoch: epochs });
    }
    Ok(model)
}

pub(crate) fn fit_logreg(rows: &[Vec<f64>], labels: &[u8], p: &LogRegParams) -> Result<LinearModel> {
    if !(p.learning_rate.is_finite() && p.learning_rate > 0.0) {
        return Err(ClassifierError::InvalidHyperparameter("learning_rate must be positive".into()));
    }
    descend(rows[0].len(), p.epochs, p.learning_rate, |m| logreg_loss_and_gradient(m, rows, labels, p.l2))
}

pub(crate) fn fit_svm(rows: &[Vec<f64>], labels: &[u8], p: &SvmParams) -> Result<LinearModel> {
    if !(p.learning_rate.is_finite() && p.learning_rate > 0.0 && p.c.is_finite() && p.c > 0.0) {
        return Err(ClassifierError::InvalidHyperparameter("learning_rate and c must be positive".into()));
    }
    descend(rows[0].len(), p.epochs, p.learning_rate, |m| svm_objective_and_subgradient(m, rows, labels, p.c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::XorShift64Star;

    fn seeded_problem(seed: u64) -> (Vec<Vec<f64>>, Vec<u8>, LinearModel) {
        let mut rng = XorShift64Star::new(seed);
        let rows: Vec<Vec<f64>> = (0..20).map(|_| (0..24).map(|_| rng.uniform(-2.0, 2.0)).collect()).collect();
        let labels: Vec<u8> = (0..20).map(|_| rng.below(2) as u8).collect();
        let model =
            LinearModel { weights: (0..24).map(|_| rng.uniform(-0.5, 0.5)).collect(), bias: rng.uniform(-0.5, 0.5) };
        (rows, labels, model)
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-8)
    }

    /// Central differences over every weight and the bias.
    fn numeric_grad(model: &LinearModel, f: impl Fn(&LinearModel) -> f64) -> (Vec<f64>, f64) {
        let h = 1e-5;
        let mut gw = Vec::new();
        for j in 0..model.weights.len() {
            let mut p = model.clone();
            let mut m = model.clone();
            p.weights[j] += h;
            m.weights[j] -= h;
            gw.push((f(&p) - f(&m)) / (2.0 * h));
        }
        let mut p = model.clone();
        let mut m = model.clone();
        p.bias += h;
        m.bias -= h;
        (gw, (f(&p) - f(&m)) / (2.0 * h))
    }

    #[test]
    fn logreg_gradient_matches_finite_differences() {
        let (rows, labels, model) = seeded_problem(2024);
        let (_, gw, gb) = logreg_loss_and_gradient(&model, &rows, &labels, 1e-2);
        let (nw, nb) = numeric_grad(&model, |m| logreg_loss_and_gradient(m, &rows, &labels, 1e-2).0);
        for (a, b) in gw.iter().zip(&nw) {
            assert!(rel_err(*a, *b) < 1e-5, "{a} vs {b}");
        }
        assert!(rel_err(gb, nb) < 1e-5);
    }

    #[test]
    fn svm_subgradient_matches_away_from_kinks() {
        let (rows, labels, model) = seeded_problem(7);
        // every margin must sit clear of 1 so the objective is smooth at this point
        for (x, &y) in rows.iter().zip(&labels) {
            let s = if y == 1 { 1.0 } else { -1.0 };
            assert!((s * model.margin(x) - 1.0).abs() > 1e-3);
        }
        let (_, gw, gb) = svm_objective_and_subgradient(&model, &rows, &labels, 1.0);
        let (nw, nb) = numeric_grad(&model, |m| svm_objective_and_subgradient(m, &rows, &labels, 1.0).0);
        for (a, b) in gw.iter().zip(&nw) {
            assert!(rel_err(*a, *b) < 1e-5, "{a} vs {b}");
        }
        assert!(rel_err(gb, nb) < 1e-5);
    }

    #[test]
    fn zero_model_scores_half() {
        let m = LinearModel::zeros(4);
        assert_eq!(m.score(&[1.0, -3.0, 2.0, 9.0]), 0.5);
    }

    #[test]
    fn separable_1d() {
        let rows = vec![vec![-1.0], vec![1.0]];
        let labels = vec![0, 1];
        let lr = fit_logreg(&rows, &labels, &LogRegParams { l2: 0.0, ..Default::default() }).unwrap();
        assert!(lr.score(&[-1.0]) < 0.5 && lr.score(&[1.0]) > 0.5);
        let svm = fit_svm(&rows, &labels, &SvmParams::default()).unwrap();
        assert!(svm.margin(&[-1.0]) < 0.0 && svm.margin(&[1.0]) > 0.0);
        assert!(svm.weights[0] > 0.0);
    }

    #[test]
    fn divergence_is_reported() {
        let rows = vec![vec![1e200], vec![-1e200]];
        let r = fit_logreg(&rows, &[1, 0], &LogRegParams { learning_rate: 1e200, epochs: 5, l2: 1.0 });
        assert!(matches!(r, Err(ClassifierError::NonFiniteLoss { .. })));
    }

    #[test]
    fn sigmoid_is_stable() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(-1000.0) >= 0.0 && sigmoid(1000.0) <= 1.0);
        assert!((softplus(-800.0)).abs() < 1e-300 + 1e-12);
        assert!((softplus(800.0) - 800.0).abs() < 1e-9);
    }
}
