//! Fully connected network: ReLU hidden layers, one sigmoid output unit,
//! mean binary cross-entropy, full-batch gradient descent.

use serde::{Deserialize, Serialize};

use super::linear::sigmoid;
use super::{ClassifierError, Result};
use crate::rng::XorShift64Star;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MlpParams {
    pub hidden: Vec<usize>,
    pub learning_rate: f64,
    pub epochs: usize,
}

impl Default for MlpParams {
    fn default() -> Self {
        Self { hidden: vec![64], learning_rate: 0.01, epochs: 500 }
    }
}

/// `weights` is `outputs × inputs`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

impl Layer {
    fn forward(&self, x: &[f64]) -> Vec<f64> {
        (0..self.outputs)
            .map(|o| {
                let row = &self.weights[o * self.inputs..(o + 1) * self.inputs];
                row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.biases[o]
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub layers: Vec<Layer>,
}

impl MlpModel {
    /// Layers are initialized first to last; within a layer the weights are
    /// drawn in row-major order from `U(-a, a)` with
    /// `a = sqrt(6 / (inputs + outputs))`. Biases start at zero.
    pub fn init(input: usize, hidden: &[usize], rng: &mut XorShift64Star) -> Self {
        let mut sizes = vec![input];
        sizes.extend_from_slice(hidden);
        sizes.push(1);
        let layers = sizes
            .windows(2)
            .map(|w| {
                let (inputs, outputs) = (w[0], w[1]);
                let a = (6.0 / (inputs + outputs) as f64).sqrt();
                Layer {
                    inputs,
                    outputs,
                    weights: (0..inputs * outputs).map(|_| rng.uniform(-a, a)).collect(),
                    biases: vec![0.0; outputs],
                }
            })
            .collect();
        Self { layers }
    }

    /// Pre-activations of every layer.
    fn forward_all(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut zs = Vec::with_capacity(self.layers.len());
        let mut a = x.to_vec();
        for (i, layer) in self.layers.iter().enumerate() {
            let z = layer.forward(&a);
            if i + 1 < self.layers.len() {
                a = z.iter().map(|v| v.max(0.0)).collect();
            }
            zs.push(z);
        }
        zs
    }

    pub fn logit(&self, x: &[f64]) -> f64 {
        self.forward_all(x).last().unwrap()[0]
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        sigmoid(self.logit(x))
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.biases.len()).sum()
    }

    /// Parameters flattened layer by layer, weights before biases.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for l in &self.layers {
            out.extend_from_slice(&l.weights);
            out.extend_from_slice(&l.biases);
        }
        out
    }

    pub fn unflatten(&mut self, params: &[f64]) {
        let mut at = 0;
        for l in &mut self.layers {
            let nw = l.weights.len();
            l.weights.copy_from_slice(&params[at..at + nw]);
            at += nw;
            let nb = l.biases.len();
            l.biases.copy_from_slice(&params[at..at + nb]);
            at += nb;
        }
    }

    /// Mean cross-entropy and its gradient in `flatten` order.
    pub fn loss_and_gradient(&self, rows: &[Vec<f64>], labels: &[u8]) -> (f64, Vec<f64>) {
        let n = rows.len() as f64;
        let mut grads: Vec<(Vec<f64>, Vec<f64>)> =
            self.layers.iter().map(|l| (vec![0.0; l.weights.len()], vec![0.0; l.biases.len()])).collect();
        let mut loss = 0.0;
        for (x, &y) in rows.iter().zip(labels) {
            let zs = self.forward_all(x);
            let y = y as f64;
            let z = zs.last().unwrap()[0];
            loss += z.max(0.0) + (-z.abs()).exp().ln_1p() - y * z;
            let mut delta = vec![sigmoid(z) - y];
            for li in (0..self.layers.len()).rev() {
                let layer = &self.layers[li];
                let input: Vec<f64> = if li == 0 { x.clone() } else { zs[li - 1].iter().map(|v| v.max(0.0)).collect() };
                let (gw, gb) = &mut grads[li];
                for o in 0..layer.outputs {
                    gb[o] += delta[o];
                    for i in 0..layer.inputs {
                        gw[o * layer.inputs + i] += delta[o] * input[i];
                    }
                }
                if li > 0 {
                    let prev = &zs[li - 1];
                    delta = (0..layer.inputs)
                        .map(|i| {
                            if prev[i] <= 0.0 {
                                return 0.0;
                            }
                            (0..layer.outputs).map(|o| layer.weights[o * layer.inputs + i] * delta[o]).sum()
                        })
                        .collect();
                }
            }
        }
        let mut flat = Vec::with_capacity(self.param_count());
        for (gw, gb) in grads {
            flat.extend(gw.into_iter().map(|g| g / n));
            flat.extend(gb.into_iter().map(|g| g / n));
        }
        (loss / n, flat)
    }
}

pub(crate) fn fit_mlp(rows: &[Vec<f64>], labels: &[u8], p: &MlpParams, seed: u64) -> Result<MlpModel> {
    if p.hidden.is_empty() || p.hidden.contains(&0) {
        return Err(ClassifierError::InvalidHyperparameter("hidden sizes must be non-empty and positive".into()));
    }
    if !(p.learning_rate.is_finite() && p.learning_rate > 0.0) {
        return Err(ClassifierError::InvalidHyperparameter("learning_rate must be positive".into()));
    }
    let mut rng = XorShift64Star::substream(seed, "mlp-init");
    let mut model = MlpModel::init(rows[0].len(), &p.hidden, &mut rng);
    let mut params = model.flatten();
    for epoch in 0..p.epochs {
        let (loss, grad) = model.loss_and_gradient(rows, labels);
        if !loss.is_finite() {
            return Err(ClassifierError::NonFiniteLoss { epoch });
        }
        for (w, g) in params.iter_mut().zip(&grad) {
            *w -= p.learning_rate * g;
        }
        model.unflatten(&params);
    }
    if params.iter().any(|v| !v.is_finite()) {
        return Err(ClassifierError::NonFiniteLoss { epoch: p.epochs });
    }
    Ok(model)
}
