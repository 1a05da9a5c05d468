use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use super::{AnnConfig, AnnError, Dataset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Sigmoid,
}

/// A dense layer. `weights` is row-major: row `j` holds the incoming
/// weights of output neuron `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl Layer {
    #[inline]
    pub fn weight(&self, out: usize, inp: usize) -> f64 {
        self.weights[out * self.inputs + inp]
    }

    fn preactivate(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for j in 0..self.outputs {
            let row = &self.weights[j * self.inputs..(j + 1) * self.inputs];
            let mut s = self.bias[j];
            for (w, xi) in row.iter().zip(x) {
                s += w * xi;
            }
            out.push(s);
        }
    }
}

/// Feed-forward network with ReLU hidden layers and one sigmoid output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnModel {
    pub layers: Vec<Layer>,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[inline]
fn relu(z: f64) -> f64 {
    if z > 0.0 {
        z
    } else {
        0.0
    }
}

/// Uniform draw in `[0, 1)` from the top 53 bits of one `next_u64`.
pub(crate) fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Weights uniform in `±1/√fan_in`, drawn layer by layer in row-major
/// order from ChaCha8 seeded with `cfg.seed`; biases zero.
pub fn init_model(cfg: &AnnConfig) -> Result<AnnModel, AnnError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sizes = vec![cfg.n];
    sizes.extend(&cfg.hidden);
    sizes.push(1);
    let layers = sizes
        .windows(2)
        .enumerate()
        .map(|(l, w)| {
            let (inputs, outputs) = (w[0], w[1]);
            let bound = 1.0 / (inputs as f64).sqrt();
            let weights = (0..inputs * outputs)
                .map(|_| (2.0 * unit_f64(&mut rng) - 1.0) * bound)
                .collect();
            Layer {
                inputs,
                outputs,
                weights,
                bias: vec![0.0; outputs],
                activation: if l + 2 == sizes.len() {
                    Activation::Sigmoid
                } else {
                    Activation::Relu
                },
            }
        })
        .collect();
    Ok(AnnModel { layers })
}

/// Per-sample activations kept for backpropagation. `acts[0]` is the input
/// and `pre[l]` the pre-activation of layer `l`.
pub(crate) struct Pass {
    pub acts: Vec<Vec<f64>>,
    pub pre: Vec<Vec<f64>>,
}

impl AnnModel {
    pub fn inputs(&self) -> usize {
        self.layers[0].inputs
    }

    /// Layer shapes as `(inputs, outputs)`.
    pub fn shapes(&self) -> Vec<(usize, usize)> {
        self.layers.iter().map(|l| (l.inputs, l.outputs)).collect()
    }

    pub fn num_parameters(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    pub(crate) fn pass(&self, x: &[f64]) -> Pass {
        let mut acts = Vec::with_capacity(self.layers.len() + 1);
        let mut pre = Vec::with_capacity(self.layers.len());
        acts.push(x.to_vec());
        for layer in &self.layers {
            let mut z = Vec::with_capacity(layer.outputs);
            layer.preactivate(acts.last().unwrap(), &mut z);
            let a = z
                .iter()
                .map(|&v| match layer.activation {
                    Activation::Relu => relu(v),
                    Activation::Sigmoid => sigmoid(v),
                })
                .collect();
            pre.push(z);
            acts.push(a);
        }
        Pass { acts, pre }
    }

    /// Output logit `z` for a real-valued input.
    pub(crate) fn logit(&self, x: &[f64]) -> f64 {
        let mut a = x.to_vec();
        let mut z = Vec::new();
        for layer in &self.layers {
            layer.preactivate(&a, &mut z);
            if layer.activation == Activation::Relu {
                z.iter_mut().for_each(|v| *v = relu(*v));
            }
            std::mem::swap(&mut a, &mut z);
        }
        // the last layer was not squashed above
        a[0]
    }

    /// Network output `y ∈ (0, 1)`.
    pub fn forward(&self, x: &[bool]) -> Result<f64, AnnError> {
        if x.len() != self.inputs() {
            return Err(AnnError::DimensionMismatch {
                expected: self.inputs(),
                got: x.len(),
            });
        }
        Ok(sigmoid(self.logit(&to_real(x))))
    }

    /// Mean binary cross-entropy over `d`.
    pub fn loss(&self, d: &Dataset) -> f64 {
        let total: f64 = d
            .samples
            .iter()
            .map(|s| bce_logit(self.logit(&to_real(&s.input)), f64::from(s.label)))
            .sum();
        total / d.samples.len() as f64
    }

    /// Parameters in a fixed order: per layer, weights then biases.
    pub fn parameters(&self) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.num_parameters());
        for l in &self.layers {
            p.extend(&l.weights);
            p.extend(&l.bias);
        }
        p
    }

    pub fn set_parameters(&mut self, p: &[f64]) {
        assert_eq!(p.len(), self.num_parameters());
        let mut k = 0;
        for l in &mut self.layers {
            for w in l.weights.iter_mut().chain(l.bias.iter_mut()) {
                *w = p[k];
                k += 1;
            }
        }
    }

    /// Gradient of [`AnnModel::loss`] by backpropagation, in
    /// [`AnnModel::parameters`] order. Samples are accumulated in order.
    pub fn gradient(&self, d: &Dataset) -> Vec<f64> {
        let mut grads: Vec<(Vec<f64>, Vec<f64>)> = self
            .layers
            .iter()
            .map(|l| (vec![0.0; l.weights.len()], vec![0.0; l.bias.len()]))
            .collect();
        let scale = 1.0 / d.samples.len() as f64;
        for s in &d.samples {
            let pass = self.pass(&to_real(&s.input));
            let z = pass.pre.last().unwrap()[0];
            let mut delta = vec![bce_logit_grad(z, f64::from(s.label)) * scale];
            for (l, layer) in self.layers.iter().enumerate().rev() {
                let a_prev = &pass.acts[l];
                let (gw, gb) = &mut grads[l];
                for (j, &dj) in delta.iter().enumerate() {
                    gb[j] += dj;
                    let row = &mut gw[j * layer.inputs..(j + 1) * layer.inputs];
                    for (g, &a) in row.iter_mut().zip(a_prev) {
                        *g += dj * a;
                    }
                }
                if l == 0 {
                    break;
                }
                let pre_prev = &pass.pre[l - 1];
                delta = (0..layer.inputs)
                    .map(|i| {
                        if pre_prev[i] > 0.0 {
                            (0..layer.outputs).map(|j| layer.weight(j, i) * delta[j]).sum()
                        } else {
                            0.0
                        }
                    })
                    .collect();
            }
        }
        grads.into_iter().flat_map(|(w, b)| w.into_iter().chain(b)).collect()
    }
}

pub(crate) fn to_real(x: &[bool]) -> Vec<f64> {
    x.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
}

/// Probabilities are clamped to `[ε, 1 − ε]`, i.e. logits to `±ln((1 − ε)/ε)`.
pub const PROB_CLAMP: f64 = 1e-7;

fn logit_bound() -> f64 {
    ((1.0 - PROB_CLAMP) / PROB_CLAMP).ln()
}

/// `−y·ln σ(z) − (1 − y)·ln(1 − σ(z))` in stable logit form.
pub fn bce_logit(z: f64, y: f64) -> f64 {
    let b = logit_bound();
    let z = z.clamp(-b, b);
    z.max(0.0) - z * y + (-z.abs()).exp().ln_1p()
}

/// `∂ bce / ∂z`; zero where the clamp is active.
pub fn bce_logit_grad(z: f64, y: f64) -> f64 {
    if z.abs() > logit_bound() {
        0.0
    } else {
        sigmoid(z) - y
    }
}

/// 1 iff `y ≥ τ`.
pub fn binarize(y: f64, tau: f64) -> bool {
    y >= tau
}

/// Central finite-difference step used by [`gradient_check`].
pub const FD_STEP: f64 = 1e-5;

/// Largest per-parameter discrepancy between backprop and central finite
/// differences. Relative error `|a − b| / max(|a|, |b|)`, falling back to the
/// absolute error when both magnitudes are below `1e-3`.
pub fn gradient_check(m: &AnnModel, d: &Dataset) -> f64 {
    let analytic = m.gradient(d);
    let base = m.parameters();
    let mut probe = m.clone();
    let mut params = base.clone();
    let mut worst = 0.0f64;
    for (k, &g) in analytic.iter().enumerate() {
        params[k] = base[k] + FD_STEP;
        probe.set_parameters(&params);
        let up = probe.loss(d);
        params[k] = base[k] - FD_STEP;
        probe.set_parameters(&params);
        let down = probe.loss(d);
        params[k] = base[k];
        let fd = (up - down) / (2.0 * FD_STEP);
        let scale = g.abs().max(fd.abs());
        let err = if scale < 1e-3 {
            (g - fd).abs()
        } else {
            (g - fd).abs() / scale
        };
        worst = worst.max(err);
    }
    worst
}
