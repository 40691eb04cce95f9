//! The network: embedding lookup, a stack of LSTM layers, and a dense output
//! layer producing next-character logits, with exact gradients via
//! backpropagation through time.
//!
//! Gate blocks within every 4H-sized tensor are ordered `[input, forget,
//! cell-candidate, output]`; checkpoints and gradients rely on that order.
//! All math is f64.

mod backward;
mod cell;
mod forward;

pub use backward::backward;
pub use cell::{lstm_cell_backward, lstm_cell_forward, CellCache};
pub use forward::{forward, loss, step, Forward};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::Rng;
use crate::tensor::Tensor2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetError {
    #[error("input id {id} out of range at batch {batch}, step {step} (vocab size {vocab_size})")]
    IdOutOfRange {
        id: usize,
        batch: usize,
        step: usize,
        vocab_size: usize,
    },
    #[error("target id {id} out of range at batch {batch}, step {step} (vocab size {vocab_size})")]
    TargetOutOfRange {
        id: usize,
        batch: usize,
        step: usize,
        vocab_size: usize,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid model config: {0}")]
    Config(String),
}

/// Architecture hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub vocab_size: usize,
    pub embed_dim: usize,
    pub hidden_size: usize,
    pub num_layers: usize,
    pub seq_len: usize,
}

impl ModelConfig {
    pub fn validate(&self) -> Result<(), NetError> {
        let fields = [
            ("vocab_size", self.vocab_size),
            ("embed_dim", self.embed_dim),
            ("hidden_size", self.hidden_size),
            ("num_layers", self.num_layers),
            ("seq_len", self.seq_len),
        ];
        for (name, v) in fields {
            if v == 0 {
                return Err(NetError::Config(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    /// Input width of LSTM layer `layer`: the embedding for the first layer,
    /// the hidden size for the rest.
    pub fn layer_input_dim(&self, layer: usize) -> usize {
        if layer == 0 {
            self.embed_dim
        } else {
            self.hidden_size
        }
    }

    /// Total trainable parameter count. For the reference configuration
    /// (V=100, E=256, H=1024, 3 layers) this is 22,160,484.
    pub fn param_count(&self) -> usize {
        let h4 = 4 * self.hidden_size;
        let mut count = self.vocab_size * self.embed_dim;
        for layer in 0..self.num_layers {
            count += h4 * self.layer_input_dim(layer) + h4 * self.hidden_size + h4;
        }
        count + self.vocab_size * self.hidden_size + self.vocab_size
    }
}

/// Weights of one LSTM layer. `w` maps the layer input, `u` the recurrent
/// hidden state; all three stack the four gates along the 4H dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerParams {
    pub w: Tensor2,
    pub u: Tensor2,
    pub b: Vec<f64>,
}

/// Every trainable tensor of the model. Gradients and Adam moments reuse this
/// shape via `zeros`.
#[derive(Debug, Clone, PartialEq)]
pub struct Parameters {
    pub embedding: Tensor2,
    pub layers: Vec<LayerParams>,
    pub dense_w: Tensor2,
    pub dense_b: Vec<f64>,
}

impl Parameters {
    pub fn zeros(config: &ModelConfig) -> Self {
        let h = config.hidden_size;
        let layers = (0..config.num_layers)
            .map(|l| LayerParams {
                w: Tensor2::zeros(4 * h, config.layer_input_dim(l)),
                u: Tensor2::zeros(4 * h, h),
                b: vec![0.0; 4 * h],
            })
            .collect();
        Parameters {
            embedding: Tensor2::zeros(config.vocab_size, config.embed_dim),
            layers,
            dense_w: Tensor2::zeros(config.vocab_size, h),
            dense_b: vec![0.0; config.vocab_size],
        }
    }

    /// Random initialization: every weight matrix is uniform(-s, s) with
    /// s = 1/sqrt(input_dim) (the embedding uses its own dimension E).
    /// Biases start at zero except the forget-gate block, which starts at +1.
    /// Draw order is fixed: embedding, then each layer's w and u, then the
    /// dense matrix, all row-major.
    pub fn init(config: &ModelConfig, rng: &mut Rng) -> Self {
        let mut params = Parameters::zeros(config);
        let h = config.hidden_size;

        let s = 1.0 / (config.embed_dim as f64).sqrt();
        fill_uniform(params.embedding.data_mut(), s, rng);

        for (l, layer) in params.layers.iter_mut().enumerate() {
            let s_w = 1.0 / (config.layer_input_dim(l) as f64).sqrt();
            fill_uniform(layer.w.data_mut(), s_w, rng);
            let s_u = 1.0 / (h as f64).sqrt();
            fill_uniform(layer.u.data_mut(), s_u, rng);
            for v in &mut layer.b[h..2 * h] {
                *v = 1.0;
            }
        }

        let s_d = 1.0 / (h as f64).sqrt();
        fill_uniform(params.dense_w.data_mut(), s_d, rng);
        params
    }

    /// Named flat views over every tensor, in the fixed checkpoint order:
    /// embedding, then per layer w, u, b, then dense w and b.
    pub fn blocks(&self) -> Vec<(String, &[f64])> {
        let mut v: Vec<(String, &[f64])> = vec![("embedding".into(), self.embedding.data())];
        for (i, layer) in self.layers.iter().enumerate() {
            v.push((format!("layer{i}.w"), layer.w.data()));
            v.push((format!("layer{i}.u"), layer.u.data()));
            v.push((format!("layer{i}.b"), &layer.b));
        }
        v.push(("dense.w".into(), self.dense_w.data()));
        v.push(("dense.b".into(), &self.dense_b));
        v
    }

    /// Mutable counterpart of `blocks`, same order.
    pub fn blocks_mut(&mut self) -> Vec<(String, &mut [f64])> {
        let mut v: Vec<(String, &mut [f64])> =
            vec![("embedding".into(), self.embedding.data_mut())];
        for (i, layer) in self.layers.iter_mut().enumerate() {
            v.push((format!("layer{i}.w"), layer.w.data_mut()));
            v.push((format!("layer{i}.u"), layer.u.data_mut()));
            v.push((format!("layer{i}.b"), layer.b.as_mut_slice()));
        }
        v.push(("dense.w".into(), self.dense_w.data_mut()));
        v.push(("dense.b".into(), self.dense_b.as_mut_slice()));
        v
    }

    pub fn count(&self) -> usize {
        self.blocks().iter().map(|(_, b)| b.len()).sum()
    }

    pub fn all_finite(&self) -> bool {
        self.blocks().iter().all(|(_, b)| b.iter().all(|v| v.is_finite()))
    }
}

fn fill_uniform(data: &mut [f64], s: f64, rng: &mut Rng) {
    for v in data {
        *v = rng.next_uniform(s);
    }
}

/// Per-layer hidden and cell vectors carried across time steps.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrentState {
    pub layers: Vec<LayerState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerState {
    pub h: Vec<f64>,
    pub c: Vec<f64>,
}

impl RecurrentState {
    pub fn zeros(config: &ModelConfig) -> Self {
        RecurrentState {
            layers: (0..config.num_layers)
                .map(|_| LayerState {
                    h: vec![0.0; config.hidden_size],
                    c: vec![0.0; config.hidden_size],
                })
                .collect(),
        }
    }
}

/// Numerically stable softmax: shifts by the max before exponentiating.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: f64 = out.iter().sum();
    for v in &mut out {
        *v /= sum;
    }
    out
}

/// log(sum(exp(z))) with max-subtraction.
pub fn log_sum_exp(logits: &[f64]) -> f64 {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    max + logits.iter().map(|&z| (z - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use proptest::prelude::*;

    fn tiny_config() -> ModelConfig {
        ModelConfig {
            vocab_size: 5,
            embed_dim: 4,
            hidden_size: 6,
            num_layers: 2,
            seq_len: 3,
        }
    }

    #[test]
    fn reference_configuration_parameter_count() {
        let config = ModelConfig {
            vocab_size: 100,
            embed_dim: 256,
            hidden_size: 1024,
            num_layers: 3,
            seq_len: 100,
        };
        assert_eq!(config.param_count(), 22_160_484);
    }

    #[test]
    fn zeros_and_count_agree_with_config() {
        let config = tiny_config();
        let params = Parameters::zeros(&config);
        assert_eq!(params.count(), config.param_count());
        assert_eq!(params.layers[0].w.cols(), 4);
        assert_eq!(params.layers[1].w.cols(), 6);
        assert_eq!(params.layers[0].w.rows(), 24);
    }

    #[test]
    fn init_bounds_and_forget_bias() {
        let config = tiny_config();
        let params = Parameters::init(&config, &mut Rng::from_seed(5));
        let h = config.hidden_size;
        for (l, layer) in params.layers.iter().enumerate() {
            let s = 1.0 / (config.layer_input_dim(l) as f64).sqrt();
            assert!(layer.w.data().iter().all(|v| v.abs() <= s));
            assert!(layer.b[..h].iter().all(|&v| v == 0.0));
            assert!(layer.b[h..2 * h].iter().all(|&v| v == 1.0));
            assert!(layer.b[2 * h..].iter().all(|&v| v == 0.0));
        }
        assert!(params.dense_b.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn init_is_deterministic_per_seed() {
        let config = tiny_config();
        let a = Parameters::init(&config, &mut Rng::from_seed(9));
        let b = Parameters::init(&config, &mut Rng::from_seed(9));
        assert_eq!(a, b);
        let c = Parameters::init(&config, &mut Rng::from_seed(10));
        assert_ne!(a, c);
    }

    #[test]
    fn zero_dimension_rejected() {
        let mut config = tiny_config();
        config.num_layers = 0;
        assert!(matches!(config.validate(), Err(NetError::Config(_))));
    }

    #[test]
    fn block_order_is_documented_order() {
        let params = Parameters::zeros(&tiny_config());
        let names: Vec<String> = params.blocks().into_iter().map(|(n, _)| n).collect();
        assert_eq!(
            names,
            vec![
                "embedding", "layer0.w", "layer0.u", "layer0.b", "layer1.w", "layer1.u",
                "layer1.b", "dense.w", "dense.b"
            ]
        );
    }

    proptest! {
        #[test]
        fn softmax_is_a_distribution(logits in proptest::collection::vec(-50.0f64..50.0, 1..40)) {
            let p = softmax(&logits);
            let sum: f64 = p.iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
            prop_assert!(p.iter().all(|&v| v > 0.0));
        }
    }
}
