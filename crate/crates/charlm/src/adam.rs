//! Adam with bias correction, applied uniformly over all parameter tensors.
//!
//! The update follows the original pseudocode: m and v are exponential
//! moving averages of the gradient and its square, both bias-corrected by
//! 1/(1-beta^t), and epsilon is added outside the square root
//! (theta -= lr * m_hat / (sqrt(v_hat) + eps)). Variants differ on the
//! epsilon placement, so this is pinned here and covered by tests.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::net::{ModelConfig, Parameters};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdamError {
    #[error("gradient shape mismatch in {tensor}: {got} values, expected {expected}")]
    ShapeMismatch {
        tensor: String,
        got: usize,
        expected: usize,
    },
    #[error("non-finite gradient in {tensor}")]
    NonFiniteGradient { tensor: String },
}

/// Optimizer hyperparameters; the defaults are the canonical Adam settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamHyper {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamHyper {
    fn default() -> Self {
        AdamHyper {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// First and second moment estimates (congruent to the parameters) plus the
/// step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub hyper: AdamHyper,
    pub m: Parameters,
    pub v: Parameters,
    pub t: u64,
}

impl AdamState {
    pub fn new(config: &ModelConfig, hyper: AdamHyper) -> Self {
        AdamState {
            hyper,
            m: Parameters::zeros(config),
            v: Parameters::zeros(config),
            t: 0,
        }
    }
}

/// One optimizer step: advances `t`, updates the moments from `grads`, and
/// applies the bias-corrected update to `params` in place.
pub fn adam_step(
    params: &mut Parameters,
    grads: &Parameters,
    state: &mut AdamState,
) -> Result<(), AdamError> {
    for (name, block) in grads.blocks() {
        if block.iter().any(|g| !g.is_finite()) {
            return Err(AdamError::NonFiniteGradient { tensor: name });
        }
    }

    state.t += 1;
    let AdamHyper {
        lr,
        beta1,
        beta2,
        epsilon,
    } = state.hyper;
    let bias1 = 1.0 - beta1.powi(state.t as i32);
    let bias2 = 1.0 - beta2.powi(state.t as i32);

    let mut param_blocks = params.blocks_mut();
    let grad_blocks = grads.blocks();
    let mut m_blocks = state.m.blocks_mut();
    let mut v_blocks = state.v.blocks_mut();

    for idx in 0..param_blocks.len() {
        let (name, theta) = &mut param_blocks[idx];
        let (_, g) = &grad_blocks[idx];
        if g.len() != theta.len() {
            return Err(AdamError::ShapeMismatch {
                tensor: name.clone(),
                got: g.len(),
                expected: theta.len(),
            });
        }
        let m = &mut m_blocks[idx].1;
        let v = &mut v_blocks[idx].1;
        for k in 0..theta.len() {
            m[k] = beta1 * m[k] + (1.0 - beta1) * g[k];
            v[k] = beta2 * v[k] + (1.0 - beta2) * g[k] * g[k];
            let m_hat = m[k] / bias1;
            let v_hat = v[k] / bias2;
            theta[k] -= lr * m_hat / (v_hat.sqrt() + epsilon);
        }
    }
    Ok(())
}
