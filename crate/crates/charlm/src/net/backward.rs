//! Exact backpropagation through time.
//!
//! Walks each sequence backwards, splitting the gradient flowing into a
//! layer's hidden state into the contribution from the layer above at the
//! same step and the contribution from the same layer one step later.
//! Gradients accumulate sequence by sequence in batch order, so the result
//! is reproducible.

use super::cell::lstm_cell_backward;
use super::forward::Forward;
use super::{softmax, ModelConfig, NetError, Parameters};

/// Gradients of the mean cross-entropy with respect to every parameter,
/// in a `Parameters`-shaped container.
pub fn backward(
    fwd: &Forward,
    targets: &[Vec<usize>],
    params: &Parameters,
    config: &ModelConfig,
) -> Result<Parameters, NetError> {
    if fwd.logits.len() != targets.len() {
        return Err(NetError::Shape(format!(
            "{} forward sequences vs {} target sequences",
            fwd.logits.len(),
            targets.len()
        )));
    }
    let positions: usize = targets.iter().map(|t| t.len()).sum();
    if positions == 0 {
        return Err(NetError::Shape("no positions to score".into()));
    }
    let scale = 1.0 / positions as f64;
    let h = config.hidden_size;
    let top = config.num_layers - 1;

    let mut grads = Parameters::zeros(config);

    for (batch, ((seq_logits, seq_targets), seq_caches)) in fwd
        .logits
        .iter()
        .zip(targets)
        .zip(&fwd.caches)
        .enumerate()
    {
        if seq_logits.len() != seq_targets.len() {
            return Err(NetError::Shape(format!(
                "sequence {batch}: {} steps of logits vs {} targets",
                seq_logits.len(),
                seq_targets.len()
            )));
        }
        // gradient flowing back from step t+1 into each layer's h and c
        let mut dh_time = vec![vec![0.0; h]; config.num_layers];
        let mut dc_time = vec![vec![0.0; h]; config.num_layers];

        for (step, (step_logits, &target)) in
            seq_logits.iter().zip(seq_targets).enumerate().rev()
        {
            if target >= config.vocab_size {
                return Err(NetError::TargetOutOfRange {
                    id: target,
                    batch,
                    step,
                    vocab_size: config.vocab_size,
                });
            }
            // d loss / d logits = (softmax - onehot) / positions
            let mut dlogits = softmax(step_logits);
            dlogits[target] -= 1.0;
            for v in &mut dlogits {
                *v *= scale;
            }

            let step_caches = &seq_caches[step];
            grads.dense_w.add_outer(&dlogits, &step_caches[top].h_new);
            for (gb, &d) in grads.dense_b.iter_mut().zip(&dlogits) {
                *gb += d;
            }
            let mut d_above = vec![0.0; h];
            params.dense_w.matvec_transpose(&dlogits, &mut d_above);

            for layer in (0..config.num_layers).rev() {
                let mut dh_total = d_above;
                for (t, &late) in dh_total.iter_mut().zip(&dh_time[layer]) {
                    *t += late;
                }
                let (dx, dh_prev, dc_prev) = lstm_cell_backward(
                    &params.layers[layer],
                    &step_caches[layer],
                    &dh_total,
                    &dc_time[layer],
                    &mut grads.layers[layer],
                );
                dh_time[layer] = dh_prev;
                dc_time[layer] = dc_prev;
                d_above = dx;
            }
            // d_above is now the gradient of the embedded input vector
            let id = fwd.input_ids[batch][step];
            for (gv, &d) in grads.embedding.row_mut(id).iter_mut().zip(&d_above) {
                *gv += d;
            }
        }
    }
    Ok(grads)
}
