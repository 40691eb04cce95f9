//! Forward pass over a batch of sequences, the stateful single-step variant
//! used during generation, and the cross-entropy loss.

use super::cell::{lstm_cell_forward, CellCache};
use super::{log_sum_exp, ModelConfig, NetError, Parameters, RecurrentState};

/// Output of a cached forward pass: logits per (sequence, step) plus every
/// cell cache needed by the backward pass. Indexing is `[batch][step]` and,
/// for caches, `[batch][step][layer]`.
#[derive(Debug)]
pub struct Forward {
    pub logits: Vec<Vec<Vec<f64>>>,
    pub caches: Vec<Vec<Vec<CellCache>>>,
    pub input_ids: Vec<Vec<usize>>,
}

/// Runs each sequence of the batch from a zero state, embedding each id,
/// stacking the LSTM layers, and projecting the top hidden state to logits.
/// Returns raw logits, not probabilities.
pub fn forward(
    inputs: &[Vec<usize>],
    params: &Parameters,
    config: &ModelConfig,
) -> Result<Forward, NetError> {
    config.validate()?;
    let mut logits = Vec::with_capacity(inputs.len());
    let mut caches = Vec::with_capacity(inputs.len());

    for (batch, seq) in inputs.iter().enumerate() {
        let mut state = RecurrentState::zeros(config);
        let mut seq_logits = Vec::with_capacity(seq.len());
        let mut seq_caches = Vec::with_capacity(seq.len());
        for (step, &id) in seq.iter().enumerate() {
            if id >= config.vocab_size {
                return Err(NetError::IdOutOfRange {
                    id,
                    batch,
                    step,
                    vocab_size: config.vocab_size,
                });
            }
            let (step_logits, step_caches) = advance(params, config, id, &mut state, true)?;
            seq_logits.push(step_logits);
            seq_caches.push(step_caches.expect("caches requested"));
        }
        logits.push(seq_logits);
        caches.push(seq_caches);
    }

    Ok(Forward {
        logits,
        caches,
        input_ids: inputs.to_vec(),
    })
}

/// One stateful step: feeds a single character id through the stack, mutating
/// `state` in place. Used by generation, where state persists for the whole
/// session.
pub fn step(
    params: &Parameters,
    config: &ModelConfig,
    id: usize,
    state: &mut RecurrentState,
) -> Result<Vec<f64>, NetError> {
    if id >= config.vocab_size {
        return Err(NetError::IdOutOfRange {
            id,
            batch: 0,
            step: 0,
            vocab_size: config.vocab_size,
        });
    }
    let (logits, _) = advance(params, config, id, state, false)?;
    Ok(logits)
}

fn advance(
    params: &Parameters,
    config: &ModelConfig,
    id: usize,
    state: &mut RecurrentState,
    keep_caches: bool,
) -> Result<(Vec<f64>, Option<Vec<CellCache>>), NetError> {
    let mut x = params.embedding.row(id).to_vec();
    let mut layer_caches = keep_caches.then(|| Vec::with_capacity(config.num_layers));
    for (layer_params, layer_state) in params.layers.iter().zip(&mut state.layers) {
        let (h_new, c_new, cache) = lstm_cell_forward(layer_params, &x, layer_state)?;
        layer_state.h = h_new.clone();
        layer_state.c = c_new;
        if let Some(caches) = &mut layer_caches {
            caches.push(cache);
        }
        x = h_new;
    }
    let mut logits = vec![0.0; config.vocab_size];
    params.dense_w.matvec(&x, &mut logits);
    for (l, &b) in logits.iter_mut().zip(&params.dense_b) {
        *l += b;
    }
    Ok((logits, layer_caches))
}

/// Mean categorical cross-entropy over every (sequence, step) position:
/// -log softmax(logits)[target], stabilized through max-subtraction.
pub fn loss(logits: &[Vec<Vec<f64>>], targets: &[Vec<usize>]) -> Result<f64, NetError> {
    if logits.len() != targets.len() {
        return Err(NetError::Shape(format!(
            "{} logit sequences vs {} target sequences",
            logits.len(),
            targets.len()
        )));
    }
    let mut total = 0.0;
    let mut positions = 0usize;
    for (batch, (seq_logits, seq_targets)) in logits.iter().zip(targets).enumerate() {
        if seq_logits.len() != seq_targets.len() {
            return Err(NetError::Shape(format!(
                "sequence {batch}: {} steps of logits vs {} targets",
                seq_logits.len(),
                seq_targets.len()
            )));
        }
        for (step, (step_logits, &target)) in seq_logits.iter().zip(seq_targets).enumerate() {
            if target >= step_logits.len() {
                return Err(NetError::TargetOutOfRange {
                    id: target,
                    batch,
                    step,
                    vocab_size: step_logits.len(),
                });
            }
            total += log_sum_exp(step_logits) - step_logits[target];
            positions += 1;
        }
    }
    if positions == 0 {
        return Err(NetError::Shape("no positions to score".into()));
    }
    Ok(total / positions as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn config(v: usize, e: usize, h: usize, layers: usize, l: usize) -> ModelConfig {
        ModelConfig {
            vocab_size: v,
            embed_dim: e,
            hidden_size: h,
            num_layers: layers,
            seq_len: l,
        }
    }

    #[test]
    fn zero_parameters_give_zero_logits() {
        let cfg = config(4, 3, 5, 2, 6);
        let params = Parameters::zeros(&cfg);
        let fwd = forward(&[vec![0, 1, 2, 3, 0, 1]], &params, &cfg).unwrap();
        for step_logits in &fwd.logits[0] {
            assert!(step_logits.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn out_of_range_id_reports_position() {
        let cfg = config(3, 2, 2, 1, 4);
        let params = Parameters::zeros(&cfg);
        let err = forward(&[vec![0, 1], vec![1, 7]], &params, &cfg).unwrap_err();
        assert_eq!(
            err,
            NetError::IdOutOfRange {
                id: 7,
                batch: 1,
                step: 1,
                vocab_size: 3
            }
        );
    }

    /// Hand-composed oracle for B=1, L=1: embedding row -> one cell -> dense.
    #[test]
    fn single_step_matches_composed_oracle() {
        let cfg = config(3, 4, 2, 1, 1);
        let params = Parameters::init(&cfg, &mut Rng::from_seed(77));
        let fwd = forward(&[vec![2]], &params, &cfg).unwrap();

        let x = params.embedding.row(2).to_vec();
        let state = RecurrentState::zeros(&cfg);
        let (h_new, _, _) =
            super::super::cell::lstm_cell_forward(&params.layers[0], &x, &state.layers[0])
                .unwrap();
        for v in 0..cfg.vocab_size {
            let mut expected = params.dense_b[v];
            for (j, &hv) in h_new.iter().enumerate() {
                expected += params.dense_w.get(v, j) * hv;
            }
            assert!((fwd.logits[0][0][v] - expected).abs() < 1e-12);
        }
    }

    /// Stacking three layers equals manually chaining three cells.
    #[test]
    fn stacked_forward_matches_manual_chain() {
        let cfg = config(5, 3, 4, 3, 2);
        let params = Parameters::init(&cfg, &mut Rng::from_seed(21));
        let ids = vec![4, 1];
        let fwd = forward(&[ids.clone()], &params, &cfg).unwrap();

        let mut state = RecurrentState::zeros(&cfg);
        for (t, &id) in ids.iter().enumerate() {
            let mut x = params.embedding.row(id).to_vec();
            for (layer, ls) in params.layers.iter().zip(&mut state.layers) {
                let (h_new, c_new, _) =
                    super::super::cell::lstm_cell_forward(layer, &x, ls).unwrap();
                ls.h = h_new.clone();
                ls.c = c_new;
                x = h_new;
            }
            for v in 0..cfg.vocab_size {
                let mut expected = params.dense_b[v];
                for (j, &hv) in x.iter().enumerate() {
                    expected += params.dense_w.get(v, j) * hv;
                }
                assert!((fwd.logits[0][t][v] - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn step_matches_forward_when_fed_sequentially() {
        let cfg = config(6, 4, 5, 2, 4);
        let params = Parameters::init(&cfg, &mut Rng::from_seed(3));
        let ids = vec![5, 0, 3, 2];
        let fwd = forward(&[ids.clone()], &params, &cfg).unwrap();
        let mut state = RecurrentState::zeros(&cfg);
        for (t, &id) in ids.iter().enumerate() {
            let logits = step(&params, &cfg, id, &mut state).unwrap();
            assert_eq!(logits, fwd.logits[0][t]);
        }
    }

    #[test]
    fn forward_is_deterministic() {
        let cfg = config(4, 3, 4, 2, 5);
        let params = Parameters::init(&cfg, &mut Rng::from_seed(8));
        let inputs = vec![vec![0, 1, 2, 3, 1], vec![3, 3, 0, 2, 2]];
        let a = forward(&inputs, &params, &cfg).unwrap();
        let b = forward(&inputs, &params, &cfg).unwrap();
        assert_eq!(a.logits, b.logits);
    }

    #[test]
    fn uniform_logits_loss_is_ln_v() {
        let v = 100;
        let logits = vec![vec![vec![0.25; v]; 3]];
        let targets = vec![vec![7, 42, 99]];
        let got = loss(&logits, &targets).unwrap();
        assert!((got - (v as f64).ln()).abs() < 1e-9);
    }

    #[test]
    fn saturated_correct_logit_loss_is_zero() {
        let mut step_logits = vec![0.0; 10];
        step_logits[4] = 1000.0;
        let got = loss(&[vec![step_logits]], &[vec![4]]).unwrap();
        assert!(got.abs() < 1e-12);
    }

    /// Naive unstabilized formula as the oracle on small-magnitude logits.
    #[test]
    fn loss_matches_naive_formula() {
        let mut seed = 99u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        let b = 2;
        let l = 3;
        let v = 7;
        let logits: Vec<Vec<Vec<f64>>> = (0..b)
            .map(|_| (0..l).map(|_| (0..v).map(|_| next() * 2.0).collect()).collect())
            .collect();
        let targets: Vec<Vec<usize>> = (0..b)
            .map(|bi| (0..l).map(|t| (bi * 3 + t * 2) % v).collect())
            .collect();

        let mut naive = 0.0;
        for (seq_logits, seq_targets) in logits.iter().zip(&targets) {
            for (z, &y) in seq_logits.iter().zip(seq_targets) {
                let denom: f64 = z.iter().map(|&zv| zv.exp()).sum();
                naive += -(z[y].exp() / denom).ln();
            }
        }
        naive /= (b * l) as f64;

        let got = loss(&logits, &targets).unwrap();
        assert!((got - naive).abs() < 1e-9);
    }

    #[test]
    fn loss_is_nonnegative() {
        let logits = vec![vec![vec![3.0, -1.0, 0.5]]];
        assert!(loss(&logits, &[vec![0]]).unwrap() >= 0.0);
    }
}
