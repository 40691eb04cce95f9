//! Shifted-sequence training examples and deterministic batch construction.
//!
//! The encoded corpus is cut into consecutive non-overlapping windows of
//! `seq_len + 1` ids (stride `seq_len + 1`, leftover tail discarded). Each
//! window yields an input/target pair shifted by one position. Batches group
//! a seeded Fisher-Yates shuffle of the examples.

use thiserror::Error;

use crate::rng::Rng;
use crate::vocab::EncodedCorpus;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BatchError {
    #[error("corpus too short: {len} ids, need at least {need} for one window")]
    CorpusTooShort { len: usize, need: usize },
    #[error("no examples to batch")]
    NoExamples,
}

/// One input/target pair of equal length, shifted by one character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingExample {
    pub input_ids: Vec<usize>,
    pub target_ids: Vec<usize>,
}

/// How examples are grouped into batches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchPlan {
    pub batch_size: usize,
    pub shuffle_seed: u64,
    /// Discard the final partial batch so every batch has uniform shape.
    pub drop_last: bool,
}

impl BatchPlan {
    pub fn new(batch_size: usize, shuffle_seed: u64) -> Self {
        assert!(batch_size >= 1, "batch_size must be at least 1");
        BatchPlan {
            batch_size,
            shuffle_seed,
            drop_last: true,
        }
    }
}

/// Cuts the corpus into `floor(N / (seq_len + 1))` shifted examples.
pub fn make_examples(
    corpus: &EncodedCorpus,
    seq_len: usize,
) -> Result<Vec<TrainingExample>, BatchError> {
    assert!(seq_len >= 1, "seq_len must be at least 1");
    let window = seq_len + 1;
    if corpus.len() < window {
        return Err(BatchError::CorpusTooShort {
            len: corpus.len(),
            need: window,
        });
    }
    let count = corpus.len() / window;
    let mut examples = Vec::with_capacity(count);
    for k in 0..count {
        let w = &corpus.ids[k * window..(k + 1) * window];
        examples.push(TrainingExample {
            input_ids: w[..seq_len].to_vec(),
            target_ids: w[1..].to_vec(),
        });
    }
    Ok(examples)
}

/// Shuffles the examples with a seeded Fisher-Yates pass and groups them into
/// batches of `plan.batch_size` in shuffled order.
pub fn make_batches(
    examples: &[TrainingExample],
    plan: &BatchPlan,
) -> Result<Vec<Vec<TrainingExample>>, BatchError> {
    if examples.is_empty() {
        return Err(BatchError::NoExamples);
    }
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut rng = Rng::from_seed(plan.shuffle_seed);
    rng.shuffle(&mut order);

    let mut batches = Vec::with_capacity(examples.len() / plan.batch_size + 1);
    for chunk in order.chunks(plan.batch_size) {
        if chunk.len() < plan.batch_size && plan.drop_last {
            break;
        }
        batches.push(chunk.iter().map(|&i| examples[i].clone()).collect());
    }
    Ok(batches)
}
