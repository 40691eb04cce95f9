//! Self-describing checkpoint files for exact training resume.
//!
//! Layout: the 8-byte magic `CHARLMCK`, a u64 little-endian header length,
//! a JSON header (format version, model config, vocabulary characters,
//! optimizer hyperparameters, epoch/step counters, PRNG state as four u64
//! words, cumulative elapsed seconds), then three runs of raw little-endian
//! f64 blocks: the parameters, the Adam first moments, and the Adam second
//! moments, each in the fixed tensor order documented on
//! `Parameters::blocks`. Reloading on the same platform reproduces training
//! bit-exactly.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adam::{AdamHyper, AdamState};
use crate::net::{ModelConfig, Parameters};
use crate::vocab::{VocabError, Vocabulary};

const MAGIC: &[u8; 8] = b"CHARLMCK";
const CHECKPOINT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("failed to read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("failed to write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("not a checkpoint file (bad magic)")]
    BadMagic,
    #[error("unsupported checkpoint format version {0} (expected {CHECKPOINT_FORMAT_VERSION})")]
    FormatVersion(u32),
    #[error("corrupt checkpoint: {0}")]
    Corrupt(String),
    #[error("invalid checkpoint header: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid checkpoint vocabulary: {0}")]
    Vocab(#[from] VocabError),
}

/// Everything needed to resume training or to generate: configuration,
/// vocabulary, weights, optimizer state, PRNG state and progress counters.
#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub config: ModelConfig,
    pub vocab: Vocabulary,
    pub params: Parameters,
    pub adam: AdamState,
    /// Completed epochs.
    pub epoch: u64,
    /// Completed optimizer steps.
    pub step: u64,
    pub rng_state: [u64; 4],
    pub base_seed: u64,
    pub elapsed_seconds: f64,
}

#[derive(Serialize, Deserialize)]
struct Header {
    format_version: u32,
    model: ModelConfig,
    vocab_chars: String,
    adam: AdamHyper,
    adam_t: u64,
    epoch: u64,
    step: u64,
    rng_state: [u64; 4],
    base_seed: u64,
    elapsed_seconds: f64,
}

impl Checkpoint {
    pub fn save(&self, path: &Path) -> Result<(), CheckpointError> {
        let header = Header {
            format_version: CHECKPOINT_FORMAT_VERSION,
            model: self.config,
            vocab_chars: self.vocab.chars_string(),
            adam: self.adam.hyper,
            adam_t: self.adam.t,
            epoch: self.epoch,
            step: self.step,
            rng_state: self.rng_state,
            base_seed: self.base_seed,
            elapsed_seconds: self.elapsed_seconds,
        };
        let header_json = serde_json::to_vec(&header)?;

        let param_count = self.config.param_count();
        let mut bytes =
            Vec::with_capacity(MAGIC.len() + 8 + header_json.len() + 3 * param_count * 8);
        bytes.extend_from_slice(MAGIC);
        bytes.extend_from_slice(&(header_json.len() as u64).to_le_bytes());
        bytes.extend_from_slice(&header_json);
        for params in [&self.params, &self.adam.m, &self.adam.v] {
            for (_, block) in params.blocks() {
                for &v in block {
                    bytes.extend_from_slice(&v.to_le_bytes());
                }
            }
        }
        fs::write(path, bytes).map_err(|source| CheckpointError::Write {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CheckpointError> {
        let bytes = fs::read(path).map_err(|source| CheckpointError::Read {
            path: path.display().to_string(),
            source,
        })?;
        if bytes.len() < MAGIC.len() + 8 || &bytes[..MAGIC.len()] != MAGIC {
            return Err(CheckpointError::BadMagic);
        }
        let header_len =
            u64::from_le_bytes(bytes[MAGIC.len()..MAGIC.len() + 8].try_into().unwrap()) as usize;
        let header_start = MAGIC.len() + 8;
        let blocks_start = header_start + header_len;
        if bytes.len() < blocks_start {
            return Err(CheckpointError::Corrupt("truncated header".into()));
        }
        let header: Header = serde_json::from_slice(&bytes[header_start..blocks_start])?;
        if header.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(CheckpointError::FormatVersion(header.format_version));
        }
        let vocab = Vocabulary::from_chars_string(1, &header.vocab_chars)?;
        if vocab.size() != header.model.vocab_size {
            return Err(CheckpointError::Corrupt(format!(
                "vocabulary has {} characters but config says {}",
                vocab.size(),
                header.model.vocab_size
            )));
        }

        let param_count = header.model.param_count();
        let expected = blocks_start + 3 * param_count * 8;
        if bytes.len() != expected {
            return Err(CheckpointError::Corrupt(format!(
                "file is {} bytes, expected {expected}",
                bytes.len()
            )));
        }

        let mut offset = blocks_start;
        let mut read_params = || -> Parameters {
            let mut params = Parameters::zeros(&header.model);
            for (_, block) in params.blocks_mut() {
                for v in block {
                    *v = f64::from_le_bytes(bytes[offset..offset + 8].try_into().unwrap());
                    offset += 8;
                }
            }
            params
        };
        let params = read_params();
        let m = read_params();
        let v = read_params();

        Ok(Checkpoint {
            config: header.model,
            vocab,
            params,
            adam: AdamState {
                hyper: header.adam,
                m,
                v,
                t: header.adam_t,
            },
            epoch: header.epoch,
            step: header.step,
            rng_state: header.rng_state,
            base_seed: header.base_seed,
            elapsed_seconds: header.elapsed_seconds,
        })
    }
}
