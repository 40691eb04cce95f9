//! Training configuration: a plain-text `key=value` file, overridable by CLI
//! flags. Lines starting with `#` and blank lines are skipped. Unknown keys
//! are rejected by name.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::adam::AdamHyper;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected key=value, got {text:?}")]
    MissingEquals { line: usize, text: String },
    #[error("unknown config key {key:?}")]
    UnknownKey { key: String },
    #[error("invalid value {value:?} for key {key:?}")]
    BadValue { key: String, value: String },
    #[error("missing required config key {key:?}")]
    MissingKey { key: &'static str },
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Everything a training run needs. Defaults mirror the reference
/// architecture (256-dim embedding, three 1024-unit LSTM layers, sequences of
/// 100 characters, batches of 64, 40 epochs, canonical Adam settings).
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub corpus: PathBuf,
    pub out_dir: PathBuf,
    pub epochs: u64,
    pub embed_dim: usize,
    pub hidden_size: usize,
    pub num_layers: usize,
    pub seq_len: usize,
    pub batch_size: usize,
    pub drop_last: bool,
    pub adam: AdamHyper,
    pub checkpoint_every: u64,
    pub base_seed: u64,
    /// Global-norm gradient clip; `None` (the default) leaves gradients
    /// untouched.
    pub clip_norm: Option<f64>,
}

impl TrainConfig {
    pub fn new(corpus: PathBuf, out_dir: PathBuf) -> Self {
        TrainConfig {
            corpus,
            out_dir,
            epochs: 40,
            embed_dim: 256,
            hidden_size: 1024,
            num_layers: 3,
            seq_len: 100,
            batch_size: 64,
            drop_last: true,
            adam: AdamHyper::default(),
            checkpoint_every: 10,
            base_seed: 42,
            clip_norm: None,
        }
    }

    /// Parses a config file. `corpus` and `out_dir` are required unless
    /// supplied later by flag overrides (validation is separate).
    pub fn from_file(path: &Path) -> Result<PartialConfig, ConfigError> {
        let raw = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        let mut partial = PartialConfig::default();
        for (idx, line) in raw.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError::MissingEquals {
                    line: idx + 1,
                    text: line.to_string(),
                }
            })?;
            partial.set(key.trim(), value.trim())?;
        }
        Ok(partial)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("epochs", self.epochs as usize),
            ("embed_dim", self.embed_dim),
            ("hidden_size", self.hidden_size),
            ("num_layers", self.num_layers),
            ("seq_len", self.seq_len),
            ("batch_size", self.batch_size),
            ("checkpoint_every", self.checkpoint_every as usize),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(ConfigError::Invalid(format!("{name} must be at least 1")));
            }
        }
        if !(self.adam.lr > 0.0) {
            return Err(ConfigError::Invalid("lr must be positive".into()));
        }
        for (name, beta) in [("beta1", self.adam.beta1), ("beta2", self.adam.beta2)] {
            if !(0.0..1.0).contains(&beta) {
                return Err(ConfigError::Invalid(format!("{name} must be in [0, 1)")));
            }
        }
        if !(self.adam.epsilon > 0.0) {
            return Err(ConfigError::Invalid("epsilon must be positive".into()));
        }
        if let Some(c) = self.clip_norm {
            if !(c > 0.0) {
                return Err(ConfigError::Invalid("clip_norm must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Values accumulated from a config file before flag overrides are applied.
#[derive(Debug, Default, Clone)]
pub struct PartialConfig {
    pub corpus: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub epochs: Option<u64>,
    pub embed_dim: Option<usize>,
    pub hidden_size: Option<usize>,
    pub num_layers: Option<usize>,
    pub seq_len: Option<usize>,
    pub batch_size: Option<usize>,
    pub drop_last: Option<bool>,
    pub lr: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub epsilon: Option<f64>,
    pub checkpoint_every: Option<u64>,
    pub base_seed: Option<u64>,
    pub clip_norm: Option<f64>,
}

impl PartialConfig {
    fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
            value.parse().map_err(|_| ConfigError::BadValue {
                key: key.to_string(),
                value: value.to_string(),
            })
        }
        match key {
            "corpus" => self.corpus = Some(PathBuf::from(value)),
            "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            "epochs" => self.epochs = Some(parse(key, value)?),
            "embed_dim" => self.embed_dim = Some(parse(key, value)?),
            "hidden_size" => self.hidden_size = Some(parse(key, value)?),
            "num_layers" => self.num_layers = Some(parse(key, value)?),
            "seq_len" => self.seq_len = Some(parse(key, value)?),
            "batch_size" => self.batch_size = Some(parse(key, value)?),
            "drop_last" => self.drop_last = Some(parse(key, value)?),
            "lr" => self.lr = Some(parse(key, value)?),
            "beta1" => self.beta1 = Some(parse(key, value)?),
            "beta2" => self.beta2 = Some(parse(key, value)?),
            "epsilon" => self.epsilon = Some(parse(key, value)?),
            "checkpoint_every" => self.checkpoint_every = Some(parse(key, value)?),
            "base_seed" => self.base_seed = Some(parse(key, value)?),
            "clip_norm" => {
                let v: f64 = parse(key, value)?;
                self.clip_norm = Some(v);
            }
            other => {
                return Err(ConfigError::UnknownKey {
                    key: other.to_string(),
                })
            }
        }
        Ok(())
    }

    /// Finalizes into a validated `TrainConfig`, erroring on missing required
    /// keys.
    pub fn build(self) -> Result<TrainConfig, ConfigError> {
        let corpus = self.corpus.ok_or(ConfigError::MissingKey { key: "corpus" })?;
        let out_dir = self
            .out_dir
            .ok_or(ConfigError::MissingKey { key: "out_dir" })?;
        let mut config = TrainConfig::new(corpus, out_dir);
        if let Some(v) = self.epochs {
            config.epochs = v;
        }
        if let Some(v) = self.embed_dim {
            config.embed_dim = v;
        }
        if let Some(v) = self.hidden_size {
            config.hidden_size = v;
        }
        if let Some(v) = self.num_layers {
            config.num_layers = v;
        }
        if let Some(v) = self.seq_len {
            config.seq_len = v;
        }
        if let Some(v) = self.batch_size {
            config.batch_size = v;
        }
        if let Some(v) = self.drop_last {
            config.drop_last = v;
        }
        if let Some(v) = self.lr {
            config.adam.lr = v;
        }
        if let Some(v) = self.beta1 {
            config.adam.beta1 = v;
        }
        if let Some(v) = self.beta2 {
            config.adam.beta2 = v;
        }
        if let Some(v) = self.epsilon {
            config.adam.epsilon = v;
        }
        if let Some(v) = self.checkpoint_every {
            config.checkpoint_every = v;
        }
        if let Some(v) = self.base_seed {
            config.base_seed = v;
        }
        // clip_norm=0 in a file means "off"
        if let Some(v) = self.clip_norm {
            config.clip_norm = if v == 0.0 { None } else { Some(v) };
        }
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_config(content: &str) -> (tempfile::TempDir, PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("train.conf");
        fs::write(&path, content).unwrap();
        (dir, path)
    }

    #[test]
    fn parses_full_config() {
        let (_dir, path) = write_config(
            "# comment\n\
             corpus=data/songs.txt\n\
             out_dir=runs/a\n\
             epochs=5\n\
             embed_dim=8\n\
             hidden_size=16\n\
             num_layers=1\n\
             seq_len=10\n\
             batch_size=4\n\
             lr=0.01\n\
             checkpoint_every=2\n\
             base_seed=7\n\
             clip_norm=0\n",
        );
        let config = TrainConfig::from_file(&path).unwrap().build().unwrap();
        assert_eq!(config.corpus, PathBuf::from("data/songs.txt"));
        assert_eq!(config.epochs, 5);
        assert_eq!(config.embed_dim, 8);
        assert_eq!(config.adam.lr, 0.01);
        assert_eq!(config.adam.beta1, 0.9);
        assert_eq!(config.clip_norm, None);
        assert_eq!(config.base_seed, 7);
    }

    #[test]
    fn unknown_key_is_named() {
        let (_dir, path) = write_config("corpus=a\nout_dir=b\nlerning_rate=0.1\n");
        let err = TrainConfig::from_file(&path).unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey { key } if key == "lerning_rate"));
    }

    #[test]
    fn bad_value_is_named() {
        let (_dir, path) = write_config("epochs=forty\n");
        let err = TrainConfig::from_file(&path).unwrap_err();
        assert!(
            matches!(err, ConfigError::BadValue { key, value } if key == "epochs" && value == "forty")
        );
    }

    #[test]
    fn zero_epochs_rejected() {
        let (_dir, path) = write_config("corpus=a\nout_dir=b\nepochs=0\n");
        let err = TrainConfig::from_file(&path).unwrap().build().unwrap_err();
        assert!(matches!(err, ConfigError::Invalid(msg) if msg.contains("epochs")));
    }

    #[test]
    fn missing_required_key_reported() {
        let (_dir, path) = write_config("out_dir=b\n");
        let err = TrainConfig::from_file(&path).unwrap().build().unwrap_err();
        assert!(matches!(err, ConfigError::MissingKey { key: "corpus" }));
    }
}
