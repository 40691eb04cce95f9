//! Character vocabulary: the bijection between corpus characters and dense
//! integer indices.
//!
//! Characters are ordered ascending by Unicode code point, which makes the
//! mapping deterministic across runs and platforms. All offsets and counts
//! are in Unicode scalar values, never bytes.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// On-disk format version for vocabulary files.
const VOCAB_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum VocabError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("unknown character {ch:?} at offset {offset}")]
    UnknownChar { ch: char, offset: usize },
    #[error("id {id} out of range at position {position} (vocabulary size {vocab_size})")]
    IdOutOfRange {
        id: usize,
        position: usize,
        vocab_size: usize,
    },
    #[error("unsupported vocabulary format version {0} (expected {VOCAB_FORMAT_VERSION})")]
    FormatVersion(u32),
    #[error("corrupt vocabulary file: {0}")]
    Corrupt(String),
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
    #[error("invalid vocabulary file: {0}")]
    Json(#[from] serde_json::Error),
}

/// Ordered set of distinct characters; index in `chars` is the character id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    chars: Vec<char>,
    lookup: HashMap<char, usize>,
}

/// A corpus replaced by its character indices, each in `[0, vocab size)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedCorpus {
    pub ids: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct VocabFile {
    format_version: u32,
    chars: String,
}

impl Vocabulary {
    /// Builds the vocabulary of all distinct characters in `corpus`, sorted
    /// ascending by code point.
    pub fn build(corpus: &str) -> Result<Self, VocabError> {
        if corpus.is_empty() {
            return Err(VocabError::EmptyCorpus);
        }
        let mut chars: Vec<char> = corpus.chars().collect();
        chars.sort_unstable();
        chars.dedup();
        Ok(Self::from_sorted_chars(chars))
    }

    fn from_sorted_chars(chars: Vec<char>) -> Self {
        let lookup = chars.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Vocabulary { chars, lookup }
    }

    pub fn size(&self) -> usize {
        self.chars.len()
    }

    pub fn chars(&self) -> &[char] {
        &self.chars
    }

    pub fn index_of(&self, ch: char) -> Option<usize> {
        self.lookup.get(&ch).copied()
    }

    pub fn char_at(&self, id: usize) -> Option<char> {
        self.chars.get(id).copied()
    }

    /// Maps every character of `text` to its index. Unknown characters are an
    /// error naming the character and its scalar-value offset.
    pub fn encode(&self, text: &str) -> Result<EncodedCorpus, VocabError> {
        let mut ids = Vec::with_capacity(text.chars().count());
        for (offset, ch) in text.chars().enumerate() {
            match self.lookup.get(&ch) {
                Some(&id) => ids.push(id),
                None => return Err(VocabError::UnknownChar { ch, offset }),
            }
        }
        Ok(EncodedCorpus { ids })
    }

    /// Inverse of `encode`.
    pub fn decode(&self, ids: &[usize]) -> Result<String, VocabError> {
        let mut out = String::with_capacity(ids.len());
        for (position, &id) in ids.iter().enumerate() {
            match self.chars.get(id) {
                Some(&ch) => out.push(ch),
                None => {
                    return Err(VocabError::IdOutOfRange {
                        id,
                        position,
                        vocab_size: self.size(),
                    })
                }
            }
        }
        Ok(out)
    }

    /// Serializes to a small JSON file: a format version plus the characters
    /// in index order. Reload is bit-exact.
    pub fn save(&self, path: &Path) -> Result<(), VocabError> {
        let file = VocabFile {
            format_version: VOCAB_FORMAT_VERSION,
            chars: self.chars.iter().collect(),
        };
        let json = serde_json::to_string(&file)?;
        fs::write(path, json).map_err(|source| VocabError::Write {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, VocabError> {
        let raw = fs::read_to_string(path).map_err(|source| VocabError::Read {
            path: path.display().to_string(),
            source,
        })?;
        let file: VocabFile = serde_json::from_str(&raw)?;
        Self::from_chars_string(file.format_version, &file.chars)
    }

    /// Rebuilds from the serialized character listing, validating the
    /// invariants (sorted ascending, no duplicates).
    pub fn from_chars_string(format_version: u32, chars: &str) -> Result<Self, VocabError> {
        if format_version != VOCAB_FORMAT_VERSION {
            return Err(VocabError::FormatVersion(format_version));
        }
        let chars: Vec<char> = chars.chars().collect();
        if chars.is_empty() {
            return Err(VocabError::Corrupt("no characters".into()));
        }
        if !chars.windows(2).all(|w| w[0] < w[1]) {
            return Err(VocabError::Corrupt(
                "characters not strictly ascending by code point".into(),
            ));
        }
        Ok(Self::from_sorted_chars(chars))
    }

    /// The characters as one string in index order (the serialized listing).
    pub fn chars_string(&self) -> String {
        self.chars.iter().collect()
    }
}

impl EncodedCorpus {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}
