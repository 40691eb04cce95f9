//! Character-level language modeling engine.
//!
//! The pipeline runs end to end from stored HTML pages to generated text:
//! corpus extraction and cleaning, character vocabulary and shifted-sequence
//! batching, an embedding + stacked-LSTM + dense network trained with Adam on
//! categorical cross-entropy, and stateful temperature-controlled sampling.
//! All numerics are hand-written f64 with exact BPTT gradients, verified
//! against finite differences.

pub mod adam;
pub mod batch;
pub mod corpus;
pub mod net;
pub mod rng;
pub mod tensor;
pub mod vocab;
