//! Minimal dense-network engine: exact forward/backward for small MLPs, Adam,
//! the SGDR cosine schedule, and spectral normalization by power iteration.
//!
//! Everything is `f64` and single-threaded so a fixed seed reproduces a run
//! bit for bit.

mod adam;
mod matrix;
mod mlp;
mod sgdr;
mod spectral;

pub use adam::AdamState;
pub use matrix::Matrix;
pub use mlp::{
    Activation, BackwardTrace, ForwardCache, Gradients, Layer, LayerGrad, MlpModel, Role,
};
pub use sgdr::SgdrSchedule;
pub use spectral::{power_iteration, spectral_normalize, SnOutcome, SnState};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NnError {
    #[error("configuration error: {0}")]
    Shape(String),
    #[error("numeric overflow in layer {layer}: non-finite activations")]
    NonFinite { layer: usize },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("numeric error: {0}")]
    Numeric(String),
}
