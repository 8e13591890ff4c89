//! Toy GAN training with the standard, WGAN-GP and hinge/spectral-norm
//! objectives, plus the manifold-prior procedure: the generator is first
//! pulled onto the data through fixed standardized codes (`(λ/2)·R` added to
//! its loss) and the pull is dropped for good once the moving average of `R`
//! falls below a threshold.

mod config;
mod ema;
mod losses;
mod pack;
mod penalty;
mod recon;
mod trainer;

use thiserror::Error;

pub use config::{GanConfig, LossVariant};
pub use ema::EmaTracker;
pub use losses::{d_loss, d_loss_grad, g_loss, g_loss_grad};
pub use pack::{pack_inputs, unpack_inputs};
pub use penalty::gradient_penalty;
pub use recon::recon_loss;
pub use trainer::{sample_latent, train_mmcgan, Checkpoint, GanTrainer, Phase, CHECKPOINT_VERSION};

use crate::metrics::MetricsError;
use crate::mmc::MmcError;
use crate::nn::NnError;
use crate::runlog::RunLog;

#[derive(Debug, Error)]
pub enum GanError {
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error(transparent)]
    Mmc(#[from] MmcError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("training aborted at iteration {iter}: {reason}")]
    Aborted {
        iter: usize,
        reason: String,
        log: Box<RunLog>,
    },
}
