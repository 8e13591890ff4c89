//! Minimum manifold coding.
//!
//! The 1-D coding measure of a coding is the length of the polyline through
//! the data taken in code order, so its exact minimum is the shortest
//! Hamiltonian path. The practical solver is an autoencoder with a code-norm
//! penalty ([`train_autoencoder`]), whose codes are then z-scored
//! ([`standardize_codes`]) before being handed to the GAN as a prior.

mod autoencoder;
mod coding;
mod hull;
mod measure;
mod shp;

use thiserror::Error;

pub use autoencoder::{train_autoencoder, AutoencoderConfig, AutoencoderFit};
pub use coding::{coding_path_length, jitter_codes, pca_codes, standardize_codes, Coding};
pub use hull::{convex_hull, Hull};
pub use measure::{lipschitz_bound_check, mapping_measure_estimate, BoundCheck, MeasureReport};
pub use shp::{
    find_improving_reversal, path_length, shp_bruteforce, two_opt_improve, two_opt_improve_traced,
    PathOrder, MAX_EXACT_SHP,
};

use crate::datasets::DataError;
use crate::nn::NnError;
use crate::runlog::RunLog;

#[derive(Debug, Error)]
pub enum MmcError {
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("degenerate coding: {0}")]
    Degenerate(String),
    #[error("codes of rows {first} and {second} are tied; jitter the coding to break ties")]
    TiedCodes { first: usize, second: usize },
    #[error("exact search supports at most {max} points, got {n}; use two_opt_improve instead")]
    TooLarge { n: usize, max: usize },
    #[error("ordering is not a permutation of 0..{0}")]
    InvalidPermutation(usize),
    #[error("coding does not match dataset: {0}")]
    Mismatch(String),
    #[error("autoencoder diverged at epoch {epoch}")]
    Diverged { epoch: usize, log: Box<RunLog> },
}
