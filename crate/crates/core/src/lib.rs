//! Minimum manifold coding and manifold-prior GAN training on 2-D toy data.

pub mod cli;
pub mod datasets;
pub mod gan;
pub mod metrics;
pub mod mmc;
pub mod nn;
pub mod rng;
pub mod runlog;
