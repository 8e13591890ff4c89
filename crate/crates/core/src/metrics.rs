//! Mode-coverage evaluation on the 25-Grid.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nn::{Matrix, MlpModel, NnError};
use crate::runlog::RunLog;

/// Number of trailing snapshots averaged into a run score.
pub const SCORE_WINDOW: usize = 5;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("need at least {needed} coverage snapshots, have {have}")]
    TooFewSnapshots { needed: usize, have: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeReport {
    pub covered: usize,
    pub per_mode_hit: Vec<bool>,
    pub n_samples: usize,
    pub threshold: f64,
}

/// Counts centers with at least one sample strictly closer than `threshold`.
pub fn mode_coverage(
    samples: &Matrix,
    centers: &Matrix,
    threshold: f64,
) -> Result<ModeReport, MetricsError> {
    if samples.rows() == 0 || centers.rows() == 0 {
        return Err(MetricsError::Invalid("samples and centers must be non-empty".into()));
    }
    if samples.cols() != centers.cols() {
        return Err(MetricsError::Invalid(format!(
            "samples have dimension {}, centers {}",
            samples.cols(),
            centers.cols()
        )));
    }
    if !(threshold > 0.0) {
        return Err(MetricsError::Invalid(format!("threshold must be > 0, got {threshold}")));
    }
    let t2 = threshold * threshold;
    let per_mode_hit: Vec<bool> = centers
        .row_iter()
        .map(|c| {
            samples.row_iter().any(|s| {
                s.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() < t2
            })
        })
        .collect();
    Ok(ModeReport {
        covered: per_mode_hit.iter().filter(|&&h| h).count(),
        per_mode_hit,
        n_samples: samples.rows(),
        threshold,
    })
}

/// Draws `n_samples` latent vectors `z ~ N(0, I)` and scores the generator.
pub fn snapshot_coverage<R: Rng + ?Sized>(
    gen: &MlpModel,
    centers: &Matrix,
    n_samples: usize,
    threshold: f64,
    rng: &mut R,
) -> Result<ModeReport, MetricsError> {
    let z = crate::gan::sample_latent(n_samples, gen.in_dim(), rng);
    let x = gen.predict(&z)?;
    mode_coverage(&x, centers, threshold)
}

/// Mean covered-mode count over the last [`SCORE_WINDOW`] snapshots.
pub fn run_score(snapshots: &[usize]) -> Result<f64, MetricsError> {
    if snapshots.len() < SCORE_WINDOW {
        return Err(MetricsError::TooFewSnapshots {
            needed: SCORE_WINDOW,
            have: snapshots.len(),
        });
    }
    let tail = &snapshots[snapshots.len() - SCORE_WINDOW..];
    Ok(tail.iter().sum::<usize>() as f64 / SCORE_WINDOW as f64)
}

/// Run score of a training log. Aborted runs score 0.
pub fn eval_protocol(log: &RunLog) -> Result<f64, MetricsError> {
    if log.aborted() {
        return Ok(0.0);
    }
    run_score(&log.coverage_snapshots())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossRunSummary {
    pub mean: f64,
    /// Sample standard deviation (`n − 1` denominator; 0 for a single run).
    pub std: f64,
    pub scores: Vec<f64>,
}

pub fn summarize(scores: &[f64]) -> Result<CrossRunSummary, MetricsError> {
    if scores.is_empty() {
        return Err(MetricsError::Invalid("no run scores".into()));
    }
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    let std = if scores.len() > 1 {
        (scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(CrossRunSummary {
        mean,
        std,
        scores: scores.to_vec(),
    })
}

impl std::fmt::Display for CrossRunSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.2} ± {:.2}", self.mean, self.std)
    }
}
