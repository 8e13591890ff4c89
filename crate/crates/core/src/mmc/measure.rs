//! Monte-Carlo estimate of the Riemann volume of a decoder's image of the
//! code hull, `Λ(f) = ∫_S √|det(JᵀJ)| ds`, and the Lipschitz upper bound
//! `Λ(f) ≤ L^m vol(S)`.

use serde::{Deserialize, Serialize};

use super::{Hull, MmcError};
use crate::nn::{Matrix, MlpModel};
use crate::rng::{stream, Stream};

/// Central-difference step for decoder Jacobians.
pub const JACOBIAN_STEP: f64 = 1e-5;

/// Relative Monte-Carlo slack allowed by [`lipschitz_bound_check`].
pub const BOUND_SLACK: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub lambda_hat: f64,
    pub hull_volume: f64,
    pub lipschitz_hat: f64,
    /// `lipschitz_hat^m · hull_volume`.
    pub bound: f64,
    pub samples_used: usize,
    /// The hull has zero volume; `lambda_hat` is reported as 0.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub report: MeasureReport,
    pub slack: f64,
    pub pass: bool,
}

/// Volume element and operator norm of an `n × m` Jacobian (m ≤ 2), stored
/// column by column.
fn volume_and_norm(cols: &[Vec<f64>]) -> (f64, f64) {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    match cols {
        [a] => {
            let n = dot(a, a).sqrt();
            (n, n)
        }
        [a, b] => {
            let (g11, g12, g22) = (dot(a, a), dot(a, b), dot(b, b));
            let det = g11 * g22 - g12 * g12;
            let half_tr = 0.5 * (g11 + g22);
            let disc = (0.25 * (g11 - g22) * (g11 - g22) + g12 * g12).sqrt();
            (det.abs().sqrt(), (half_tr + disc).max(0.0).sqrt())
        }
        _ => unreachable!("hull dimension is 1 or 2"),
    }
}

pub fn mapping_measure_estimate(
    decoder: &MlpModel,
    hull: &Hull,
    n_samples: usize,
    seed: u64,
) -> Result<MeasureReport, MmcError> {
    let m = hull.dim();
    if decoder.in_dim() != m {
        return Err(MmcError::Config(format!(
            "decoder takes {} inputs but the hull is {m}-dimensional",
            decoder.in_dim()
        )));
    }
    if n_samples < 100 {
        return Err(MmcError::Config(format!("need at least 100 samples, got {n_samples}")));
    }
    let volume = hull.volume();
    if !(volume > 0.0) {
        return Ok(MeasureReport {
            lambda_hat: 0.0,
            hull_volume: 0.0,
            lipschitz_hat: 0.0,
            bound: 0.0,
            samples_used: 0,
            degenerate: true,
        });
    }

    let mut rng = stream(seed, Stream::Measure);
    // rows: for each sample s and dimension k, s + h e_k then s − h e_k
    let mut probes = Matrix::zeros(n_samples * 2 * m, m);
    for i in 0..n_samples {
        let s = hull.sample(&mut rng);
        for k in 0..m {
            for (sign, slot) in [(1.0, 0), (-1.0, 1)] {
                let row = probes.row_mut((i * m + k) * 2 + slot);
                row.copy_from_slice(&s);
                row[k] += sign * JACOBIAN_STEP;
            }
        }
    }
    let out = decoder.predict(&probes)?;
    let n_out = out.cols();

    let mut acc = 0.0;
    let mut lip: f64 = 0.0;
    let mut cols = vec![vec![0.0; n_out]; m];
    for i in 0..n_samples {
        for (k, col) in cols.iter_mut().enumerate() {
            let plus = out.row((i * m + k) * 2);
            let minus = out.row((i * m + k) * 2 + 1);
            for ((c, p), q) in col.iter_mut().zip(plus).zip(minus) {
                *c = (p - q) / (2.0 * JACOBIAN_STEP);
            }
        }
        let (vol, norm) = volume_and_norm(&cols);
        acc += vol;
        lip = lip.max(norm);
    }
    let lambda_hat = volume * acc / n_samples as f64;
    Ok(MeasureReport {
        lambda_hat,
        hull_volume: volume,
        lipschitz_hat: lip,
        bound: lip.powi(m as i32) * volume,
        samples_used: n_samples,
        degenerate: false,
    })
}

/// Checks `Λ̂ ≤ L̂^m vol(S) · (1 + 5%)`.
pub fn lipschitz_bound_check(
    decoder: &MlpModel,
    hull: &Hull,
    n_samples: usize,
    seed: u64,
) -> Result<BoundCheck, MmcError> {
    let report = mapping_measure_estimate(decoder, hull, n_samples, seed)?;
    let pass = report.lambda_hat <= report.bound * (1.0 + BOUND_SLACK);
    Ok(BoundCheck {
        report,
        slack: BOUND_SLACK,
        pass,
    })
}
