use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{Coding, MmcError};
use crate::datasets::Dataset;
use crate::nn::{AdamState, Matrix, MlpModel, NnError, SgdrSchedule};
use crate::rng::{stream, Stream};
use crate::runlog::{LogRecord, RunLog};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AutoencoderConfig {
    /// Latent dimension.
    pub m: usize,
    /// Code-norm penalty weight; `None` means `1/(10m)`.
    pub gamma: Option<f64>,
    pub epochs: usize,
    pub batch_size: usize,
    pub width: usize,
    pub schedule: SgdrSchedule,
    pub beta1: f64,
    pub beta2: f64,
    pub seed: u64,
}

impl Default for AutoencoderConfig {
    fn default() -> Self {
        Self {
            m: 1,
            gamma: None,
            // six full restart cycles (10 + 20 + ... + 320)
            epochs: 630,
            batch_size: 32,
            width: 128,
            schedule: SgdrSchedule::default(),
            beta1: 0.5,
            beta2: 0.9,
            seed: 0,
        }
    }
}

impl AutoencoderConfig {
    pub fn gamma(&self) -> f64 {
        self.gamma.unwrap_or(1.0 / (10.0 * self.m as f64))
    }

    fn validate(&self, data: &Dataset) -> Result<(), MmcError> {
        if self.m == 0 || self.m >= data.dim() {
            return Err(MmcError::Config(format!(
                "latent dimension must satisfy 1 <= m < n = {}, got {}",
                data.dim(),
                self.m
            )));
        }
        if !(self.gamma() >= 0.0) {
            return Err(MmcError::Config(format!("gamma must be >= 0, got {}", self.gamma())));
        }
        if self.epochs == 0 || self.batch_size == 0 || self.width == 0 {
            return Err(MmcError::Config("epochs, batch_size and width must be >= 1".into()));
        }
        self.schedule.validate().map_err(MmcError::Config)
    }
}

#[derive(Debug, Clone)]
pub struct AutoencoderFit {
    pub encoder: MlpModel,
    pub decoder: MlpModel,
    /// Raw (unstandardized) codes `Enc(x_i)`.
    pub coding: Coding,
    pub log: RunLog,
}

impl AutoencoderFit {
    /// Reconstruction MSE `E‖x − Dec(Enc(x))‖²` of the final epoch.
    pub fn final_recon_mse(&self) -> Option<f64> {
        self.log.records.iter().rev().find_map(|r| match r {
            LogRecord::Epoch { recon_mse, .. } => Some(*recon_mse),
            _ => None,
        })
    }
}

/// Full-data evaluation: `(E‖x − x̂‖², E‖c‖²)`.
fn evaluate(enc: &MlpModel, dec: &MlpModel, x: &Matrix) -> Result<(f64, f64), NnError> {
    let c = enc.predict(x)?;
    let xh = dec.predict(&c)?;
    let n = x.rows() as f64;
    let recon = x
        .as_slice()
        .iter()
        .zip(xh.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / n;
    let norm = c.as_slice().iter().map(|v| v * v).sum::<f64>() / n;
    Ok((recon, norm))
}

/// Minimizes `½ E(‖x − Dec(Enc(x))‖² + γ‖Enc(x)‖²)` with minibatch Adam under
/// the SGDR schedule (one schedule epoch per pass over the data).
pub fn train_autoencoder(data: &Dataset, cfg: &AutoencoderConfig) -> Result<AutoencoderFit, MmcError> {
    cfg.validate(data)?;
    let n = data.dim();
    let gamma = cfg.gamma();
    let mut enc = MlpModel::encoder(n, cfg.m, cfg.width, &mut stream(cfg.seed, Stream::EncoderInit))?;
    let mut dec = MlpModel::decoder(cfg.m, n, cfg.width, &mut stream(cfg.seed, Stream::DecoderInit))?;
    let mut opt_e = AdamState::new(enc.param_count(), cfg.beta1, cfg.beta2, 1e-8);
    let mut opt_d = AdamState::new(dec.param_count(), cfg.beta1, cfg.beta2, 1e-8);
    let mut shuffle = stream(cfg.seed, Stream::AutoencoderShuffle);
    let mut log = RunLog::new();

    let n_samples = data.len();
    let batch = cfg.batch_size.min(n_samples);
    let steps_per_epoch = n_samples.div_ceil(batch);
    let mut order: Vec<usize> = (0..n_samples).collect();

    for epoch in 0..cfg.epochs {
        order.shuffle(&mut shuffle);
        let step = |enc: &mut MlpModel,
                    dec: &mut MlpModel,
                    opt_e: &mut AdamState,
                    opt_d: &mut AdamState,
                    idx: &[usize],
                    lr: f64|
         -> Result<(), NnError> {
            let x = data.points.select_rows(idx);
            let b = idx.len() as f64;
            let (c, enc_cache) = enc.forward(&x)?;
            let (xh, dec_cache) = dec.forward(&c)?;
            let mut up = xh;
            for (u, xi) in up.as_mut_slice().iter_mut().zip(x.as_slice()) {
                *u = (*u - xi) / b;
            }
            let (g_dec, mut dc) = dec.backward(&dec_cache, &up)?;
            for (d, ci) in dc.as_mut_slice().iter_mut().zip(c.as_slice()) {
                *d += gamma * ci / b;
            }
            let (g_enc, _) = enc.backward(&enc_cache, &dc)?;
            opt_d.step_model(dec, &g_dec, lr)?;
            opt_e.step_model(enc, &g_enc, lr)?;
            Ok(())
        };
        for (k, idx) in order.chunks(batch).enumerate() {
            let lr = cfg
                .schedule
                .lr_at(epoch as f64 + k as f64 / steps_per_epoch as f64);
            if let Err(e) = step(&mut enc, &mut dec, &mut opt_e, &mut opt_d, idx, lr) {
                return Err(diverged(e, epoch, log));
            }
        }
        let (recon_mse, code_norm) = match evaluate(&enc, &dec, &data.points) {
            Ok(v) => v,
            Err(e) => return Err(diverged(e, epoch, log)),
        };
        log.push(LogRecord::Epoch {
            epoch,
            recon_mse,
            penalty: gamma * code_norm,
            code_norm,
            lr: cfg.schedule.lr_at((epoch + 1) as f64 - 1e-9),
        });
        if !recon_mse.is_finite() || !code_norm.is_finite() {
            return Err(MmcError::Diverged {
                epoch,
                log: Box::new(log),
            });
        }
    }

    let codes = enc.predict(&data.points)?;
    let coding = Coding::new(codes, data)?;
    Ok(AutoencoderFit {
        encoder: enc,
        decoder: dec,
        coding,
        log,
    })
}

fn diverged(e: NnError, epoch: usize, log: RunLog) -> MmcError {
    match e {
        NnError::NonFinite { .. } | NnError::Numeric(_) => MmcError::Diverged {
            epoch,
            log: Box::new(log),
        },
        other => MmcError::Nn(other),
    }
}
