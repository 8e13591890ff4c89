use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{
    d_loss_grad, g_loss_grad, gradient_penalty, pack_inputs, recon_loss, unpack_inputs,
    EmaTracker, GanConfig, GanError,
};
use crate::datasets::{grid_centers, Dataset, GRID25};
use crate::metrics::snapshot_coverage;
use crate::mmc::Coding;
use crate::nn::{AdamState, Matrix, MlpModel, NnError};
use crate::rng::{stream, Stream, StreamRng};
use crate::runlog::{LogRecord, RunLog};

pub const CHECKPOINT_VERSION: u32 = 1;

/// Training phase. Phase 1 (autoencoder coding) happens before the trainer
/// exists; the trainer only moves from `Recon` to `Adversarial`, never back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Recon,
    Adversarial,
}

impl Phase {
    pub fn number(self) -> u8 {
        match self {
            Phase::Recon => 2,
            Phase::Adversarial => 3,
        }
    }
}

/// `[batch × m]` standard normal latent vectors.
pub fn sample_latent<R: Rng + ?Sized>(batch: usize, m: usize, rng: &mut R) -> Matrix {
    let data = (0..batch * m).map(|_| rng.sample(StandardNormal)).collect();
    Matrix::from_vec(batch, m, data).expect("length matches shape")
}

/// Complete training state. Cloning it forks an identical run; every random
/// draw comes from a dedicated stream so enabling the reconstruction term does
/// not shift the draws of the adversarial updates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GanTrainer {
    pub config: GanConfig,
    pub generator: MlpModel,
    pub discriminator: MlpModel,
    opt_g: AdamState,
    opt_d: AdamState,
    pub ema: EmaTracker,
    pub phase: Phase,
    /// Generator step at which the trainer entered the adversarial-only phase.
    pub transition_iter: Option<usize>,
    /// Completed generator steps.
    pub iter: usize,
    /// Mode centers for coverage snapshots, if the data has discrete modes.
    pub centers: Option<Matrix>,
    rng_data: StreamRng,
    rng_latent: StreamRng,
    rng_recon: StreamRng,
    rng_penalty: StreamRng,
    rng_eval: StreamRng,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub trainer: GanTrainer,
}

impl Checkpoint {
    pub fn new(trainer: GanTrainer) -> Self {
        Self {
            format_version: CHECKPOINT_VERSION,
            trainer,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, GanError> {
        let ck: Checkpoint = serde_json::from_str(text)
            .map_err(|e| GanError::Contract(format!("unreadable checkpoint: {e}")))?;
        if ck.format_version != CHECKPOINT_VERSION {
            return Err(GanError::Contract(format!(
                "checkpoint format {} is not supported (expected {CHECKPOINT_VERSION})",
                ck.format_version
            )));
        }
        Ok(ck)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("checkpoint serializes")
    }
}

fn is_numeric_failure(e: &GanError) -> bool {
    matches!(
        e,
        GanError::Numeric(_) | GanError::Nn(NnError::NonFinite { .. } | NnError::Numeric(_))
    )
}

impl GanTrainer {
    /// Fresh models and optimizers for `data_dim`-dimensional samples.
    pub fn new(config: GanConfig, data_dim: usize, centers: Option<Matrix>) -> Result<Self, GanError> {
        config.validate()?;
        let seed = config.seed;
        let generator = MlpModel::generator(
            config.m,
            data_dim,
            config.width,
            &mut stream(seed, Stream::GeneratorInit),
        )?;
        let discriminator = MlpModel::discriminator(
            data_dim * config.pack_size,
            config.width,
            config.loss.spectral_norm(),
            &mut stream(seed, Stream::DiscriminatorInit),
        )?;
        let mut opt_g = AdamState::for_model(&generator);
        let mut opt_d = AdamState::for_model(&discriminator);
        for opt in [&mut opt_g, &mut opt_d] {
            opt.beta1 = config.beta1;
            opt.beta2 = config.beta2;
        }
        Ok(Self {
            ema: EmaTracker::new(config.ema_momentum),
            phase: if config.prior { Phase::Recon } else { Phase::Adversarial },
            transition_iter: None,
            iter: 0,
            centers,
            generator,
            discriminator,
            opt_g,
            opt_d,
            rng_data: stream(seed, Stream::DataBatch),
            rng_latent: stream(seed, Stream::Latent),
            rng_recon: stream(seed, Stream::Recon),
            rng_penalty: stream(seed, Stream::Penalty),
            rng_eval: stream(seed, Stream::Eval),
            config,
        })
    }

    fn sample_batch(rng: &mut StreamRng, n: usize, batch: usize) -> Vec<usize> {
        (0..batch).map(|_| rng.random_range(0..n)).collect()
    }

    /// One generator step preceded by `n_critic` discriminator steps.
    /// `codes` is required while in the reconstruction phase.
    pub fn step(
        &mut self,
        data: &Matrix,
        codes: Option<&Matrix>,
        log: &mut RunLog,
    ) -> Result<(), GanError> {
        let cfg = &self.config;
        let (b, p) = (cfg.batch_size, cfg.pack_size);
        if data.rows() == 0 || data.cols() != self.generator.out_dim() {
            return Err(GanError::Contract(format!(
                "data {:?} does not match generator output dimension {}",
                data.shape(),
                self.generator.out_dim()
            )));
        }

        let mut d_loss = 0.0;
        let mut gp_sum = 0.0;
        let n_critic = cfg.n_critic();
        for _ in 0..n_critic {
            let idx = Self::sample_batch(&mut self.rng_data, data.rows(), b);
            let real = pack_inputs(&data.select_rows(&idx), p)?;
            let z = sample_latent(b, cfg.m, &mut self.rng_latent);
            let fake = pack_inputs(&self.generator.predict(&z)?, p)?;
            if cfg.loss.spectral_norm() {
                self.discriminator.sn_power_iteration();
            }
            let (dr, cr) = self.discriminator.forward(&real)?;
            let (df, cf) = self.discriminator.forward(&fake)?;
            let (loss, gr, gf) = d_loss_grad(cfg.loss, &dr, &df)?;
            let (mut grads, _) = self.discriminator.backward(&cr, &gr)?;
            grads.add_assign(&self.discriminator.backward(&cf, &gf)?.0);
            let mut total = loss;
            if cfg.loss.gradient_penalty() {
                let (gp, gg) = gradient_penalty(
                    &self.discriminator,
                    &real,
                    &fake,
                    cfg.lambda_gp,
                    &mut self.rng_penalty,
                )?;
                grads.add_assign(&gg);
                total += gp;
                gp_sum += gp;
            }
            if !total.is_finite() {
                return Err(GanError::Numeric("non-finite discriminator loss".into()));
            }
            self.opt_d.step_model(&mut self.discriminator, &grads, cfg.lr_d())?;
            d_loss += total;
        }
        d_loss /= n_critic as f64;

        let z = sample_latent(b, cfg.m, &mut self.rng_latent);
        let (fake, cg) = self.generator.forward(&z)?;
        let (df, cf) = self.discriminator.forward(&pack_inputs(&fake, p)?)?;
        let (g_loss, gup) = g_loss_grad(cfg.loss, &df)?;
        let (_, dx) = self.discriminator.backward(&cf, &gup)?;
        let (mut grads, _) = self.generator.backward(&cg, &unpack_inputs(&dx, p)?)?;

        let mut recon = None;
        if self.phase == Phase::Recon {
            let codes = codes.ok_or_else(|| {
                GanError::Contract("reconstruction phase needs the coding".into())
            })?;
            if codes.rows() != data.rows() {
                return Err(GanError::Contract(format!(
                    "{} codes for {} samples",
                    codes.rows(),
                    data.rows()
                )));
            }
            let idx = Self::sample_batch(&mut self.rng_recon, data.rows(), b);
            let (r, rg) = recon_loss(
                &self.generator,
                &data.select_rows(&idx),
                &codes.select_rows(&idx),
                cfg.lambda,
            )?;
            if !r.is_finite() {
                return Err(GanError::Numeric("non-finite reconstruction error".into()));
            }
            grads.add_assign(&rg);
            recon = Some(r);
        }
        if !g_loss.is_finite() {
            return Err(GanError::Numeric("non-finite generator loss".into()));
        }
        let lr_g = match self.phase {
            Phase::Recon => cfg.recon_lr_g,
            Phase::Adversarial => cfg.lr_g,
        };
        self.opt_g.step_model(&mut self.generator, &grads, lr_g)?;
        self.iter += 1;

        let phase = self.phase;
        let ema = recon.map(|r| self.ema.update(r));
        log.push(LogRecord::Step {
            iter: self.iter,
            phase: phase.number(),
            d_loss,
            g_loss,
            recon,
            ema,
            lr: lr_g,
            gp: cfg.loss.gradient_penalty().then(|| gp_sum / n_critic as f64),
        });
        if let Some(e) = ema {
            if self.iter >= cfg.switch_after && e < cfg.threshold {
                self.phase = Phase::Adversarial;
                self.transition_iter = Some(self.iter);
                log.push(LogRecord::Transition {
                    iter: self.iter,
                    from: Phase::Recon.number(),
                    to: Phase::Adversarial.number(),
                    ema: e,
                });
            }
        }
        if self.iter % cfg.snapshot_every == 0 {
            if let Some(centers) = &self.centers {
                let report = snapshot_coverage(
                    &self.generator,
                    centers,
                    cfg.eval_samples,
                    cfg.coverage_threshold,
                    &mut self.rng_eval,
                )?;
                log.push(LogRecord::Coverage {
                    iter: self.iter,
                    covered: report.covered,
                    n_samples: report.n_samples,
                    threshold: report.threshold,
                });
            }
        }
        Ok(())
    }

    /// Runs until `config.iter_budget` generator steps are done. Numeric
    /// failures are logged as an abort record and returned as
    /// [`GanError::Aborted`] carrying the log.
    pub fn run(
        &mut self,
        data: &Matrix,
        codes: Option<&Matrix>,
        log: &mut RunLog,
    ) -> Result<(), GanError> {
        while self.iter < self.config.iter_budget {
            if let Err(e) = self.step(data, codes, log) {
                if !is_numeric_failure(&e) {
                    return Err(e);
                }
                let reason = e.to_string();
                log.push(LogRecord::Abort {
                    iter: self.iter,
                    reason: reason.clone(),
                });
                return Err(GanError::Aborted {
                    iter: self.iter,
                    reason,
                    log: Box::new(log.clone()),
                });
            }
        }
        Ok(())
    }
}

/// Trains a GAN on `data`. With `config.prior` the generator is tied to the
/// standardized `coding` until the moving reconstruction error drops below
/// `config.threshold`; without it this is the plain baseline. Coverage
/// snapshots are recorded on 25-Grid data.
pub fn train_mmcgan(
    data: &Dataset,
    coding: Option<&Coding>,
    config: &GanConfig,
) -> Result<(GanTrainer, RunLog), GanError> {
    config.validate()?;
    let codes = if config.prior {
        let coding = coding.ok_or_else(|| {
            GanError::Contract("the manifold prior needs a coding".into())
        })?;
        coding.check_matches(data)?;
        if !coding.standardized {
            return Err(GanError::Contract("codes must be standardized first".into()));
        }
        if coding.m() != config.m {
            return Err(GanError::Contract(format!(
                "coding has m = {}, config has m = {}",
                coding.m(),
                config.m
            )));
        }
        Some(&coding.codes)
    } else {
        None
    };
    let centers = (data.meta.generator == GRID25).then(grid_centers);
    let mut trainer = GanTrainer::new(config.clone(), data.dim(), centers)?;
    let mut log = RunLog::new();
    trainer.run(&data.points, codes, &mut log)?;
    Ok((trainer, log))
}
