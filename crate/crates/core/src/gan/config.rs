use serde::{Deserialize, Serialize};

use super::GanError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossVariant {
    /// Logistic min-max loss; non-saturating generator loss.
    Standard,
    /// Wasserstein critic with gradient penalty.
    WganGp,
    /// Hinge loss with a spectrally normalized discriminator.
    HingeSn,
}

impl LossVariant {
    pub fn default_n_critic(self) -> usize {
        match self {
            LossVariant::WganGp => 5,
            LossVariant::Standard | LossVariant::HingeSn => 1,
        }
    }

    /// Discriminator learning rate: the two-timescale setting for the
    /// spectrally normalized hinge variant, equal rates otherwise.
    pub fn default_lr_d(self) -> f64 {
        match self {
            LossVariant::HingeSn => 4e-4,
            LossVariant::Standard | LossVariant::WganGp => 1e-4,
        }
    }

    pub fn spectral_norm(self) -> bool {
        self == LossVariant::HingeSn
    }

    pub fn gradient_penalty(self) -> bool {
        self == LossVariant::WganGp
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GanConfig {
    pub loss: LossVariant,
    /// Latent dimension.
    pub m: usize,
    /// Use the coding as a manifold prior. `false` gives the plain baseline,
    /// which starts directly in the adversarial-only phase.
    pub prior: bool,
    /// Weight of the reconstruction term `(λ/2)·R`.
    pub lambda: f64,
    /// Phase switch threshold on the moving average of `R`.
    pub threshold: f64,
    pub ema_momentum: f64,
    /// Threshold comparisons start after this many generator steps.
    pub switch_after: usize,
    pub lambda_gp: f64,
    /// Discriminator steps per generator step; `None` picks the variant default.
    pub n_critic: Option<usize>,
    pub pack_size: usize,
    pub batch_size: usize,
    /// Generator steps.
    pub iter_budget: usize,
    pub lr_g: f64,
    /// `None` picks the variant default.
    pub lr_d: Option<f64>,
    /// Generator learning rate while the reconstruction term is active.
    /// `lr_g` takes over after the phase switch and for the baseline.
    pub recon_lr_g: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub width: usize,
    pub snapshot_every: usize,
    pub eval_samples: usize,
    pub coverage_threshold: f64,
    pub seed: u64,
}

impl Default for GanConfig {
    fn default() -> Self {
        Self {
            loss: LossVariant::HingeSn,
            m: 1,
            prior: true,
            lambda: 1.0,
            threshold: 0.01,
            ema_momentum: 0.999,
            switch_after: 100,
            lambda_gp: 10.0,
            n_critic: None,
            pack_size: 1,
            batch_size: 64,
            iter_budget: 12_000,
            lr_g: 1e-4,
            lr_d: None,
            recon_lr_g: 1e-3,
            beta1: 0.5,
            beta2: 0.9,
            width: 128,
            snapshot_every: 500,
            eval_samples: 200,
            coverage_threshold: 0.1,
            seed: 0,
        }
    }
}

impl GanConfig {
    pub fn n_critic(&self) -> usize {
        self.n_critic.unwrap_or_else(|| self.loss.default_n_critic())
    }

    pub fn lr_d(&self) -> f64 {
        self.lr_d.unwrap_or_else(|| self.loss.default_lr_d())
    }

    /// The matching no-prior baseline.
    pub fn baseline(&self) -> Self {
        Self {
            prior: false,
            lambda: 0.0,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), GanError> {
        let bad = |msg: String| Err(GanError::Config(msg));
        if self.m == 0 {
            return bad("m must be >= 1".into());
        }
        if !(self.lambda >= 0.0) {
            return bad(format!("lambda must be >= 0, got {}", self.lambda));
        }
        if !(0.0..1.0).contains(&self.ema_momentum) {
            return bad(format!("ema_momentum must lie in [0, 1), got {}", self.ema_momentum));
        }
        if !(self.threshold >= 0.0) {
            return bad(format!("threshold must be >= 0, got {}", self.threshold));
        }
        if self.pack_size == 0 || self.n_critic() == 0 {
            return bad("pack_size and n_critic must be >= 1".into());
        }
        if self.batch_size == 0 || self.batch_size % self.pack_size != 0 {
            return bad(format!(
                "batch_size {} must be a positive multiple of pack_size {}",
                self.batch_size, self.pack_size
            ));
        }
        if !(self.lr_g >= 0.0 && self.lr_d() >= 0.0 && self.recon_lr_g >= 0.0) {
            return bad("learning rates must be >= 0".into());
        }
        if self.width == 0 || self.snapshot_every == 0 || self.eval_samples == 0 {
            return bad("width, snapshot_every and eval_samples must be >= 1".into());
        }
        if !(self.coverage_threshold > 0.0) {
            return bad("coverage_threshold must be > 0".into());
        }
        Ok(())
    }
}
