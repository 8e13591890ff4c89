use serde::{Deserialize, Serialize};

/// Cosine annealing with warm restarts.
///
/// Cycle `k` lasts `t0 · t_mult^k` epochs; inside a cycle the rate decays from
/// `eta_max` to `eta_min` along a half cosine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SgdrSchedule {
    pub t0: f64,
    pub t_mult: f64,
    pub eta_min: f64,
    pub eta_max: f64,
}

impl Default for SgdrSchedule {
    fn default() -> Self {
        Self {
            t0: 10.0,
            t_mult: 2.0,
            eta_min: 0.0,
            eta_max: 1e-3,
        }
    }
}

impl SgdrSchedule {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.t0 >= 1.0) {
            return Err(format!("SGDR t0 must be >= 1, got {}", self.t0));
        }
        if !(self.t_mult >= 1.0) {
            return Err(format!("SGDR t_mult must be >= 1, got {}", self.t_mult));
        }
        if !(0.0 <= self.eta_min && self.eta_min <= self.eta_max) {
            return Err(format!(
                "SGDR needs 0 <= eta_min <= eta_max, got {} / {}",
                self.eta_min, self.eta_max
            ));
        }
        Ok(())
    }

    /// Learning rate at position `epoch_in_cycle` of a cycle of length
    /// `cycle_len`. The position is clamped into `[0, cycle_len]`.
    pub fn lr(&self, epoch_in_cycle: f64, cycle_len: f64) -> f64 {
        let frac = if cycle_len > 0.0 {
            (epoch_in_cycle / cycle_len).clamp(0.0, 1.0)
        } else {
            1.0
        };
        self.eta_min
            + 0.5 * (self.eta_max - self.eta_min) * (1.0 + (std::f64::consts::PI * frac).cos())
    }

    /// Splits a global (fractional) epoch into `(epoch_in_cycle, cycle_len)`.
    pub fn locate(&self, epoch: f64) -> (f64, f64) {
        let mut start = 0.0;
        let mut len = self.t0;
        while epoch >= start + len {
            start += len;
            len *= self.t_mult;
        }
        (epoch - start, len)
    }

    pub fn lr_at(&self, epoch: f64) -> f64 {
        let (pos, len) = self.locate(epoch.max(0.0));
        self.lr(pos, len)
    }

    /// Total epochs covered by the first `cycles` complete cycles.
    pub fn epochs_for_cycles(&self, cycles: u32) -> f64 {
        (0..cycles).map(|k| self.t0 * self.t_mult.powi(k as i32)).sum()
    }
}
