use serde::{Deserialize, Serialize};

use super::{Gradients, MlpModel, NnError};

/// Bias-corrected Adam moments over a flat parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamState {
    pub fn new(n_params: usize, beta1: f64, beta2: f64, eps: f64) -> Self {
        Self {
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
            t: 0,
            beta1,
            beta2,
            eps,
        }
    }

    /// Adam(β₁=0.5, β₂=0.9, ε=1e-8) sized for `model`.
    pub fn for_model(model: &MlpModel) -> Self {
        Self::new(model.param_count(), 0.5, 0.9, 1e-8)
    }

    /// One update of `params` in place. On shape mismatch or non-finite
    /// gradients neither `params` nor the state are touched.
    pub fn step(&mut self, params: &mut [f64], grads: &[f64], lr: f64) -> Result<(), NnError> {
        self.check(params.len(), grads.iter())?;
        if !(lr >= 0.0) {
            return Err(NnError::Contract(format!("learning rate must be >= 0, got {lr}")));
        }
        self.t += 1;
        let (c1, c2) = self.corrections();
        let hyper = (self.beta1, self.beta2, self.eps);
        update_raw(&mut self.m, &mut self.v, params, grads, hyper, lr, c1, c2);
        Ok(())
    }

    /// Updates every parameter of `model` with the matching entries of `grads`.
    pub fn step_model(
        &mut self,
        model: &mut MlpModel,
        grads: &Gradients,
        lr: f64,
    ) -> Result<(), NnError> {
        if grads.layers.len() != model.layers().len() {
            return Err(NnError::Contract("gradient/model layer count mismatch".into()));
        }
        for (g, l) in grads.layers.iter().zip(model.layers()) {
            if g.weight.shape() != l.weight().shape() || g.bias.len() != l.bias().len() {
                return Err(NnError::Contract("gradient/model shape mismatch".into()));
            }
        }
        self.check(
            model.param_count(),
            grads.layers.iter().flat_map(|g| g.weight.as_slice().iter().chain(&g.bias)),
        )?;
        if !(lr >= 0.0) {
            return Err(NnError::Contract(format!("learning rate must be >= 0, got {lr}")));
        }
        self.t += 1;
        let (c1, c2) = self.corrections();
        let hyper = (self.beta1, self.beta2, self.eps);
        let mut offset = 0;
        for (layer, g) in model.layers_mut_internal().iter_mut().zip(&grads.layers) {
            let (w, b) = layer.params_mut();
            for (p, gr) in [(w, g.weight.as_slice()), (b, g.bias.as_slice())] {
                let n = p.len();
                let m = &mut self.m[offset..offset + n];
                let v = &mut self.v[offset..offset + n];
                update_raw(m, v, p, gr, hyper, lr, c1, c2);
                offset += n;
            }
        }
        model.touch();
        Ok(())
    }

    fn check<'a>(&self, n: usize, mut grads: impl Iterator<Item = &'a f64>) -> Result<(), NnError> {
        if n != self.m.len() {
            return Err(NnError::Contract(format!(
                "Adam state holds {} moments, got {n} parameters",
                self.m.len()
            )));
        }
        if grads.any(|g| !g.is_finite()) {
            return Err(NnError::Numeric("non-finite gradient passed to Adam".into()));
        }
        Ok(())
    }

    fn corrections(&self) -> (f64, f64) {
        let t = self.t as i32;
        (1.0 - self.beta1.powi(t), 1.0 - self.beta2.powi(t))
    }
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn update_raw(
    m: &mut [f64],
    v: &mut [f64],
    params: &mut [f64],
    grads: &[f64],
    (b1, b2, eps): (f64, f64, f64),
    lr: f64,
    c1: f64,
    c2: f64,
) {
    for i in 0..params.len() {
        let g = grads[i];
        m[i] = b1 * m[i] + (1.0 - b1) * g;
        v[i] = b2 * v[i] + (1.0 - b2) * g * g;
        let m_hat = m[i] / c1;
        let v_hat = v[i] / c2;
        params[i] -= lr * m_hat / (v_hat.sqrt() + eps);
    }
}
