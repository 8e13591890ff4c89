use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::Matrix;

/// Persistent power-iteration vectors for one weight matrix `[out × in]`.
///
/// `u` has length `out`, `v` has length `in`. Both are held constant while a
/// forward/backward pair runs, so `σ̂ = uᵀWv` is a linear function of `W`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnState {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl SnState {
    /// Fresh `u ~ N(0, I)` normalized; `v` is the matching half-step `Wᵀu/‖Wᵀu‖`.
    pub fn random<R: Rng + ?Sized>(weight: &Matrix, rng: &mut R) -> Self {
        let mut u: Vec<f64> = (0..weight.rows()).map(|_| rng.sample(StandardNormal)).collect();
        normalize(&mut u);
        let mut v = weight.t_mul_vec(&u);
        if normalize(&mut v) == 0.0 {
            v = vec![0.0; weight.cols()];
            if let Some(first) = v.first_mut() {
                *first = 1.0;
            }
        }
        Self { u, v }
    }

    /// `σ̂ = uᵀWv`.
    pub fn sigma(&self, weight: &Matrix) -> f64 {
        let wv = weight.mul_vec(&self.v);
        self.u.iter().zip(&wv).map(|(a, b)| a * b).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnOutcome {
    pub normalized: Matrix,
    pub sigma: f64,
    /// Set when `W` is (numerically) zero and `σ̂` is undefined; the weight is
    /// then returned unchanged.
    pub degenerate: bool,
}

fn normalize(x: &mut [f64]) -> f64 {
    let n = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|a| *a /= n);
    }
    n
}

/// One power iteration: `v ← Wᵀu/‖·‖`, `u ← Wv/‖·‖`. Returns `false` (state
/// untouched) when either product vanishes.
pub fn power_iteration(weight: &Matrix, state: &mut SnState) -> bool {
    let mut v = weight.t_mul_vec(&state.u);
    if normalize(&mut v) == 0.0 {
        return false;
    }
    let mut u = weight.mul_vec(&v);
    if normalize(&mut u) == 0.0 {
        return false;
    }
    state.u = u;
    state.v = v;
    true
}

/// Advances the state by one power iteration and returns `W / σ̂`.
pub fn spectral_normalize(weight: &Matrix, state: &mut SnState) -> SnOutcome {
    if !power_iteration(weight, state) {
        return SnOutcome {
            normalized: weight.clone(),
            sigma: 0.0,
            degenerate: true,
        };
    }
    let sigma = state.sigma(weight);
    let mut normalized = weight.clone();
    normalized.scale(1.0 / sigma);
    SnOutcome {
        normalized,
        sigma,
        degenerate: false,
    }
}
