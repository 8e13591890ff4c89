//! Dense MLP with an explicit forward cache and exact backward pass.
//!
//! A layer computes `z = a · W̄ᵀ + b`, `a' = act(z)` on a batch `a` of row
//! vectors, where `W̄ = W` or, with spectral normalization, `W̄ = W / (uᵀWv)`
//! using the persisted `(u, v)`.

use std::borrow::Cow;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::spectral::{power_iteration, SnState};
use super::{Matrix, NnError};

/// Below this `σ̂` a spectrally normalized weight is used unnormalized.
const SIGMA_FLOOR: f64 = 1e-12;

static GENERATION: AtomicU64 = AtomicU64::new(1);

fn next_generation() -> u64 {
    GENERATION.fetch_add(1, Ordering::Relaxed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    LeakyRelu(f64),
    Tanh,
    Identity,
}

impl Activation {
    #[inline]
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::LeakyRelu(alpha) => {
                if z > 0.0 {
                    z
                } else {
                    alpha * z
                }
            }
            Activation::Tanh => z.tanh(),
            Activation::Identity => z,
        }
    }

    /// Derivative at pre-activation `z` with output `y = apply(z)`.
    #[inline]
    pub fn derivative(self, z: f64, y: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::LeakyRelu(alpha) => {
                if z > 0.0 {
                    1.0
                } else {
                    alpha
                }
            }
            Activation::Tanh => 1.0 - y * y,
            Activation::Identity => 1.0,
        }
    }

    /// Second derivative vanishes almost everywhere.
    pub fn is_piecewise_linear(self) -> bool {
        !matches!(self, Activation::Tanh)
    }

    fn init_variance(self, fan_in: usize) -> f64 {
        match self {
            Activation::Relu | Activation::LeakyRelu(_) => 2.0 / fan_in as f64,
            Activation::Tanh | Activation::Identity => 1.0 / fan_in as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Encoder,
    Decoder,
    Generator,
    Discriminator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    weight: Matrix,
    bias: Vec<f64>,
    activation: Activation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sn: Option<SnState>,
}

impl Layer {
    pub fn new(weight: Matrix, bias: Vec<f64>, activation: Activation) -> Result<Self, NnError> {
        if weight.rows() == 0 || weight.cols() == 0 {
            return Err(NnError::Shape("layer weight must be non-empty".into()));
        }
        if bias.len() != weight.rows() {
            return Err(NnError::Shape(format!(
                "bias has {} entries, weight has {} rows",
                bias.len(),
                weight.rows()
            )));
        }
        if let Activation::LeakyRelu(a) = activation {
            if !a.is_finite() {
                return Err(NnError::Shape("leaky_relu slope must be finite".into()));
            }
        }
        Ok(Self {
            weight,
            bias,
            activation,
            sn: None,
        })
    }

    pub fn with_spectral_norm(mut self, state: SnState) -> Result<Self, NnError> {
        if state.u.len() != self.weight.rows() || state.v.len() != self.weight.cols() {
            return Err(NnError::Shape(format!(
                "spectral state ({}, {}) does not match weight {}x{}",
                state.u.len(),
                state.v.len(),
                self.weight.rows(),
                self.weight.cols()
            )));
        }
        self.sn = Some(state);
        Ok(self)
    }

    pub fn in_dim(&self) -> usize {
        self.weight.cols()
    }

    pub fn out_dim(&self) -> usize {
        self.weight.rows()
    }

    pub fn weight(&self) -> &Matrix {
        &self.weight
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn sn_state(&self) -> Option<&SnState> {
        self.sn.as_ref()
    }

    pub(crate) fn params_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (self.weight.as_mut_slice(), &mut self.bias)
    }

    /// `σ̂` used in the forward pass, or `None` when the layer is used as is.
    pub fn sigma(&self) -> Option<f64> {
        let s = self.sn.as_ref()?.sigma(&self.weight);
        (s > SIGMA_FLOOR).then_some(s)
    }

    /// The weight actually applied by the forward pass.
    pub fn effective_weight(&self) -> Cow<'_, Matrix> {
        match self.sigma() {
            Some(s) => {
                let mut w = self.weight.clone();
                w.scale(1.0 / s);
                Cow::Owned(w)
            }
            None => Cow::Borrowed(&self.weight),
        }
    }

    /// Maps a gradient w.r.t. the effective weight `W̄` back onto `W`:
    /// `∂L/∂W = (G − ⟨G, W̄⟩ u vᵀ) / σ̂` with `u, v` held constant.
    fn chain_weight_grad(&self, mut g: Matrix) -> Matrix {
        let (Some(sigma), Some(sn)) = (self.sigma(), self.sn.as_ref()) else {
            return g;
        };
        let mut w_bar = self.weight.clone();
        w_bar.scale(1.0 / sigma);
        let inner = g.frobenius_dot(&w_bar);
        let cols = g.cols();
        for (i, ui) in sn.u.iter().enumerate() {
            let row = &mut g.as_mut_slice()[i * cols..(i + 1) * cols];
            for (x, vj) in row.iter_mut().zip(&sn.v) {
                *x = (*x - inner * ui * vj) / sigma;
            }
        }
        g
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerGrad {
    pub weight: Matrix,
    pub bias: Vec<f64>,
}

/// Per-layer parameter gradients, laid out like the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<LayerGrad>,
}

impl Gradients {
    pub fn zeros_like(model: &MlpModel) -> Self {
        Self {
            layers: model
                .layers
                .iter()
                .map(|l| LayerGrad {
                    weight: Matrix::zeros(l.out_dim(), l.in_dim()),
                    bias: vec![0.0; l.out_dim()],
                })
                .collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Gradients) {
        assert_eq!(self.layers.len(), other.layers.len());
        for (a, b) in self.layers.iter_mut().zip(&other.layers) {
            a.weight.add_assign(&b.weight);
            for (x, y) in a.bias.iter_mut().zip(&b.bias) {
                *x += y;
            }
        }
    }

    pub fn scale(&mut self, s: f64) {
        for l in &mut self.layers {
            l.weight.scale(s);
            l.bias.iter_mut().for_each(|x| *x *= s);
        }
    }

    /// Same ordering as [`MlpModel::params_flat`].
    pub fn to_flat(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weight.as_slice().iter().chain(&l.bias).copied())
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.weight.is_finite() && l.bias.iter().all(|x| x.is_finite()))
    }

    pub fn max_abs(&self) -> f64 {
        self.to_flat().iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Everything the backward pass needs from a forward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    generation: u64,
    /// Input to each layer; `inputs[0]` is the network input.
    inputs: Vec<Matrix>,
    /// Pre-activation of each layer.
    pre: Vec<Matrix>,
    output: Matrix,
}

impl ForwardCache {
    pub fn layer_input(&self, k: usize) -> &Matrix {
        &self.inputs[k]
    }

    pub fn pre_activation(&self, k: usize) -> &Matrix {
        &self.pre[k]
    }

    /// Post-activation of layer `k`.
    pub fn post_activation(&self, k: usize) -> &Matrix {
        self.inputs.get(k + 1).unwrap_or(&self.output)
    }

    pub fn output(&self) -> &Matrix {
        &self.output
    }

    pub fn batch(&self) -> usize {
        self.output.rows()
    }
}

/// Gradients w.r.t. every pre-activation plus the input gradient.
#[derive(Debug, Clone)]
pub struct BackwardTrace {
    /// `deltas[k] = ∂L/∂z_k`, shape `[batch × out_k]`.
    pub deltas: Vec<Matrix>,
    pub input_grad: Matrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MlpModel {
    layers: Vec<Layer>,
    role: Role,
    #[serde(skip, default = "next_generation")]
    generation: u64,
}

impl PartialEq for MlpModel {
    fn eq(&self, other: &Self) -> bool {
        self.role == other.role && self.layers == other.layers
    }
}

impl MlpModel {
    pub fn from_layers(layers: Vec<Layer>, role: Role) -> Result<Self, NnError> {
        if layers.is_empty() {
            return Err(NnError::Shape("model needs at least one layer".into()));
        }
        for (k, pair) in layers.windows(2).enumerate() {
            if pair[0].out_dim() != pair[1].in_dim() {
                return Err(NnError::Shape(format!(
                    "layer {k} outputs {} features but layer {} expects {}",
                    pair[0].out_dim(),
                    k + 1,
                    pair[1].in_dim()
                )));
            }
        }
        if role == Role::Discriminator
            && layers.last().map(|l| l.activation) != Some(Activation::Identity)
        {
            return Err(NnError::Shape(
                "discriminator output activation must be identity".into(),
            ));
        }
        Ok(Self {
            layers,
            role,
            generation: next_generation(),
        })
    }

    /// Random initialization: `W ~ N(0, 2/fan_in)` under (leaky) relu,
    /// `N(0, 1/fan_in)` otherwise; zero biases. `dims` lists every layer width
    /// including input and output.
    pub fn init<R: Rng + ?Sized>(
        dims: &[usize],
        hidden: Activation,
        output: Activation,
        role: Role,
        spectral: bool,
        rng: &mut R,
    ) -> Result<Self, NnError> {
        if dims.len() < 2 {
            return Err(NnError::Shape("need at least input and output widths".into()));
        }
        let n_layers = dims.len() - 1;
        let mut layers = Vec::with_capacity(n_layers);
        for k in 0..n_layers {
            let (fan_in, fan_out) = (dims[k], dims[k + 1]);
            let act = if k + 1 == n_layers { output } else { hidden };
            let std = act.init_variance(fan_in.max(1)).sqrt();
            let data = (0..fan_in * fan_out)
                .map(|_| std * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let weight = Matrix::from_vec(fan_out, fan_in, data)?;
            let mut layer = Layer::new(weight, vec![0.0; fan_out], act)?;
            if spectral {
                let st = SnState::random(&layer.weight, rng);
                layer = layer.with_spectral_norm(st)?;
            }
            layers.push(layer);
        }
        Self::from_layers(layers, role)
    }

    fn widths(input: usize, width: usize, output: usize) -> [usize; 5] {
        [input, width, width, width, output]
    }

    /// `latent → width³ → data`, relu hidden, identity output.
    pub fn generator<R: Rng + ?Sized>(
        latent: usize,
        data: usize,
        width: usize,
        rng: &mut R,
    ) -> Result<Self, NnError> {
        Self::init(
            &Self::widths(latent, width, data),
            Activation::Relu,
            Activation::Identity,
            Role::Generator,
            false,
            rng,
        )
    }

    /// `data → width³ → 1`, leaky_relu(0.2) hidden, identity output.
    pub fn discriminator<R: Rng + ?Sized>(
        data: usize,
        width: usize,
        spectral: bool,
        rng: &mut R,
    ) -> Result<Self, NnError> {
        Self::init(
            &Self::widths(data, width, 1),
            Activation::LeakyRelu(0.2),
            Activation::Identity,
            Role::Discriminator,
            spectral,
            rng,
        )
    }

    pub fn encoder<R: Rng + ?Sized>(
        data: usize,
        latent: usize,
        width: usize,
        rng: &mut R,
    ) -> Result<Self, NnError> {
        Self::init(
            &Self::widths(data, width, latent),
            Activation::Relu,
            Activation::Identity,
            Role::Encoder,
            false,
            rng,
        )
    }

    pub fn decoder<R: Rng + ?Sized>(
        latent: usize,
        data: usize,
        width: usize,
        rng: &mut R,
    ) -> Result<Self, NnError> {
        Self::init(
            &Self::widths(latent, width, data),
            Activation::Relu,
            Activation::Identity,
            Role::Decoder,
            false,
            rng,
        )
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub(crate) fn layers_mut_internal(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn in_dim(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn out_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].out_dim()
    }

    pub fn has_spectral_norm(&self) -> bool {
        self.layers.iter().any(|l| l.sn.is_some())
    }

    /// Marks parameters as changed; caches from earlier forwards become stale.
    pub(crate) fn touch(&mut self) {
        self.generation = next_generation();
    }

    pub fn param_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weight.as_slice().len() + l.bias.len())
            .sum()
    }

    /// Weights (row-major) then bias, layer by layer.
    pub fn params_flat(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weight.as_slice().iter().chain(&l.bias).copied())
            .collect()
    }

    pub fn set_params_flat(&mut self, params: &[f64]) -> Result<(), NnError> {
        if params.len() != self.param_count() {
            return Err(NnError::Shape(format!(
                "expected {} parameters, got {}",
                self.param_count(),
                params.len()
            )));
        }
        let mut rest = params;
        for l in &mut self.layers {
            let (w, b) = l.params_mut();
            let (head, tail) = rest.split_at(w.len());
            w.copy_from_slice(head);
            let (head, tail) = tail.split_at(b.len());
            b.copy_from_slice(head);
            rest = tail;
        }
        self.touch();
        Ok(())
    }

    /// One power iteration on every spectrally normalized layer.
    pub fn sn_power_iteration(&mut self) {
        let mut changed = false;
        for l in &mut self.layers {
            if let Some(st) = l.sn.as_mut() {
                changed |= power_iteration(&l.weight, st);
            }
        }
        if changed {
            self.touch();
        }
    }

    fn check_input(&self, input: &Matrix) -> Result<(), NnError> {
        if input.cols() != self.in_dim() {
            return Err(NnError::Shape(format!(
                "input has {} features, model expects {}",
                input.cols(),
                self.in_dim()
            )));
        }
        if !input.is_finite() {
            return Err(NnError::Numeric("non-finite model input".into()));
        }
        Ok(())
    }

    fn layer_forward(layer: &Layer, k: usize, a: &Matrix) -> Result<(Matrix, Matrix), NnError> {
        let w = layer.effective_weight();
        let mut z = a.matmul_t(&w);
        let cols = z.cols();
        for row in z.as_mut_slice().chunks_exact_mut(cols) {
            for (x, b) in row.iter_mut().zip(&layer.bias) {
                *x += b;
            }
        }
        let y = z.map(|v| layer.activation.apply(v));
        if !y.is_finite() {
            return Err(NnError::NonFinite { layer: k });
        }
        Ok((z, y))
    }

    /// Forward pass without keeping intermediates.
    pub fn predict(&self, input: &Matrix) -> Result<Matrix, NnError> {
        self.check_input(input)?;
        let mut a = Cow::Borrowed(input);
        for (k, layer) in self.layers.iter().enumerate() {
            let (_, y) = Self::layer_forward(layer, k, &a)?;
            a = Cow::Owned(y);
        }
        Ok(a.into_owned())
    }

    pub fn forward(&self, input: &Matrix) -> Result<(Matrix, ForwardCache), NnError> {
        self.check_input(input)?;
        let mut inputs = Vec::with_capacity(self.layers.len());
        let mut pre = Vec::with_capacity(self.layers.len());
        let mut a = input.clone();
        for (k, layer) in self.layers.iter().enumerate() {
            let (z, y) = Self::layer_forward(layer, k, &a)?;
            inputs.push(std::mem::replace(&mut a, y));
            pre.push(z);
        }
        let cache = ForwardCache {
            generation: self.generation,
            inputs,
            pre,
            output: a.clone(),
        };
        Ok((a, cache))
    }

    fn check_cache(&self, cache: &ForwardCache, upstream: &Matrix) -> Result<(), NnError> {
        if cache.generation != self.generation || cache.pre.len() != self.layers.len() {
            return Err(NnError::Contract(
                "forward cache does not belong to this model state".into(),
            ));
        }
        if upstream.shape() != cache.output.shape() {
            return Err(NnError::Contract(format!(
                "upstream gradient {:?} does not match output {:?}",
                upstream.shape(),
                cache.output.shape()
            )));
        }
        Ok(())
    }

    /// Gradients of `⟨upstream, output⟩` w.r.t. every pre-activation and the input.
    pub fn backward_trace(
        &self,
        cache: &ForwardCache,
        upstream: &Matrix,
    ) -> Result<BackwardTrace, NnError> {
        self.check_cache(cache, upstream)?;
        let n = self.layers.len();
        let mut deltas = vec![Matrix::zeros(0, 0); n];
        let mut grad = upstream.clone();
        for k in (0..n).rev() {
            let layer = &self.layers[k];
            let z = &cache.pre[k];
            let y = cache.post_activation(k);
            let mut delta = grad;
            if layer.activation != Activation::Identity {
                for ((d, &zv), &yv) in delta
                    .as_mut_slice()
                    .iter_mut()
                    .zip(z.as_slice())
                    .zip(y.as_slice())
                {
                    *d *= layer.activation.derivative(zv, yv);
                }
            }
            grad = delta.matmul(&layer.effective_weight());
            deltas[k] = delta;
        }
        Ok(BackwardTrace {
            deltas,
            input_grad: grad,
        })
    }

    /// Parameter gradients of `⟨upstream, output⟩` and the input gradient.
    pub fn backward(
        &self,
        cache: &ForwardCache,
        upstream: &Matrix,
    ) -> Result<(Gradients, Matrix), NnError> {
        let trace = self.backward_trace(cache, upstream)?;
        let layers = trace
            .deltas
            .iter()
            .enumerate()
            .map(|(k, d)| LayerGrad {
                weight: d.t_matmul(&cache.inputs[k]),
                bias: d.column_sums(),
            })
            .collect();
        let grads = self.chain_effective_grads(Gradients { layers });
        Ok((grads, trace.input_grad))
    }

    /// Converts gradients w.r.t. effective weights into gradients w.r.t. the
    /// stored weights (identity unless a layer is spectrally normalized).
    pub fn chain_effective_grads(&self, mut grads: Gradients) -> Gradients {
        for (layer, g) in self.layers.iter().zip(grads.layers.iter_mut()) {
            if layer.sn.is_some() {
                let w = std::mem::replace(&mut g.weight, Matrix::zeros(0, 0));
                g.weight = layer.chain_weight_grad(w);
            }
        }
        grads
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Stream};

    fn single(w: &[&[f64]], b: &[f64], act: Activation) -> MlpModel {
        let w = Matrix::from_rows(w).unwrap();
        MlpModel::from_layers(vec![Layer::new(w, b.to_vec(), act).unwrap()], Role::Decoder).unwrap()
    }

    #[test]
    fn identity_layer_passes_input_through() {
        let m = single(&[&[1.0, 0.0], &[0.0, 1.0]], &[0.0, 0.0], Activation::Identity);
        let x = Matrix::from_rows(&[[2.0, -1.0]]).unwrap();
        assert_eq!(m.predict(&x).unwrap(), x);
    }

    #[test]
    fn relu_clips_negative_sum() {
        let m = single(&[&[1.0, 1.0]], &[3.0], Activation::Relu);
        let x = Matrix::from_rows(&[[-5.0, 1.0]]).unwrap();
        assert_eq!(m.predict(&x).unwrap().as_slice(), &[0.0]);
    }

    #[test]
    fn dimension_mismatch_is_configuration_error() {
        let m = single(&[&[1.0, 1.0]], &[0.0], Activation::Relu);
        let x = Matrix::from_rows(&[[1.0, 2.0, 3.0]]).unwrap();
        assert!(matches!(m.forward(&x), Err(NnError::Shape(_))));
        let bad = MlpModel::from_layers(
            vec![
                Layer::new(Matrix::zeros(3, 2), vec![0.0; 3], Activation::Relu).unwrap(),
                Layer::new(Matrix::zeros(1, 4), vec![0.0], Activation::Identity).unwrap(),
            ],
            Role::Generator,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn overflow_names_layer() {
        let m = MlpModel::from_layers(
            vec![
                Layer::new(Matrix::filled(1, 1, 1e200), vec![0.0], Activation::Identity).unwrap(),
                Layer::new(Matrix::filled(1, 1, 1e200), vec![0.0], Activation::Identity).unwrap(),
            ],
            Role::Generator,
        )
        .unwrap();
        let x = Matrix::from_rows(&[[1e10]]).unwrap();
        assert_eq!(m.predict(&x), Err(NnError::NonFinite { layer: 1 }));
    }

    #[test]
    fn discriminator_requires_identity_output() {
        let l = Layer::new(Matrix::zeros(1, 2), vec![0.0], Activation::Tanh).unwrap();
        assert!(MlpModel::from_layers(vec![l], Role::Discriminator).is_err());
    }

    #[test]
    fn single_linear_layer_gradients_are_analytic() {
        let m = single(&[&[0.5, -1.0, 2.0], &[1.5, 0.0, -0.5]], &[0.1, 0.2], Activation::Identity);
        let x = Matrix::from_rows(&[[1.0, 2.0, 3.0], [-1.0, 0.5, 0.0]]).unwrap();
        let g = Matrix::from_rows(&[[1.0, -2.0], [0.5, 3.0]]).unwrap();
        let (_, cache) = m.forward(&x).unwrap();
        let (grads, dx) = m.backward(&cache, &g).unwrap();
        assert_eq!(grads.layers[0].weight, g.t_matmul(&x));
        assert_eq!(grads.layers[0].bias, vec![1.5, 1.0]);
        assert_eq!(dx, g.matmul(m.layers()[0].weight()));
    }

    #[test]
    fn zero_upstream_gives_zero_gradients() {
        let mut rng = stream(3, Stream::GeneratorInit);
        let m = MlpModel::generator(2, 2, 8, &mut rng).unwrap();
        let x = Matrix::from_rows(&[[0.3, -0.2], [1.0, 0.4]]).unwrap();
        let (y, cache) = m.forward(&x).unwrap();
        let (grads, dx) = m.backward(&cache, &Matrix::zeros(y.rows(), y.cols())).unwrap();
        assert_eq!(grads.max_abs(), 0.0);
        assert!(dx.as_slice().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn stale_cache_rejected() {
        let mut rng = stream(3, Stream::GeneratorInit);
        let mut m = MlpModel::generator(1, 2, 4, &mut rng).unwrap();
        let x = Matrix::from_rows(&[[0.3]]).unwrap();
        let (y, cache) = m.forward(&x).unwrap();
        let p = m.params_flat();
        m.set_params_flat(&p).unwrap();
        let up = Matrix::zeros(y.rows(), y.cols());
        assert!(matches!(m.backward(&cache, &up), Err(NnError::Contract(_))));
        let (_, fresh) = m.forward(&x).unwrap();
        assert!(m.backward(&fresh, &Matrix::zeros(2, 2)).is_err());
        assert!(m.backward(&fresh, &up).is_ok());
    }

    #[test]
    fn flat_params_round_trip() {
        let mut rng = stream(5, Stream::DiscriminatorInit);
        let mut m = MlpModel::discriminator(2, 6, true, &mut rng).unwrap();
        let mut p = m.params_flat();
        assert_eq!(p.len(), m.param_count());
        p[3] += 1.0;
        m.set_params_flat(&p).unwrap();
        assert_eq!(m.params_flat(), p);
        assert!(m.set_params_flat(&p[1..]).is_err());
    }

    #[test]
    fn serde_round_trip_preserves_parameters() {
        let mut rng = stream(5, Stream::DiscriminatorInit);
        let m = MlpModel::discriminator(2, 6, true, &mut rng).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back: MlpModel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        let x = Matrix::from_rows(&[[0.1, 0.7]]).unwrap();
        assert_eq!(back.predict(&x).unwrap(), m.predict(&x).unwrap());
    }
}
