use rand::Rng;

use super::GanError;
use crate::nn::{Gradients, LayerGrad, Matrix, MlpModel};

/// Gradient penalty `λ_gp · E[(‖∇ₓD(x̂)‖ − 1)²]` at `x̂ = εx + (1 − ε)x̃`,
/// `ε ~ U[0, 1)` per row, and its gradient w.r.t. the discriminator
/// parameters.
///
/// The discriminator must be piecewise linear (relu/leaky relu/identity):
/// the input gradient is then `W̄₁ᵀ M₁ ⋯ W̄_Lᵀ` with activation masks `M_k`
/// that are locally constant, so differentiating it only needs one extra
/// tangent pass through the masked layers. Bias gradients vanish.
pub fn gradient_penalty<R: Rng + ?Sized>(
    disc: &MlpModel,
    real: &Matrix,
    fake: &Matrix,
    lambda_gp: f64,
    rng: &mut R,
) -> Result<(f64, Gradients), GanError> {
    if real.shape() != fake.shape() || real.rows() == 0 {
        return Err(GanError::Contract(format!(
            "real {:?} and fake {:?} batches must match and be non-empty",
            real.shape(),
            fake.shape()
        )));
    }
    if disc.out_dim() != 1 {
        return Err(GanError::Contract("discriminator must have a scalar output".into()));
    }
    if let Some(k) = disc.layers().iter().position(|l| !l.activation().is_piecewise_linear()) {
        return Err(GanError::Unsupported(format!(
            "gradient penalty needs piecewise-linear activations; layer {k} uses {:?}",
            disc.layers()[k].activation()
        )));
    }

    let batch = real.rows();
    let mut xhat = Matrix::zeros(batch, real.cols());
    for i in 0..batch {
        let eps: f64 = rng.random();
        for ((h, &r), &f) in xhat.row_mut(i).iter_mut().zip(real.row(i)).zip(fake.row(i)) {
            *h = eps * r + (1.0 - eps) * f;
        }
    }

    let (out, cache) = disc.forward(&xhat)?;
    let trace = disc.backward_trace(&cache, &Matrix::filled(out.rows(), 1, 1.0))?;
    let g = &trace.input_grad;

    // tangent seed: ∂penalty/∂g
    let scale = lambda_gp / batch as f64;
    let mut penalty = 0.0;
    let mut tangent = Matrix::zeros(batch, g.cols());
    for i in 0..batch {
        let norm = g.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
        penalty += (norm - 1.0).powi(2);
        if norm > 0.0 {
            let c = scale * 2.0 * (norm - 1.0) / norm;
            for (t, &gv) in tangent.row_mut(i).iter_mut().zip(g.row(i)) {
                *t = c * gv;
            }
        }
    }
    penalty *= scale;

    let mut layers = Vec::with_capacity(disc.layers().len());
    for (k, layer) in disc.layers().iter().enumerate() {
        let w = layer.effective_weight();
        layers.push(LayerGrad {
            weight: trace.deltas[k].t_matmul(&tangent),
            bias: vec![0.0; layer.out_dim()],
        });
        let mut next = tangent.matmul_t(&w);
        let z = cache.pre_activation(k);
        let y = cache.post_activation(k);
        for ((t, &zv), &yv) in next.as_mut_slice().iter_mut().zip(z.as_slice()).zip(y.as_slice()) {
            *t *= layer.activation().derivative(zv, yv);
        }
        tangent = next;
    }
    let grads = disc.chain_effective_grads(Gradients { layers });
    if !penalty.is_finite() || !grads.is_finite() {
        return Err(GanError::Numeric("non-finite gradient penalty".into()));
    }
    Ok((penalty, grads))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::{Activation, Layer, Role};
    use crate::rng::{stream, Stream};

    #[test]
    fn linear_discriminator_with_norm_three() {
        let w = Matrix::from_rows(&[[3.0, 0.0]]).unwrap();
        let d = MlpModel::from_layers(
            vec![Layer::new(w, vec![0.0], Activation::Identity).unwrap()],
            Role::Discriminator,
        )
        .unwrap();
        let real = Matrix::from_rows(&[[1.0, 2.0], [0.0, -1.0]]).unwrap();
        let fake = Matrix::from_rows(&[[0.5, 0.5], [3.0, 1.0]]).unwrap();
        let (p, g) = gradient_penalty(&d, &real, &fake, 10.0, &mut stream(0, Stream::Penalty)).unwrap();
        assert!((p - 40.0).abs() < 1e-12);
        // ∂/∂w of 10(‖w‖ − 1)² = 20(‖w‖ − 1)·w/‖w‖ = (40, 0)
        assert!((g.layers[0].weight.get(0, 0) - 40.0).abs() < 1e-12);
        assert!(g.layers[0].weight.get(0, 1).abs() < 1e-12);
    }

    #[test]
    fn tanh_discriminator_is_unsupported() {
        let d = MlpModel::from_layers(
            vec![
                Layer::new(Matrix::filled(2, 2, 0.5), vec![0.0; 2], Activation::Tanh).unwrap(),
                Layer::new(Matrix::filled(1, 2, 0.5), vec![0.0], Activation::Identity).unwrap(),
            ],
            Role::Discriminator,
        )
        .unwrap();
        let x = Matrix::zeros(2, 2);
        assert!(matches!(
            gradient_penalty(&d, &x, &x, 10.0, &mut stream(0, Stream::Penalty)),
            Err(GanError::Unsupported(_))
        ));
    }
}
