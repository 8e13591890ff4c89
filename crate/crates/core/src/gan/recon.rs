use super::GanError;
use crate::nn::{Gradients, Matrix, MlpModel};

/// Reconstruction error `R = E‖x − G(c)‖²` over paired rows and the gradient
/// of `(λ/2)·R` w.r.t. the generator parameters.
pub fn recon_loss(
    gen: &MlpModel,
    data: &Matrix,
    codes: &Matrix,
    lambda: f64,
) -> Result<(f64, Gradients), GanError> {
    if data.rows() != codes.rows() || data.rows() == 0 {
        return Err(GanError::Contract(format!(
            "{} samples paired with {} codes",
            data.rows(),
            codes.rows()
        )));
    }
    if data.cols() != gen.out_dim() {
        return Err(GanError::Contract(format!(
            "samples have dimension {}, generator produces {}",
            data.cols(),
            gen.out_dim()
        )));
    }
    let (out, cache) = gen.forward(codes)?;
    let batch = data.rows() as f64;
    let mut r = 0.0;
    let mut upstream = out;
    for (u, &x) in upstream.as_mut_slice().iter_mut().zip(data.as_slice()) {
        let diff = *u - x;
        r += diff * diff;
        *u = lambda * diff / batch;
    }
    r /= batch;
    let (grads, _) = gen.backward(&cache, &upstream)?;
    Ok((r, grads))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::{Activation, Layer, Role};

    fn identity_gen() -> MlpModel {
        MlpModel::from_layers(
            vec![Layer::new(Matrix::identity(2), vec![0.0; 2], Activation::Identity).unwrap()],
            Role::Generator,
        )
        .unwrap()
    }

    #[test]
    fn perfect_reconstruction_is_zero() {
        let x = Matrix::from_rows(&[[1.0, 2.0], [-0.5, 0.25]]).unwrap();
        let (r, g) = recon_loss(&identity_gen(), &x, &x, 1.0).unwrap();
        assert_eq!(r, 0.0);
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn unit_offset() {
        let c = Matrix::from_rows(&[[0.0, 0.0], [1.0, 1.0]]).unwrap();
        let x = c.map(|v| v + 1.0);
        let (r, g) = recon_loss(&identity_gen(), &x, &c, 2.0).unwrap();
        assert!((r - 2.0).abs() < 1e-15);
        // bias gradient of (λ/2)R = λ·E(G(c) − x) = −2 per coordinate
        assert_eq!(g.layers[0].bias, vec![-2.0, -2.0]);
    }

    #[test]
    fn count_mismatch_rejected() {
        let x = Matrix::zeros(3, 2);
        let c = Matrix::zeros(2, 2);
        assert!(matches!(
            recon_loss(&identity_gen(), &x, &c, 1.0),
            Err(GanError::Contract(_))
        ));
    }
}
