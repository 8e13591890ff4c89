mod common;

use common::{fd_input_grad, fd_param_grad, normal_matrix, random_mlp, rel_err, ACTIVATIONS};
use mmcgan::gan::{
    d_loss, d_loss_grad, g_loss, g_loss_grad, gradient_penalty, pack_inputs, recon_loss,
    unpack_inputs, LossVariant,
};
use mmcgan::nn::{Activation, Matrix, MlpModel, Role};
use mmcgan::rng::{stream, Stream};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const H: f64 = 1e-6;
const TOL: f64 = 1e-4;
const PIECEWISE: [Activation; 3] = [Activation::Relu, Activation::LeakyRelu(0.2), Activation::Identity];

fn random_dims<R: Rng>(rng: &mut R, input: usize, output: usize) -> Vec<usize> {
    let depth = rng.random_range(1..=4);
    let mut dims = vec![input];
    for _ in 1..depth {
        dims.push(rng.random_range(2..=6));
    }
    dims.push(output);
    dims
}

fn frob(a: &Matrix, b: &Matrix) -> f64 {
    a.frobenius_dot(b)
}

#[test]
fn mlp_parameter_and_input_gradients() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..60 {
        let (n_in, n_out) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let dims = random_dims(&mut rng, n_in, n_out);
        let output = ACTIVATIONS[rng.random_range(0..4)];
        let spectral = trial % 3 == 0;
        let model = random_mlp(&dims, &ACTIVATIONS, output, spectral, Role::Generator, &mut rng);
        let x = normal_matrix(4, n_in, &mut rng);
        let u = normal_matrix(4, n_out, &mut rng);

        let (_, cache) = model.forward(&x).unwrap();
        let (grads, dx) = model.backward(&cache, &u).unwrap();
        let loss = |m: &MlpModel, x: &Matrix| frob(&m.predict(x).unwrap(), &u);

        let fd = fd_param_grad(&model, H, |m| loss(m, &x));
        let e = rel_err(&grads.to_flat(), &fd);
        assert!(e <= TOL, "trial {trial} dims {dims:?} sn {spectral}: param rel err {e:e}");
        let fd = fd_input_grad(&x, H, |x| loss(&model, x));
        let e = rel_err(dx.as_slice(), &fd);
        assert!(e <= TOL, "trial {trial} dims {dims:?}: input rel err {e:e}");
    }
}

#[test]
fn gradient_penalty_double_backprop() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..40 {
        let n = rng.random_range(1..=3);
        let dims = random_dims(&mut rng, n, 1);
        let spectral = trial % 2 == 1;
        let d = random_mlp(&dims, &PIECEWISE, Activation::Identity, spectral, Role::Discriminator, &mut rng);
        let real = normal_matrix(5, n, &mut rng);
        let fake = normal_matrix(5, n, &mut rng);
        let penalty = |m: &MlpModel| {
            gradient_penalty(m, &real, &fake, 10.0, &mut stream(trial, Stream::Penalty))
                .unwrap()
                .0
        };
        let (_, grads) = gradient_penalty(&d, &real, &fake, 10.0, &mut stream(trial, Stream::Penalty)).unwrap();
        let fd = fd_param_grad(&d, H, penalty);
        let e = rel_err(&grads.to_flat(), &fd);
        assert!(e <= TOL, "trial {trial} dims {dims:?} sn {spectral}: rel err {e:e}");
    }
}

#[test]
fn recon_term_gradients() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let lambda = 1.7;
    for trial in 0..30 {
        let (m, n) = (rng.random_range(1..=2), rng.random_range(1..=3));
        let dims = random_dims(&mut rng, m, n);
        let g = random_mlp(&dims, &ACTIVATIONS, Activation::Identity, false, Role::Generator, &mut rng);
        let codes = normal_matrix(6, m, &mut rng);
        let data = normal_matrix(6, n, &mut rng);
        let (_, grads) = recon_loss(&g, &data, &codes, lambda).unwrap();
        let fd = fd_param_grad(&g, H, |g| 0.5 * lambda * recon_loss(g, &data, &codes, lambda).unwrap().0);
        let e = rel_err(&grads.to_flat(), &fd);
        assert!(e <= TOL, "trial {trial} dims {dims:?}: rel err {e:e}");
    }
}

#[test]
fn discriminator_loss_gradients() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for variant in [LossVariant::Standard, LossVariant::WganGp, LossVariant::HingeSn] {
        for trial in 0..10 {
            let dims = random_dims(&mut rng, 2, 1);
            let d = random_mlp(&dims, &PIECEWISE, Activation::Identity, variant == LossVariant::HingeSn, Role::Discriminator, &mut rng);
            let real = normal_matrix(6, 2, &mut rng);
            let fake = normal_matrix(6, 2, &mut rng);
            let (dr, cr) = d.forward(&real).unwrap();
            let (df, cf) = d.forward(&fake).unwrap();
            let (_, gr, gf) = d_loss_grad(variant, &dr, &df).unwrap();
            let mut grads = d.backward(&cr, &gr).unwrap().0;
            grads.add_assign(&d.backward(&cf, &gf).unwrap().0);
            let fd = fd_param_grad(&d, H, |m| {
                d_loss(variant, &m.predict(&real).unwrap(), &m.predict(&fake).unwrap()).unwrap()
            });
            let e = rel_err(&grads.to_flat(), &fd);
            assert!(e <= TOL, "{variant:?} trial {trial}: rel err {e:e}");
        }
    }
}

#[test]
fn generator_gradients_through_packed_discriminator() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for variant in [LossVariant::Standard, LossVariant::HingeSn] {
        for pack in [1, 2, 3] {
            let g = random_mlp(&random_dims(&mut rng, 1, 2), &ACTIVATIONS, Activation::Identity, false, Role::Generator, &mut rng);
            let d = random_mlp(&random_dims(&mut rng, 2 * pack, 1), &PIECEWISE, Activation::Identity, true, Role::Discriminator, &mut rng);
            let z = normal_matrix(6, 1, &mut rng);
            let (x, cg) = g.forward(&z).unwrap();
            let (df, cf) = d.forward(&pack_inputs(&x, pack).unwrap()).unwrap();
            let (_, up) = g_loss_grad(variant, &df).unwrap();
            let (_, dx) = d.backward(&cf, &up).unwrap();
            let (grads, _) = g.backward(&cg, &unpack_inputs(&dx, pack).unwrap()).unwrap();
            let fd = fd_param_grad(&g, H, |g| {
                let x = pack_inputs(&g.predict(&z).unwrap(), pack).unwrap();
                g_loss(variant, &d.predict(&x).unwrap()).unwrap()
            });
            let e = rel_err(&grads.to_flat(), &fd);
            assert!(e <= TOL, "{variant:?} pack {pack}: rel err {e:e}");
        }
    }
}
