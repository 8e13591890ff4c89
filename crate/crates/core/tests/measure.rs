mod common;

use common::{normal_matrix, random_mlp};
use mmcgan::mmc::{lipschitz_bound_check, mapping_measure_estimate, Hull};
use mmcgan::nn::{Activation, Layer, Matrix, MlpModel, Role};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn linear(w: Matrix) -> MlpModel {
    let b = vec![0.3; w.rows()];
    MlpModel::from_layers(vec![Layer::new(w, b, Activation::Identity).unwrap()], Role::Decoder).unwrap()
}

/// Length of the decoder image of `[lo, hi]` as a dense polyline.
fn polyline_length(dec: &MlpModel, lo: f64, hi: f64, segments: usize) -> f64 {
    let s: Vec<f64> = (0..=segments).map(|k| lo + (hi - lo) * k as f64 / segments as f64).collect();
    let out = dec.predict(&Matrix::from_vec(s.len(), 1, s).unwrap()).unwrap();
    (1..out.rows())
        .map(|k| {
            out.row(k)
                .iter()
                .zip(out.row(k - 1))
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .sum()
}

#[test]
fn linear_decoders_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in [2, 3, 5] {
        let w = normal_matrix(n, 1, &mut rng);
        let norm = w.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt();
        let r = mapping_measure_estimate(&linear(w), &Hull::Interval { lo: -0.7, hi: 1.8 }, 500, 0).unwrap();
        assert!((r.lambda_hat - 2.5 * norm).abs() < 1e-6);

        let w = normal_matrix(n, 2, &mut rng);
        let (a, b): (Vec<f64>, Vec<f64>) = w.row_iter().map(|r| (r[0], r[1])).unzip();
        let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
        let det = dot(&a, &a) * dot(&b, &b) - dot(&a, &b).powi(2);
        let tri = Hull::Polygon { vertices: vec![[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]] };
        let r = mapping_measure_estimate(&linear(w), &tri, 500, 0).unwrap();
        assert!((r.lambda_hat - det.sqrt()).abs() < 1e-6);
    }
}

#[test]
fn tanh_decoder_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for trial in 0..3 {
        let dec = random_mlp(&[1, 8, 8, 2], &[Activation::Tanh], Activation::Identity, false, Role::Decoder, &mut rng);
        let (lo, hi) = (-1.5, 1.5);
        let oracle = polyline_length(&dec, lo, hi, 200_000);
        let r = mapping_measure_estimate(&dec, &Hull::Interval { lo, hi }, 200_000, trial).unwrap();
        let rel = (r.lambda_hat - oracle).abs() / oracle;
        assert!(rel <= 0.01, "trial {trial}: estimate {} vs quadrature {oracle}", r.lambda_hat);
    }
}

#[test]
fn bound_holds_for_random_decoders() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..5 {
        let dec = random_mlp(&[1, 16, 16, 2], &[Activation::Relu], Activation::Identity, false, Role::Decoder, &mut rng);
        let chk = lipschitz_bound_check(&dec, &Hull::Interval { lo: -2.0, hi: 2.0 }, 2000, 0).unwrap();
        assert!(chk.pass, "{:?}", chk.report);
    }
}
