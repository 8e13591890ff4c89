#![allow(dead_code)]

use mmcgan::nn::{Activation, Layer, Matrix, MlpModel, Role, SnState};
use rand::Rng;
use rand_distr::StandardNormal;

pub const ACTIVATIONS: [Activation; 4] = [
    Activation::Relu,
    Activation::LeakyRelu(0.2),
    Activation::Tanh,
    Activation::Identity,
];

pub fn normal_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect();
    Matrix::from_vec(rows, cols, data).unwrap()
}

/// Random MLP with the given widths, hidden activations drawn from `hidden`,
/// small random biases so relu kinks sit away from zero inputs.
pub fn random_mlp<R: Rng>(
    dims: &[usize],
    hidden: &[Activation],
    output: Activation,
    spectral: bool,
    role: Role,
    rng: &mut R,
) -> MlpModel {
    let n = dims.len() - 1;
    let layers = (0..n)
        .map(|k| {
            let act = if k + 1 == n {
                output
            } else {
                hidden[rng.random_range(0..hidden.len())]
            };
            let w = normal_matrix(dims[k + 1], dims[k], rng);
            let w = {
                let mut w = w;
                w.scale(1.0 / (dims[k] as f64).sqrt());
                w
            };
            let b = (0..dims[k + 1]).map(|_| 0.1 * rng.sample::<f64, _>(StandardNormal)).collect();
            let layer = Layer::new(w, b, act).unwrap();
            if spectral {
                let st = SnState::random(layer.weight(), rng);
                layer.with_spectral_norm(st).unwrap()
            } else {
                layer
            }
        })
        .collect();
    MlpModel::from_layers(layers, role).unwrap()
}

/// Central differences of `f` w.r.t. every flat parameter of `model`.
pub fn fd_param_grad(model: &MlpModel, h: f64, f: impl Fn(&MlpModel) -> f64) -> Vec<f64> {
    let base = model.params_flat();
    let mut probe = model.clone();
    let mut out = Vec::with_capacity(base.len());
    for i in 0..base.len() {
        let mut p = base.clone();
        p[i] = base[i] + h;
        probe.set_params_flat(&p).unwrap();
        let up = f(&probe);
        p[i] = base[i] - h;
        probe.set_params_flat(&p).unwrap();
        let down = f(&probe);
        out.push((up - down) / (2.0 * h));
    }
    out
}

/// Central differences of `f` w.r.t. every entry of `x`.
pub fn fd_input_grad(x: &Matrix, h: f64, f: impl Fn(&Matrix) -> f64) -> Vec<f64> {
    let mut probe = x.clone();
    let mut out = Vec::with_capacity(x.as_slice().len());
    for i in 0..x.as_slice().len() {
        let v = x.as_slice()[i];
        probe.as_mut_slice()[i] = v + h;
        let up = f(&probe);
        probe.as_mut_slice()[i] = v - h;
        let down = f(&probe);
        probe.as_mut_slice()[i] = v;
        out.push((up - down) / (2.0 * h));
    }
    out
}

/// Gradients with a smaller norm than this count as exactly zero.
pub const ZERO_FLOOR: f64 = 1e-8;

/// `‖a − b‖ / max(‖a‖, ‖b‖, ZERO_FLOOR)`.
pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&diff) / norm(a).max(norm(b)).max(ZERO_FLOOR)
}

/// `n` points uniform in the unit square.
pub fn random_points<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    let data = (0..2 * n).map(|_| rng.random::<f64>()).collect();
    Matrix::from_vec(n, 2, data).unwrap()
}

/// Shortest open path by visiting every permutation (Heap's algorithm).
pub fn exhaustive_shp(points: &Matrix) -> f64 {
    let n = points.rows();
    let mut p: Vec<usize> = (0..n).collect();
    let mut best = mmcgan::mmc::path_length(points, &p);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            best = best.min(mmcgan::mmc::path_length(points, &p));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// Fisher-Yates shuffled identity.
pub fn random_order<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
