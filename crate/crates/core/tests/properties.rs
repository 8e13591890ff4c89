mod common;

use common::normal_matrix;
use mmcgan::datasets::{grid_centers, Dataset};
use mmcgan::gan::sample_latent;
use mmcgan::metrics::mode_coverage;
use mmcgan::mmc::{coding_path_length, convex_hull, path_length, standardize_codes, Coding};
use mmcgan::nn::{power_iteration, AdamState, Matrix, SgdrSchedule, SnState};
use mmcgan::rng::{stream, Stream};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn points(n: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-5.0f64..5.0, n * cols)
        .prop_map(move |v| Matrix::from_vec(n, cols, v).unwrap())
}

fn dataset(points: &Matrix) -> Dataset {
    Dataset::from_points(points.clone(), "test").unwrap()
}

/// Largest singular value through many power iterations on `WᵀW`.
fn spectral_norm(w: &Matrix) -> f64 {
    let mut v = vec![1.0; w.cols()];
    for _ in 0..2000 {
        let next = w.t_mul_vec(&w.mul_vec(&v));
        let n = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n == 0.0 {
            return 0.0;
        }
        v = next.iter().map(|x| x / n).collect();
    }
    w.mul_vec(&v).iter().map(|x| x * x).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn path_length_is_reversal_invariant(pts in points(7, 2), seed in 0u64..1000) {
        let order = common::random_order(7, &mut ChaCha8Rng::seed_from_u64(seed));
        let mut rev = order.clone();
        rev.reverse();
        let a = path_length(&pts, &order);
        prop_assert!(a >= 0.0);
        prop_assert!((a - path_length(&pts, &rev)).abs() < 1e-12);
    }

    #[test]
    fn coding_path_depends_only_on_code_order(
        pts in points(12, 2),
        codes in prop::collection::hash_set(-1000i32..1000, 12),
    ) {
        let data = dataset(&pts);
        let c: Vec<f64> = codes.into_iter().map(|v| v as f64 / 100.0).collect();
        let raw = Coding::new(Matrix::from_vec(12, 1, c.clone()).unwrap(), &data).unwrap();
        let warped: Vec<f64> = c.iter().map(|v| (0.5 * v).exp() * 3.0 - 1.0).collect();
        let warped = Coding::new(Matrix::from_vec(12, 1, warped).unwrap(), &data).unwrap();
        let flipped: Vec<f64> = c.iter().map(|v| -v).collect();
        let flipped = Coding::new(Matrix::from_vec(12, 1, flipped).unwrap(), &data).unwrap();
        let a = coding_path_length(&data, &raw).unwrap();
        let b = coding_path_length(&data, &warped).unwrap();
        prop_assert_eq!(&a.ordering, &b.ordering);
        let f = coding_path_length(&data, &flipped).unwrap();
        prop_assert!((a.length - f.length).abs() < 1e-12);
    }

    #[test]
    fn standardized_codes_have_zero_mean_unit_std(codes in points(30, 2)) {
        let data = dataset(&Matrix::zeros(30, 3));
        let c = Coding::new(codes, &data).unwrap();
        let s = standardize_codes(&c).unwrap();
        prop_assert!(s.standardized);
        for k in 0..2 {
            let col: Vec<f64> = s.codes.row_iter().map(|r| r[k]).collect();
            let mean = col.iter().sum::<f64>() / 30.0;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 30.0;
            prop_assert!(mean.abs() < 1e-9);
            prop_assert!((var.sqrt() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn hull_contains_codes_and_samples(codes in points(15, 2), seed in 0u64..1000) {
        let data = dataset(&Matrix::zeros(15, 3));
        let hull = convex_hull(&Coding::new(codes.clone(), &data).unwrap()).unwrap();
        prop_assert!(hull.volume() >= 0.0);
        for c in codes.row_iter() {
            prop_assert!(hull.contains(c, 1e-9));
        }
        if !hull.is_degenerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..20 {
                let s = hull.sample(&mut rng);
                prop_assert!(hull.contains(&s, 1e-9));
            }
        }
    }

    #[test]
    fn sgdr_rate_stays_in_range(epoch in 0.0f64..5000.0, t0 in 1.0f64..50.0, t_mult in 1.0f64..3.0) {
        let s = SgdrSchedule { t0, t_mult, eta_min: 1e-5, eta_max: 1e-3 };
        let lr = s.lr_at(epoch);
        prop_assert!((1e-5..=1e-3).contains(&lr));
    }

    #[test]
    fn first_adam_step_is_bounded_by_lr(grads in prop::collection::vec(-1e3f64..1e3, 1..20), lr in 1e-6f64..1e-1) {
        let mut params = vec![0.5; grads.len()];
        let mut opt = AdamState::new(grads.len(), 0.5, 0.9, 1e-8);
        opt.step(&mut params, &grads, lr).unwrap();
        for (p, g) in params.iter().zip(&grads) {
            let moved = 0.5 - p;
            prop_assert!(moved.abs() <= lr * (1.0 + 1e-9));
            prop_assert!(moved * g >= 0.0);
        }
    }

    #[test]
    fn coverage_counts_flags_and_grows_with_threshold(pts in points(40, 2), t in 0.01f64..1.0) {
        let centers = grid_centers();
        let small = mode_coverage(&pts, &centers, t).unwrap();
        let large = mode_coverage(&pts, &centers, 2.0 * t).unwrap();
        prop_assert_eq!(small.covered, small.per_mode_hit.iter().filter(|&&h| h).count());
        prop_assert!(small.covered <= 25);
        prop_assert!(large.covered >= small.covered);
    }

    #[test]
    fn transposed_products_agree(a in points(4, 3), b in points(5, 3)) {
        let direct = a.matmul(&b.transpose());
        prop_assert_eq!(&a.matmul_t(&b), &direct);
        let t = a.transpose().t_matmul(&b.transpose());
        for (x, y) in t.as_slice().iter().zip(direct.as_slice()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn power_iteration_converges_to_the_top_singular_value(seed in 0u64..500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = normal_matrix(6, 4, &mut rng);
        let mut st = SnState::random(&w, &mut rng);
        for _ in 0..500 {
            power_iteration(&w, &mut st);
        }
        let exact = spectral_norm(&w);
        prop_assert!((st.sigma(&w) - exact).abs() < 1e-6 * exact);
    }
}

#[test]
fn latent_draws_are_standard_normal() {
    let z = sample_latent(1_000_000, 1, &mut stream(0, Stream::Latent));
    let n = z.rows() as f64;
    let mean = z.as_slice().iter().sum::<f64>() / n;
    let var = z.as_slice().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    assert!(mean.abs() < 0.01);
    assert!((var - 1.0).abs() < 0.01);
    let again = sample_latent(1_000_000, 1, &mut stream(0, Stream::Latent));
    assert_eq!(z, again);
}
