mod common;

use common::{exhaustive_shp, random_order, random_points};
use mmcgan::mmc::{
    find_improving_reversal, path_length, shp_bruteforce, two_opt_improve, two_opt_improve_traced,
    PathOrder,
};
use mmcgan::nn::Matrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn bruteforce_matches_permutation_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in 2..=8 {
        for _ in 0..4 {
            let pts = random_points(n, &mut rng);
            let best = shp_bruteforce(&pts).unwrap();
            let oracle = exhaustive_shp(&pts);
            assert!((best.length - oracle).abs() < 1e-12, "n = {n}: {} vs {oracle}", best.length);
            assert!((path_length(&pts, &best.ordering) - best.length).abs() < 1e-12);
        }
    }
}

#[test]
fn no_random_ordering_beats_bruteforce() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let pts = random_points(10, &mut rng);
    let best = shp_bruteforce(&pts).unwrap().length;
    for _ in 0..1_000_000 {
        let p = random_order(10, &mut rng);
        assert!(path_length(&pts, &p) >= best - 1e-12);
    }
}

#[test]
fn two_opt_reaches_a_local_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for n in [3, 5, 9, 20, 40] {
        for _ in 0..5 {
            let pts = random_points(n, &mut rng);
            let start = PathOrder::new(&pts, random_order(n, &mut rng)).unwrap();
            let (end, trace) = two_opt_improve_traced(&pts, &start).unwrap();
            assert!(end.length <= start.length + 1e-12);
            let mut prev = start.length;
            for &l in &trace {
                assert!(l < prev);
                prev = l;
            }
            assert_eq!(find_improving_reversal(&pts, &end, 1e-9), None);
            let mut sorted = end.ordering.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..n).collect::<Vec<_>>());
        }
    }
}

#[test]
fn two_opt_removes_the_crossing() {
    // A, C, B, D visits the square corners with one crossing.
    let pts = Matrix::from_rows(&[[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
    let crossed = PathOrder::new(&pts, vec![0, 1, 2, 3]).unwrap();
    let fixed = two_opt_improve(&pts, &crossed).unwrap();
    assert!((fixed.length - 3.0).abs() < 1e-12);
}
