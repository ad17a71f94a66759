mod common;

use ncchern::build_clifford;
use ncchern::oracles::{
    dixmier_estimate, lemma3_lhs, lemma3_rhs, simplex_volume, uniform_field, Lemma3Quadrature, Simplex,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::det_elimination;

#[test]
fn lemma3_standard_basis() {
    let rep = build_clifford(1).unwrap();
    let pts = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    let lhs = lemma3_lhs(&rep, &pts, &Lemma3Quadrature::for_n(1)).unwrap();
    let rhs = lemma3_rhs(&rep, &pts).unwrap();
    assert!((rhs.norm() - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!((lhs.value - rhs).norm() / rhs.norm() < 1e-2);
    assert!(lhs.error < 1e-2 * rhs.norm());
}

#[test]
fn lemma3_degenerate_and_homogeneous() {
    let rep = build_clifford(1).unwrap();
    let q = Lemma3Quadrature::for_n(1);
    let same = vec![vec![0.7, -0.2], vec![0.7, -0.2]];
    assert!(lemma3_lhs(&rep, &same, &q).unwrap().value.norm() < 1e-10);
    assert!(lemma3_rhs(&rep, &same).unwrap().norm() < 1e-12);
    let pts = vec![vec![0.6, 0.3], vec![-0.4, 0.9]];
    let twice: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|v| 2.0 * v).collect()).collect();
    let a = lemma3_lhs(&rep, &pts, &q).unwrap().value;
    let b = lemma3_lhs(&rep, &twice, &q).unwrap().value;
    assert!((b - a * 4.0).norm() / b.norm() < 1e-2);
}

#[test]
fn lemma3_rhs_for_n2_basis() {
    let rep = build_clifford(2).unwrap();
    let e: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    let rhs = lemma3_rhs(&rep, &e).unwrap();
    let expected = (2.0 * std::f64::consts::PI).powi(2) / 2.0;
    assert!((rhs.norm() - expected).abs() < 1e-12);
}

#[test]
fn lemma3_preconditions() {
    let rep = build_clifford(1).unwrap();
    let q = Lemma3Quadrature::for_n(1);
    assert!(lemma3_lhs(&rep, &[vec![5.0, 0.0], vec![0.0, 1.0]], &q).is_err());
    assert!(lemma3_lhs(&rep, &[vec![1.0, 0.0]], &q).is_err());
    assert!(lemma3_lhs(&build_clifford(3).unwrap(), &vec![vec![0.0; 6]; 6], &q).is_err());
    let coarse = Lemma3Quadrature {
        cubature: ncchern::oracles::quadrature::CubatureSpec { radius: 1.0, eta: 0.5, core: 0.05, order: 4 },
        tail_tolerance: 1e-3,
    };
    assert!(matches!(
        lemma3_lhs(&rep, &[vec![1.0, 0.0], vec![0.0, 1.0]], &coarse),
        Err(ncchern::Error::Precision { .. })
    ));
}

#[test]
fn simplex_examples() {
    let s = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert!((simplex_volume(&s) - 0.5).abs() < 1e-15);
    let odd = Simplex::new(vec![vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert!((simplex_volume(&odd) + 0.5).abs() < 1e-15);
    let even = Simplex::new(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
    assert!((simplex_volume(&even) - 0.5).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn graded_trace_over_simplex_volume_is_constant(v in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 4), 4)) {
        let det = det_elimination(&v);
        prop_assume!(det.abs() > 1e-3);
        let rep = build_clifford(2).unwrap();
        let vol = simplex_volume(&Simplex::with_origin(&v).unwrap());
        let ratio = rep.graded_trace(&v).unwrap() / vol;
        // s · (-i^{-n}) 2^n (2n)!
        let expected = rep.graded_constant() * 24.0;
        prop_assert!((ratio - expected).norm() < 1e-9 * expected.norm());
    }

    #[test]
    fn simplex_volume_is_a_scaled_determinant(v in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 4)) {
        let s = Simplex::new(v.clone()).unwrap();
        let edges: Vec<Vec<f64>> = v[1..].iter().map(|x| x.iter().zip(&v[0]).map(|(a, b)| a - b).collect()).collect();
        prop_assert!((simplex_volume(&s) - det_elimination(&edges) / 6.0).abs() < 1e-10);
    }
}

#[test]
fn lemma3_random_pairs() {
    let rep = build_clifford(1).unwrap();
    let q = Lemma3Quadrature::for_n(1);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..5 {
        let pts: Vec<Vec<f64>> = (0..2).map(|_| (0..2).map(|_| rng.random_range(-1.4..1.4)).collect()).collect();
        let rhs = lemma3_rhs(&rep, &pts).unwrap();
        if rhs.norm() < 0.1 {
            continue;
        }
        let lhs = lemma3_lhs(&rep, &pts, &q).unwrap();
        assert!((lhs.value - rhs).norm() / rhs.norm() < 1e-2, "{pts:?}: {} vs {rhs}", lhs.value);
    }
}

#[test]
fn dixmier_constant_odd_and_random() {
    let pi = std::f64::consts::PI;
    let constant = dixmier_estimate(|_| 1.0, |_| 1.0, 1, 128).unwrap();
    assert!((constant.extrapolated - pi).abs() / pi < 0.05);
    let odd = dixmier_estimate(|_| 1.0, |u| u[0], 1, 128).unwrap();
    assert!(odd.extrapolated.abs() < 0.02);
    let random = dixmier_estimate(uniform_field(5), |_| 1.0, 1, 128).unwrap();
    assert!((random.extrapolated - pi / 2.0).abs() / (pi / 2.0) < 0.05);
}

#[test]
fn dixmier_constant_case_increases_with_radius() {
    let values: Vec<f64> = [32, 64, 128]
        .iter()
        .map(|&r| dixmier_estimate(|_| 1.0, |_| 1.0, 1, r).unwrap().extrapolated)
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
    assert!(values.iter().all(|v| *v < std::f64::consts::PI));
}
