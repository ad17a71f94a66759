mod common;

use approx::assert_abs_diff_eq;
use ncchern::build_clifford;
use ncchern::linalg::{self, max_abs_diff};
use num_complex::Complex64;
use proptest::prelude::*;

use common::det_elimination;

fn vectors(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 2 * n), 2 * n)
}

#[test]
fn anticommutation_and_chirality() {
    for n in 1..=4 {
        let rep = build_clifford(n).unwrap();
        let d = rep.dim();
        let id = linalg::identity(d);
        for i in 0..2 * n {
            for j in 0..2 * n {
                let ac = linalg::anticommutator(rep.gamma(i), rep.gamma(j));
                let expected = if i == j { linalg::scale(&id, Complex64::new(2.0, 0.0)) } else { linalg::zeros(d, d) };
                assert!(max_abs_diff(&ac, &expected) < 1e-12);
            }
            assert!(linalg::hermiticity_error(rep.gamma(i)) < 1e-12);
            let ac0 = linalg::anticommutator(rep.gamma0(), rep.gamma(i));
            assert!(linalg::max_abs(&ac0) < 1e-12);
        }
        let g0 = rep.gamma0();
        assert!(max_abs_diff(&(g0 * g0), &id) < 1e-12);
        assert!(linalg::hermiticity_error(g0) < 1e-12);
        assert!(linalg::trace(g0).norm() < 1e-12);
    }
}

#[test]
fn graded_trace_of_basis_fixes_orientation() {
    for n in 1..=3 {
        let rep = build_clifford(n).unwrap();
        let e: Vec<Vec<f64>> = (0..2 * n).map(|i| (0..2 * n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
        let t = rep.graded_trace(&e).unwrap();
        assert!((t - rep.graded_constant()).norm() < 1e-12);
        assert!(rep.orientation() == 1.0 || rep.orientation() == -1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn graded_trace_is_a_determinant_n1(v in vectors(1)) {
        let rep = build_clifford(1).unwrap();
        let t = rep.graded_trace(&v).unwrap();
        let expected = rep.graded_constant() * det_elimination(&v);
        prop_assert!((t - expected).norm() < 1e-12 * (1.0 + expected.norm()));
    }

    #[test]
    fn graded_trace_is_a_determinant_n2(v in vectors(2)) {
        let rep = build_clifford(2).unwrap();
        let t = rep.graded_trace(&v).unwrap();
        let expected = rep.graded_constant() * det_elimination(&v);
        prop_assert!((t - expected).norm() < 1e-12 * (1.0 + expected.norm()));
    }

    #[test]
    fn graded_trace_is_a_determinant_n3(v in vectors(3)) {
        let rep = build_clifford(3).unwrap();
        let t = rep.graded_trace(&v).unwrap();
        let expected = rep.graded_constant() * det_elimination(&v);
        prop_assert!((t - expected).norm() < 1e-11 * (1.0 + expected.norm()));
    }

    #[test]
    fn gamma_dot_squares_to_norm(v in prop::collection::vec(-3.0f64..3.0, 4)) {
        let rep = build_clifford(2).unwrap();
        let g = rep.gamma_dot(&v).unwrap();
        let n2: f64 = v.iter().map(|x| x * x).sum();
        let sq = &g * &g;
        let expected = linalg::scale(&linalg::identity(4), Complex64::new(n2, 0.0));
        prop_assert!(max_abs_diff(&sq, &expected) < 1e-12 * (1.0 + n2));
    }
}

#[test]
fn rejects_bad_arguments() {
    assert!(build_clifford(0).is_err());
    assert!(build_clifford(5).is_err());
    let rep = build_clifford(1).unwrap();
    assert!(rep.gamma_dot(&[1.0, 2.0, 3.0]).is_err());
    assert!(rep.graded_trace(&[vec![1.0, 0.0]]).is_err());
    assert_abs_diff_eq!(rep.bb_prefactor().norm(), 2.0, epsilon = 1e-15);
}
