mod common;

use ncchern::chern::{kspace_chern, kspace_chern_curvature, kspace_chern_links};
use ncchern::Error;

use common::{simplicial_degree, zoo};

fn chern2d_vector(m: f64) -> impl Fn(&[f64]) -> Vec<f64> {
    move |k: &[f64]| vec![k[0].sin(), k[1].sin(), m + k[0].cos() + k[1].cos()]
}

fn dirac4d_vector(m: f64) -> impl Fn(&[f64]) -> Vec<f64> {
    move |k: &[f64]| {
        let mut v: Vec<f64> = k.iter().map(|x| x.sin()).collect();
        v.push(m + k.iter().map(|x| x.cos()).sum::<f64>());
        v
    }
}

#[test]
fn chern2d_matches_degree_with_one_sign() {
    let y = [0.137, -0.291, 0.947];
    let mut kappa = None;
    for m in [-3.0, -1.5, -0.5, 0.5, 1.0, 1.5, 3.0] {
        let deg = simplicial_degree(&chern2d_vector(m), 2, 48, &y);
        let c = kspace_chern(&zoo("chern2d", &[("m", m)]), 0.0, 1, 64).unwrap();
        assert!(c.distance_to_integer() < 1e-6, "m = {m}: {}", c.value);
        if deg == 0 {
            assert_eq!(c.nearest_integer(), 0, "m = {m}");
        } else {
            let k = c.nearest_integer() / deg;
            assert_eq!(k.abs(), 1, "m = {m}: C = {}, deg = {deg}", c.value);
            assert_eq!(*kappa.get_or_insert(k), k, "sign convention changed at m = {m}");
        }
    }
    assert!(kappa.is_some());
}

#[test]
fn dirac4d_matches_degree_with_one_sign() {
    let y = [0.11, -0.07, 0.19, -0.13, 0.96];
    let mut kappa = None;
    for m in [-5.0, -3.0, -1.0, 1.0, 3.0] {
        let deg = simplicial_degree(&dirac4d_vector(m), 4, 8, &y);
        let c = kspace_chern(&zoo("dirac4d", &[("m", m)]), 0.0, 2, 12).unwrap();
        assert!(c.distance_to_integer() < 0.05, "m = {m}: {}", c.value);
        if deg == 0 {
            assert_eq!(c.nearest_integer(), 0, "m = {m}");
        } else {
            let k = c.nearest_integer() / deg;
            assert_eq!(k.abs(), 1, "m = {m}: C = {}, deg = {deg}", c.value);
            assert_eq!(*kappa.get_or_insert(k), k, "sign convention changed at m = {m}");
        }
    }
    assert!(kappa.is_some());
}

#[test]
fn grid_refinement_keeps_the_integer() {
    let model = zoo("chern2d", &[("m", -1.2)]);
    let values: Vec<i64> = [16, 32, 64]
        .iter()
        .map(|&n| kspace_chern_links(&model, 0.0, n).unwrap().nearest_integer())
        .collect();
    assert!(values.windows(2).all(|w| w[0] == w[1]), "{values:?}");
    let coarse = kspace_chern_curvature(&model, 0.0, 1, 24).unwrap().value;
    let fine = kspace_chern_curvature(&model, 0.0, 1, 96).unwrap().value;
    assert!((fine - values[0] as f64).abs() <= (coarse - values[0] as f64).abs() + 1e-9);
}

#[test]
fn hofstadter_and_atomic_are_trivial_without_field() {
    let c = kspace_chern(&zoo("atomic", &[("t", 0.2)]), 1.0, 1, 16).unwrap();
    assert!(c.value.abs() < 1e-12);
    assert!(matches!(
        kspace_chern(&zoo("hofstadter2d", &[]), 0.0, 1, 16),
        Err(Error::Gap { .. })
    ));
}
