mod common;

use ncchern::linalg::{self, CMat};
use ncchern::localization::{
    fractional_moment_fit, localization_length, localization_length_matrix, sobolev_continuity, SobolevSetup,
};
use ncchern::model::magnetic_translation;
use ncchern::{
    build_hamiltonian, fermi_projector, sample_disorder, Boundary, Core, DerivationScheme, FiniteVolume, MagneticField,
    Workers,
};
use num_complex::Complex64;

use common::zoo;

#[test]
fn position_diagonal_projector_has_zero_length() {
    let vol = FiniteVolume::new(2, 6, 2, Boundary::Open).unwrap();
    let p = CMat::from_fn(72, 72, |i, j| if i == j && (i * 7) % 3 == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
    let l = localization_length_matrix(&p, &vol, 1, DerivationScheme::OpenCommutator, &Core::all(&vol)).unwrap();
    assert_eq!(l, 0.0);
}

#[test]
fn clean_length_is_size_stable() {
    let model = zoo("chern2d", &[]);
    let values: Vec<f64> = [16, 24, 32]
        .iter()
        .map(|&l| {
            let vol = FiniteVolume::new(2, l, 2, Boundary::Periodic).unwrap();
            let h = build_hamiltonian(&model, &vol, &MagneticField::zero(2), None).unwrap();
            let p = fermi_projector(&h, 0.0).unwrap();
            localization_length(&p, &vol, 1, DerivationScheme::MinimalImage, &Core::origin(&vol)).unwrap()
        })
        .collect();
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    assert!(min > 0.0 && (max - min) / min < 0.1, "{values:?}");
}

#[test]
fn length_is_invariant_under_magnetic_translations() {
    let vol = FiniteVolume::new(2, 6, 2, Boundary::Periodic).unwrap();
    let model = zoo("chern2d", &[]);
    let field = MagneticField::planar(2, 0, 1, 1.0 / 3.0).unwrap();
    let d = sample_disorder(&vol, &model, 1.0, 21).unwrap();
    let h = build_hamiltonian(&model, &vol, &field, Some(&d)).unwrap();
    let p = fermi_projector(&h, 0.0).unwrap().projector;
    let core = Core::from_sites(&vol, vec![0, 1, 7]).unwrap();
    let a = [2i64, 1];
    let u = magnetic_translation(&vol, &field, &a).unwrap();
    let moved = &u * &p * u.adjoint();
    let moved_core = Core::from_sites(&vol, core.sites().iter().map(|&s| vol.translate(s, &a).unwrap()).collect()).unwrap();
    let scheme = DerivationScheme::MinimalImage;
    let l0 = localization_length_matrix(&p, &vol, 1, scheme, &core).unwrap();
    let l1 = localization_length_matrix(&moved, &vol, 1, scheme, &moved_core).unwrap();
    assert!((l0 - l1).abs() < 1e-8, "{l0} vs {l1}");
}

#[test]
fn resolvent_outside_the_band_decays_exponentially() {
    let model = zoo("atomic", &[("eps", 3.0), ("t", 0.2)]);
    let vol = FiniteVolume::new(2, 20, 1, Boundary::Open).unwrap();
    let fit = fractional_moment_fit(
        &model,
        &vol,
        &MagneticField::zero(2),
        0.0,
        0.0,
        0.5,
        1e-3,
        &[1],
        &[1, 2, 3, 4, 5, 6],
        &Workers::default(),
    )
    .unwrap();
    assert!(fit.beta > 0.0 && !fit.delocalized);
    assert!(fit.residual < 1e-2, "{}", fit.residual);
}

#[test]
fn clean_metal_is_flagged() {
    let vol = FiniteVolume::new(2, 20, 2, Boundary::Open).unwrap();
    let fit = fractional_moment_fit(
        &zoo("chern2d", &[]),
        &vol,
        &MagneticField::zero(2),
        0.0,
        2.0,
        0.5,
        1e-3,
        &[1],
        &[1, 2, 3, 4, 5, 6, 7, 8],
        &Workers::default(),
    )
    .unwrap();
    assert!(fit.delocalized, "β = {}", fit.beta);
}

#[test]
fn sobolev_table_shape() {
    let model = zoo("chern2d", &[]);
    let vol = FiniteVolume::new(2, 8, 2, Boundary::Periodic).unwrap();
    let field = MagneticField::zero(2);
    let core = Core::all(&vol);
    let setup = SobolevSetup {
        model: &model,
        volume: &vol,
        field: &field,
        lambda: 6.0,
        fermi_energy: 0.0,
        n: 1,
        scheme: DerivationScheme::MinimalImage,
        core: &core,
    };
    let w = Workers::default();
    let table = sobolev_continuity(&setup, &[0.1, 0.05, 0.0], &[1, 2], &w).unwrap();
    assert_eq!(table.rows.len(), 3);
    assert_eq!(table.rows[2].norm, 0.0);
    assert!(table.rows[1].norm < table.rows[0].norm);
    assert!(sobolev_continuity(&setup, &[0.05, 0.1], &[1], &w).is_err());
    assert!(sobolev_continuity(&setup, &[-0.1], &[1], &w).is_err());
    let _ = linalg::identity(1);
}
