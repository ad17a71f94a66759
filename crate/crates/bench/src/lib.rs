//! Shared fixtures for the benchmarks.

use std::collections::BTreeMap;

use ncchern::{build_hamiltonian, fermi_projector, model_zoo, Boundary, FermiProjector, FiniteVolume, HoppingModel, MagneticField};

pub fn model(name: &str, m: f64) -> HoppingModel {
    let params = BTreeMap::from([("m".to_string(), m)]);
    model_zoo(name, &params).expect("zoo model")
}

/// Clean Fermi projector of `model` on an open box of size `size`.
pub fn clean_projector(model: &HoppingModel, size: usize) -> (FiniteVolume, FermiProjector) {
    let vol = FiniteVolume::new(model.dim(), size, model.orbitals(), Boundary::Open).expect("volume");
    let h = build_hamiltonian(model, &vol, &MagneticField::zero(model.dim()), None).expect("hamiltonian");
    (vol, fermi_projector(&h, 0.0).expect("projector"))
}
