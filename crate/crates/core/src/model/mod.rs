//! Finite-volume tight-binding models.

mod disorder;
mod hamiltonian;
mod hopping;
mod spectral;
mod volume;
pub mod zoo;

pub use disorder::{sample_disorder, DisorderRealization};
pub use hamiltonian::{build_hamiltonian, magnetic_translation};
pub use hopping::{HoppingModel, MagneticField};
pub use spectral::{
    contour_projector, fermi_projector, resolvent_block, FermiProjector, Resolvent, SpectrumInfo, DEGENERACY_TOL,
};
pub use volume::{Boundary, Core, FiniteVolume};
pub use zoo::model_zoo;
