//! Chern numbers of lattice insulators: momentum-space and real-space
//! estimators, the Fredholm index of the Dirac phase, localization
//! diagnostics and numerical checks of the underlying integral identities.

pub mod chern;
pub mod clifford;
pub mod error;
pub mod fredholm;
pub mod linalg;
pub mod localization;
pub mod model;
pub mod nctorus;
pub mod oracles;
pub mod parallel;

pub use chern::{
    disorder_averaged_chern, kspace_chern, phase_diagram, realization_chern, realspace_chern, ChernEstimate,
    ChernMethod, PhaseRow, RealSpaceSetup, SeedValue,
};
pub use clifford::{build_clifford, CliffordRep};
pub use error::{Error, Result};
pub use fredholm::{dirac_phase, index_estimate, DiracPhase, IndexEstimate, Insertion};
pub use localization::{fractional_moment_fit, localization_length, sobolev_continuity, FracMomentFit, SobolevTable};
pub use model::{
    build_hamiltonian, fermi_projector, model_zoo, sample_disorder, Boundary, Core, FermiProjector, FiniteVolume,
    HoppingModel, MagneticField,
};
pub use nctorus::DerivationScheme;
pub use parallel::Workers;
