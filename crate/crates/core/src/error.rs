use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    /// The magnetic field is not commensurate with the periodic volume.
    #[error("flux error: B[{row}][{col}] = {value} is incommensurate with L = {size} (L*B must be an even integer)")]
    Flux {
        row: usize,
        col: usize,
        value: f64,
        size: usize,
    },

    /// The spectrum touches the Fermi level somewhere on the momentum grid.
    #[error("gap error: |E - E_F| = {distance:.3e} at k = {k:?}")]
    Gap { k: Vec<f64>, distance: f64 },

    #[error("scheme error: {0}")]
    Scheme(String),

    #[error("argument error: {0}")]
    Argument(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("unknown model `{0}` (expected one of chern2d, dirac4d, hofstadter2d, atomic)")]
    Lookup(String),

    #[error("precision error: {message}; try a larger quadrature radius (>= {suggested_radius})")]
    Precision {
        message: String,
        suggested_radius: f64,
    },

    /// A single disorder realization failed inside an ensemble.
    #[error("realization with seed {seed} failed: {source}")]
    Realization {
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Short machine-readable tag, used by the CLI error object.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::Geometry(_) => "geometry",
            Error::Flux { .. } => "flux",
            Error::Gap { .. } => "gap",
            Error::Scheme(_) => "scheme",
            Error::Argument(_) => "argument",
            Error::Numerical(_) => "numerical",
            Error::Lookup(_) => "lookup",
            Error::Precision { .. } => "precision",
            Error::Realization { .. } => "realization",
        }
    }
}
