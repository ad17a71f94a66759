use std::f64::consts::PI;

use faer::linalg::solvers::{DenseSolveCore, PartialPivLu, Solve};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::model::FiniteVolume;

/// Eigenvalues closer than this to the Fermi energy trigger a degeneracy warning.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Spectral projector `P = χ_{(-∞, ε_F]}(H)`.
#[derive(Debug, Clone)]
pub struct FermiProjector {
    pub projector: CMat,
    pub fermi_energy: f64,
    pub occupied_count: usize,
    pub eigenvalues: Vec<f64>,
    pub warning: Option<String>,
}

/// Spectral summary kept alongside results.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumInfo {
    pub fermi_energy: f64,
    pub occupied_count: usize,
    /// Smallest `|E - ε_F|` over the spectrum.
    pub fermi_gap: f64,
    pub warning: Option<String>,
}

impl FermiProjector {
    pub fn dim(&self) -> usize {
        self.projector.nrows()
    }

    pub fn info(&self) -> SpectrumInfo {
        SpectrumInfo {
            fermi_energy: self.fermi_energy,
            occupied_count: self.occupied_count,
            fermi_gap: self
                .eigenvalues
                .iter()
                .map(|e| (e - self.fermi_energy).abs())
                .fold(f64::INFINITY, f64::min),
            warning: self.warning.clone(),
        }
    }

    /// Wraps an arbitrary Hermitian projector, e.g. `0` or the identity.
    pub fn from_matrix(projector: CMat, fermi_energy: f64) -> Self {
        let occupied_count = linalg::trace(&projector).re.round() as usize;
        FermiProjector {
            projector,
            fermi_energy,
            occupied_count,
            eigenvalues: Vec::new(),
            warning: None,
        }
    }
}

/// Full diagonalization followed by `P = Σ_{E_k ≤ ε_F} |ψ_k⟩⟨ψ_k|`.
pub fn fermi_projector(h: &CMat, fermi_energy: f64) -> Result<FermiProjector> {
    let (values, vectors) = linalg::hermitian_eigen(h)?;
    let occupied = values.iter().take_while(|&&e| e <= fermi_energy).count();
    let n = h.nrows();
    let projector = if occupied == 0 {
        linalg::zeros(n, n)
    } else {
        let v = vectors.subcols(0, occupied);
        v * v.adjoint()
    };
    let closest = values
        .iter()
        .map(|e| (e - fermi_energy).abs())
        .fold(f64::INFINITY, f64::min);
    let warning = (closest < DEGENERACY_TOL).then(|| {
        format!(
            "eigenvalue within {closest:.1e} of the Fermi energy {fermi_energy}; quantization is not guaranteed"
        )
    });
    Ok(FermiProjector {
        projector,
        fermi_energy,
        occupied_count: occupied,
        eigenvalues: values,
        warning,
    })
}

/// LU factorization of `H - ξ` for repeated resolvent solves.
pub struct Resolvent {
    lu: PartialPivLu<Complex64>,
    xi: Complex64,
    dim: usize,
}

impl Resolvent {
    pub fn new(h: &CMat, xi: Complex64) -> Result<Self> {
        if xi.im == 0.0 {
            return Err(Error::Argument(format!("resolvent needs Im ξ ≠ 0 (ξ = {xi})")));
        }
        if h.nrows() != h.ncols() {
            return Err(Error::Dimension("resolvent of a non-square matrix".into()));
        }
        let shifted = CMat::from_fn(h.nrows(), h.ncols(), |i, j| if i == j { h[(i, j)] - xi } else { h[(i, j)] });
        Ok(Resolvent {
            lu: shifted.partial_piv_lu(),
            xi,
            dim: h.nrows(),
        })
    }

    pub fn xi(&self) -> Complex64 {
        self.xi
    }

    /// Columns `(H - ξ)^{-1} e_j` for the given state indices.
    pub fn columns(&self, states: &[usize]) -> Result<CMat> {
        let n = self.dim;
        let mut rhs = linalg::zeros(n, states.len());
        for (c, &s) in states.iter().enumerate() {
            rhs[(s, c)] = Complex64::new(1.0, 0.0);
        }
        self.lu.solve_in_place(&mut rhs);
        if (0..rhs.ncols()).any(|j| (0..n).any(|i| !rhs[(i, j)].is_finite())) {
            return Err(Error::Numerical(format!("singular resolvent solve at ξ = {}", self.xi)));
        }
        Ok(rhs)
    }

    /// The `(x, y)` orbital block of `(H - ξ)^{-1}`.
    pub fn block(&self, vol: &FiniteVolume, x: usize, y: usize) -> Result<CMat> {
        let q = vol.orbitals();
        let cols = self.columns(&(0..q).map(|b| vol.state_index(y, b)).collect::<Vec<_>>())?;
        Ok(CMat::from_fn(q, q, |a, b| cols[(vol.state_index(x, a), b)]))
    }

    pub fn inverse(&self) -> CMat {
        self.lu.inverse()
    }
}

/// `⟨x|(H - ξ)^{-1}|y⟩` as a `Q × Q` block, via unit-vector solves.
pub fn resolvent_block(h: &CMat, xi: Complex64, vol: &FiniteVolume, x: usize, y: usize) -> Result<CMat> {
    if h.nrows() != vol.num_states() {
        return Err(Error::Dimension(format!(
            "{}-dimensional matrix on a volume with {} states",
            h.nrows(),
            vol.num_states()
        )));
    }
    Resolvent::new(h, xi)?.block(vol, x, y)
}

/// Riesz projector `(i/2π) ∮ (H - ξ)^{-1} dξ` over a circle enclosing the
/// spectrum below `ε_F`, by the trapezoidal rule with `nodes` points.
///
/// Only meant as a cross-check of [`fermi_projector`] on small matrices; the
/// circle's left end is placed below a Gershgorin bound of the spectrum.
pub fn contour_projector(h: &CMat, fermi_energy: f64, nodes: usize) -> Result<CMat> {
    if nodes < 4 {
        return Err(Error::Argument("contour quadrature needs at least 4 nodes".into()));
    }
    let n = h.nrows();
    let bound = (0..n)
        .map(|i| (0..n).map(|j| h[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let low = -bound - 1.0;
    if fermi_energy <= low {
        return Ok(linalg::zeros(n, n));
    }
    let (centre, radius) = ((fermi_energy + low) / 2.0, (fermi_energy - low) / 2.0);
    let mut p = linalg::zeros(n, n);
    for j in 0..nodes {
        // Offset by half a step so that no node sits on the real axis.
        let theta = 2.0 * PI * (j as f64 + 0.5) / nodes as f64;
        let w = Complex64::from_polar(radius, theta);
        let r = Resolvent::new(h, centre + w)?.inverse();
        // (i/2π) (H-ξ)^{-1} dξ with dξ = i w dθ.
        let weight = -w / nodes as f64;
        p = &p + &linalg::scale(&r, weight);
    }
    Ok(p)
}
