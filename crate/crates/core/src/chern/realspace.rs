use num_complex::Complex64;

use crate::chern::{realspace_prefactor, signed_product_sum, ChernEstimate, ChernMethod};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::model::{Core, FermiProjector, FiniteVolume};
use crate::nctorus::{apply_weights, derivation_weights, DerivationScheme};

/// Complex value of `(2πi)^n/n! Σ_σ sign(σ) T(P ∂_{σ(1)}P ⋯ ∂_{σ(2n)}P)`.
///
/// Only the core rows of the products are formed: each prefix
/// `P[core, :] · D_{σ(1)} ⋯` is an `m × N` block, and the last factor is
/// contracted directly into the diagonal.
pub fn realspace_chern_matrix(
    p: &CMat,
    vol: &FiniteVolume,
    n: usize,
    scheme: DerivationScheme,
    core: &Core,
) -> Result<Complex64> {
    if n == 0 || vol.dim() != 2 * n {
        return Err(Error::Dimension(format!(
            "n = {n} on a {}-dimensional volume",
            vol.dim()
        )));
    }
    if p.nrows() != vol.num_states() || p.ncols() != vol.num_states() {
        return Err(Error::Dimension(format!(
            "{}x{} projector on a volume with {} states",
            p.nrows(),
            p.ncols(),
            vol.num_states()
        )));
    }
    if core.is_empty() {
        return Err(Error::Argument("empty core".into()));
    }
    scheme.check(vol)?;
    let derivs = (0..vol.dim())
        .map(|axis| Ok(apply_weights(p, vol, &derivation_weights(vol, axis, scheme)?)))
        .collect::<Result<Vec<CMat>>>()?;
    let rows = core.states(vol);
    let start = linalg::select_rows(p, &rows);
    let sum = signed_product_sum(&start, &derivs, &|x: &CMat, a: usize| {
        let d = &derivs[a];
        let mut t = Complex64::new(0.0, 0.0);
        for (r, &col) in rows.iter().enumerate() {
            for j in 0..x.ncols() {
                t += x[(r, j)] * d[(j, col)];
            }
        }
        t
    });
    Ok(realspace_prefactor(n) * sum / core.len() as f64)
}

/// Real-space Chern number of a finite-volume Fermi projector.
pub fn realspace_chern(
    p: &FermiProjector,
    vol: &FiniteVolume,
    n: usize,
    scheme: DerivationScheme,
    core: &Core,
) -> Result<ChernEstimate> {
    let c = realspace_chern_matrix(&p.projector, vol, n, scheme, core)?;
    Ok(ChernEstimate {
        value: c.re,
        imag: c.im,
        n,
        method: ChernMethod::RealSpace,
        grid: None,
        min_gap: None,
        size: Some(vol.size()),
        boundary: Some(vol.boundary()),
        scheme: Some(scheme),
        core_sites: Some(core.len()),
        realizations: 1,
        stderr: 0.0,
        per_seed: Vec::new(),
        warnings: p.warning.iter().cloned().collect(),
    })
}
