use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::model::disorder::displacements_within;
use crate::model::{Boundary, DisorderRealization, FiniteVolume, HoppingModel, MagneticField};

fn check_compatible(model: &HoppingModel, vol: &FiniteVolume, field: &MagneticField) -> Result<()> {
    if model.dim() != vol.dim() || model.orbitals() != vol.orbitals() {
        return Err(Error::Dimension(format!(
            "model (d={}, Q={}) does not match volume (d={}, Q={})",
            model.dim(),
            model.orbitals(),
            vol.dim(),
            vol.orbitals()
        )));
    }
    if field.dim() != vol.dim() {
        return Err(Error::Dimension(format!(
            "{}-dimensional field on a {}-dimensional volume",
            field.dim(),
            vol.dim()
        )));
    }
    if vol.boundary() == Boundary::Periodic {
        if 2 * model.range() >= vol.size() {
            return Err(Error::Geometry(format!(
                "hopping range R = {} needs L > {} for unambiguous periodic wrapping (L = {})",
                model.range(),
                2 * model.range(),
                vol.size()
            )));
        }
        field.check_commensurate(vol.size())?;
    }
    Ok(())
}

/// Dense Hamiltonian `⟨x,α|H|y,β⟩ = e^{iπ(x,B̂y)} (t_{x-y}^{αβ} + λ ω_{x,y}^{αβ})`.
///
/// Open volumes drop bonds that leave the box; periodic volumes wrap them.
/// Phases use origin-centred positions; with a commensurate field the wrap
/// does not change them.
pub fn build_hamiltonian(
    model: &HoppingModel,
    vol: &FiniteVolume,
    field: &MagneticField,
    disorder: Option<&DisorderRealization>,
) -> Result<CMat> {
    check_compatible(model, vol, field)?;
    if let Some(d) = disorder {
        if d.volume() != vol {
            return Err(Error::Dimension("disorder realization drawn on a different volume".into()));
        }
    }
    let q = vol.orbitals();
    let n = vol.num_states();
    let mut h = linalg::zeros(n, n);
    let disorder = disorder.filter(|d| d.lambda() != 0.0);
    let bonds = match disorder {
        Some(_) => displacements_within(vol.dim(), model.range()),
        None => model.displacements().cloned().collect(),
    };
    let positions: Vec<Vec<i64>> = (0..vol.num_sites()).map(|s| vol.position(s)).collect();
    for y in 0..vol.num_sites() {
        for u in &bonds {
            let Some(x) = vol.translate(y, u) else { continue };
            let phase = if field.is_zero() {
                Complex64::new(1.0, 0.0)
            } else {
                field.peierls(&positions[x], &positions[y])
            };
            let t = model.hopping(u);
            for b in 0..q {
                for a in 0..q {
                    let mut v = t.map_or(Complex64::new(0.0, 0.0), |t| t[(a, b)]);
                    if let Some(d) = disorder {
                        v += d.lambda() * d.omega_at(y, u, a, b).unwrap_or(0.0);
                    }
                    h[(x * q + a, y * q + b)] = v * phase;
                }
            }
        }
    }
    Ok(h)
}

/// Magnetic translation `U_a |x,α⟩ = e^{-iπ(a,B̂x)} |x+a,α⟩` on a periodic volume.
pub fn magnetic_translation(vol: &FiniteVolume, field: &MagneticField, a: &[i64]) -> Result<CMat> {
    if vol.boundary() != Boundary::Periodic {
        return Err(Error::Geometry("magnetic translations need a periodic volume".into()));
    }
    if a.len() != vol.dim() || field.dim() != vol.dim() {
        return Err(Error::Dimension(format!(
            "translation {a:?} / {}-dimensional field on a {}-dimensional volume",
            field.dim(),
            vol.dim()
        )));
    }
    field.check_commensurate(vol.size())?;
    let q = vol.orbitals();
    let mut u = linalg::zeros(vol.num_states(), vol.num_states());
    for x in 0..vol.num_sites() {
        let target = vol.translate(x, a).expect("periodic translation");
        let phase = field.peierls(a, &vol.position(x)).conj();
        for alpha in 0..q {
            u[(target * q + alpha, x * q + alpha)] = phase;
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sample_disorder;
    use crate::model::zoo::model_zoo;
    use std::collections::BTreeMap;

    fn zoo(name: &str) -> HoppingModel {
        model_zoo(name, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn nearest_neighbour_chain_matrix() {
        let vol = FiniteVolume::new(2, 3, 1, Boundary::Open).unwrap();
        let h = build_hamiltonian(&zoo("hofstadter2d"), &vol, &MagneticField::zero(2), None).unwrap();
        for x in 0..9 {
            for y in 0..9 {
                let d = vol.displacement(x, y);
                let nn = d.iter().map(|c| c.abs()).sum::<i64>() == 1;
                assert_eq!(h[(x, y)].re, if nn { -1.0 } else { 0.0 });
                assert_eq!(h[(x, y)].im, 0.0);
            }
        }
    }

    #[test]
    fn hermitian_for_all_combinations() {
        let model = zoo("chern2d");
        for boundary in [Boundary::Open, Boundary::Periodic] {
            let vol = FiniteVolume::new(2, 6, 2, boundary).unwrap();
            let d = sample_disorder(&vol, &model, 2.0, 3).unwrap();
            let b = MagneticField::planar(2, 0, 1, 1.0 / 3.0).unwrap();
            let h = build_hamiltonian(&model, &vol, &b, Some(&d)).unwrap();
            assert!(linalg::hermiticity_error(&h) < 1e-13);
        }
    }

    #[test]
    fn periodic_range_and_flux_errors() {
        let model = zoo("chern2d");
        let vol = FiniteVolume::new(2, 4, 2, Boundary::Periodic).unwrap();
        assert!(matches!(
            build_hamiltonian(&model, &vol, &MagneticField::zero(2), None),
            Err(Error::Geometry(_))
        ));
        let vol = FiniteVolume::new(2, 6, 2, Boundary::Periodic).unwrap();
        let b = MagneticField::planar(2, 0, 1, 0.25).unwrap();
        assert!(matches!(build_hamiltonian(&model, &vol, &b, None), Err(Error::Flux { .. })));
        let vol = FiniteVolume::new(2, 6, 4, Boundary::Open).unwrap();
        assert!(matches!(
            build_hamiltonian(&model, &vol, &MagneticField::zero(2), None),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn zero_disorder_is_clean() {
        let model = zoo("chern2d");
        let vol = FiniteVolume::new(2, 5, 2, Boundary::Open).unwrap();
        let d = sample_disorder(&vol, &model, 0.0, 1).unwrap();
        let b = MagneticField::zero(2);
        let clean = build_hamiltonian(&model, &vol, &b, None).unwrap();
        let dirty = build_hamiltonian(&model, &vol, &b, Some(&d)).unwrap();
        assert_eq!(linalg::max_abs_diff(&clean, &dirty), 0.0);
    }

    #[test]
    fn translation_basics() {
        let vol = FiniteVolume::new(2, 6, 1, Boundary::Periodic).unwrap();
        let b = MagneticField::planar(2, 0, 1, 1.0 / 3.0).unwrap();
        let id = magnetic_translation(&vol, &b, &[0, 0]).unwrap();
        assert_eq!(linalg::max_abs_diff(&id, &linalg::identity(36)), 0.0);
        let shift = magnetic_translation(&vol, &MagneticField::zero(2), &[1, 2]).unwrap();
        for j in 0..36 {
            let col: Vec<_> = (0..36).filter(|&i| shift[(i, j)].norm() != 0.0).collect();
            assert_eq!(col.len(), 1);
            assert_eq!(shift[(col[0], j)], Complex64::new(1.0, 0.0));
        }
        let open = FiniteVolume::new(2, 6, 1, Boundary::Open).unwrap();
        assert!(magnetic_translation(&open, &b, &[1, 0]).is_err());
        let bad = MagneticField::planar(2, 0, 1, 0.25).unwrap();
        assert!(matches!(magnetic_translation(&vol, &bad, &[1, 0]), Err(Error::Flux { .. })));
    }

    #[test]
    fn covariance_under_magnetic_translation() {
        let model = zoo("chern2d");
        let vol = FiniteVolume::new(2, 6, 2, Boundary::Periodic).unwrap();
        let b = MagneticField::planar(2, 0, 1, 1.0 / 3.0).unwrap();
        let d = sample_disorder(&vol, &model, 1.5, 11).unwrap();
        let a = [1, -2];
        let h = build_hamiltonian(&model, &vol, &b, Some(&d)).unwrap();
        let u = magnetic_translation(&vol, &b, &a).unwrap();
        let lhs = &u * &h * u.adjoint();
        let rhs = build_hamiltonian(&model, &vol, &b, Some(&d.translated(&a).unwrap())).unwrap();
        assert!(linalg::max_abs_diff(&lhs, &rhs) < 1e-12);
    }
}
