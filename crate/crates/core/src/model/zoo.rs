//! Standard benchmark models expressed as real-space hoppings.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::clifford::build_clifford;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, I, ONE, ZERO};
use crate::model::HoppingModel;

pub const MODEL_NAMES: [&str; 4] = ["chern2d", "dirac4d", "hofstadter2d", "atomic"];

fn param(params: &BTreeMap<String, f64>, allowed: &[(&str, f64)], model: &str) -> Result<Vec<f64>> {
    if let Some(k) = params.keys().find(|k| !allowed.iter().any(|(a, _)| a == k)) {
        return Err(Error::Argument(format!(
            "unknown parameter `{k}` for model {model} (accepted: {})",
            allowed.iter().map(|(a, _)| *a).collect::<Vec<_>>().join(", ")
        )));
    }
    Ok(allowed
        .iter()
        .map(|(name, default)| params.get(*name).copied().unwrap_or(*default))
        .collect())
}

fn unit(dim: usize, axis: usize) -> Vec<i64> {
    (0..dim).map(|i| i64::from(i == axis)).collect()
}

fn scaled(m: &CMat, s: Complex64) -> CMat {
    linalg::scale(m, s)
}

/// Looks up a model by name. Parameters not given take their defaults:
///
/// * `chern2d` (`m = 1`): `sin k₁ τ₁ + sin k₂ τ₂ + (m + cos k₁ + cos k₂) τ₃`
/// * `dirac4d` (`m = -3`): `Σ_μ sin k_μ Γ_μ + (m + Σ_μ cos k_μ) Γ₀`
/// * `hofstadter2d` (`t = 1`): single band, `-t` on nearest-neighbour bonds
/// * `atomic` (`dim = 2`, `orbitals = 1`, `eps = 0`, `t = 0`): on-site energy
///   `eps` plus an optional weak nearest-neighbour hopping `-t`
pub fn model_zoo(name: &str, params: &BTreeMap<String, f64>) -> Result<HoppingModel> {
    match name {
        "chern2d" => {
            let [m] = param(params, &[("m", 1.0)], name)?[..] else { unreachable!() };
            let s1 = CMat::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO });
            let s2 = CMat::from_fn(2, 2, |i, j| match (i, j) {
                (0, 1) => -I,
                (1, 0) => I,
                _ => ZERO,
            });
            let s3 = linalg::from_real_diag(&[1.0, -1.0]);
            let mut model = HoppingModel::new(name, 2, 2, 2)?;
            model.add_hopping(&[0, 0], &scaled(&s3, m.into()))?;
            for (axis, sigma) in [(0, &s1), (1, &s2)] {
                // sin k τ and cos k τ₃ from t_{±e}; only +e is passed, -e is its adjoint.
                let t = &scaled(sigma, Complex64::new(0.0, 0.5)) + &scaled(&s3, 0.5.into());
                model.add_hopping(&unit(2, axis), &t)?;
            }
            Ok(model)
        }
        "dirac4d" => {
            let [m] = param(params, &[("m", -3.0)], name)?[..] else { unreachable!() };
            let rep = build_clifford(2)?;
            let g0 = rep.gamma0().clone();
            let mut model = HoppingModel::new(name, 4, 4, 2)?;
            model.add_hopping(&[0, 0, 0, 0], &scaled(&g0, m.into()))?;
            for axis in 0..4 {
                let t = &scaled(rep.gamma(axis), Complex64::new(0.0, 0.5)) + &scaled(&g0, 0.5.into());
                model.add_hopping(&unit(4, axis), &t)?;
            }
            Ok(model)
        }
        "hofstadter2d" => {
            let [t] = param(params, &[("t", 1.0)], name)?[..] else { unreachable!() };
            let mut model = HoppingModel::new(name, 2, 1, 2)?;
            model.add_hopping(&[0, 0], &linalg::zeros(1, 1))?;
            for axis in 0..2 {
                model.add_hopping(&unit(2, axis), &linalg::from_real_diag(&[-t]))?;
            }
            Ok(model)
        }
        "atomic" => {
            let [dim, orbitals, eps, t] =
                param(params, &[("dim", 2.0), ("orbitals", 1.0), ("eps", 0.0), ("t", 0.0)], name)?[..]
            else {
                unreachable!()
            };
            if dim < 1.0 || orbitals < 1.0 || dim.fract() != 0.0 || orbitals.fract() != 0.0 {
                return Err(Error::Argument(format!(
                    "atomic model needs positive integer dim and orbitals (got {dim}, {orbitals})"
                )));
            }
            let (d, q) = (dim as usize, orbitals as usize);
            let mut model = HoppingModel::new(name, d, q, 2)?;
            model.add_hopping(&vec![0; d], &linalg::from_real_diag(&vec![eps; q]))?;
            if t != 0.0 {
                for axis in 0..d {
                    model.add_hopping(&unit(d, axis), &linalg::from_real_diag(&vec![-t; q]))?;
                }
            }
            Ok(model)
        }
        other => Err(Error::Lookup(other.to_string())),
    }
}
