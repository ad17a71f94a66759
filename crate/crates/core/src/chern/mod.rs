//! Chern number estimators: momentum-space oracle, real-space trace formula
//! and disorder ensembles.

mod ensemble;
mod kspace;
mod realspace;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::CMat;
use crate::model::Boundary;
use crate::nctorus::DerivationScheme;

pub use ensemble::{
    disorder_averaged_chern, phase_diagram, realization_chern, PhaseRow, RealSpaceSetup,
};
pub use kspace::{kspace_chern, kspace_chern_curvature, kspace_chern_links};
pub use realspace::{realspace_chern, realspace_chern_matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChernMethod {
    KSpace,
    RealSpace,
}

/// One realization of a real-space ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedValue {
    pub seed: u64,
    pub value: f64,
    pub imag: f64,
    pub occupied: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub localization_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChernEstimate {
    pub value: f64,
    /// Imaginary part of the raw estimator (should vanish).
    pub imag: f64,
    pub n: usize,
    pub method: ChernMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Smallest `|E_k - ε_F|` on the momentum grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Boundary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<DerivationScheme>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core_sites: Option<usize>,
    pub realizations: usize,
    pub stderr: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub per_seed: Vec<SeedValue>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl ChernEstimate {
    pub fn nearest_integer(&self) -> i64 {
        self.value.round() as i64
    }

    pub fn distance_to_integer(&self) -> f64 {
        (self.value - self.value.round()).abs()
    }
}

/// `Σ_σ sign(σ) finish(start · F_{σ(1)} ⋯ F_{σ(k-1)}, σ(k))` over all
/// permutations of the `k` factors, sharing common prefixes of the products.
pub(crate) fn signed_product_sum<F>(start: &CMat, factors: &[CMat], finish: &F) -> Complex64
where
    F: Fn(&CMat, usize) -> Complex64,
{
    fn walk<F: Fn(&CMat, usize) -> Complex64>(
        current: &CMat,
        factors: &[CMat],
        used: &mut Vec<bool>,
        depth: usize,
        sign: f64,
        finish: &F,
    ) -> Complex64 {
        let k = factors.len();
        let mut total = Complex64::new(0.0, 0.0);
        for a in 0..k {
            if used[a] {
                continue;
            }
            // Inversions added by placing `a` after the larger indices already used.
            let flips = (a + 1..k).filter(|&b| used[b]).count();
            let s = if flips % 2 == 0 { sign } else { -sign };
            if depth + 1 == k {
                total += finish(current, a) * s;
            } else {
                let next = current * &factors[a];
                used[a] = true;
                total += walk(&next, factors, used, depth + 1, s, finish);
                used[a] = false;
            }
        }
        total
    }
    let mut used = vec![false; factors.len()];
    walk(start, factors, &mut used, 0, 1.0, finish)
}

/// `(2πi)^n / n!`.
pub(crate) fn realspace_prefactor(n: usize) -> Complex64 {
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    two_pi_i.powu(n as u32) / crate::linalg::factorial(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{self, signed_permutations};

    #[test]
    fn prefix_sum_matches_brute_force() {
        let mats: Vec<CMat> = (0..4)
            .map(|s| {
                CMat::from_fn(3, 3, |i, j| {
                    Complex64::new(((i * 5 + j * 3 + s * 7) % 11) as f64 - 5.0, ((i + j * s) % 4) as f64)
                })
            })
            .collect();
        let start = linalg::identity(3);
        let fast = signed_product_sum(&start, &mats, &|x, a| linalg::trace(&(x * &mats[a])));
        let mut slow = Complex64::new(0.0, 0.0);
        for (p, sign) in signed_permutations(4) {
            let prod = p.iter().fold(start.clone(), |acc, &a| &acc * &mats[a]);
            slow += linalg::trace(&prod) * sign;
        }
        assert!((fast - slow).norm() < 1e-9 * slow.norm().max(1.0));
    }
}
