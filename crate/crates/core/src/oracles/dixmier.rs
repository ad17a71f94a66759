use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DixmierEstimate {
    pub n: usize,
    pub r_max: usize,
    /// Number of lattice points with `0 < |x| ≤ R_max`.
    pub count: usize,
    /// Number of leading weights free of truncation artefacts.
    pub safe_count: usize,
    /// `(N, S_N / ln N)` at geometrically spaced checkpoints.
    pub partial: Vec<(usize, f64)>,
    /// Limit of the fit `S_N / ln N ≈ a + b / ln N`.
    pub extrapolated: f64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// An i.i.d. uniform `[0, 1)` field `x ↦ f(𝔱_x ω)` indexed by the lattice.
pub fn uniform_field(seed: u64) -> impl Fn(&[i64]) -> f64 + Sync {
    move |x: &[i64]| {
        let key = x.iter().fold(splitmix(seed), |h, &c| splitmix(h ^ c as u64));
        ChaCha8Rng::seed_from_u64(key).random::<f64>()
    }
}

/// Log-scaling estimate of the Dixmier trace of the diagonal operator with
/// weights `f(x) φ(x̂) / |x|^{2n}` on `Z^{2n}`.
///
/// Only weights whose magnitude exceeds `sup|fφ| / R_max^{2n}` are ordered
/// correctly after truncation to the ball; the fit uses checkpoints
/// `√N_safe ≤ N ≤ N_safe`.
pub fn dixmier_estimate<F, P>(f: F, phi: P, n: usize, r_max: usize) -> Result<DixmierEstimate>
where
    F: Fn(&[i64]) -> f64,
    P: Fn(&[f64]) -> f64,
{
    if n == 0 {
        return Err(Error::Dimension("n must be positive".into()));
    }
    let min_radius = if n == 1 { 32 } else { 8 };
    if r_max < min_radius {
        return Err(Error::Argument(format!("R_max = {r_max} below {min_radius} for n = {n}")));
    }
    let d = 2 * n;
    let r = r_max as i64;
    let r2 = r * r;
    let mut weights = Vec::new();
    let mut x = vec![-r; d];
    let mut sup = 0.0f64;
    loop {
        let norm2: i64 = x.iter().map(|v| v * v).sum();
        if norm2 > 0 && norm2 <= r2 {
            let norm = (norm2 as f64).sqrt();
            let unit: Vec<f64> = x.iter().map(|&v| v as f64 / norm).collect();
            let num = f(&x) * phi(&unit);
            sup = sup.max(num.abs());
            weights.push(num / (norm2 as f64).powi(n as i32));
        }
        let mut axis = 0;
        while axis < d {
            x[axis] += 1;
            if x[axis] <= r {
                break;
            }
            x[axis] = -r;
            axis += 1;
        }
        if axis == d {
            break;
        }
    }
    // Stable sort: ties keep lattice order, so the result is reproducible.
    weights.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let threshold = sup / (r as f64).powi(d as i32);
    let safe = weights.iter().take_while(|w| w.abs() > threshold).count().max(2);
    let mut partial = Vec::new();
    let mut sum = 0.0;
    let mut next = 2usize;
    for (k, w) in weights.iter().enumerate() {
        sum += w;
        let count = k + 1;
        if count == next || count == weights.len() {
            partial.push((count, sum / (count as f64).ln()));
            next = ((next as f64) * 1.25).ceil() as usize;
        }
    }
    let lo = (safe as f64).sqrt();
    let fit: Vec<(f64, f64)> = partial
        .iter()
        .filter(|(c, _)| *c as f64 >= lo && *c <= safe)
        .map(|&(c, v)| (1.0 / (c as f64).ln(), v))
        .collect();
    let extrapolated = linear_intercept(&fit)
        .ok_or_else(|| Error::Numerical("too few partial sums for the log fit".into()))?;
    Ok(DixmierEstimate {
        n,
        r_max,
        count: weights.len(),
        safe_count: safe,
        partial,
        extrapolated,
    })
}

/// Least-squares intercept of `y = a + b t`.
fn linear_intercept(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let (st, sy) = points.iter().fold((0.0, 0.0), |(a, b), (t, y)| (a + t, b + y));
    let (mt, my) = (st / m, sy / m);
    let (stt, sty) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (t, y)| (a + (t - mt).powi(2), b + (t - mt) * (y - my)));
    if stt == 0.0 {
        return None;
    }
    Some(my - sty / stt * mt)
}
