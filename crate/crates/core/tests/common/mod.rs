#![allow(dead_code)]

use std::collections::BTreeMap;

use ncchern::{model_zoo, HoppingModel};

pub fn zoo(name: &str, kv: &[(&str, f64)]) -> HoppingModel {
    let params: BTreeMap<String, f64> = kv.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    model_zoo(name, &params).unwrap()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det_elimination(columns: &[Vec<f64>]) -> f64 {
    let n = columns.len();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| columns[j][i]).collect()).collect();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

/// Kuhn triangulation of the unit cube `[0,1]^d`: one simplex per
/// permutation, walking from the origin along the permuted axes.
pub fn kuhn_simplices(d: usize) -> Vec<Vec<Vec<usize>>> {
    fn perms(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }
    perms(d)
        .into_iter()
        .map(|p| {
            let mut v = vec![0usize; d];
            let mut verts = vec![v.clone()];
            for &axis in &p {
                v[axis] = 1;
                verts.push(v.clone());
            }
            verts
        })
        .collect()
}

/// Sign of the permutation taking `0..d` to `p` composed with the Kuhn path;
/// the simplex of permutation `p` has orientation `sign(p)`.
pub fn perm_sign(verts: &[Vec<usize>]) -> f64 {
    let d = verts.len() - 1;
    let order: Vec<usize> = (0..d)
        .map(|k| (0..d).find(|&a| verts[k + 1][a] != verts[k][a]).unwrap())
        .collect();
    let inv = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).filter(|&(i, j)| order[i] > order[j]).count();
    if inv % 2 == 0 { 1.0 } else { -1.0 }
}

/// Degree of `k ↦ d(k)/|d(k)|` from the torus `T^D` to `S^D`, counted as
/// the signed number of simplices of a Kuhn triangulation whose image cone
/// contains a fixed generic direction `y`.
pub fn simplicial_degree(dfun: &dyn Fn(&[f64]) -> Vec<f64>, dim: usize, grid: usize, y: &[f64]) -> i64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let simplices = kuhn_simplices(dim);
    let mut total = 0.0;
    let mut idx = vec![0usize; dim];
    loop {
        for s in &simplices {
            let images: Vec<Vec<f64>> = s
                .iter()
                .map(|v| {
                    let k: Vec<f64> = (0..dim).map(|a| two_pi * (idx[a] + v[a]) as f64 / grid as f64).collect();
                    let d = dfun(&k);
                    let n = d.iter().map(|x| x * x).sum::<f64>().sqrt();
                    d.iter().map(|x| x / n).collect()
                })
                .collect();
            // y = Σ μ_i v_i with all μ_i > 0 ⇔ the cone over the simplex contains y.
            let det = det_elimination(&images);
            if det == 0.0 {
                continue;
            }
            let mut inside = true;
            for i in 0..=dim {
                let mut cols = images.clone();
                cols[i] = y.to_vec();
                if det_elimination(&cols) / det <= 0.0 {
                    inside = false;
                    break;
                }
            }
            if inside {
                total += perm_sign(s) * det.signum();
            }
        }
        let mut a = 0;
        while a < dim {
            idx[a] += 1;
            if idx[a] < grid {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
        if a == dim {
            break;
        }
    }
    total.round() as i64
}
