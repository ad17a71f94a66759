use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// A simplex given by `d + 1` vertices in `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let dim = vertices.first().map_or(0, Vec::len);
        if dim == 0 || vertices.len() != dim + 1 || vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::Dimension(format!(
                "a simplex in R^{dim} needs {} vertices of length {dim}, got {}",
                dim + 1,
                vertices.len()
            )));
        }
        Ok(Simplex { vertices })
    }

    /// The simplex `[0, y_1, …, y_d]`.
    pub fn with_origin(edges: &[Vec<f64>]) -> Result<Self> {
        let dim = edges.first().map_or(0, Vec::len);
        let mut vertices = vec![vec![0.0; dim]];
        vertices.extend(edges.iter().cloned());
        Simplex::new(vertices)
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }
}

/// Oriented volume `det(v_1 − v_0, …, v_d − v_0) / d!`.
pub fn simplex_volume(s: &Simplex) -> f64 {
    let v0 = &s.vertices[0];
    let edges: Vec<Vec<f64>> = s.vertices[1..]
        .iter()
        .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    linalg::det_columns(&edges) / linalg::factorial(s.dim())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_simplices() {
        let s = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((simplex_volume(&s) - 0.5).abs() < 1e-15);
        let e = |i: usize| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect::<Vec<_>>();
        let s = Simplex::with_origin(&[e(0), e(1), e(2), e(3)]).unwrap();
        assert!((simplex_volume(&s) - 1.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_and_malformed() {
        let s = Simplex::new(vec![vec![0.0, 1.0], vec![2.0, 0.5], vec![0.0, 1.0]]).unwrap();
        assert_eq!(simplex_volume(&s), 0.0);
        assert!(Simplex::new(vec![vec![0.0, 1.0], vec![2.0, 0.5]]).is_err());
        assert!(Simplex::new(vec![vec![0.0], vec![2.0, 0.5], vec![1.0, 1.0]]).is_err());
    }
}
