//! Thin helpers over `faer` dense matrices.
//!
//! Every matrix in the crate is a dense `faer::Mat<Complex64>`; faer is built
//! without its thread pool so each kernel is sequential and bit-reproducible.

use faer::{Mat, Side};
use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = Mat<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn zeros(rows: usize, cols: usize) -> CMat {
    Mat::zeros(rows, cols)
}

pub fn identity(n: usize) -> CMat {
    Mat::identity(n, n)
}

pub fn from_real_diag(values: &[f64]) -> CMat {
    Mat::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            Complex64::new(values[i], 0.0)
        } else {
            ZERO
        }
    })
}

/// Kronecker product `a ⊗ b` (the index of `a` is the slow one).
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::from_fn(a.nrows() * br, a.ncols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

pub fn adjoint(a: &CMat) -> CMat {
    a.adjoint().to_owned()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

pub fn trace(a: &CMat) -> Complex64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}

/// Largest entry modulus.
pub fn max_abs(a: &CMat) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

/// `max |A - A†|`.
pub fn hermiticity_error(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut m = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            m = m.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    m
}

pub fn scale(a: &CMat, s: Complex64) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

pub fn select_rows(a: &CMat, rows: &[usize]) -> CMat {
    Mat::from_fn(rows.len(), a.ncols(), |i, j| a[(rows[i], j)])
}

pub fn select_cols(a: &CMat, cols: &[usize]) -> CMat {
    Mat::from_fn(a.nrows(), cols.len(), |i, j| a[(i, cols[j])])
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
///
/// Only the lower triangle is read.
pub fn hermitian_eigen(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension(format!(
            "eigendecomposition of a {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigensolver failed: {e:?}")))?;
    let values = (0..a.nrows()).map(|i| evd.S()[i].re).collect();
    Ok((values, evd.U().to_owned()))
}

pub fn hermitian_eigenvalues(a: &CMat) -> Result<Vec<f64>> {
    a.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigensolver failed: {e:?}")))
}

/// Largest singular value, from the eigenvalues of `a† a`.
pub fn spectral_norm(a: &CMat) -> f64 {
    let g = a.adjoint() * a;
    hermitian_eigenvalues(&g)
        .map(|v| v.into_iter().fold(0.0, f64::max).sqrt())
        .unwrap_or(f64::NAN)
}

/// Determinant of the real square matrix whose columns are `columns`.
pub fn det_columns(columns: &[Vec<f64>]) -> f64 {
    let n = columns.len();
    if n == 0 {
        return 1.0;
    }
    let m = Mat::<f64>::from_fn(n, n, |i, j| columns[j][i]);
    m.determinant()
}

/// All permutations of `0..k` in lexicographic order, paired with their sign.
pub fn signed_permutations(k: usize) -> Vec<(Vec<usize>, f64)> {
    (0..k)
        .permutations(k)
        .map(|p| {
            let inversions = (0..k)
                .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (p, sign)
        })
        .collect()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}
