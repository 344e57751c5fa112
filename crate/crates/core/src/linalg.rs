//! Dense helpers on top of `nalgebra`: Hermitian eigendecomposition with sorted
//! output, spectral norms and PSD tests.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::{CMatrix, C64};

/// Eigendecomposition of a Hermitian matrix (the Hermitian part is used, so
/// rounding asymmetries are harmless). Eigenvalues ascend; the columns of the
/// returned matrix are the matching orthonormal eigenvectors.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = hermitian_part(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entry modulus of `m - m*`.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest singular value; zero for empty matrices.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Smallest eigenvalue together with the scale `max |λ|` used for relative
/// thresholds.
pub fn spectrum_bounds(m: &CMatrix) -> (f64, f64) {
    let ev = hermitian_eigenvalues(m);
    match (ev.first(), ev.last()) {
        (Some(&lo), Some(&hi)) => (lo, lo.abs().max(hi.abs())),
        _ => (0.0, 0.0),
    }
}

/// Moore–Penrose inverse of a Hermitian matrix, discarding eigenvalues with
/// `|λ| <= rank_tol * max|λ|`.
pub fn hermitian_pinv(m: &CMatrix, rank_tol: f64) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    let top = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let cut = rank_tol * top;
    let inv: Vec<C64> = vals
        .iter()
        .map(|&v| {
            if v.abs() > cut && top > 0.0 {
                C64::new(1.0 / v, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    &vecs * CMatrix::from_diagonal(&DVector::from_vec(inv)) * vecs.adjoint()
}

/// `f(m)` for Hermitian `m`, through its eigendecomposition.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    let d: Vec<C64> = vals.iter().map(|&v| C64::new(f(v), 0.0)).collect();
    &vecs * CMatrix::from_diagonal(&DVector::from_vec(d)) * vecs.adjoint()
}

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

/// Kronecker product `a ⊗ b`, indexed `(i * b.nrows() + k, j * b.ncols() + l)`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigen_sorted_and_reconstructs() {
        let m =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        let (vals, vecs) = hermitian_eigen(&m);
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
        let d = CMatrix::from_diagonal(&DVector::from_vec(vec![c(vals[0], 0.0), c(vals[1], 0.0)]));
        let back = &vecs * d * vecs.adjoint();
        assert!(max_abs(&(back - m)) < 1e-12);
    }

    #[test]
    fn pinv_of_path_laplacian() {
        let l = to_complex(&DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        let p = hermitian_pinv(&l, 1e-10);
        // pinv of [[1,-1],[-1,1]] is [[1,-1],[-1,1]]/4
        assert!((p[(0, 0)].re - 0.25).abs() < 1e-12);
        assert!((p[(0, 1)].re + 0.25).abs() < 1e-12);
    }

    #[test]
    fn spectral_norm_of_nilpotent() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(0.0, 3.0);
        assert!((spectral_norm(&m) - 3.0).abs() < 1e-12);
    }
}
