//! Dense complex matrix helpers shared by every module.

use nalgebra::DMatrix;
use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Largest qubit count for which dense `2^n x 2^n` operators are built.
pub const DENSE_QUBIT_LIMIT: usize = 12;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

/// Largest singular value.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    let gram = a.adjoint() * a;
    let (vals, _) = hermitian_eigen(&gram);
    vals.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and the
/// eigenvectors as the matching columns.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = a.clone().symmetric_eigen();
    let dim = a.nrows();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(dim, dim);
    for (col, &src) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// `exp(-i t H)` for Hermitian `H`.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(h);
    let phases = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&e| C64::from_polar(1.0, -e * t)),
    ));
    &vecs * phases * vecs.adjoint()
}

/// Global phase `phi` that best aligns `b` onto `a` (`a ~ e^{i phi} b`).
pub fn relative_phase(a: &CMatrix, b: &CMatrix) -> f64 {
    let overlap: C64 = b.iter().zip(a.iter()).map(|(y, x)| y.conj() * x).sum();
    overlap.arg()
}

/// Element-wise distance after removing the best-fitting global phase.
pub fn phase_aligned_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    let phi = relative_phase(a, b);
    let rotated = b * C64::from_polar(1.0, phi);
    max_abs_diff(a, &rotated)
}

/// Spectral distance after removing the best-fitting global phase.
pub fn phase_aligned_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    let phi = relative_phase(a, b);
    spectral_norm(&(a - b * C64::from_polar(1.0, phi)))
}

pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_pauli_z_is_a_phase_diagonal() {
        let z = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
        let u = expm_hermitian(&z, 0.3);
        assert!((u[(0, 0)] - C64::from_polar(1.0, -0.3)).norm() < 1e-14);
        assert!((u[(1, 1)] - C64::from_polar(1.0, 0.3)).norm() < 1e-14);
        assert!(u[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn phase_alignment_removes_global_phase() {
        let x = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let y = &x * C64::from_polar(1.0, 1.234);
        assert!(phase_aligned_diff(&x, &y) < 1e-14);
        assert!(max_abs_diff(&x, &y) > 0.5);
    }

    #[test]
    fn spectral_norm_of_scaled_identity() {
        let a = identity(4) * real(2.5);
        assert!((spectral_norm(&a) - 2.5).abs() < 1e-12);
    }
}
