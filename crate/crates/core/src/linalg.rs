//! Small dense complex helpers shared by the simulation modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2u32;
    while f.saturating_mul(f) <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// `omega^k` with `omega = exp(2 pi i / d)`; `k` is reduced mod `d` first so
/// equal exponents give bit-identical values.
pub fn omega_pow(d: u32, k: i64) -> Complex64 {
    let k = k.rem_euclid(d as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k / d as f64)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `Tr(A B)` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Eigen-decomposition of the Hermitian part of `m` (ascending eigenvalues
/// are not guaranteed by nalgebra, callers sort if needed).
pub fn hermitian_eigen(m: &CMatrix) -> SymmetricEigen<Complex64, nalgebra::Dyn> {
    SymmetricEigen::new(hermitian_part(m))
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigen(m)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Projector `|v><v|`.
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn normalize(v: &CVector) -> Option<CVector> {
    let n = v.norm();
    (n > 1e-300).then(|| v.unscale(n))
}

pub fn basis_vector(dim: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[i] = ONE;
    v
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn ipow(base: usize, exp: usize) -> usize {
    (0..exp).fold(1usize, |acc, _| acc * base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let found: Vec<u32> = (0..20).filter(|&n| is_prime(n)).collect();
        assert_eq!(found, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn omega_reduces_exponent() {
        assert_eq!(omega_pow(5, 7), omega_pow(5, 2));
        assert_eq!(omega_pow(5, -3), omega_pow(5, 2));
        assert!((omega_pow(2, 1) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn trace_of_product_matches_dense() {
        let a = CMatrix::from_fn(3, 3, |i, j| Complex64::new(i as f64, j as f64 - 1.0));
        let b = CMatrix::from_fn(3, 3, |i, j| Complex64::new((i * j) as f64, 0.5));
        assert!((trace_of_product(&a, &b) - trace(&(&a * &b))).norm() < 1e-12);
    }
}
