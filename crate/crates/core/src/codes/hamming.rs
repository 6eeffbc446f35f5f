//! Quantum Hamming bound for non-degenerate qudit stabilizer codes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct HammingBound {
    /// `sum_{j=0}^{t} C(n_e, j) (d^2 - 1)^j d^k / g`, exact.
    pub lhs: BigRational,
    /// `d^n`.
    pub rhs: BigRational,
    pub holds: bool,
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j) / BigInt::from(j + 1))
}

/// Checks that the syndromes of all errors of weight at most `t` on `n_e`
/// error-prone qudits of an `[[n, k]]` code, `g` errors sharing each
/// syndrome, fit in the Hilbert space: `lhs <= d^n`.
pub fn check_hamming_bound(n: u64, k: u64, g: u64, n_e: u64, t: u64, d: u32) -> Result<HammingBound> {
    if g == 0 {
        return Err(Error::InvalidConfiguration(
            "degeneracy factor g must be positive".into(),
        ));
    }
    if t > n_e || n_e > n {
        return Err(Error::InvalidConfiguration(format!(
            "need t <= n_e <= n, got t = {t}, n_e = {n_e}, n = {n}"
        )));
    }
    let dd = BigInt::from(d);
    let weight = &dd * &dd - 1;
    let mut sum = BigInt::zero();
    let mut wpow = BigInt::one();
    for j in 0..=t {
        sum += binomial(n_e, j) * &wpow;
        wpow *= &weight;
    }
    let lhs = BigRational::new(sum * num_traits::pow(dd.clone(), k as usize), BigInt::from(g));
    let rhs = BigRational::from_integer(num_traits::pow(dd, n as usize));
    Ok(HammingBound {
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}
