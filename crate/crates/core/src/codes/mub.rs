//! Mutually unbiased bases from Weyl families.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, omega_pow, CMatrix, CVector};
use crate::pauli::PauliElement;

pub const MUB_TOLERANCE: f64 = 1e-10;

/// Basis indices `[Z, X, X Z, ..., X Z^(d-1)]`, one per commuting family.
pub fn family_representatives(d: u32) -> Vec<usize> {
    std::iter::once(1).chain((d as usize)..(2 * d as usize)).collect()
}

/// The `d + 1` families of non-identity error-basis indices, each the
/// non-trivial powers of one representative modulo phase.
pub fn mub_families(d: u32) -> Result<Vec<Vec<usize>>> {
    family_representatives(d)
        .into_iter()
        .map(|r| {
            let e = PauliElement::from_index(d, r)?;
            let mut fam: Vec<usize> = (1..d).map(|k| e.pow(k).basis_index()).collect();
            fam.sort_unstable();
            Ok(fam)
        })
        .collect()
}

/// Eigenvectors of a unitary `u` with `u^d ∝ I` and eigenvalues
/// `mu0 omega^j`, ordered by `j`.
pub fn unitary_eigenbasis(u: &CMatrix, d: u32) -> Result<Vec<CVector>> {
    let n = u.nrows();
    let mut power = linalg::identity(n);
    for _ in 0..d {
        power = u * power;
    }
    let c = power[(0, 0)];
    if linalg::max_abs_diff(&power, &(linalg::identity(n) * c)) > 1e-9 || (c.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidProbe("operator is not a root of a scalar".into()));
    }
    let mu0 = Complex64::from_polar(1.0, c.arg() / d as f64);
    let mut basis = Vec::with_capacity(n);
    for j in 0..d {
        let scale = omega_pow(d, -(j as i64)) / mu0;
        let mut proj = CMatrix::zeros(n, n);
        let mut term = linalg::identity(n);
        for _ in 0..d {
            proj += &term;
            term = (u * term) * scale;
        }
        proj /= Complex64::new(d as f64, 0.0);
        for col in 0..n {
            let v = proj.column(col).into_owned();
            if v.norm() > 1e-6 {
                basis.push(linalg::normalize(&v).expect("nonzero"));
                break;
            }
        }
    }
    if basis.len() != n {
        return Err(Error::InvalidProbe("spectrum is degenerate".into()));
    }
    Ok(basis)
}

/// Eigenbases of the `d + 1` family representatives on one qudit.
pub fn single_qudit_mub(d: u32) -> Result<Vec<Vec<CVector>>> {
    family_representatives(d)
        .into_iter()
        .map(|r| unitary_eigenbasis(&PauliElement::from_index(d, r)?.matrix(), d))
        .collect()
}

/// Whether every pair of distinct bases has `|<u|v>|^2 = 1/dim` throughout.
pub fn mub_check(bases: &[Vec<CVector>]) -> bool {
    let Some(first) = bases.first().and_then(|b| b.first()) else {
        return true;
    };
    let inv = 1.0 / first.len() as f64;
    bases.iter().enumerate().all(|(i, b1)| {
        bases[i + 1..].iter().all(|b2| {
            b1.iter()
                .all(|u| b2.iter().all(|v| (u.dotc(v).norm_sqr() - inv).abs() <= MUB_TOLERANCE))
        })
    })
}
