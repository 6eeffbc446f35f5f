//! Completely positive maps in the process-matrix (chi) representation.
//!
//! `E(rho) = sum_mn chi_mn E_m rho E_n^dagger` over the multi-qudit error
//! basis, with basis index row-major over the per-qudit indices. Kraus
//! coefficients use `c_im = Tr(E_m^dagger K_i) / D` (`D = d^n`), so a
//! trace-preserving map has `Tr chi = 1`.

pub mod spec_file;

use nalgebra::Complex;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, ZERO};
use crate::pauli::{self, MultiPauli};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix {
    d: u32,
    n_qudits: usize,
    entries: CMatrix,
}

impl ChiMatrix {
    /// Wraps `entries` after checking the shape; validity is reported by
    /// [`validate_chi`], not enforced here.
    pub fn new(d: u32, n_qudits: usize, entries: CMatrix) -> Result<Self> {
        if !linalg::is_prime(d) {
            return Err(Error::NotPrime(d));
        }
        let side = basis_size(d, n_qudits);
        if entries.nrows() != side || entries.ncols() != side {
            return Err(Error::DimensionMismatch {
                expected: side,
                found: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(Self { d, n_qudits, entries })
    }

    pub fn identity_channel(d: u32, n_qudits: usize) -> Result<Self> {
        let side = basis_size(d, n_qudits);
        let mut entries = CMatrix::zeros(side, side);
        entries[(0, 0)] = linalg::ONE;
        Self::new(d, n_qudits, entries)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n_qudits(&self) -> usize {
        self.n_qudits
    }

    /// Side of the chi matrix, `d^(2 n)`.
    pub fn side(&self) -> usize {
        self.entries.nrows()
    }

    /// Dimension of the system the map acts on, `d^n`.
    pub fn system_dim(&self) -> usize {
        linalg::ipow(self.d as usize, self.n_qudits)
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries[(m, n)]
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.entries).re
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.entries.diagonal().iter().map(|z| z.re).collect()
    }

    /// `sum_mn chi_mn E_n^dagger E_m`; equals the identity exactly when the map
    /// is trace preserving.
    pub fn trace_operator(&self) -> Result<CMatrix> {
        let basis = pauli::basis_matrices(self.d, self.n_qudits)?;
        let dim = self.system_dim();
        let mut acc = CMatrix::zeros(dim, dim);
        for (m, em) in basis.iter().enumerate() {
            for (n, en) in basis.iter().enumerate() {
                let c = self.entries[(m, n)];
                if c != ZERO {
                    acc += en.adjoint() * em * c;
                }
            }
        }
        Ok(acc)
    }

    pub fn is_trace_preserving(&self, tol: f64) -> Result<bool> {
        let op = self.trace_operator()?;
        Ok(linalg::max_abs_diff(&op, &linalg::identity(op.nrows())) <= tol)
    }

    pub fn frobenius_distance(&self, other: &ChiMatrix) -> f64 {
        linalg::frobenius(&(&self.entries - &other.entries))
    }

    /// Clips negative eigenvalues of the Hermitian part to zero.
    pub fn project_psd(&self) -> ChiMatrix {
        let eig = linalg::hermitian_eigen(&self.entries);
        let clipped = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0), 0.0));
        let v = &eig.eigenvectors;
        let entries = v * CMatrix::from_diagonal(&clipped) * v.adjoint();
        ChiMatrix {
            d: self.d,
            n_qudits: self.n_qudits,
            entries,
        }
    }
}

fn basis_size(d: u32, n_qudits: usize) -> usize {
    linalg::ipow((d * d) as usize, n_qudits)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiReport {
    /// `max |chi - chi^dagger|`
    pub hermiticity_residual: f64,
    pub min_eigenvalue: f64,
    pub trace: f64,
}

impl ChiReport {
    pub fn is_valid(&self, tol: f64) -> bool {
        self.hermiticity_residual <= tol && self.min_eigenvalue >= -tol && self.trace <= 1.0 + tol
    }
}

pub fn validate_chi(chi: &ChiMatrix) -> ChiReport {
    let e = chi.entries();
    ChiReport {
        hermiticity_residual: linalg::max_abs_diff(e, &e.adjoint()),
        min_eigenvalue: linalg::min_eigenvalue(e),
        trace: chi.trace(),
    }
}

#[derive(Debug, Clone)]
pub struct KrausSet {
    d: u32,
    n_qudits: usize,
    operators: Vec<CMatrix>,
}

impl KrausSet {
    pub fn new(d: u32, n_qudits: usize, operators: Vec<CMatrix>) -> Result<Self> {
        if !linalg::is_prime(d) {
            return Err(Error::NotPrime(d));
        }
        if operators.is_empty() {
            return Err(Error::InvalidChi("empty Kraus set".into()));
        }
        let dim = linalg::ipow(d as usize, n_qudits);
        for k in &operators {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: k.nrows().max(k.ncols()),
                });
            }
        }
        Ok(Self { d, n_qudits, operators })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n_qudits(&self) -> usize {
        self.n_qudits
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// `sum_i K_i^dagger K_i`
    pub fn completeness(&self) -> CMatrix {
        let dim = linalg::ipow(self.d as usize, self.n_qudits);
        self.operators
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, k| acc + k.adjoint() * k)
    }

    /// Largest eigenvalue of `sum K^dagger K`; at most 1 for a valid set.
    pub fn max_completeness_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigen(&self.completeness())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        self.operators
            .iter()
            .fold(CMatrix::zeros(rho.nrows(), rho.ncols()), |acc, k| {
                acc + k * rho * k.adjoint()
            })
    }
}

pub fn kraus_to_chi(kraus: &KrausSet) -> Result<ChiMatrix> {
    let basis = pauli::basis_matrices(kraus.d, kraus.n_qudits)?;
    let dim = linalg::ipow(kraus.d as usize, kraus.n_qudits) as f64;
    let side = basis.len();
    let mut entries = CMatrix::zeros(side, side);
    for k in &kraus.operators {
        let coeffs = CVector::from_iterator(
            side,
            basis.iter().map(|e| linalg::trace_of_product(&e.adjoint(), k) / dim),
        );
        entries += &coeffs * coeffs.adjoint();
    }
    ChiMatrix::new(kraus.d, kraus.n_qudits, entries)
}

fn check_rho(chi: &ChiMatrix, rho: &CMatrix, ancilla_dim: usize) -> Result<usize> {
    let dim = chi.system_dim() * ancilla_dim;
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: rho.nrows().max(rho.ncols()),
        });
    }
    Ok(dim)
}

/// `E(rho)` for a state of the system alone.
pub fn apply_channel(chi: &ChiMatrix, rho: &CMatrix) -> Result<CMatrix> {
    apply_channel_on_system(chi, rho, 1)
}

/// `(E ⊗ id)(rho)` where `rho` lives on system ⊗ ancilla (system first).
pub fn apply_channel_on_system(chi: &ChiMatrix, rho: &CMatrix, ancilla_dim: usize) -> Result<CMatrix> {
    let dim = check_rho(chi, rho, ancilla_dim)?;
    let ops = lifted_basis(chi, ancilla_dim)?;
    // sum_n (sum_m chi_mn A_m rho) A_n^dagger
    let left: Vec<CMatrix> = ops.iter().map(|a| a * rho).collect();
    let mut out = CMatrix::zeros(dim, dim);
    for (n, an) in ops.iter().enumerate() {
        let mut acc = CMatrix::zeros(dim, dim);
        for (m, lm) in left.iter().enumerate() {
            let c = chi.entries[(m, n)];
            if c != ZERO {
                acc += lm * c;
            }
        }
        out += acc * an.adjoint();
    }
    Ok(out)
}

/// `(E ⊗ id)(|psi><psi|)` computed as `V chi V^dagger` with columns
/// `v_m = (E_m ⊗ I)|psi>`.
pub fn apply_channel_to_pure(chi: &ChiMatrix, psi: &CVector, ancilla_dim: usize) -> Result<CMatrix> {
    let dim = chi.system_dim() * ancilla_dim;
    if psi.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: psi.len(),
        });
    }
    let v = error_images(chi.d, chi.n_qudits, psi, ancilla_dim)?;
    Ok(&v * chi.entries() * v.adjoint())
}

/// Matrix whose column `m` is `(E_m ⊗ I_ancilla)|psi>`.
pub fn error_images(d: u32, n_qudits: usize, psi: &CVector, ancilla_dim: usize) -> Result<CMatrix> {
    let side = basis_size(d, n_qudits);
    let anc_qudits = qudit_count(d, ancilla_dim)?;
    let total = n_qudits + anc_qudits;
    let positions: Vec<usize> = (0..n_qudits).collect();
    let mut v = CMatrix::zeros(psi.len(), side);
    for m in 0..side {
        let e = MultiPauli::from_basis_index(d, n_qudits, m)?.embed(&positions, total)?;
        v.set_column(m, &e.apply(psi));
    }
    Ok(v)
}

fn qudit_count(d: u32, dim: usize) -> Result<usize> {
    let mut n = 0;
    let mut acc = 1usize;
    while acc < dim {
        acc *= d as usize;
        n += 1;
    }
    if acc != dim {
        return Err(Error::DimensionMismatch {
            expected: acc,
            found: dim,
        });
    }
    Ok(n)
}

fn lifted_basis(chi: &ChiMatrix, ancilla_dim: usize) -> Result<Vec<CMatrix>> {
    let id = linalg::identity(ancilla_dim);
    Ok(pauli::basis_matrices(chi.d, chi.n_qudits)?
        .into_iter()
        .map(|e| if ancilla_dim == 1 { e } else { linalg::kron(&e, &id) })
        .collect())
}

/// chi of the product channel `E_1 ⊗ ... ⊗ E_r`.
pub fn tensor_chi(chis: &[ChiMatrix]) -> Result<ChiMatrix> {
    let first = chis.first().ok_or(Error::EmptyTensor)?;
    let mut entries = first.entries.clone();
    let mut n_qudits = first.n_qudits;
    for c in &chis[1..] {
        if c.d != first.d {
            return Err(Error::DimensionMismatch {
                expected: first.d as usize,
                found: c.d as usize,
            });
        }
        entries = linalg::kron(&entries, &c.entries);
        n_qudits += c.n_qudits;
    }
    ChiMatrix::new(first.d, n_qudits, entries)
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im)
}

pub fn ginibre(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// `M^(-1/2)` for Hermitian positive-definite `M`.
fn inverse_sqrt(m: &CMatrix) -> CMatrix {
    let eig = linalg::hermitian_eigen(m);
    let d = eig.eigenvalues.map(|l| Complex64::new(1.0 / l.sqrt(), 0.0));
    &eig.eigenvectors * CMatrix::from_diagonal(&d) * eig.eigenvectors.adjoint()
}

/// Random Kraus set from Ginibre matrices; deterministic for a given seed.
///
/// Trace-preserving sets are normalized by `(sum G^dagger G)^(-1/2)`, so rank
/// 1 yields a random unitary. Otherwise the set is scaled so that the largest
/// eigenvalue of `sum K^dagger K` is drawn from `[0.5, 1)`.
pub fn random_kraus(d: u32, n_qudits: usize, rank: usize, trace_preserving: bool, seed: u64) -> Result<KrausSet> {
    if rank == 0 {
        return Err(Error::InvalidChi("rank must be at least 1".into()));
    }
    let dim = linalg::ipow(d as usize, n_qudits);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gs: Vec<CMatrix> = (0..rank).map(|_| ginibre(&mut rng, dim, dim)).collect();
    let m = gs.iter().fold(CMatrix::zeros(dim, dim), |acc, g| acc + g.adjoint() * g);
    let ops = if trace_preserving {
        let s = inverse_sqrt(&m);
        gs.into_iter().map(|g| g * &s).collect()
    } else {
        let lmax = linalg::hermitian_eigen(&m)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let target: f64 = rng.random_range(0.5..1.0);
        let scale = Complex64::new((target / lmax).sqrt(), 0.0);
        gs.into_iter().map(|g| g * scale).collect()
    };
    KrausSet::new(d, n_qudits, ops)
}

pub fn random_cp_map(d: u32, n_qudits: usize, rank: usize, trace_preserving: bool, seed: u64) -> Result<ChiMatrix> {
    kraus_to_chi(&random_kraus(d, n_qudits, rank, trace_preserving, seed)?)
}

/// Random full-rank density matrix `G G^dagger / Tr(G G^dagger)`.
pub fn random_density(dim: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(&mut rng, dim, dim);
    let rho = &g * g.adjoint();
    let t = linalg::trace(&rho);
    rho / t
}

/// Single-qudit channel applying error-basis element `index` with probability
/// `p` and the identity otherwise.
pub fn pauli_error_channel(d: u32, index: usize, p: f64) -> Result<ChiMatrix> {
    let side = basis_size(d, 1);
    if index >= side {
        return Err(Error::IndexOutOfRange { index, size: side });
    }
    let mut entries = CMatrix::zeros(side, side);
    entries[(0, 0)] += Complex64::new(1.0 - p, 0.0);
    entries[(index, index)] += Complex64::new(p, 0.0);
    ChiMatrix::new(d, 1, entries)
}

/// Depolarizing channel `rho -> (1-p) rho + p I/d`: chi is diagonal with
/// `1 - p + p/d^2` on the identity and `p/d^2` elsewhere.
pub fn depolarizing(d: u32, p: f64) -> Result<ChiMatrix> {
    let side = basis_size(d, 1);
    let share = p / side as f64;
    let mut entries = CMatrix::zeros(side, side);
    for m in 0..side {
        entries[(m, m)] = Complex64::new(share, 0.0);
    }
    entries[(0, 0)] += Complex64::new(1.0 - p, 0.0);
    ChiMatrix::new(d, 1, entries)
}
