//! Generalized Pauli (Weyl) group over `Z_d` for prime `d`.
//!
//! Elements are stored in normal order `omega^a X^q Z^p` with every exponent
//! reduced into `[0, d)`. With `X|k> = |k+1>` and `Z|k> = omega^k |k>` the
//! reordering rule is `Z X = omega X Z`, so
//!
//! ```text
//! (a1, q1, p1) * (a2, q2, p2) = (a1 + a2 + p1 q2, q1 + q2, p1 + p2)   (mod d)
//! ```
//!
//! Phases stay exact integers; a floating-point root of unity only appears
//! when a dense matrix is requested.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, omega_pow, CMatrix, CVector, ZERO};

fn check_prime(d: u32) -> Result<()> {
    if linalg::is_prime(d) {
        Ok(())
    } else {
        Err(Error::NotPrime(d))
    }
}

fn reduce(x: i64, d: u32) -> u32 {
    x.rem_euclid(d as i64) as u32
}

/// `omega^phase X^x_pow Z^z_pow` acting on one qudit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliElement {
    d: u32,
    phase: u32,
    x_pow: u32,
    z_pow: u32,
}

/// Builds the canonical element `omega^a X^q Z^p`.
pub fn weyl_element(d: u32, a: i64, q: i64, p: i64) -> Result<PauliElement> {
    PauliElement::new(d, a, q, p)
}

impl PauliElement {
    pub fn new(d: u32, a: i64, q: i64, p: i64) -> Result<Self> {
        check_prime(d)?;
        Ok(Self {
            d,
            phase: reduce(a, d),
            x_pow: reduce(q, d),
            z_pow: reduce(p, d),
        })
    }

    pub fn identity(d: u32) -> Result<Self> {
        Self::new(d, 0, 0, 0)
    }

    /// Error-basis element with index `q * d + p` (phase 0).
    pub fn from_index(d: u32, index: usize) -> Result<Self> {
        let size = (d * d) as usize;
        if index >= size {
            return Err(Error::IndexOutOfRange { index, size });
        }
        Self::new(d, 0, (index / d as usize) as i64, (index % d as usize) as i64)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn x_pow(&self) -> u32 {
        self.x_pow
    }

    pub fn z_pow(&self) -> u32 {
        self.z_pow
    }

    /// Index of the phase-free part in the error basis.
    pub fn basis_index(&self) -> usize {
        (self.x_pow * self.d + self.z_pow) as usize
    }

    pub fn is_identity_mod_phase(&self) -> bool {
        self.x_pow == 0 && self.z_pow == 0
    }

    pub fn without_phase(&self) -> Self {
        Self { phase: 0, ..*self }
    }

    pub fn with_phase(&self, phase: i64) -> Self {
        Self {
            phase: reduce(phase, self.d),
            ..*self
        }
    }

    fn same_d(&self, other: &Self) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.d as usize,
                found: other.d as usize,
            })
        }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_d(other)?;
        Ok(self.compose_unchecked(other))
    }

    fn compose_unchecked(&self, other: &Self) -> Self {
        let d = self.d as u64;
        let phase = (self.phase as u64 + other.phase as u64 + self.z_pow as u64 * other.x_pow as u64) % d;
        Self {
            d: self.d,
            phase: phase as u32,
            x_pow: ((self.x_pow + other.x_pow) as u64 % d) as u32,
            z_pow: ((self.z_pow + other.z_pow) as u64 % d) as u32,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self {
            d: self.d,
            phase: 0,
            x_pow: 0,
            z_pow: 0,
        };
        for _ in 0..n {
            acc = acc.compose_unchecked(self);
        }
        acc
    }

    pub fn inverse(&self) -> Self {
        self.pow(self.d - 1)
    }

    /// `k` such that `self * other = omega^k other * self`.
    pub fn commutation_phase(&self, other: &Self) -> Result<u32> {
        self.same_d(other)?;
        Ok(self.commutation_phase_unchecked(other))
    }

    fn commutation_phase_unchecked(&self, other: &Self) -> u32 {
        let k = self.z_pow as i64 * other.x_pow as i64 - self.x_pow as i64 * other.z_pow as i64;
        reduce(k, self.d)
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.commutation_phase(other)? == 0)
    }

    /// Image of computational basis state `|k>`: `(k + q, omega-exponent a + p k)`.
    pub fn act_on_basis(&self, k: u32) -> (u32, u32) {
        let target = (k + self.x_pow) % self.d;
        let phase = ((self.phase as u64 + self.z_pow as u64 * k as u64) % self.d as u64) as u32;
        (target, phase)
    }

    pub fn matrix(&self) -> CMatrix {
        let n = self.d as usize;
        let mut m = CMatrix::from_element(n, n, ZERO);
        for k in 0..self.d {
            let (row, ph) = self.act_on_basis(k);
            m[(row as usize, k as usize)] = omega_pow(self.d, ph as i64);
        }
        m
    }
}

/// Dense realization `omega^a X^q Z^p` with `omega = exp(2 pi i / d)`.
pub fn matrix_of(e: &PauliElement) -> CMatrix {
    e.matrix()
}

pub fn compose(e1: &PauliElement, e2: &PauliElement) -> Result<PauliElement> {
    e1.compose(e2)
}

pub fn commutation_phase(e1: &PauliElement, e2: &PauliElement) -> Result<u32> {
    e1.commutation_phase(e2)
}

impl fmt::Display for PauliElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase != 0 {
            write!(f, "w^{}", self.phase)?;
        }
        match (self.x_pow, self.z_pow) {
            (0, 0) => write!(f, "I"),
            (q, 0) => write!(f, "X{}", power_suffix(q)),
            (0, p) => write!(f, "Z{}", power_suffix(p)),
            (q, p) => write!(f, "X{}Z{}", power_suffix(q), power_suffix(p)),
        }
    }
}

fn power_suffix(n: u32) -> String {
    if n == 1 {
        String::new()
    } else {
        format!("^{n}")
    }
}

/// The `d^2` phase-free elements `X^q Z^p`, ordered by `q * d + p`.
pub fn error_basis(d: u32) -> Result<Vec<PauliElement>> {
    check_prime(d)?;
    (0..(d * d) as usize).map(|i| PauliElement::from_index(d, i)).collect()
}

/// Indices `j` of the error basis with `E_i E_j = omega^k E_j E_i`.
pub fn w_subset(d: u32, i: usize, k: u32) -> Result<Vec<usize>> {
    let ei = PauliElement::from_index(d, i)?;
    let k = k % d;
    Ok(error_basis(d)?
        .iter()
        .enumerate()
        .filter(|(_, ej)| ei.commutation_phase_unchecked(ej) == k)
        .map(|(j, _)| j)
        .collect())
}

/// Tensor product of single-qudit Weyl operators, `omega^phase (F_1 ⊗ ... ⊗ F_r)`.
///
/// Factor phases are folded into `phase`, so factors are always phase-free and
/// two products that differ only by a global phase have equal `key()`s.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPauli {
    d: u32,
    phase: u32,
    factors: Vec<PauliElement>,
}

pub fn tensor(elements: &[PauliElement]) -> Result<MultiPauli> {
    MultiPauli::tensor(elements)
}

impl MultiPauli {
    pub fn tensor(elements: &[PauliElement]) -> Result<Self> {
        let first = elements.first().ok_or(Error::EmptyTensor)?;
        let d = first.d;
        let mut phase = 0u64;
        let mut factors = Vec::with_capacity(elements.len());
        for e in elements {
            first.same_d(e)?;
            phase += e.phase as u64;
            factors.push(e.without_phase());
        }
        Ok(Self {
            d,
            phase: (phase % d as u64) as u32,
            factors,
        })
    }

    pub fn identity(d: u32, n_qudits: usize) -> Result<Self> {
        let id = PauliElement::identity(d)?;
        Self::tensor(&vec![id; n_qudits.max(1)])
    }

    /// Multi-qudit error-basis element with row-major index over per-qudit
    /// indices.
    pub fn from_basis_index(d: u32, n_qudits: usize, index: usize) -> Result<Self> {
        let dd = (d * d) as usize;
        let size = linalg::ipow(dd, n_qudits);
        if index >= size {
            return Err(Error::IndexOutOfRange { index, size });
        }
        let mut digits = vec![0usize; n_qudits];
        let mut rest = index;
        for s in (0..n_qudits).rev() {
            digits[s] = rest % dd;
            rest /= dd;
        }
        let factors = digits
            .into_iter()
            .map(|m| PauliElement::from_index(d, m))
            .collect::<Result<Vec<_>>>()?;
        Self::tensor(&factors)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn factors(&self) -> &[PauliElement] {
        &self.factors
    }

    pub fn factor(&self, s: usize) -> &PauliElement {
        &self.factors[s]
    }

    pub fn num_qudits(&self) -> usize {
        self.factors.len()
    }

    pub fn dim(&self) -> usize {
        linalg::ipow(self.d as usize, self.factors.len())
    }

    /// Phase-free identity: per-factor error-basis indices.
    pub fn key(&self) -> Vec<usize> {
        self.factors.iter().map(PauliElement::basis_index).collect()
    }

    pub fn basis_index(&self) -> usize {
        let dd = (self.d * self.d) as usize;
        self.factors.iter().fold(0, |acc, f| acc * dd + f.basis_index())
    }

    pub fn without_phase(&self) -> Self {
        Self {
            phase: 0,
            ..self.clone()
        }
    }

    pub fn with_phase(&self, phase: i64) -> Self {
        Self {
            phase: reduce(phase, self.d),
            ..self.clone()
        }
    }

    pub fn is_identity_mod_phase(&self) -> bool {
        self.factors.iter().all(PauliElement::is_identity_mod_phase)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                expected: self.d as usize,
                found: other.d as usize,
            });
        }
        if self.factors.len() != other.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                found: other.factors.len(),
            });
        }
        Ok(())
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.compose_unchecked(other))
    }

    fn compose_unchecked(&self, other: &Self) -> Self {
        let d = self.d as u64;
        let mut phase = self.phase as u64 + other.phase as u64;
        let factors = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| {
                let c = a.compose_unchecked(b);
                phase += c.phase as u64;
                c.without_phase()
            })
            .collect();
        Self {
            d: self.d,
            phase: (phase % d) as u32,
            factors,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self {
            d: self.d,
            phase: 0,
            factors: self.factors.iter().map(|f| f.pow(0)).collect(),
        };
        for _ in 0..n {
            acc = acc.compose_unchecked(self);
        }
        acc
    }

    pub fn inverse(&self) -> Self {
        self.pow(self.d - 1)
    }

    /// Exponent `s` with `self^d = omega^s I`.
    pub fn order_phase(&self) -> u32 {
        self.pow(self.d).phase
    }

    /// `k` such that `self * other = omega^k other * self`: the sum of the
    /// per-factor commutation phases.
    pub fn commutation_phase(&self, other: &Self) -> Result<u32> {
        self.same_shape(other)?;
        let k: u64 = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| a.commutation_phase_unchecked(b) as u64)
            .sum();
        Ok((k % self.d as u64) as u32)
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.commutation_phase(other)? == 0)
    }

    /// Image of computational basis state `index` (first factor most
    /// significant): `(target index, omega-exponent)`.
    pub fn act_on_basis(&self, index: usize) -> (usize, u32) {
        let d = self.d as usize;
        let r = self.factors.len();
        let mut digits = vec![0u32; r];
        let mut rest = index;
        for s in (0..r).rev() {
            digits[s] = (rest % d) as u32;
            rest /= d;
        }
        let mut phase = self.phase as u64;
        let mut target = 0usize;
        for (f, &k) in self.factors.iter().zip(&digits) {
            let (t, ph) = f.act_on_basis(k);
            phase += ph as u64;
            target = target * d + t as usize;
        }
        (target, (phase % self.d as u64) as u32)
    }

    pub fn matrix(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::from_element(n, n, ZERO);
        for col in 0..n {
            let (row, ph) = self.act_on_basis(col);
            m[(row, col)] = omega_pow(self.d, ph as i64);
        }
        m
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        let mut out = CVector::zeros(v.len());
        for (col, amp) in v.iter().enumerate() {
            if *amp == ZERO {
                continue;
            }
            let (row, ph) = self.act_on_basis(col);
            out[row] += omega_pow(self.d, ph as i64) * amp;
        }
        out
    }

    /// Lifts `self` to a register of `total` qudits, acting on the listed
    /// positions and as identity elsewhere.
    pub fn embed(&self, positions: &[usize], total: usize) -> Result<Self> {
        if positions.len() != self.factors.len() || positions.iter().any(|&p| p >= total) {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                found: positions.len(),
            });
        }
        let id = PauliElement::identity(self.d)?;
        let mut factors = vec![id; total];
        for (f, &p) in self.factors.iter().zip(positions) {
            factors[p] = *f;
        }
        Ok(Self {
            d: self.d,
            phase: self.phase,
            factors,
        })
    }
}

impl fmt::Display for MultiPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase != 0 {
            write!(f, "w^{} ", self.phase)?;
        }
        for (s, factor) in self.factors.iter().enumerate() {
            if s > 0 {
                write!(f, "⊗")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

/// Dense matrices of the `d^(2 n)` multi-qudit error basis.
pub fn basis_matrices(d: u32, n_qudits: usize) -> Result<Vec<CMatrix>> {
    let size = linalg::ipow((d * d) as usize, n_qudits);
    (0..size)
        .map(|m| MultiPauli::from_basis_index(d, n_qudits, m).map(|e| e.matrix()))
        .collect()
}

/// Unit root as used by `matrix()`, exposed for callers that work with raw
/// exponents.
pub fn omega(d: u32) -> Complex64 {
    omega_pow(d, 1)
}
