//! Two-qudit stabilizer probes and the structure of their normalizers.
//!
//! Qudit `A` (the principal system) is the first tensor factor and the
//! ancilla `B` the second. A population probe is fixed by two generators and
//! is the maximally entangled state; a coherence probe has the single
//! generator `E_i ⊗ E_i^(d-1)` and lives in a `d`-dimensional code space
//! spanned by `|l>|l>`, where `|l>` runs over an eigenbasis of `E_i`.

mod alphas;
mod hamming;
mod mub;
mod normalizer;

pub use alphas::{choose_alphas, validate_alphas, AlphaCheck, AlphaPolicy, ALPHA_TOLERANCE, DEFAULT_GEOMETRIC_RATIO};
pub use hamming::{check_hamming_bound, HammingBound};
pub use mub::{family_representatives, mub_check, mub_families, single_qudit_mub, unitary_eigenbasis, MUB_TOLERANCE};
pub use normalizer::{abelian_subgroups, cosets, logical_coordinates, normalizer, AbelianSubgroup, NormalizerCoset};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, omega_pow, CMatrix, CVector};
use crate::pauli::{MultiPauli, PauliElement};

/// Residual allowed in `S|phi> = omega^k |phi>`.
pub const EIGEN_TOLERANCE: f64 = 1e-10;

/// Logical frame of a coherence probe.
#[derive(Debug, Clone)]
pub struct CoherenceFrame {
    /// Error-basis index `i` of `E_i`.
    pub stabilizer_index: usize,
    /// `E_i`, acting as logical `Z` (up to a constant phase) through `E_i ⊗ I`.
    pub element: PauliElement,
    /// Shift `F` with `E_i F = omega F E_i` and `F^d = I`; `F ⊗ F` is logical `X`.
    pub shift: PauliElement,
    /// Eigenbasis `|l> = F^l |0>` of `E_i`.
    pub eigenbasis: Vec<CVector>,
    pub alphas: Vec<Complex64>,
}

impl CoherenceFrame {
    pub fn logical_z(&self) -> MultiPauli {
        let id = PauliElement::identity(self.element.d()).expect("prime d");
        MultiPauli::tensor(&[self.element, id]).expect("same d")
    }

    pub fn logical_x(&self) -> MultiPauli {
        MultiPauli::tensor(&[self.shift, self.shift]).expect("same d")
    }

    /// Code-space basis `|l>|l>` as columns of a `d^2 x d` matrix.
    pub fn code_basis(&self) -> CMatrix {
        let d = self.eigenbasis.len();
        let mut v = CMatrix::zeros(d * d, d);
        for (l, u) in self.eigenbasis.iter().enumerate() {
            v.set_column(l, &linalg::kron_vec(u, u));
        }
        v
    }
}

#[derive(Debug, Clone)]
pub struct StabilizerCode {
    d: u32,
    generators: Vec<MultiPauli>,
    eigenvalue_labels: Vec<u32>,
    state: CVector,
    frame: Option<CoherenceFrame>,
}

impl StabilizerCode {
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn generators(&self) -> &[MultiPauli] {
        &self.generators
    }

    /// `k` per generator, the probe having eigenvalue `omega^k`.
    pub fn eigenvalue_labels(&self) -> &[u32] {
        &self.eigenvalue_labels
    }

    pub fn state(&self) -> &CVector {
        &self.state
    }

    pub fn frame(&self) -> Option<&CoherenceFrame> {
        self.frame.as_ref()
    }

    /// Maximally entangled probe without a coherence frame.
    pub fn is_population(&self) -> bool {
        self.frame.is_none()
    }

    /// The sole generator of a coherence probe.
    pub fn generator(&self) -> &MultiPauli {
        &self.generators[0]
    }

    /// Largest `|S|phi> - omega^k |phi>|` over the generators.
    pub fn eigen_residual(&self) -> f64 {
        self.generators
            .iter()
            .zip(&self.eigenvalue_labels)
            .map(|(s, &k)| (s.apply(&self.state) - &self.state * omega_pow(self.d, k as i64)).norm())
            .fold(0.0, f64::max)
    }

    fn checked(self) -> Result<Self> {
        let r = self.eigen_residual();
        if r > EIGEN_TOLERANCE {
            return Err(Error::InvalidProbe(format!("stabilizer eigen-equation residual {r:e}")));
        }
        Ok(self)
    }
}

/// Maximally entangled probe `(1/sqrt d) sum_k |k>|k>` fixed by `X ⊗ X` and
/// `Z ⊗ Z^(d-1)`.
pub fn population_probe(d: u32) -> Result<StabilizerCode> {
    population_probe_pairs(d, 1)
}

/// Maximally entangled probe on `r` pairs, register order
/// `[A_1..A_r, B_1..B_r]`; generators `X_s ⊗ X_(r+s)` and
/// `Z_s ⊗ Z_(r+s)^(d-1)` listed pair by pair.
pub fn population_probe_pairs(d: u32, r: usize) -> Result<StabilizerCode> {
    if r == 0 {
        return Err(Error::EmptyTensor);
    }
    let x = PauliElement::new(d, 0, 1, 0)?;
    let z = PauliElement::new(d, 0, 0, 1)?;
    let xx = MultiPauli::tensor(&[x, x])?;
    let zz = MultiPauli::tensor(&[z, z.pow(d - 1)])?;
    let mut generators = Vec::with_capacity(2 * r);
    for s in 0..r {
        generators.push(xx.embed(&[s, r + s], 2 * r)?);
        generators.push(zz.embed(&[s, r + s], 2 * r)?);
    }
    let n = linalg::ipow(d as usize, r);
    let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let state = CVector::from_fn(n * n, |idx, _| if idx / n == idx % n { amp } else { linalg::ZERO });
    StabilizerCode {
        d,
        eigenvalue_labels: vec![0; generators.len()],
        generators,
        state,
        frame: None,
    }
    .checked()
}

/// `F` with `E F = omega F E` and `F^d = I`, smallest basis index first.
fn shift_for(e: &PauliElement) -> Result<PauliElement> {
    let d = e.d();
    (1..(d * d) as usize)
        .map(|idx| PauliElement::from_index(d, idx))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .find(|f| e.commutation_phase(f).ok() == Some(1) && f.pow(d).phase() == 0)
        .ok_or_else(|| Error::InvalidProbe(format!("no shift operator for {e}")))
}

/// Eigenbasis `|l> = F^l |0>` of a non-identity `E`, with `E|l> = mu_0 omega^l |l>`
/// and `mu_0^d` the scalar `E^d`.
pub fn eigenbasis_of(e: &PauliElement) -> Result<(Vec<CVector>, PauliElement)> {
    if e.is_identity_mod_phase() {
        return Err(Error::InvalidProbe("identity has no distinguished eigenbasis".into()));
    }
    let d = e.d();
    let n = d as usize;
    let shift = shift_for(e)?;
    let s = e.pow(d).phase();
    let mu0 = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * s as f64 / (d * d) as f64);
    // projector onto the mu0 eigenspace: (1/d) sum_l (E / mu0)^l
    let em = e.matrix() / mu0;
    let mut proj = CMatrix::zeros(n, n);
    let mut power = linalg::identity(n);
    for _ in 0..n {
        proj += &power;
        power = &em * power;
    }
    proj /= Complex64::new(d as f64, 0.0);
    let col = (0..n)
        .max_by(|&a, &b| proj.column(a).norm().total_cmp(&proj.column(b).norm()).then(b.cmp(&a)))
        .expect("d >= 2");
    let v0 = linalg::normalize(&proj.column(col).into_owned()).expect("rank-one projector");
    // fix the global phase: largest component real positive
    let (imax, _) = v0
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()).then(b.0.cmp(&a.0)))
        .expect("nonempty");
    let v0 = &v0 * (v0[imax].conj() / v0[imax].norm());
    let fm = shift.matrix();
    let mut basis = Vec::with_capacity(n);
    let mut v = v0;
    for _ in 0..n {
        let next = &fm * &v;
        basis.push(v);
        v = next;
    }
    Ok((basis, shift))
}

/// Non-maximally entangled probe `sum_l alpha_l |l_i>|l_i>` for the single
/// generator `E_i ⊗ E_i^(d-1)`, rejected unless `alphas` satisfies the
/// coset conditions for every eligible coset (see [`validate_alphas`]).
pub fn coherence_probe(d: u32, i: usize, alphas: &[Complex64]) -> Result<StabilizerCode> {
    let code = coherence_probe_unchecked(d, i, alphas)?;
    let check = validate_against_all_cosets(&code, &code.frame.as_ref().expect("coherence").alphas)?;
    if !check.valid {
        return Err(Error::InvalidProbe(format!(
            "coefficients violate the coset conditions (margin {:e} <= {:e})",
            check.margin, ALPHA_TOLERANCE
        )));
    }
    Ok(code)
}

/// As [`coherence_probe`] without the coset conditions; `alphas` is still
/// normalized and the eigen-equation still checked.
pub fn coherence_probe_unchecked(d: u32, i: usize, alphas: &[Complex64]) -> Result<StabilizerCode> {
    let element = PauliElement::from_index(d, i)?;
    if i == 0 {
        return Err(Error::InvalidProbe("stabilizer index must not be the identity".into()));
    }
    if alphas.len() != d as usize {
        return Err(Error::DimensionMismatch {
            expected: d as usize,
            found: alphas.len(),
        });
    }
    let raw = CVector::from_column_slice(alphas);
    let alphas_vec = linalg::normalize(&raw).ok_or(Error::ZeroNorm)?;
    let (eigenbasis, shift) = eigenbasis_of(&element)?;
    let n = d as usize;
    let mut state = CVector::zeros(n * n);
    for (l, u) in eigenbasis.iter().enumerate() {
        state += linalg::kron_vec(u, u) * alphas_vec[l];
    }
    let generator = MultiPauli::tensor(&[element, element.pow(d - 1)])?;
    // E_i^d = omega^s I, so S acts on |l>|l> as mu_l^d = omega^s
    let label = element.pow(d).phase();
    StabilizerCode {
        d,
        generators: vec![generator],
        eigenvalue_labels: vec![label],
        state,
        frame: Some(CoherenceFrame {
            stabilizer_index: i,
            element,
            shift,
            eigenbasis,
            alphas: alphas_vec.iter().copied().collect(),
        }),
    }
    .checked()
}

/// Worst coset-condition margin of `alphas` over every coset of every
/// eligible Abelian subgroup of the probe's normalizer.
pub fn validate_against_all_cosets(code: &StabilizerCode, alphas: &[Complex64]) -> Result<AlphaCheck> {
    let mut worst: Option<AlphaCheck> = None;
    for sub in abelian_subgroups(code)?.iter().filter(|s| s.eligible) {
        for coset in cosets(code, sub)? {
            let c = validate_alphas(code.d(), alphas, &coset)?;
            if worst.as_ref().is_none_or(|w| c.margin < w.margin) {
                worst = Some(c);
            }
        }
    }
    worst.ok_or_else(|| Error::InvalidProbe("no eligible cosets".into()))
}

/// Projector `(1/d) sum_l omega^(-l k) S^l` onto the `omega^k` eigenspace of a
/// phase-free generator (`S^d = I`).
pub fn eigenprojector(s: &MultiPauli, k: u32) -> Result<CMatrix> {
    let ph = s.order_phase();
    if ph != 0 {
        return Err(Error::InvalidGenerator(ph));
    }
    Ok(fourier_projector(s, Complex64::new(1.0, 0.0), k))
}

/// `(1/d) sum_l (omega^-k / mu0)^l M^l`, the projector of `M` onto eigenvalue
/// `mu0 omega^k` when `M^d = mu0^d I`.
fn fourier_projector(m: &MultiPauli, mu0: Complex64, k: u32) -> CMatrix {
    let d = m.d();
    let dim = m.dim();
    let mut acc = CMatrix::zeros(dim, dim);
    let scale = omega_pow(d, -(k as i64)) / mu0;
    let mut coeff = Complex64::new(1.0, 0.0);
    for l in 0..d {
        acc += m.pow(l).matrix() * coeff;
        coeff *= scale;
    }
    acc / Complex64::new(d as f64, 0.0)
}

/// Spectral decomposition of a Weyl product `M`: eigenvalues
/// `mu0 omega^j` (`mu0 = exp(2 pi i s / d^2)` for `M^d = omega^s I`) with their
/// projectors, `j = 0..d`.
pub fn spectral_projectors(m: &MultiPauli) -> Vec<(Complex64, CMatrix)> {
    let d = m.d();
    let s = m.order_phase();
    let mu0 = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * s as f64 / (d * d) as f64);
    (0..d)
        .map(|j| (mu0 * omega_pow(d, j as i64), fourier_projector(m, mu0, j)))
        .collect()
}
