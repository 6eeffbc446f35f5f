//! Coefficient conditions for coherence probes and the default choice of
//! coefficients.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{coherence_probe_unchecked, validate_against_all_cosets, NormalizerCoset};
use crate::error::{Error, Result};
use crate::linalg::omega_pow;

/// Smallest admissible `|sum_l omega^((a + b p) l) alpha_l^* alpha_(l + b q)|`.
pub const ALPHA_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_GEOMETRIC_RATIO: f64 = 0.8;
/// Seeded draws examined by the random policy.
const RANDOM_CANDIDATES: u64 = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaCheck {
    pub valid: bool,
    /// Smallest modulus over the checked `(a, b)` pairs.
    pub margin: f64,
    /// The `(a, b)` pair attaining the margin.
    pub worst: (u32, u32),
    pub checked: Vec<(u32, u32)>,
}

/// Checks `sum_l omega^((a + b p) l) alpha_l^* alpha_(l + b q) != 0` for all
/// `a, b` in `0..d`, where `(q, p)` are the coset's logical coordinates.
pub fn validate_alphas(d: u32, alphas: &[Complex64], coset: &NormalizerCoset) -> Result<AlphaCheck> {
    let n = d as usize;
    if alphas.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: alphas.len(),
        });
    }
    let (q, p) = coset.logical;
    let mut margin = f64::INFINITY;
    let mut worst = (0, 0);
    let mut checked = Vec::with_capacity(n * n);
    for b in 0..d {
        for a in 0..d {
            let shift = (b * q % d) as usize;
            let c = (a + b * p) as i64;
            let sum: Complex64 = (0..n)
                .map(|l| omega_pow(d, c * l as i64) * alphas[l].conj() * alphas[(l + shift) % n])
                .sum();
            if sum.norm() < margin {
                margin = sum.norm();
                worst = (a, b);
            }
            checked.push((a, b));
        }
    }
    Ok(AlphaCheck {
        valid: margin > ALPHA_TOLERANCE,
        margin,
        worst,
        checked,
    })
}

/// How coherence-probe coefficients are chosen per repetition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlphaPolicy {
    /// `alpha_l ∝ ratio^((l + j) mod d)` for repetition `j`, falling back to
    /// the random policy when the coset conditions fail.
    Geometric { ratio: f64 },
    /// Seeded complex Gaussian coefficients: the admissible draw with the
    /// largest margin out of a fixed batch.
    Random,
}

impl Default for AlphaPolicy {
    fn default() -> Self {
        AlphaPolicy::Geometric {
            ratio: DEFAULT_GEOMETRIC_RATIO,
        }
    }
}

fn random_alphas(d: u32, seed: u64, stream: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let raw: Vec<Complex64> = (0..d)
        .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    raw.into_iter().map(|z| z / norm).collect()
}

/// Normalized coefficients for the probe on `E_i` in repetition `repetition`,
/// with the margin they achieve over all eligible cosets.
pub fn choose_alphas(
    d: u32,
    i: usize,
    repetition: usize,
    policy: AlphaPolicy,
    seed: u64,
) -> Result<(Vec<Complex64>, f64)> {
    let margin_of = |alphas: &[Complex64]| -> Result<f64> {
        let code = coherence_probe_unchecked(d, i, alphas)?;
        Ok(validate_against_all_cosets(&code, alphas)?.margin)
    };
    if let AlphaPolicy::Geometric { ratio } = policy {
        if !(ratio > 0.0 && ratio.is_finite()) {
            return Err(Error::InvalidProbe(format!(
                "geometric ratio must be positive, got {ratio}"
            )));
        }
        let n = d as usize;
        let raw: Vec<f64> = (0..n).map(|l| ratio.powi(((l + repetition) % n) as i32)).collect();
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        let alphas: Vec<Complex64> = raw.iter().map(|x| Complex64::new(x / norm, 0.0)).collect();
        let m = margin_of(&alphas)?;
        if m > ALPHA_TOLERANCE {
            return Ok((alphas, m));
        }
    }
    // keep the best-conditioned of a fixed batch of seeded draws
    let base = ((i as u64) << 32) | repetition as u64;
    let mut best: Option<(Vec<Complex64>, f64)> = None;
    for attempt in 0..RANDOM_CANDIDATES {
        let alphas = random_alphas(d, seed, base.wrapping_mul(RANDOM_CANDIDATES).wrapping_add(attempt));
        let m = margin_of(&alphas)?;
        if m > ALPHA_TOLERANCE && best.as_ref().is_none_or(|(_, b)| m > *b) {
            best = Some((alphas, m));
        }
    }
    best.ok_or_else(|| {
        Error::InvalidProbe(format!(
            "no admissible coefficients found for index {i} among {RANDOM_CANDIDATES} draws"
        ))
    })
}
