//! Finite-shot sampling of exact outcome records.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::{ConfigKind, OutcomeRecord};
use crate::error::{Error, Result};

/// Multinomial draw over `probs` plus an implicit loss bucket carrying the
/// missing mass; returns the tallies of the listed cells only.
fn multinomial(rng: &mut ChaCha8Rng, shots: u64, probs: &[f64]) -> Vec<u64> {
    let clipped: Vec<f64> = probs.iter().map(|p| p.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let mut mass = total.max(1.0);
    let mut left = shots;
    clipped
        .iter()
        .map(|&p| {
            if left == 0 || p <= 0.0 {
                mass -= p;
                return 0;
            }
            let q = (p / mass).clamp(0.0, 1.0);
            let x = Binomial::new(left, q).expect("valid binomial").sample(rng);
            left -= x;
            mass -= p;
            x
        })
        .collect()
}

/// Shots given to the `b`-th of `parts` sub-ensembles.
pub(crate) fn share_size(shots: u64, parts: u64, b: u64) -> u64 {
    shots / parts + u64::from(b < shots % parts)
}

/// Replaces exact statistics by estimates from `shots` simulated runs.
///
/// Population records draw one multinomial over the syndrome cells.
/// Coherence records split the shots evenly between the measured
/// normalizers; each share draws joint (syndrome, eigenvalue) outcomes, the
/// syndrome tallies are pooled and each conditional expectation is the mean
/// eigenvalue of its own share. The generator is seeded from `seed` with the
/// configuration index as stream, so results do not depend on evaluation
/// order.
pub fn sample_outcomes(record: &OutcomeRecord, shots: u64, seed: u64) -> Result<OutcomeRecord> {
    if shots == 0 {
        return Err(Error::InvalidConfiguration("shots must be at least 1".into()));
    }
    if record.shots.is_some() {
        return Err(Error::RecordMismatch("record is already sampled".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(record.config.index as u64);
    let mut out = record.clone();
    out.shots = Some(shots);
    match record.config.kind {
        ConfigKind::Population => {
            let counts = multinomial(&mut rng, shots, &record.stabilizer_probs);
            out.stabilizer_probs = counts.iter().map(|&c| c as f64 / shots as f64).collect();
            out.counts = Some(counts);
        }
        ConfigKind::Coherence => {
            let d = record.stabilizer_probs.len();
            let parts = record.normalizer_spectra.len() as u64;
            let mut counts = vec![0u64; d];
            let mut tallies = Vec::with_capacity(parts as usize);
            let mut expectations = vec![vec![None; parts as usize]; d];
            for (b, spectrum) in record.normalizer_spectra.iter().enumerate() {
                let share = share_size(shots, parts, b as u64);
                let flat: Vec<f64> = spectrum.joint.iter().flatten().copied().collect();
                let drawn = multinomial(&mut rng, share, &flat);
                let per_k: Vec<Vec<u64>> = drawn.chunks(spectrum.eigenvalues.len()).map(<[u64]>::to_vec).collect();
                for (k, row) in per_k.iter().enumerate() {
                    let n: u64 = row.iter().sum();
                    counts[k] += n;
                    if n > 0 {
                        let sum: Complex64 = row
                            .iter()
                            .zip(&spectrum.eigenvalues)
                            .map(|(&c, mu)| mu * c as f64)
                            .sum();
                        expectations[k][b] = Some(sum / n as f64);
                    }
                }
                tallies.push(per_k);
            }
            out.stabilizer_probs = counts.iter().map(|&c| c as f64 / shots as f64).collect();
            out.normalizer_expectations = expectations;
            out.counts = Some(counts);
            out.normalizer_counts = Some(tallies);
        }
    }
    Ok(out)
}
