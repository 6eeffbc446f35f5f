//! Simulation of the two measurement procedures: one population
//! configuration (maximally entangled probe, joint syndrome of two
//! generators) and `(d + 1)(d - 1)` coherence configurations (non-maximally
//! entangled probe, syndrome of one generator together with the `d - 1`
//! non-trivial members of one normalizer coset).

mod sampling;

pub use sampling::sample_outcomes;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::channels::{apply_channel_to_pure, error_images, ChiMatrix};
use crate::codes::{
    abelian_subgroups, choose_alphas, coherence_probe, cosets, eigenprojector, family_representatives,
    spectral_projectors, AlphaPolicy, StabilizerCode,
};
use crate::error::{Error, Result};
use crate::linalg::{self, omega_pow, trace_of_product, CMatrix, CVector};
use crate::pauli::{MultiPauli, PauliElement};

/// Largest total register dimension simulated densely.
pub const DEFAULT_DIMENSION_CAP: usize = 4096;
/// Outcome probabilities below this leave the conditional expectations undefined.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConfigKind {
    Population,
    Coherence,
}

/// Choices that fix a coherence configuration.
#[derive(Debug, Clone)]
pub struct CoherenceSetting {
    pub stabilizer_index: usize,
    /// Position of the Abelian subgroup in the probe's subgroup order.
    pub subgroup: usize,
    pub a0: u32,
    /// `T^b S^(a0)` for `b = 1..d`.
    pub measured_normalizers: Vec<MultiPauli>,
    /// Repetition number among the configurations sharing `stabilizer_index`.
    pub repetition: usize,
}

#[derive(Debug, Clone)]
pub struct ExperimentalConfiguration {
    /// Position in enumeration order; also selects the sampling stream.
    pub index: usize,
    pub kind: ConfigKind,
    pub probe: StabilizerCode,
    pub coherence: Option<CoherenceSetting>,
}

impl ExperimentalConfiguration {
    pub fn population(index: usize, probe: StabilizerCode) -> Result<Self> {
        if !probe.is_population() {
            return Err(Error::InvalidConfiguration(
                "population probe needs two generators".into(),
            ));
        }
        Ok(Self {
            index,
            kind: ConfigKind::Population,
            probe,
            coherence: None,
        })
    }

    /// Coherence configuration measuring the non-trivial members of coset
    /// `a0` of the probe's `subgroup`-th Abelian subgroup.
    pub fn coherence(index: usize, probe: StabilizerCode, subgroup: usize, a0: u32, repetition: usize) -> Result<Self> {
        let frame = probe
            .frame()
            .ok_or_else(|| Error::InvalidConfiguration("coherence configuration needs a coherence probe".into()))?;
        let stabilizer_index = frame.stabilizer_index;
        let subs = abelian_subgroups(&probe)?;
        let sub = subs.get(subgroup).ok_or(Error::IndexOutOfRange {
            index: subgroup,
            size: subs.len(),
        })?;
        let coset = cosets(&probe, sub)?
            .into_iter()
            .nth(a0 as usize)
            .ok_or(Error::IndexOutOfRange {
                index: a0 as usize,
                size: probe.d() as usize,
            })?;
        Ok(Self {
            index,
            kind: ConfigKind::Coherence,
            coherence: Some(CoherenceSetting {
                stabilizer_index,
                subgroup,
                a0,
                measured_normalizers: coset.measured().to_vec(),
                repetition,
            }),
            probe,
        })
    }

    pub fn d(&self) -> u32 {
        self.probe.d()
    }

    /// Number of principal qudits probed (population configurations may
    /// cover several pairs).
    pub fn pairs(&self) -> usize {
        self.probe.generators()[0].num_qudits() / 2
    }
}

/// Joint statistics of one measured normalizer with the stabilizer syndrome.
#[derive(Debug, Clone)]
pub struct NormalizerSpectrum {
    /// Eigenvalues `mu0 omega^j`, `j = 0..d`.
    pub eigenvalues: Vec<Complex64>,
    /// `joint[k][j] = Tr(Q_j P_k E(rho))`.
    pub joint: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct OutcomeRecord {
    pub config: ExperimentalConfiguration,
    /// Population: `(d^2)^r` joint syndrome probabilities, row-major over the
    /// pairs, cell `k d + k'` per pair. Coherence: `d` syndrome probabilities.
    pub stabilizer_probs: Vec<f64>,
    /// Coherence only: `[k][b]` conditional expectation of the `b`-th
    /// measured normalizer given syndrome `k`; `None` when undefined.
    pub normalizer_expectations: Vec<Vec<Option<Complex64>>>,
    pub normalizer_spectra: Vec<NormalizerSpectrum>,
    pub shots: Option<u64>,
    /// Syndrome tallies (summed over sub-ensembles for coherence records).
    pub counts: Option<Vec<u64>>,
    /// Coherence only: `[b][k][j]` tallies of syndrome `k` and normalizer
    /// eigenvalue `j` on the `b`-th sub-ensemble.
    pub normalizer_counts: Option<Vec<Vec<Vec<u64>>>>,
}

impl OutcomeRecord {
    pub fn total_probability(&self) -> f64 {
        self.stabilizer_probs.iter().sum()
    }

    /// Linear statistic `Tr(M_b P_k E(rho))`. Exact records give the
    /// conditional expectation times the syndrome probability, which is zero
    /// to within the probability cutoff when the expectation is undefined;
    /// sampled records give the mean eigenvalue over the `b`-th share with
    /// unobserved outcomes counting as zero.
    pub fn normalizer_statistic(&self, k: usize, b: usize) -> Option<Complex64> {
        if let Some(tallies) = &self.normalizer_counts {
            let spectrum = self.normalizer_spectra.get(b)?;
            let share = sampling::share_size(self.shots?, tallies.len() as u64, b as u64);
            if share == 0 {
                return None;
            }
            let sum: Complex64 = tallies[b]
                .get(k)?
                .iter()
                .zip(&spectrum.eigenvalues)
                .map(|(&n, mu)| mu * n as f64)
                .sum();
            return Some(sum / share as f64);
        }
        let p = *self.stabilizer_probs.get(k)?;
        match self.normalizer_expectations.get(k)?.get(b)? {
            Some(e) => Some(e * p),
            None => Some(Complex64::new(0.0, 0.0)),
        }
    }
}

/// Maximally entangled probe over `r` pairs, register order `[A_1..A_r, B_1..B_r]`.
fn population_code(d: u32, r: usize) -> Result<StabilizerCode> {
    crate::codes::population_probe_pairs(d, r)
}

fn check_cap(d: u32, r: usize, cap: usize) -> Result<usize> {
    let dim = (0..2 * r).try_fold(1usize, |acc, _| acc.checked_mul(d as usize));
    match dim {
        Some(dim) if dim <= cap => Ok(dim),
        _ => Err(Error::SizeCap {
            dim: dim.unwrap_or(usize::MAX),
            cap,
        }),
    }
}

/// `(1/d) sum_l omega^(-l k) g^l v` without forming matrices.
fn project_vector(g: &MultiPauli, k: u32, v: &CVector) -> CVector {
    let d = g.d();
    let mut acc = v.clone();
    let mut term = v.clone();
    for l in 1..d {
        term = g.apply(&term);
        acc += &term * omega_pow(d, -((l * k) as i64));
    }
    acc / Complex64::new(d as f64, 0.0)
}

/// Population procedure on a single-qudit channel.
pub fn run_population(chi: &ChiMatrix) -> Result<OutcomeRecord> {
    if chi.n_qudits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: chi.n_qudits(),
        });
    }
    run_population_multiqudit(chi)
}

/// Population procedure on `r = chi.n_qudits()` principal qudits, each
/// entangled with its own ancilla.
pub fn run_population_multiqudit(chi: &ChiMatrix) -> Result<OutcomeRecord> {
    run_population_capped(chi, DEFAULT_DIMENSION_CAP)
}

pub fn run_population_capped(chi: &ChiMatrix, cap: usize) -> Result<OutcomeRecord> {
    let d = chi.d();
    let r = chi.n_qudits();
    check_cap(d, r, cap)?;
    let code = population_code(d, r)?;
    let v = error_images(d, r, code.state(), chi.system_dim())?;
    let probs = population_outcome_vectors(&code)?
        .iter()
        .map(|phi| {
            let u = v.adjoint() * phi;
            (u.adjoint() * chi.entries() * &u)[(0, 0)].re
        })
        .collect();
    Ok(OutcomeRecord {
        config: ExperimentalConfiguration::population(0, code)?,
        stabilizer_probs: probs,
        normalizer_expectations: Vec::new(),
        normalizer_spectra: Vec::new(),
        shots: None,
        counts: None,
        normalizer_counts: None,
    })
}

/// Joint eigenvector of a population probe's generators for every syndrome
/// cell, in cell order. Each joint eigenspace is one-dimensional, so the
/// vector is found by projecting a generic start vector.
pub fn population_outcome_vectors(code: &StabilizerCode) -> Result<Vec<CVector>> {
    let d = code.d();
    let gens = code.generators();
    let dim = code.state().len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let start = CVector::from_fn(dim, |_, _| {
        Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
    });
    (0..dim)
        .map(|cell| {
            // cell digits are the syndromes of the generators, first most significant
            let mut phi = start.clone();
            let mut rest = cell;
            let mut labels = vec![0u32; gens.len()];
            for slot in (0..gens.len()).rev() {
                labels[slot] = (rest % d as usize) as u32;
                rest /= d as usize;
            }
            for (g, &k) in gens.iter().zip(&labels) {
                phi = project_vector(g, k, &phi);
            }
            linalg::normalize(&phi).ok_or(Error::ZeroNorm)
        })
        .collect()
}

/// Syndrome cell of a basis error on the principal qudits of a population
/// probe.
pub fn population_cell(d: u32, r: usize, m: usize) -> Result<usize> {
    let code = population_code(d, r)?;
    let e = MultiPauli::from_basis_index(d, r, m)?.embed(&(0..r).collect::<Vec<_>>(), 2 * r)?;
    code.generators().iter().try_fold(
        0usize,
        |acc, g| Ok(acc * d as usize + g.commutation_phase(&e)? as usize),
    )
}

/// Diagonal of chi read off a population record: `chi_mm` is the probability
/// of the syndrome cell of `E_m`.
pub fn population_diagonal(record: &OutcomeRecord) -> Result<Vec<f64>> {
    if record.config.kind != ConfigKind::Population {
        return Err(Error::RecordMismatch("not a population record".into()));
    }
    let d = record.config.d();
    let r = record.config.pairs();
    (0..record.stabilizer_probs.len())
        .map(|m| Ok(record.stabilizer_probs[population_cell(d, r, m)?]))
        .collect()
}

/// Coherence procedure: syndrome probabilities `Tr(P_k E(rho))` and, per
/// syndrome, the expectations of the measured normalizers in the
/// post-measurement state, all by dense algebra.
pub fn run_coherence(chi: &ChiMatrix, config: &ExperimentalConfiguration) -> Result<OutcomeRecord> {
    let setting = config
        .coherence
        .as_ref()
        .ok_or_else(|| Error::InvalidConfiguration("population configuration passed to run_coherence".into()))?;
    let d = config.d();
    if chi.d() != d || chi.n_qudits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: d as usize,
            found: chi.system_dim(),
        });
    }
    let code = &config.probe;
    let rho = apply_channel_to_pure(chi, code.state(), d as usize)?;
    let s = code.generator();
    let label = code.eigenvalue_labels()[0];
    let projectors: Vec<CMatrix> = (0..d).map(|k| eigenprojector(s, label + k)).collect::<Result<_>>()?;
    let projected: Vec<CMatrix> = projectors.iter().map(|p| p * &rho).collect();
    let probs: Vec<f64> = projected.iter().map(|pr| linalg::trace(pr).re).collect();
    let mut spectra = Vec::with_capacity(setting.measured_normalizers.len());
    for m in &setting.measured_normalizers {
        let parts = spectral_projectors(m);
        let joint = projected
            .iter()
            .map(|pr| parts.iter().map(|(_, q)| trace_of_product(q, pr).re).collect())
            .collect();
        spectra.push(NormalizerSpectrum {
            eigenvalues: parts.iter().map(|(mu, _)| *mu).collect(),
            joint,
        });
    }
    let matrices: Vec<CMatrix> = setting.measured_normalizers.iter().map(|m| m.matrix()).collect();
    let expectations = (0..d as usize)
        .map(|k| {
            if probs[k] < MIN_OUTCOME_PROBABILITY {
                return vec![None; matrices.len()];
            }
            let post = &projected[k] * &projectors[k];
            matrices
                .iter()
                .map(|m| Some(trace_of_product(m, &post) / probs[k]))
                .collect()
        })
        .collect();
    Ok(OutcomeRecord {
        config: config.clone(),
        stabilizer_probs: probs,
        normalizer_expectations: expectations,
        normalizer_spectra: spectra,
        shots: None,
        counts: None,
        normalizer_counts: None,
    })
}

/// Runs whichever procedure `config` calls for.
pub fn run_configuration(chi: &ChiMatrix, config: &ExperimentalConfiguration) -> Result<OutcomeRecord> {
    match config.kind {
        ConfigKind::Population => {
            let mut rec = run_population_multiqudit(chi)?;
            rec.config.index = config.index;
            Ok(rec)
        }
        ConfigKind::Coherence => run_coherence(chi, config),
    }
}

/// Options for [`enumerate_configurations`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EnumerationOptions {
    pub alphas: AlphaPolicy,
    pub seed: u64,
    /// Rotates which `d - 1` of the `d` eligible subgroups are used.
    pub subgroup_offset: usize,
}

/// The `d^2` configurations: one population configuration, then for each of
/// the `d + 1` family representatives `E_i`, `d - 1` coherence
/// configurations on distinct eligible subgroups, each with fresh
/// coefficients.
pub fn enumerate_configurations(d: u32, options: EnumerationOptions) -> Result<Vec<ExperimentalConfiguration>> {
    let mut out = vec![ExperimentalConfiguration::population(
        0,
        crate::codes::population_probe(d)?,
    )?];
    for i in family_representatives(d) {
        for rep in 0..(d as usize - 1) {
            let (alphas, _) = choose_alphas(d, i, rep, options.alphas, options.seed)?;
            let probe = coherence_probe(d, i, &alphas)?;
            let eligible: Vec<usize> = abelian_subgroups(&probe)?
                .iter()
                .enumerate()
                .filter(|(_, s)| s.eligible)
                .map(|(v, _)| v)
                .collect();
            let v = eligible[(rep + options.subgroup_offset) % eligible.len()];
            out.push(ExperimentalConfiguration::coherence(out.len(), probe, v, 0, rep)?);
        }
    }
    Ok(out)
}

/// Exact records for every configuration.
pub fn run_all(chi: &ChiMatrix, configs: &[ExperimentalConfiguration]) -> Result<Vec<OutcomeRecord>> {
    configs.iter().map(|c| run_configuration(chi, c)).collect()
}

/// `E_i ⊗ I` embedded on the principal qudit, for callers checking
/// commutation against the probe.
pub fn principal_error(d: u32, m: usize) -> Result<MultiPauli> {
    MultiPauli::tensor(&[PauliElement::from_index(d, m)?, PauliElement::identity(d)?])
}

#[cfg(test)]
mod tests;
