//! Linear map from the real parameters of a Hermitian chi matrix to the
//! measured statistics, its rank analysis, and the least-squares inversion.
//!
//! Parameters are ordered diagonal entries first (basis order), then the
//! real parts of `chi_mn` for `m < n`, then their imaginary parts, both
//! lexicographic in `(m, n)`.

mod resources;
mod solve;

pub use resources::{resource_table, ResourceRow};
pub use solve::{rank_report, solve_chi, ConfigRank, RankReport, Solution, SolveOptions, RANK_THRESHOLD};

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::channels::{error_images, ChiMatrix};
use crate::codes::eigenprojector;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::pauli::MultiPauli;
use crate::protocol::{population_outcome_vectors, ConfigKind, ExperimentalConfiguration, OutcomeRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Re,
    Im,
}

/// What a chi parameter is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameter {
    Diagonal(usize),
    Real(usize, usize),
    Imaginary(usize, usize),
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parameter::Diagonal(m) => write!(f, "chi[{m},{m}]"),
            Parameter::Real(m, n) => write!(f, "Re chi[{m},{n}]"),
            Parameter::Imaginary(m, n) => write!(f, "Im chi[{m},{n}]"),
        }
    }
}

/// Parameters of a `side x side` chi matrix in canonical order.
pub fn parameters(side: usize) -> Vec<Parameter> {
    let pairs: Vec<(usize, usize)> = (0..side).flat_map(|m| (m + 1..side).map(move |n| (m, n))).collect();
    (0..side)
        .map(Parameter::Diagonal)
        .chain(pairs.iter().map(|&(m, n)| Parameter::Real(m, n)))
        .chain(pairs.iter().map(|&(m, n)| Parameter::Imaginary(m, n)))
        .collect()
}

/// Real parameter vector of a chi matrix (its Hermitian part).
pub fn to_parameters(chi: &ChiMatrix) -> DVector<f64> {
    let h = linalg::hermitian_part(chi.entries());
    DVector::from_iterator(
        chi.side() * chi.side(),
        parameters(chi.side()).into_iter().map(|p| match p {
            Parameter::Diagonal(m) => h[(m, m)].re,
            Parameter::Real(m, n) => h[(m, n)].re,
            Parameter::Imaginary(m, n) => h[(m, n)].im,
        }),
    )
}

pub fn from_parameters(d: u32, n_qudits: usize, x: &DVector<f64>) -> Result<ChiMatrix> {
    let side = (x.len() as f64).sqrt().round() as usize;
    if side * side != x.len() {
        return Err(Error::DimensionMismatch {
            expected: side * side,
            found: x.len(),
        });
    }
    let mut m = CMatrix::zeros(side, side);
    for (p, &v) in parameters(side).iter().zip(x.iter()) {
        match *p {
            Parameter::Diagonal(a) => m[(a, a)] = Complex64::new(v, 0.0),
            Parameter::Real(a, b) => {
                m[(a, b)].re = v;
                m[(b, a)].re = v;
            }
            Parameter::Imaginary(a, b) => {
                m[(a, b)].im = v;
                m[(b, a)].im = -v;
            }
        }
    }
    ChiMatrix::new(d, n_qudits, m)
}

/// Coefficients of `chi -> sum_mn chi_mn G[n, m]` over the real parameters.
fn functional_row(g: &CMatrix) -> Vec<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    parameters(g.nrows())
        .into_iter()
        .map(|p| match p {
            Parameter::Diagonal(m) => g[(m, m)],
            Parameter::Real(m, n) => g[(n, m)] + g[(m, n)],
            Parameter::Imaginary(m, n) => i * (g[(n, m)] - g[(m, n)]),
        })
        .collect()
}

/// Where a row of the system came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RowLabel {
    /// Probability of population syndrome cell `cell`.
    Population { config: usize, cell: usize },
    /// Probability of coherence syndrome `k`.
    Syndrome { config: usize, k: usize },
    /// `Tr(M_b P_k E(rho))` for the `b`-th measured normalizer (`b` from 0).
    Normalizer {
        config: usize,
        k: usize,
        b: usize,
        part: Part,
    },
    /// Entry `(row, col)` of `sum chi_mn E_n^dagger E_m = I`.
    TracePreservation { row: usize, col: usize, part: Part },
}

impl RowLabel {
    pub fn config(&self) -> Option<usize> {
        match *self {
            RowLabel::Population { config, .. }
            | RowLabel::Syndrome { config, .. }
            | RowLabel::Normalizer { config, .. } => Some(config),
            RowLabel::TracePreservation { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub d: u32,
    pub n_qudits: usize,
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub labels: Vec<RowLabel>,
}

impl LinearSystem {
    pub fn side(&self) -> usize {
        linalg::ipow(self.d as usize, 2 * self.n_qudits)
    }

    pub fn parameter_count(&self) -> usize {
        self.matrix.ncols()
    }

    /// Predicted statistics `A x(chi)`.
    pub fn predict(&self, chi: &ChiMatrix) -> DVector<f64> {
        &self.matrix * to_parameters(chi)
    }

    /// The rows whose labels satisfy `keep`.
    pub fn restricted(&self, keep: impl Fn(&RowLabel) -> bool) -> LinearSystem {
        let idx: Vec<usize> = (0..self.labels.len()).filter(|&r| keep(&self.labels[r])).collect();
        LinearSystem {
            d: self.d,
            n_qudits: self.n_qudits,
            matrix: self.matrix.select_rows(idx.iter()),
            rhs: self.rhs.select_rows(idx.iter()),
            labels: idx.iter().map(|&r| self.labels[r]).collect(),
        }
    }

    /// Appends rows forcing `sum_mn chi_mn E_n^dagger E_m = I`.
    pub fn with_trace_preservation(mut self) -> Result<LinearSystem> {
        let d = self.d;
        let n = self.n_qudits;
        let side = self.side();
        let dim = linalg::ipow(d as usize, n);
        let basis: Vec<MultiPauli> = (0..side)
            .map(|m| MultiPauli::from_basis_index(d, n, m))
            .collect::<Result<_>>()?;
        // (E_n^dagger E_m)[a, c] for every entry, as functionals of chi
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut labels = Vec::new();
        let products: Vec<Vec<CMatrix>> = basis
            .iter()
            .map(|en| basis.iter().map(|em| en.matrix().adjoint() * em.matrix()).collect())
            .collect();
        for a in 0..dim {
            for c in 0..dim {
                let g = CMatrix::from_fn(side, side, |nn, mm| products[nn][mm][(a, c)]);
                let coeffs = functional_row(&g);
                let target = if a == c { 1.0 } else { 0.0 };
                for part in [Part::Re, Part::Im] {
                    rows.push(coeffs.iter().map(|z| pick(*z, part)).collect::<Vec<f64>>());
                    rhs.push(if part == Part::Re { target } else { 0.0 });
                    labels.push(RowLabel::TracePreservation { row: a, col: c, part });
                }
            }
        }
        self.append(rows, rhs, labels);
        Ok(self)
    }

    fn append(&mut self, rows: Vec<Vec<f64>>, rhs: Vec<f64>, labels: Vec<RowLabel>) {
        let old = self.matrix.nrows();
        let cols = self.matrix.ncols();
        let mut m = DMatrix::zeros(old + rows.len(), cols);
        m.rows_mut(0, old).copy_from(&self.matrix);
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m[(old + r, c)] = *v;
            }
        }
        self.matrix = m;
        self.rhs = DVector::from_iterator(old + rhs.len(), self.rhs.iter().copied().chain(rhs));
        self.labels.extend(labels);
    }
}

fn pick(z: Complex64, part: Part) -> f64 {
    match part {
        Part::Re => z.re,
        Part::Im => z.im,
    }
}

/// Builds one row per recorded statistic. Complex normalizer statistics give
/// a real and an imaginary row; statistics left undefined by a vanishing
/// syndrome probability are skipped.
pub fn assemble_system(configs: &[ExperimentalConfiguration], records: &[OutcomeRecord]) -> Result<LinearSystem> {
    if configs.len() != records.len() {
        return Err(Error::RecordMismatch(format!(
            "{} configurations but {} records",
            configs.len(),
            records.len()
        )));
    }
    let first = configs
        .first()
        .ok_or_else(|| Error::RecordMismatch("no configurations".into()))?;
    let d = first.d();
    let n_qudits = first.pairs();
    let side = linalg::ipow(d as usize, 2 * n_qudits);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs = Vec::new();
    let mut labels = Vec::new();
    for (config, record) in configs.iter().zip(records) {
        if record.config.index != config.index || record.config.kind != config.kind || config.d() != d {
            return Err(Error::RecordMismatch(format!(
                "record for configuration {} paired with configuration {}",
                record.config.index, config.index
            )));
        }
        if config.pairs() != n_qudits {
            return Err(Error::RecordMismatch(
                "configurations probe different qudit counts".into(),
            ));
        }
        let v = error_images(d, n_qudits, config.probe.state(), linalg::ipow(d as usize, n_qudits))?;
        let vh = v.adjoint();
        match config.kind {
            ConfigKind::Population => {
                let phis = population_outcome_vectors(&config.probe)?;
                if phis.len() != record.stabilizer_probs.len() {
                    return Err(Error::RecordMismatch("population cell count differs".into()));
                }
                for (cell, phi) in phis.iter().enumerate() {
                    let u = &vh * phi;
                    let g = &u * u.adjoint();
                    rows.push(functional_row(&g).iter().map(|z| z.re).collect());
                    rhs.push(record.stabilizer_probs[cell]);
                    labels.push(RowLabel::Population {
                        config: config.index,
                        cell,
                    });
                }
            }
            ConfigKind::Coherence => {
                let setting = config.coherence.as_ref().expect("coherence setting");
                if record.stabilizer_probs.len() != d as usize {
                    return Err(Error::RecordMismatch("syndrome count differs".into()));
                }
                let s = config.probe.generator();
                let label = config.probe.eigenvalue_labels()[0];
                let ms: Vec<CMatrix> = setting.measured_normalizers.iter().map(|m| m.matrix()).collect();
                for k in 0..d as usize {
                    let p = eigenprojector(s, label + k as u32)?;
                    let pv = &p * &v;
                    let g = &vh * &pv;
                    rows.push(functional_row(&g).iter().map(|z| z.re).collect());
                    rhs.push(record.stabilizer_probs[k]);
                    labels.push(RowLabel::Syndrome {
                        config: config.index,
                        k,
                    });
                    for (b, m) in ms.iter().enumerate() {
                        let Some(stat) = record.normalizer_statistic(k, b) else {
                            continue;
                        };
                        let g = &vh * (m * &pv);
                        let coeffs = functional_row(&g);
                        for part in [Part::Re, Part::Im] {
                            rows.push(coeffs.iter().map(|z| pick(*z, part)).collect());
                            rhs.push(pick(stat, part));
                            labels.push(RowLabel::Normalizer {
                                config: config.index,
                                k,
                                b,
                                part,
                            });
                        }
                    }
                }
            }
        }
    }
    let cols = side * side;
    let matrix = DMatrix::from_fn(rows.len(), cols, |r, c| rows[r][c]);
    Ok(LinearSystem {
        d,
        n_qudits,
        matrix,
        rhs: DVector::from_vec(rhs),
        labels,
    })
}
