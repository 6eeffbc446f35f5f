//! Rank analysis and SVD least squares.

use nalgebra::{DMatrix, DVector, SVD};
use serde::Serialize;

use super::{from_parameters, parameters, LinearSystem};
use crate::channels::ChiMatrix;
use crate::error::{Error, Result};

/// Singular values below this fraction of the largest count as zero.
pub const RANK_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigRank {
    pub config: usize,
    pub rows: usize,
    /// Rank gained by adding this configuration's rows to all earlier ones.
    pub added: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub parameters: usize,
    pub per_config: Vec<ConfigRank>,
}

struct Decomposition {
    u: DMatrix<f64>,
    sigma: DVector<f64>,
    v_t: DMatrix<f64>,
}

/// SVD with a full right factor: short matrices are padded with zero rows.
fn decompose(a: &DMatrix<f64>) -> Decomposition {
    let n = a.ncols();
    let padded;
    let a = if a.nrows() < n {
        let mut m = DMatrix::zeros(n, n);
        m.rows_mut(0, a.nrows()).copy_from(a);
        padded = m;
        &padded
    } else {
        a
    };
    // nalgebra's default convergence threshold (5 eps) can stop with
    // off-diagonal residue near 1e-6 on these systems; iterate to eps
    let svd = SVD::try_new(a.clone(), true, true, f64::EPSILON, 0).expect("unbounded iterations converge");
    Decomposition {
        u: svd.u.expect("requested"),
        sigma: svd.singular_values,
        v_t: svd.v_t.expect("requested"),
    }
}

fn sigma_max(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().max()
}

fn rank_with(a: &DMatrix<f64>, cutoff: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    a.singular_values().iter().filter(|&&s| s > cutoff).count()
}

/// Numerical rank of the whole system and the rank each configuration adds
/// in row order, all measured against the full system's largest singular
/// value.
pub fn rank_report(system: &LinearSystem) -> RankReport {
    let cutoff = RANK_THRESHOLD * sigma_max(&system.matrix);
    let rank = rank_with(&system.matrix, cutoff);
    let mut order: Vec<usize> = Vec::new();
    for l in &system.labels {
        if let Some(c) = l.config() {
            if order.last() != Some(&c) && !order.contains(&c) {
                order.push(c);
            }
        }
    }
    let mut per_config = Vec::with_capacity(order.len());
    let mut included: Vec<usize> = Vec::new();
    let mut previous = 0;
    for c in order {
        let rows: Vec<usize> = (0..system.labels.len())
            .filter(|&r| system.labels[r].config() == Some(c))
            .collect();
        included.extend(&rows);
        let r = rank_with(&system.matrix.select_rows(included.iter()), cutoff);
        per_config.push(ConfigRank {
            config: c,
            rows: rows.len(),
            added: r - previous,
        });
        previous = r;
    }
    RankReport {
        rank,
        parameters: system.parameter_count(),
        per_config,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Clip negative eigenvalues of the estimate.
    pub project_psd: bool,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub chi: ChiMatrix,
    /// `|A x - b|` of the unprojected least-squares solution.
    pub residual_norm: f64,
    pub rank: usize,
}

/// Minimum-norm least-squares chi. Fails with the under-determined error,
/// carrying the partial estimate and the parameters dominating each null
/// direction, when the rank falls short of the parameter count.
pub fn solve_chi(system: &LinearSystem, options: SolveOptions) -> Result<Solution> {
    let n = system.parameter_count();
    let dec = decompose(&system.matrix);
    let smax = dec.sigma.iter().copied().fold(0.0, f64::max);
    let cutoff = RANK_THRESHOLD * smax;
    let rows = system.matrix.nrows();
    let mut x = DVector::zeros(n);
    let mut rank = 0;
    for (j, &s) in dec.sigma.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            rank += 1;
            let uj = dec.u.column(j);
            let coef = uj.rows(0, rows).dot(&system.rhs) / s;
            x += dec.v_t.row(j).transpose() * coef;
        }
    }
    let residual_norm = (&system.matrix * &x - &system.rhs).norm();
    let chi = from_parameters(system.d, system.n_qudits, &x)?;
    if rank < n {
        let labels = parameters((n as f64).sqrt().round() as usize);
        let mut missing: Vec<String> = dec
            .sigma
            .iter()
            .enumerate()
            .filter(|(_, &s)| !(s > cutoff && s > 0.0))
            .map(|(j, _)| {
                let row = dec.v_t.row(j);
                let (imax, _) = row
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                    .expect("nonempty");
                labels[imax].to_string()
            })
            .collect();
        missing.sort();
        missing.dedup();
        return Err(Error::Underdetermined {
            rank,
            expected: n,
            missing,
            partial: Box::new(chi),
        });
    }
    let chi = if options.project_psd { chi.project_psd() } else { chi };
    Ok(Solution {
        chi,
        residual_norm,
        rank,
    })
}
