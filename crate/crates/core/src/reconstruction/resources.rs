//! Closed-form resource counts of process-tomography schemes.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResourceRow {
    pub scheme: &'static str,
    /// Hilbert-space dimension of each experimental configuration.
    pub hilbert_dim: u128,
    pub inputs: u128,
    /// Overall number of experimental configurations.
    pub configurations: u128,
    pub measurements: &'static str,
}

fn pow(base: u128, exp: u64) -> Result<u128> {
    let exp = u32::try_from(exp).map_err(|_| Error::InvalidConfiguration("exponent too large".into()))?;
    base.checked_pow(exp)
        .ok_or_else(|| Error::InvalidConfiguration(format!("{base}^{exp} overflows")))
}

/// Resources for characterizing `n` qudits of dimension `d`.
pub fn resource_table(d: u32, n: u64) -> Result<Vec<ResourceRow>> {
    if !crate::linalg::is_prime(d) {
        return Err(Error::NotPrime(d));
    }
    let d = d as u128;
    let dn = pow(d, n)?;
    let d2n = pow(d, 2 * n)?;
    let d4n = pow(d, 4 * n)?;
    Ok(vec![
        ResourceRow {
            scheme: "SQPT",
            hilbert_dim: dn,
            inputs: d2n,
            configurations: d4n,
            measurements: "1-body",
        },
        ResourceRow {
            scheme: "AAPT",
            hilbert_dim: d2n,
            inputs: 1,
            configurations: d4n,
            measurements: "joint 1-body",
        },
        ResourceRow {
            scheme: "AAPT (MUB)",
            hilbert_dim: d2n,
            inputs: 1,
            configurations: d2n + 1,
            measurements: "MUB",
        },
        ResourceRow {
            scheme: "AAPT (POVM)",
            hilbert_dim: d4n,
            inputs: 1,
            configurations: 1,
            measurements: "POVM",
        },
        ResourceRow {
            scheme: "DCQD",
            hilbert_dim: d2n,
            inputs: pow(d + 2, n)?,
            configurations: d2n,
            measurements: "stabilizer/normalizer",
        },
    ])
}
