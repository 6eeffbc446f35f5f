//! Channel-specification documents.
//!
//! A JSON object with exactly these fields:
//!
//! ```json
//! {
//!   "d": 2,
//!   "n_qudits": 1,
//!   "representation": "kraus",
//!   "matrices": [
//!     [[[1.0, 0.0], [0.0, 0.0]],
//!      [[0.0, 0.0], [1.0, 0.0]]]
//!   ]
//! }
//! ```
//!
//! Each matrix is a list of rows, each row a list of `[real, imaginary]`
//! pairs. `"kraus"` documents carry one or more `d^n x d^n` Kraus operators;
//! `"chi"` documents carry exactly one `d^(2n) x d^(2n)` process matrix
//! indexed by the error basis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{kraus_to_chi, ChiMatrix, KrausSet};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// `[real, imaginary]` rows of a complex matrix.
pub type EncodedMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Kraus,
    Chi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub d: u32,
    pub n_qudits: usize,
    pub representation: Representation,
    pub matrices: Vec<EncodedMatrix>,
}

pub fn encode_matrix(m: &CMatrix) -> EncodedMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

/// Decodes a square matrix of side `side`; `field` names the location for
/// error messages.
pub fn decode_matrix(rows: &EncodedMatrix, side: usize, field: &str) -> Result<CMatrix> {
    if rows.len() != side {
        return Err(Error::Spec(format!(
            "{field}: expected {side} rows, found {}",
            rows.len()
        )));
    }
    let mut m = CMatrix::zeros(side, side);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != side {
            return Err(Error::Spec(format!(
                "{field}[{i}]: expected {side} entries, found {}",
                row.len()
            )));
        }
        for (j, [re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::Spec(format!("{field}[{i}][{j}]: non-finite value")));
            }
            m[(i, j)] = Complex64::new(*re, *im);
        }
    }
    Ok(m)
}

impl ChannelSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let spec: ChannelSpec = serde_json::from_str(text)?;
        spec.check()?;
        Ok(spec)
    }

    pub fn from_chi(chi: &ChiMatrix) -> Self {
        Self {
            d: chi.d(),
            n_qudits: chi.n_qudits(),
            representation: Representation::Chi,
            matrices: vec![encode_matrix(chi.entries())],
        }
    }

    pub fn from_kraus(kraus: &KrausSet) -> Self {
        Self {
            d: kraus.d(),
            n_qudits: kraus.n_qudits(),
            representation: Representation::Kraus,
            matrices: kraus.operators().iter().map(encode_matrix).collect(),
        }
    }

    fn check(&self) -> Result<()> {
        if !linalg::is_prime(self.d) {
            return Err(Error::Spec(format!("d: {} is not prime", self.d)));
        }
        if self.n_qudits == 0 {
            return Err(Error::Spec("n_qudits: must be at least 1".into()));
        }
        match self.representation {
            Representation::Chi if self.matrices.len() != 1 => Err(Error::Spec(format!(
                "matrices: chi representation needs exactly one matrix, found {}",
                self.matrices.len()
            ))),
            Representation::Kraus if self.matrices.is_empty() => Err(Error::Spec(
                "matrices: kraus representation needs at least one operator".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn to_chi(&self) -> Result<ChiMatrix> {
        self.check()?;
        let dim = linalg::ipow(self.d as usize, self.n_qudits);
        match self.representation {
            Representation::Chi => {
                let m = decode_matrix(&self.matrices[0], dim * dim, "matrices[0]")?;
                ChiMatrix::new(self.d, self.n_qudits, m)
            }
            Representation::Kraus => {
                let ops = self
                    .matrices
                    .iter()
                    .enumerate()
                    .map(|(i, m)| decode_matrix(m, dim, &format!("matrices[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                kraus_to_chi(&KrausSet::new(self.d, self.n_qudits, ops)?)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("channel spec serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{pauli_error_channel, random_kraus};

    const BIT_FLIP: &str = r#"{
  "d": 2,
  "n_qudits": 1,
  "representation": "kraus",
  "matrices": [
    [[[0.8366600265340756, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.8366600265340756, 0.0]]],
    [[[0.0, 0.0], [0.5477225575051661, 0.0]], [[0.5477225575051661, 0.0], [0.0, 0.0]]]
  ]
}"#;

    #[test]
    fn parses_bit_flip() {
        let chi = ChannelSpec::parse(BIT_FLIP).unwrap().to_chi().unwrap();
        let expect = pauli_error_channel(2, 2, 0.3).unwrap();
        assert!(chi.frobenius_distance(&expect) < 1e-12);
    }

    #[test]
    fn chi_document_round_trips() {
        let chi = super::super::kraus_to_chi(&random_kraus(3, 1, 2, true, 4).unwrap()).unwrap();
        let text = ChannelSpec::from_chi(&chi).to_json();
        let back = ChannelSpec::parse(&text).unwrap();
        assert_eq!(back.to_chi().unwrap(), chi);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn errors_name_field_or_line() {
        let bad_row = BIT_FLIP.replacen("[[0.0, 0.0], [0.8366600265340756, 0.0]]", "[[0.0, 0.0]]", 1);
        let err = ChannelSpec::parse(&bad_row).unwrap().to_chi().unwrap_err().to_string();
        assert!(err.contains("matrices[0][1]"), "{err}");

        let err = ChannelSpec::parse("{\n  \"d\": 2,\n  \"n_qudits\": 1,\n  \"oops\": 3\n}")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 4"), "{err}");

        let err = ChannelSpec::parse(&BIT_FLIP.replace("\"d\": 2", "\"d\": 4"))
            .unwrap_err()
            .to_string();
        assert!(err.contains("d: 4"), "{err}");

        let err = ChannelSpec::parse(&BIT_FLIP.replace("kraus", "superop"))
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 4"), "{err}");
    }
}
