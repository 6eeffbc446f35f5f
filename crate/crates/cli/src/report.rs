//! Self-contained result documents.

use dcqd_core::channels::spec_file::EncodedMatrix;
use dcqd_core::protocol::{ConfigKind, OutcomeRecord};
use dcqd_core::reconstruction::RankReport;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const TOOL: &str = "dcqd";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigurationReport {
    pub index: usize,
    pub kind: String,
    pub stabilizer_index: Option<usize>,
    pub subgroup: Option<usize>,
    pub a0: Option<u32>,
    pub repetition: Option<usize>,
    /// Probe coefficients as `[real, imaginary]` pairs.
    pub alphas: Option<Vec<[f64; 2]>>,
    pub generators: Vec<String>,
    pub measured_normalizers: Vec<String>,
    pub stabilizer_probs: Vec<f64>,
    /// `[k][b]`, absent where the syndrome probability vanishes.
    pub normalizer_expectations: Vec<Vec<Option<[f64; 2]>>>,
    pub counts: Option<Vec<u64>>,
}

impl ConfigurationReport {
    pub fn from_record(record: &OutcomeRecord) -> Self {
        let config = &record.config;
        let setting = config.coherence.as_ref();
        Self {
            index: config.index,
            kind: match config.kind {
                ConfigKind::Population => "population",
                ConfigKind::Coherence => "coherence",
            }
            .to_string(),
            stabilizer_index: setting.map(|s| s.stabilizer_index),
            subgroup: setting.map(|s| s.subgroup),
            a0: setting.map(|s| s.a0),
            repetition: setting.map(|s| s.repetition),
            alphas: config
                .probe
                .frame()
                .map(|f| f.alphas.iter().map(|&z| pair(z)).collect()),
            generators: config.probe.generators().iter().map(ToString::to_string).collect(),
            measured_normalizers: setting
                .map(|s| s.measured_normalizers.iter().map(ToString::to_string).collect())
                .unwrap_or_default(),
            stabilizer_probs: record.stabilizer_probs.clone(),
            normalizer_expectations: record
                .normalizer_expectations
                .iter()
                .map(|row| row.iter().map(|e| e.map(pair)).collect())
                .collect(),
            counts: record.counts.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub d: u32,
    pub n_qudits: usize,
    pub seed: u64,
    pub shots: Option<u64>,
    pub alphas_policy: String,
    pub trace_preserving_rows: bool,
    pub psd_projection: bool,
    pub channel_source: String,
    pub configurations: Vec<ConfigurationReport>,
    pub rank: RankSummary,
    pub underdetermined: bool,
    pub missing_directions: Vec<String>,
    pub residual_norm: Option<f64>,
    pub recovered_chi: EncodedMatrix,
    pub ground_truth_chi: EncodedMatrix,
    pub frobenius_error: f64,
    pub wall_clock_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankSummary {
    pub rank: usize,
    pub parameters: usize,
    /// Rank added by each configuration, in enumeration order.
    pub added_per_configuration: Vec<usize>,
}

impl From<&RankReport> for RankSummary {
    fn from(r: &RankReport) -> Self {
        Self {
            rank: r.rank,
            parameters: r.parameters,
            added_per_configuration: r.per_config.iter().map(|c| c.added).collect(),
        }
    }
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
