//! Subcommand bodies. Each returns the process exit status, or an error for
//! unusable input.

use std::error::Error as StdError;
use std::fs;
use std::time::Instant;

use dcqd_core::channels::spec_file::{encode_matrix, ChannelSpec};
use dcqd_core::channels::{depolarizing, random_cp_map, ChiMatrix};
use dcqd_core::checks::verify_all;
use dcqd_core::codes::AlphaPolicy;
use dcqd_core::protocol::{
    enumerate_configurations, population_diagonal, run_all, run_population_multiqudit, sample_outcomes,
    EnumerationOptions,
};
use dcqd_core::reconstruction::{assemble_system, rank_report, resource_table, solve_chi, SolveOptions};
use dcqd_core::Error;

use crate::report::{ConfigurationReport, RankSummary, RunReport, TOOL, VERSION};
use crate::{ChannelArgs, PolicyArg, ReconstructArgs, EXIT_FAILURE};

pub type CmdResult = Result<u8, Box<dyn StdError>>;

fn input_error(msg: String) -> Box<dyn StdError> {
    msg.into()
}

/// The channel under test and a description of where it came from.
fn load_channel(
    d: u32,
    args: &ChannelArgs,
    seed: u64,
    kraus_rank: Option<usize>,
    trace_preserving: bool,
) -> Result<(ChiMatrix, String), Box<dyn StdError>> {
    if let Some(path) = &args.channel {
        let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        let chi = ChannelSpec::parse(&text)
            .and_then(|s| s.to_chi())
            .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        if chi.d() != d {
            return Err(input_error(format!(
                "{}: channel has d = {} but --d is {d}",
                path.display(),
                chi.d()
            )));
        }
        return Ok((chi, path.display().to_string()));
    }
    if args.random_channel {
        let rank = kraus_rank.unwrap_or(d as usize);
        let chi = random_cp_map(d, 1, rank, trace_preserving, seed)?;
        let kind = if trace_preserving {
            "trace-preserving"
        } else {
            "non-trace-preserving"
        };
        return Ok((chi, format!("random {kind} channel, Kraus rank {rank}, seed {seed}")));
    }
    if let Some(p) = args.depolarizing {
        return Ok((depolarizing(d, p)?, format!("depolarizing p={p}")));
    }
    Ok((ChiMatrix::identity_channel(d, 1)?, "identity".to_string()))
}

pub fn reconstruct(args: &ReconstructArgs) -> CmdResult {
    let start = Instant::now();
    let d = args.d;
    let (chi, source) = load_channel(d, &args.channel, args.seed, args.kraus_rank, !args.non_trace_preserving)?;
    if chi.n_qudits() != 1 {
        return Err(input_error(format!(
            "reconstruction handles single-qudit channels, got n_qudits = {}",
            chi.n_qudits()
        )));
    }
    if args.shots == Some(0) {
        return Err(input_error("--shots must be at least 1".into()));
    }
    let alphas = match args.alphas_policy {
        PolicyArg::Geometric => AlphaPolicy::default(),
        PolicyArg::Random => AlphaPolicy::Random,
    };
    let configs = enumerate_configurations(
        d,
        EnumerationOptions {
            alphas,
            seed: args.seed,
            subgroup_offset: args.subgroup_offset,
        },
    )?;
    let mut records = run_all(&chi, &configs)?;
    if let Some(shots) = args.shots {
        records = records
            .iter()
            .map(|r| sample_outcomes(r, shots, args.seed))
            .collect::<Result<_, _>>()?;
    }
    let mut system = assemble_system(&configs, &records)?;
    if args.trace_preserving {
        system = system.with_trace_preservation()?;
    }
    let ranks = rank_report(&system);
    let options = SolveOptions { project_psd: args.psd };
    let (estimate, residual, missing) = match solve_chi(&system, options) {
        Ok(sol) => (sol.chi, Some(sol.residual_norm), Vec::new()),
        Err(Error::Underdetermined { partial, missing, .. }) => (*partial, None, missing),
        Err(e) => return Err(e.into()),
    };
    let underdetermined = residual.is_none();
    let error = estimate.frobenius_distance(&chi);
    let report = RunReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        d,
        n_qudits: 1,
        seed: args.seed,
        shots: args.shots,
        alphas_policy: format!("{:?}", args.alphas_policy).to_lowercase(),
        trace_preserving_rows: args.trace_preserving,
        psd_projection: args.psd,
        channel_source: source,
        configurations: records.iter().map(ConfigurationReport::from_record).collect(),
        rank: RankSummary::from(&ranks),
        underdetermined,
        missing_directions: missing,
        residual_norm: residual,
        recovered_chi: encode_matrix(estimate.entries()),
        ground_truth_chi: encode_matrix(chi.entries()),
        frobenius_error: error,
        wall_clock_seconds: (!args.omit_timing).then(|| start.elapsed().as_secs_f64()),
    };
    if let Some(path) = &args.output {
        fs::write(path, report.to_json()).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    }
    println!("configurations: {}", configs.len());
    println!("rank: {} of {}", ranks.rank, ranks.parameters);
    if underdetermined {
        println!(
            "under-determined: {} missing directions, e.g. {}",
            report.missing_directions.len(),
            report.missing_directions.first().map_or("-", String::as_str)
        );
    }
    println!("frobenius error: {error:.3e}");
    Ok(if underdetermined { EXIT_FAILURE } else { 0 })
}

pub fn verify(d: u32) -> CmdResult {
    let checks = verify_all(d)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            println!("{status} {}", c.name);
        } else {
            println!("{status} {} ({})", c.name, c.detail);
        }
    }
    println!("{} of {} checks passed for d={d}", checks.len() - failed, checks.len());
    Ok(if failed == 0 { 0 } else { EXIT_FAILURE })
}

pub fn resources(d: u32, n: u64) -> CmdResult {
    let rows = resource_table(d, n)?;
    println!("d={d}, n={n}");
    println!(
        "{:<12} {:>14} {:>14} {:>16}  measurements",
        "scheme", "dim(H)", "inputs", "configurations"
    );
    for r in rows {
        println!(
            "{:<12} {:>14} {:>14} {:>16}  {}",
            r.scheme, r.hilbert_dim, r.inputs, r.configurations, r.measurements
        );
    }
    Ok(0)
}

pub fn population_demo(d: u32, channel: &ChannelArgs, seed: u64) -> CmdResult {
    let (chi, source) = load_channel(d, channel, seed, None, true)?;
    let record = run_population_multiqudit(&chi)?;
    let probs = &record.stabilizer_probs;
    println!("channel: {source}");
    if chi.n_qudits() == 1 {
        println!("rows: X⊗X syndrome k, columns: Z⊗Z^{} syndrome k'", d - 1);
        let n = d as usize;
        for k in 0..n {
            let row: Vec<String> = (0..n).map(|kp| format!("{:>10.6}", probs[k * n + kp])).collect();
            println!("k={k} {}", row.join(" "));
        }
    } else {
        for (cell, p) in probs.iter().enumerate() {
            println!("cell {cell:>5}: {p:.6}");
        }
    }
    let diag = population_diagonal(&record)?;
    let text: Vec<String> = diag.iter().map(|x| format!("{x:.6}")).collect();
    println!("diag(chi) = [{}]", text.join(", "));
    println!("total = {:.6}", probs.iter().sum::<f64>());
    Ok(0)
}
