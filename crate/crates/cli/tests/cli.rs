use std::path::Path;
use std::process::{Command, Output};

use dcqd_cli::report::RunReport;
use dcqd_core::channels::spec_file::ChannelSpec;
use dcqd_core::channels::{pauli_error_channel, ChiMatrix};

fn dcqd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcqd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_spec(dir: &Path, name: &str, spec: &ChannelSpec) -> String {
    let path = dir.join(name);
    std::fs::write(&path, spec.to_json()).unwrap();
    path.display().to_string()
}

fn run_report(args: &[&str], dir: &Path) -> (Output, RunReport) {
    let path = dir.join("report.json");
    let mut all = args.to_vec();
    let p = path.display().to_string();
    all.extend(["--output", &p]);
    let out = dcqd(&all);
    let text = std::fs::read_to_string(&path).expect("report written");
    (out, RunReport::parse(&text).unwrap())
}

#[test]
fn identity_spec_reconstructs_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "id.json",
        &ChannelSpec::from_chi(&ChiMatrix::identity_channel(2, 1).unwrap()),
    );
    let (out, report) = run_report(&["reconstruct", "--d", "2", "--channel", &spec], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(report.frobenius_error <= 1e-8);
    assert_eq!(report.rank.rank, 16);
    assert_eq!(report.configurations.len(), 4);
    assert!(!report.underdetermined);
}

#[test]
fn sampled_bit_flip_golden_run() {
    let dir = tempfile::tempdir().unwrap();
    let chi = pauli_error_channel(2, 2, 0.3).unwrap();
    let spec = write_spec(dir.path(), "bf.json", &ChannelSpec::from_chi(&chi));
    let (out, report) = run_report(
        &[
            "reconstruct",
            "--d",
            "2",
            "--channel",
            &spec,
            "--shots",
            "1000000",
            "--seed",
            "7",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(report.frobenius_error <= 2e-2, "{}", report.frobenius_error);
    assert_eq!(report.shots, Some(1_000_000));
    let counts = report.configurations[0].counts.as_ref().unwrap();
    assert_eq!(counts.iter().sum::<u64>(), 1_000_000);
}

#[test]
fn random_qutrit_channel_reconstructs_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) = run_report(
        &["reconstruct", "--d", "3", "--random-channel", "--seed", "42"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(report.frobenius_error <= 1e-8, "{}", report.frobenius_error);
    assert_eq!(report.rank.added_per_configuration, vec![9; 9]);
}

#[test]
fn reports_are_reproducible_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = dcqd(&[
            "reconstruct",
            "--d",
            "2",
            "--random-channel",
            "--seed",
            "3",
            "--shots",
            "5000",
            "--omit-timing",
            "--output",
            p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let ta = std::fs::read_to_string(&a).unwrap();
    assert_eq!(ta, std::fs::read_to_string(&b).unwrap());
    let parsed = RunReport::parse(&ta).unwrap();
    assert_eq!(parsed.to_json(), ta);
    assert_eq!(parsed.wall_clock_seconds, None);
}

#[test]
fn timing_recorded_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let (_, report) = run_report(&["reconstruct", "--d", "2"], dir.path());
    assert!(report.wall_clock_seconds.is_some_and(|t| t >= 0.0));
}

#[test]
fn verify_lists_structural_checks() {
    for (d, needle) in [
        ("2", "|N(S)|=8"),
        ("3", "4 Abelian subgroups"),
        ("5", "MUB overlap 1/5"),
    ] {
        let out = dcqd(&["verify", "--d", d]);
        let text = stdout(&out);
        assert!(out.status.success(), "{text}");
        assert!(
            text.lines().any(|l| l.starts_with("PASS") && l.contains(needle)),
            "{text}"
        );
        assert!(!text.contains("FAIL"));
    }
}

#[test]
fn verify_rejects_unsupported_dimension() {
    assert_eq!(dcqd(&["verify", "--d", "7"]).status.code(), Some(2));
    assert_eq!(dcqd(&["verify", "--d", "4"]).status.code(), Some(2));
}

#[test]
fn resources_table() {
    let out = dcqd(&["resources", "--d", "3", "--n", "1"]);
    let text = stdout(&out);
    assert!(out.status.success());
    let row = |name: &str| -> Vec<String> {
        text.lines()
            .find(|l| l.starts_with(name) && !l[name.len()..].starts_with(" ("))
            .unwrap()
            .split_whitespace()
            .map(String::from)
            .collect()
    };
    assert_eq!(row("SQPT")[3], "81");
    assert_eq!(row("DCQD")[1..4], ["9", "5", "9"]);
}

#[test]
fn population_demo_grids() {
    let out = dcqd(&["population-demo", "--d", "2"]);
    let text = stdout(&out);
    assert!(out.status.success());
    assert!(text.contains("k=0   1.000000   0.000000"), "{text}");

    let out = dcqd(&["population-demo", "--d", "2", "--depolarizing", "0.4"]);
    let text = stdout(&out);
    assert!(
        text.contains("diag(chi) = [0.700000, 0.100000, 0.100000, 0.100000]"),
        "{text}"
    );
    assert!(text.contains("total = 1.000000"));
}

#[test]
fn bad_inputs_exit_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(
        &broken,
        "{\n  \"d\": 2,\n  \"n_qudits\": 1,\n  \"representation\": \"kraus\",\n  \"matrices\": [[[[1.0, 0.0]]]]\n}",
    )
    .unwrap();
    let out = dcqd(&["reconstruct", "--d", "2", "--channel", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("matrices[0]"));

    let syntax = dir.path().join("syntax.json");
    std::fs::write(&syntax, "{\n  \"d\": 2,\n  oops\n}").unwrap();
    let out = dcqd(&["reconstruct", "--d", "2", "--channel", syntax.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let spec = write_spec(
        dir.path(),
        "id.json",
        &ChannelSpec::from_chi(&ChiMatrix::identity_channel(3, 1).unwrap()),
    );
    let out = dcqd(&["reconstruct", "--d", "2", "--channel", &spec]);
    assert_eq!(out.status.code(), Some(2));

    assert_eq!(
        dcqd(&["reconstruct", "--d", "2", "--shots", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(dcqd(&["reconstruct"]).status.code(), Some(2));
}
