use super::*;
use crate::channels::{depolarizing, pauli_error_channel, random_cp_map, tensor_chi};
use crate::codes::coherence_probe_unchecked;

fn first_coherence(d: u32) -> ExperimentalConfiguration {
    enumerate_configurations(d, EnumerationOptions::default())
        .unwrap()
        .remove(1)
}

#[test]
fn configuration_counts() {
    for (d, n) in [(2u32, 4usize), (3, 9), (5, 25)] {
        let configs = enumerate_configurations(d, EnumerationOptions::default()).unwrap();
        assert_eq!(configs.len(), n);
        assert_eq!(configs[0].kind, ConfigKind::Population);
        for (idx, c) in configs.iter().enumerate() {
            assert_eq!(c.index, idx);
        }
    }
}

#[test]
fn configurations_use_distinct_subgroups_per_stabilizer() {
    let configs = enumerate_configurations(5, EnumerationOptions::default()).unwrap();
    for i in family_representatives(5) {
        let used: Vec<usize> = configs
            .iter()
            .filter_map(|c| c.coherence.as_ref())
            .filter(|s| s.stabilizer_index == i)
            .map(|s| s.subgroup)
            .collect();
        let mut unique = used.clone();
        unique.dedup();
        assert_eq!(used.len(), 4);
        assert_eq!(unique.len(), 4);
    }
    for c in &configs[1..] {
        let s = c.coherence.as_ref().unwrap();
        assert_eq!(s.measured_normalizers.len(), 4);
        for m in &s.measured_normalizers {
            assert!(c.probe.generator().commutes_with(m).unwrap());
        }
    }
}

#[test]
fn population_identity_and_bit_flip() {
    let rec = run_population(&ChiMatrix::identity_channel(2, 1).unwrap()).unwrap();
    assert!((rec.stabilizer_probs[0] - 1.0).abs() < 1e-12);
    assert!(rec.stabilizer_probs[1..].iter().all(|p| p.abs() < 1e-12));

    // X commutes with X⊗X and picks up one phase against Z⊗Z: cell (0, 1)
    let rec = run_population(&pauli_error_channel(2, 2, 0.3).unwrap()).unwrap();
    let expect = [0.7, 0.3, 0.0, 0.0];
    for (p, e) in rec.stabilizer_probs.iter().zip(expect) {
        assert!((p - e).abs() < 1e-12, "{:?}", rec.stabilizer_probs);
    }
}

#[test]
fn population_recovers_diagonal() {
    for d in [2u32, 3, 5] {
        for seed in 0..3 {
            let chi = random_cp_map(d, 1, 3, seed % 2 == 0, seed).unwrap();
            let rec = run_population(&chi).unwrap();
            let diag = population_diagonal(&rec).unwrap();
            for (a, b) in diag.iter().zip(chi.diagonal()) {
                assert!((a - b).abs() < 1e-10, "d={d}");
            }
            assert!((rec.total_probability() - chi.trace()).abs() < 1e-10);
        }
    }
}

#[test]
fn multiqudit_population() {
    let id = ChiMatrix::identity_channel(2, 2).unwrap();
    let rec = run_population_multiqudit(&id).unwrap();
    assert_eq!(rec.stabilizer_probs.len(), 16);
    assert!((rec.stabilizer_probs[0] - 1.0).abs() < 1e-12);

    let a = pauli_error_channel(2, 2, 0.2).unwrap();
    let b = pauli_error_channel(2, 2, 0.4).unwrap();
    let joint = run_population_multiqudit(&tensor_chi(&[a.clone(), b.clone()]).unwrap()).unwrap();
    let pa = run_population(&a).unwrap().stabilizer_probs;
    let pb = run_population(&b).unwrap().stabilizer_probs;
    // cell digits run (k_1, k'_1, k_2, k'_2)
    for (c1, x) in pa.iter().enumerate() {
        for (c2, y) in pb.iter().enumerate() {
            assert!((joint.stabilizer_probs[c1 * 4 + c2] - x * y).abs() < 1e-12);
        }
    }

    let chi = random_cp_map(2, 2, 4, true, 9).unwrap();
    let diag = population_diagonal(&run_population_multiqudit(&chi).unwrap()).unwrap();
    for (a, b) in diag.iter().zip(chi.diagonal()) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn multiqudit_size_cap() {
    let id = ChiMatrix::identity_channel(3, 2).unwrap();
    assert!(matches!(
        run_population_capped(&id, 80),
        Err(Error::SizeCap { dim: 81, cap: 80 })
    ));
    let id = ChiMatrix::identity_channel(2, 7).unwrap();
    assert!(matches!(run_population_multiqudit(&id), Err(Error::SizeCap { .. })));
}

#[test]
fn coherence_identity_leaves_probe_undisturbed() {
    for d in [2u32, 3, 5] {
        let config = first_coherence(d);
        let rec = run_coherence(&ChiMatrix::identity_channel(d, 1).unwrap(), &config).unwrap();
        assert!((rec.stabilizer_probs[0] - 1.0).abs() < 1e-12);
        let psi = config.probe.state();
        let setting = config.coherence.as_ref().unwrap();
        for (b, m) in setting.measured_normalizers.iter().enumerate() {
            let direct = psi.dotc(&m.apply(psi));
            assert!((rec.normalizer_expectations[0][b].unwrap() - direct).norm() < 1e-12);
        }
        assert!(rec.normalizer_expectations[1..].iter().flatten().all(Option::is_none));
    }
}

#[test]
fn unitary_error_moves_all_weight_to_its_syndrome() {
    let d = 3;
    let config = first_coherence(d);
    let ei = config.probe.frame().unwrap().element;
    for j in 0..9 {
        let ej = PauliElement::from_index(d, j).unwrap();
        let k0 = ei.commutation_phase(&ej).unwrap() as usize;
        let rec = run_coherence(&pauli_error_channel(d, j, 1.0).unwrap(), &config).unwrap();
        for (k, p) in rec.stabilizer_probs.iter().enumerate() {
            assert!((p - if k == k0 { 1.0 } else { 0.0 }).abs() < 1e-12, "j={j}");
        }
    }
}

#[test]
fn qubit_dephasing_is_invisible_to_zz() {
    let a = [Complex64::new(0.8, 0.0), Complex64::new(0.36, 0.48)];
    let probe = coherence_probe(2, 1, &a).unwrap();
    let config = ExperimentalConfiguration::coherence(1, probe, 1, 0, 0).unwrap();
    let rec = run_coherence(&pauli_error_channel(2, 1, 0.4).unwrap(), &config).unwrap();
    assert!((rec.stabilizer_probs[0] - 1.0).abs() < 1e-12);
    assert!(rec.stabilizer_probs[1].abs() < 1e-12);
}

#[test]
fn coherence_probabilities_sum_to_output_trace() {
    for d in [2u32, 3] {
        let config = first_coherence(d);
        let chi = random_cp_map(d, 1, 2, true, 3).unwrap();
        let rec = run_coherence(&chi, &config).unwrap();
        assert!((rec.total_probability() - chi.trace()).abs() < 1e-10);
        for row in &rec.normalizer_expectations {
            for e in row.iter().flatten() {
                assert!(e.norm() <= 1.0 + 1e-10);
            }
        }
    }
}

#[test]
fn spectra_reproduce_expectations() {
    let config = first_coherence(5);
    let chi = depolarizing(5, 0.3).unwrap();
    let rec = run_coherence(&chi, &config).unwrap();
    for (b, spec) in rec.normalizer_spectra.iter().enumerate() {
        for k in 0..5 {
            let stat: Complex64 = spec.joint[k].iter().zip(&spec.eigenvalues).map(|(p, mu)| mu * p).sum();
            assert!((stat - rec.normalizer_statistic(k, b).unwrap()).norm() < 1e-12);
            let total: f64 = spec.joint[k].iter().sum();
            assert!((total - rec.stabilizer_probs[k]).abs() < 1e-12);
        }
    }
}

#[test]
fn population_config_rejected_by_coherence_run() {
    let configs = enumerate_configurations(2, EnumerationOptions::default()).unwrap();
    let id = ChiMatrix::identity_channel(2, 1).unwrap();
    assert!(run_coherence(&id, &configs[0]).is_err());
    let probe = coherence_probe_unchecked(2, 1, &[Complex64::new(1.0, 0.0); 2]).unwrap();
    assert!(ExperimentalConfiguration::population(0, probe).is_err());
}

#[test]
fn sampling_is_seeded_and_exact_for_certain_outcomes() {
    let config = first_coherence(2);
    let id = ChiMatrix::identity_channel(2, 1).unwrap();
    let rec = run_coherence(&id, &config).unwrap();
    let s = sample_outcomes(&rec, 1000, 5).unwrap();
    assert_eq!(s.counts.as_ref().unwrap(), &vec![1000, 0]);

    let chi = random_cp_map(3, 1, 3, true, 1).unwrap();
    let rec = run_coherence(&chi, &first_coherence(3)).unwrap();
    let a = sample_outcomes(&rec, 5000, 8).unwrap();
    let b = sample_outcomes(&rec, 5000, 8).unwrap();
    let c = sample_outcomes(&rec, 5000, 9).unwrap();
    assert_eq!(a.counts, b.counts);
    assert_eq!(a.normalizer_counts, b.normalizer_counts);
    assert_ne!(a.normalizer_counts, c.normalizer_counts);
    assert_eq!(a.counts.unwrap().iter().sum::<u64>(), 5000);
}

#[test]
fn sampled_frequencies_converge() {
    let chi = random_cp_map(3, 1, 3, true, 2).unwrap();
    let pop = run_population(&chi).unwrap();
    let s = sample_outcomes(&pop, 1_000_000, 3).unwrap();
    for (x, y) in s.stabilizer_probs.iter().zip(&pop.stabilizer_probs) {
        assert!((x - y).abs() < 5e-3);
    }
    let rec = run_coherence(&chi, &first_coherence(3)).unwrap();
    let s = sample_outcomes(&rec, 1_000_000, 3).unwrap();
    for (x, y) in s.stabilizer_probs.iter().zip(&rec.stabilizer_probs) {
        assert!((x - y).abs() < 5e-3);
    }
    for k in 0..3 {
        if rec.stabilizer_probs[k] > 0.1 {
            for b in 0..2 {
                let est = s.normalizer_expectations[k][b].unwrap();
                let exact = rec.normalizer_expectations[k][b].unwrap();
                assert!((est - exact).norm() < 2e-2);
            }
        }
    }
}

#[test]
fn lossy_maps_leave_mass_unobserved() {
    let chi = random_cp_map(2, 1, 2, false, 4).unwrap();
    let pop = run_population(&chi).unwrap();
    let s = sample_outcomes(&pop, 200_000, 1).unwrap();
    let seen: u64 = s.counts.unwrap().iter().sum();
    assert!(((seen as f64 / 200_000.0) - chi.trace().min(1.0)).abs() < 1e-2);
}
