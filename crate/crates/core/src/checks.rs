//! Exhaustive checks of the structural facts the protocol relies on, run
//! for one prime dimension and reported line by line.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::channels::ChiMatrix;
use crate::codes::{
    abelian_subgroups, cosets, eigenprojector, mub_check, normalizer, single_qudit_mub, unitary_eigenbasis,
    StabilizerCode,
};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::pauli::{w_subset, PauliElement};
use crate::protocol::{
    enumerate_configurations, run_all, run_coherence, EnumerationOptions, ExperimentalConfiguration,
};
use crate::reconstruction::{assemble_system, rank_report};

/// Dimensions the suite is run for; larger ones make the rank checks slow.
pub const SUPPORTED_DIMENSIONS: [u32; 3] = [2, 3, 5];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// `p q' - q p' = k (mod d)` has exactly one solution `p'` whenever `q != 0`.
fn unique_solutions(d: u32) -> Check {
    let mut bad = 0;
    for q in 1..d {
        for p in 0..d {
            for qp in 0..d {
                for k in 0..d {
                    let n = (0..d).filter(|&pp| ((p * qp + d * d - q * pp) % d) == k).count();
                    bad += usize::from(n != 1);
                }
            }
        }
    }
    Check::new(
        "unique commutation solutions",
        bad == 0,
        format!("{bad} non-unique cases"),
    )
}

fn w_subsets(d: u32) -> Result<Check> {
    let n = (d * d) as usize;
    let mut ok = true;
    for i in 1..n {
        let mut seen = BTreeSet::new();
        for k in 0..d {
            let w = w_subset(d, i, k)?;
            ok &= w.len() == d as usize;
            seen.extend(w);
        }
        ok &= seen.len() == n;
    }
    Ok(Check::new(
        format!("|W_k^i|={d}, partitioning the basis"),
        ok,
        format!("all {} non-identity i", n - 1),
    ))
}

fn probes(d: u32) -> Result<Vec<(ExperimentalConfiguration, StabilizerCode)>> {
    Ok(enumerate_configurations(d, EnumerationOptions::default())?
        .into_iter()
        .skip(1)
        .filter(|c| c.coherence.as_ref().is_some_and(|s| s.repetition == 0))
        .map(|c| {
            let p = c.probe.clone();
            (c, p)
        })
        .collect())
}

fn structure(d: u32, probes: &[(ExperimentalConfiguration, StabilizerCode)]) -> Result<Vec<Check>> {
    let (d3, d2) = ((d * d * d) as usize, (d * d) as usize);
    let mut sizes_ok = true;
    let mut count_ok = true;
    let mut order_ok = true;
    let mut overlap_ok = true;
    let mut coset_ok = true;
    let mut phases_ok = true;
    let mut projector_ok = true;
    let mut mua_ok = true;
    for (_, code) in probes {
        sizes_ok &= normalizer(code)?.len() == d3;
        let subs = abelian_subgroups(code)?;
        count_ok &= subs.len() == d as usize + 1;
        let stab: BTreeSet<Vec<usize>> = (0..d).map(|a| code.generator().pow(a).key()).collect();
        for (x, sx) in subs.iter().enumerate() {
            order_ok &= sx.members.len() == d2;
            let kx: BTreeSet<Vec<usize>> = sx.members.iter().map(|m| m.key()).collect();
            for sy in &subs[x + 1..] {
                let ky: BTreeSet<Vec<usize>> = sy.members.iter().map(|m| m.key()).collect();
                overlap_ok &= kx.intersection(&ky).cloned().collect::<BTreeSet<_>>() == stab;
            }
            let cs = cosets(code, sx)?;
            let union: BTreeSet<Vec<usize>> = cs.iter().flat_map(|c| c.members.iter().map(|m| m.key())).collect();
            coset_ok &= cs.len() == d as usize && cs.iter().all(|c| c.members.len() == d as usize) && union == kx;
            if sx.eligible {
                let zl = code.frame().expect("coherence probe").logical_z();
                for c in &cs {
                    let phases: BTreeSet<u32> = c
                        .members
                        .iter()
                        .map(|m| zl.commutation_phase(m))
                        .collect::<Result<_>>()?;
                    phases_ok &= phases.len() == d as usize;
                }
            }
        }
        let n = d2;
        let ps: Vec<CMatrix> = (0..d)
            .map(|k| eigenprojector(code.generator(), k))
            .collect::<Result<_>>()?;
        let sum = ps.iter().fold(CMatrix::zeros(n, n), |a, p| a + p);
        projector_ok &= linalg::max_abs_diff(&sum, &linalg::identity(n)) < 1e-12;
        for (a, pa) in ps.iter().enumerate() {
            for (b, pb) in ps.iter().enumerate() {
                let expect = if a == b { pa.clone() } else { CMatrix::zeros(n, n) };
                projector_ok &= linalg::max_abs_diff(&(pa * pb), &expect) < 1e-12;
            }
        }
        // logical eigenbases of the d + 1 subgroups inside the code space
        let v = code.frame().expect("coherence probe").code_basis();
        let bases = subs
            .iter()
            .map(|s| unitary_eigenbasis(&(v.adjoint() * s.generator.matrix() * &v), d))
            .collect::<Result<Vec<_>>>()?;
        mua_ok &= mub_check(&bases);
    }
    let reps = probes.len();
    Ok(vec![
        Check::new(format!("|N(S)|={d3}"), sizes_ok, format!("{reps} stabilizer choices")),
        Check::new(
            format!("{} Abelian subgroups", d + 1),
            count_ok,
            format!("{reps} stabilizer choices"),
        ),
        Check::new(format!("Abelian subgroups of order {d2}"), order_ok, ""),
        Check::new("subgroups intersect in the stabilizer group", overlap_ok, ""),
        Check::new(format!("{d} cosets of {d} members each"), coset_ok, ""),
        Check::new(
            "coset members carry distinct phases against E_i",
            phases_ok,
            "eligible subgroups",
        ),
        Check::new(
            "stabilizer projectors complete and orthogonal",
            projector_ok,
            "tolerance 1e-12",
        ),
        Check::new(
            "code-space subgroup eigenbases mutually unbiased",
            mua_ok,
            "tolerance 1e-10",
        ),
    ])
}

/// Distinct elements of one `W_k^i` (`k != 0`) have distinct commutation
/// phases with any fixed member.
fn w_phases(d: u32) -> Result<Check> {
    let mut ok = true;
    for i in 1..(d * d) as usize {
        for k in 1..d {
            let w: Vec<PauliElement> = w_subset(d, i, k)?
                .into_iter()
                .map(|j| PauliElement::from_index(d, j))
                .collect::<Result<_>>()?;
            for er in &w {
                let phases: BTreeSet<u32> = w.iter().map(|em| er.commutation_phase(em)).collect::<Result<_>>()?;
                ok &= phases.len() == d as usize;
            }
        }
    }
    Ok(Check::new("distinct phases within W_k^i", ok, "k != 0"))
}

fn single_qudit_mubs(d: u32) -> Result<Check> {
    let bases = single_qudit_mub(d)?;
    Ok(Check::new(
        format!("MUB overlap 1/{d}"),
        bases.len() == d as usize + 1 && mub_check(&bases),
        format!("{} Weyl families", bases.len()),
    ))
}

fn ranks(d: u32) -> Result<Vec<Check>> {
    // the coefficient rows do not depend on the channel
    let chi = ChiMatrix::identity_channel(d, 1)?;
    let configs = enumerate_configurations(d, EnumerationOptions::default())?;
    let records = run_all(&chi, &configs)?;
    let system = assemble_system(&configs, &records)?;
    let report = rank_report(&system);
    let d2 = (d * d) as usize;
    let each = report.per_config.iter().all(|c| c.added == d2);
    let base = configs[1].clone();
    let setting = base.coherence.clone().expect("coherence");
    let other = ExperimentalConfiguration::coherence(configs.len(), base.probe.clone(), setting.subgroup, 1, 0)?;
    let pair = [base, other];
    let recs = [run_coherence(&chi, &pair[0])?, run_coherence(&chi, &pair[1])?];
    let dup = rank_report(&assemble_system(&pair, &recs)?);
    Ok(vec![
        Check::new(
            format!("each configuration adds rank {d2}"),
            each,
            format!(
                "added {:?}",
                report.per_config.iter().map(|c| c.added).collect::<Vec<_>>()
            ),
        ),
        Check::new(
            "second coset of the same subgroup adds rank 0",
            dup.per_config.get(1).is_some_and(|c| c.added == 0),
            format!("added {}", dup.per_config.get(1).map_or(0, |c| c.added)),
        ),
        Check::new(
            format!("total rank {}", d2 * d2),
            report.rank == d2 * d2,
            format!("rank {} of {}", report.rank, report.parameters),
        ),
    ])
}

/// Runs every check for dimension `d`.
pub fn verify_all(d: u32) -> Result<Vec<Check>> {
    if !SUPPORTED_DIMENSIONS.contains(&d) {
        return Err(Error::InvalidConfiguration(format!(
            "verification supports d in {SUPPORTED_DIMENSIONS:?}, got {d}"
        )));
    }
    let probes = probes(d)?;
    let mut out = vec![unique_solutions(d), w_subsets(d)?];
    out.extend(structure(d, &probes)?);
    out.push(w_phases(d)?);
    out.push(single_qudit_mubs(d)?);
    out.extend(ranks(d)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_suite_passes() {
        let checks = verify_all(2).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:#?}");
        assert!(checks.iter().any(|c| c.name == "|N(S)|=8"));
    }

    #[test]
    fn qutrit_suite_names_subgroup_count() {
        let checks = verify_all(3).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:#?}");
        assert!(checks.iter().any(|c| c.name == "4 Abelian subgroups"));
    }

    #[test]
    fn unsupported_dimension() {
        assert!(verify_all(7).is_err());
        assert!(verify_all(4).is_err());
    }
}
