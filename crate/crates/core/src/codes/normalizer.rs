//! Normalizer of a coherence probe's generator, its maximal Abelian
//! subgroups and their cosets.

use std::collections::BTreeSet;

use super::StabilizerCode;
use crate::error::{Error, Result};
use crate::pauli::{MultiPauli, PauliElement};

/// A maximal Abelian subgroup `{T^b S^a}` of the normalizer, modulo phase.
#[derive(Debug, Clone)]
pub struct AbelianSubgroup {
    /// Canonical generator: the smallest-keyed member outside `{S^a}`.
    pub generator: MultiPauli,
    /// The `d^2` phase-free members, sorted by key.
    pub members: Vec<MultiPauli>,
    /// Whether the members' `A` factors fail to commute with `E_i`, i.e. the
    /// subgroup does not contain `E_i ⊗ I`.
    pub eligible: bool,
}

/// Members `T^b S^(a0)`, `b = 0..d`, of one coset of a subgroup generator.
#[derive(Debug, Clone)]
pub struct NormalizerCoset {
    /// Position of the subgroup in [`abelian_subgroups`] order.
    pub subgroup: usize,
    pub a0: u32,
    /// `members[b] = T^b S^(a0)` with phases.
    pub members: Vec<MultiPauli>,
    /// Logical coordinates `(q, p)` of `T`: it acts on the code space as
    /// `X^q Z^p` up to phase.
    pub logical: (u32, u32),
}

impl NormalizerCoset {
    /// The `d - 1` elements `T^b S^(a0)`, `b = 1..d`, measured on the probe.
    pub fn measured(&self) -> &[MultiPauli] {
        &self.members[1..]
    }
}

fn coherence_parts(code: &StabilizerCode) -> Result<&super::CoherenceFrame> {
    code.frame()
        .ok_or_else(|| Error::InvalidProbe("normalizer structure needs a coherence probe".into()))
}

/// All `d^3` phase-free two-qudit Paulis commuting with the generator,
/// sorted by key.
pub fn normalizer(code: &StabilizerCode) -> Result<Vec<MultiPauli>> {
    coherence_parts(code)?;
    let d = code.d();
    let s = code.generator();
    let n = (d * d) as usize;
    let mut out = Vec::with_capacity(n * d as usize);
    for a in 0..n {
        for b in 0..n {
            let t = MultiPauli::tensor(&[PauliElement::from_index(d, a)?, PauliElement::from_index(d, b)?])?;
            if s.commutation_phase(&t)? == 0 {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// The `d + 1` maximal Abelian subgroups `{T^b S^a}`, ordered by canonical
/// generator.
pub fn abelian_subgroups(code: &StabilizerCode) -> Result<Vec<AbelianSubgroup>> {
    let frame = coherence_parts(code)?;
    let d = code.d();
    let s = code.generator().without_phase();
    let stab: BTreeSet<Vec<usize>> = (0..d).map(|a| s.pow(a).key()).collect();
    let mut covered = stab.clone();
    let mut out = Vec::new();
    for t in normalizer(code)? {
        if covered.contains(&t.key()) {
            continue;
        }
        let mut members = Vec::with_capacity((d * d) as usize);
        for b in 0..d {
            for a in 0..d {
                let m = t.pow(b).compose(&s.pow(a))?.without_phase();
                covered.insert(m.key());
                members.push(m);
            }
        }
        members.sort_by_key(|m| m.key());
        let eligible = frame.element.commutation_phase(t.factor(0))? != 0;
        out.push(AbelianSubgroup {
            generator: t,
            members,
            eligible,
        });
    }
    Ok(out)
}

/// Coordinates `(q, p)` with `T ∝ X_L^q Z_L^p` on the code space.
pub fn logical_coordinates(code: &StabilizerCode, t: &MultiPauli) -> Result<(u32, u32)> {
    let frame = coherence_parts(code)?;
    let d = code.d();
    let q = frame.logical_z().commutation_phase(t)?;
    let p = (d - frame.logical_x().commutation_phase(t)?) % d;
    Ok((q, p))
}

/// The `d` cosets `S^(a0) <T>`, `a0 = 0..d`, of `subgroup`'s generator.
pub fn cosets(code: &StabilizerCode, subgroup: &AbelianSubgroup) -> Result<Vec<NormalizerCoset>> {
    let d = code.d();
    let s = code.generator();
    let t = &subgroup.generator;
    let index = abelian_subgroups(code)?
        .iter()
        .position(|g| g.generator.key() == t.key())
        .ok_or_else(|| Error::InvalidConfiguration("subgroup does not belong to this probe".into()))?;
    let logical = logical_coordinates(code, t)?;
    (0..d)
        .map(|a0| {
            let members = (0..d)
                .map(|b| t.pow(b).compose(&s.pow(a0)))
                .collect::<Result<Vec<_>>>()?;
            Ok(NormalizerCoset {
                subgroup: index,
                a0,
                members,
                logical,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::coherence_probe;
    use num_complex::Complex64;

    fn probe(d: u32, i: usize) -> StabilizerCode {
        let alphas: Vec<Complex64> = (0..d)
            .map(|l| Complex64::from_polar(0.8f64.powi(l as i32), 0.7 * (l * l) as f64))
            .collect();
        coherence_probe(d, i, &alphas).unwrap()
    }

    #[test]
    fn normalizer_size_is_d_cubed() {
        for d in [2u32, 3, 5] {
            for i in [1usize, d as usize, d as usize + 1] {
                assert_eq!(normalizer(&probe(d, i)).unwrap().len(), (d * d * d) as usize);
            }
        }
    }

    #[test]
    fn subgroups_partition_normalizer() {
        for d in [2u32, 3, 5] {
            let code = probe(d, 1);
            let subs = abelian_subgroups(&code).unwrap();
            assert_eq!(subs.len(), d as usize + 1);
            assert_eq!(subs.iter().filter(|s| s.eligible).count(), d as usize);
            let mut seen = BTreeSet::new();
            for sub in &subs {
                assert_eq!(sub.members.len(), (d * d) as usize);
                for a in &sub.members {
                    for b in &sub.members {
                        assert!(a.commutes_with(b).unwrap());
                    }
                    seen.insert(a.key());
                }
            }
            // d + 1 subgroups of size d^2 sharing exactly the d stabilizer elements
            assert_eq!(seen.len(), (d * d * d) as usize);
        }
    }

    #[test]
    fn qubit_zz_subgroups() {
        let code = probe(2, 1);
        let gens: Vec<Vec<usize>> = abelian_subgroups(&code)
            .unwrap()
            .iter()
            .map(|s| s.generator.key())
            .collect();
        // I⊗Z, X⊗X, X⊗XZ
        assert_eq!(gens, vec![vec![0, 1], vec![2, 2], vec![2, 3]]);
    }

    #[test]
    fn cosets_are_disjoint_and_cover_subgroup() {
        for d in [2u32, 3, 5] {
            let code = probe(d, d as usize);
            for sub in abelian_subgroups(&code).unwrap() {
                let cs = cosets(&code, &sub).unwrap();
                assert_eq!(cs.len(), d as usize);
                let keys: BTreeSet<Vec<usize>> = cs.iter().flat_map(|c| c.members.iter().map(|m| m.key())).collect();
                let expect: BTreeSet<Vec<usize>> = sub.members.iter().map(|m| m.key()).collect();
                assert_eq!(keys, expect);
                for c in &cs {
                    assert_eq!(c.measured().len(), d as usize - 1);
                }
            }
        }
    }

    #[test]
    fn logical_coordinates_match_code_space_action() {
        use crate::linalg::{max_abs_diff, omega_pow};
        for d in [2u32, 3, 5] {
            let code = probe(d, d as usize + 1);
            let frame = code.frame().unwrap();
            let v = frame.code_basis();
            for sub in abelian_subgroups(&code).unwrap() {
                let (q, p) = logical_coordinates(&code, &sub.generator).unwrap();
                let tl = v.adjoint() * sub.generator.matrix() * &v;
                let n = d as usize;
                // X_L^q Z_L^p |l> = omega^(p l) |l + q>
                let mut expect = crate::linalg::CMatrix::zeros(n, n);
                for l in 0..n {
                    expect[((l + q as usize) % n, l)] = omega_pow(d, (p as usize * l) as i64);
                }
                let phase = (0..n)
                    .map(|l| tl[((l + q as usize) % n, l)] / expect[((l + q as usize) % n, l)])
                    .next()
                    .unwrap();
                assert!((phase.norm() - 1.0).abs() < 1e-10);
                assert!(max_abs_diff(&tl, &(expect * phase)) < 1e-10, "d={d}");
            }
        }
    }
}
