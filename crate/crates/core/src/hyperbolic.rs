//! Gromov hyperbolicity of Coxeter groups through Moussong's criterion.
//!
//! `W` is hyperbolic exactly when it contains no `Z x Z`, which on the
//! diagram means: no irreducible affine special subgroup of rank at least 3,
//! and no pair of commuting infinite special subgroups.

use std::collections::VecDeque;

use serde::Serialize;

use crate::classify::{classify_mask, has_affine_parabolic, is_k_spherical, AffineType, TypeClass};
use crate::enumerate::minimal_infinite_masks;
use crate::error::{CoreError, Result};
use crate::system::{bits, witness_order, CoxeterSystem, VertexSubset};

/// A certificate for a `Z x Z` subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZxZWitness {
    /// `W_J` is irreducible affine of rank at least 3.
    AffineSubset { subset: VertexSubset },
    /// `W_I` and `W_J` are infinite, `I` and `J` are disjoint and every
    /// cross label is 2.
    CommutingInfinitePair {
        first: VertexSubset,
        second: VertexSubset,
    },
}

impl ZxZWitness {
    /// Re-checks the witness against the classifier.
    pub fn validate(&self, system: &CoxeterSystem) -> bool {
        let rank_ok = |s: &VertexSubset| s.rank() == system.rank();
        match *self {
            Self::AffineSubset { subset } => {
                rank_ok(&subset)
                    && subset.len() >= 3
                    && system.is_connected_mask(subset.mask())
                    && classify_mask(system, subset.mask()).is_affine()
            }
            Self::CommutingInfinitePair { first, second } => {
                rank_ok(&first)
                    && rank_ok(&second)
                    && !first.is_empty()
                    && !second.is_empty()
                    && first.is_disjoint(&second)
                    && commute(system, first.mask(), second.mask())
                    && !crate::classify::is_spherical_mask(system, first.mask())
                    && !crate::classify::is_spherical_mask(system, second.mask())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperbolicityVerdict {
    Hyperbolic,
    NotHyperbolic(ZxZWitness),
}

impl HyperbolicityVerdict {
    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, Self::Hyperbolic)
    }

    pub fn witness(&self) -> Option<&ZxZWitness> {
        match self {
            Self::Hyperbolic => None,
            Self::NotHyperbolic(w) => Some(w),
        }
    }
}

impl Serialize for HyperbolicityVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        match self {
            Self::Hyperbolic => map.serialize_entry("verdict", "hyperbolic")?,
            Self::NotHyperbolic(w) => {
                map.serialize_entry("verdict", "not_hyperbolic")?;
                map.serialize_entry("witness", w)?;
            }
        }
        map.end()
    }
}

/// All cross labels between `a` and `b` equal 2.
fn commute(system: &CoxeterSystem, a: u32, b: u32) -> bool {
    bits(a).all(|s| system.neighbors(s) & b == 0)
}

/// Decides hyperbolicity. Witnesses are the first found in witness order:
/// an affine subset if one exists, otherwise the least commuting pair of
/// minimal infinite subsets.
pub fn is_hyperbolic(system: &CoxeterSystem) -> HyperbolicityVerdict {
    if let Some(subset) = has_affine_parabolic(system, false) {
        return HyperbolicityVerdict::NotHyperbolic(ZxZWitness::AffineSubset { subset });
    }
    // Any infinite subset contains a minimal infinite one, so commuting
    // infinite pairs exist iff commuting minimal infinite pairs do.
    let minimal = minimal_infinite_masks(system);
    for (i, &a) in minimal.iter().enumerate() {
        for &b in &minimal[i + 1..] {
            if a & b == 0 && commute(system, a, b) {
                let rank = system.rank();
                return HyperbolicityVerdict::NotHyperbolic(ZxZWitness::CommutingInfinitePair {
                    first: VertexSubset::from_mask(rank, a),
                    second: VertexSubset::from_mask(rank, b),
                });
            }
        }
    }
    HyperbolicityVerdict::Hyperbolic
}

/// Result of comparing Moussong's criterion with the affine-parabolic test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    /// Crystallographic, and simply laced or 3-spherical.
    pub hypotheses_ok: bool,
    pub hyperbolic: bool,
    pub affine_parabolic: Option<VertexSubset>,
    /// Under the hypotheses: hyperbolic iff there is no affine parabolic.
    pub lemma_consistent: bool,
}

fn lemma_hypotheses(system: &CoxeterSystem) -> bool {
    system.is_crystallographic() && (system.is_simply_laced() || is_k_spherical(system, 3))
}

pub fn lemma_dynkin_check(system: &CoxeterSystem) -> LemmaCheck {
    let hypotheses_ok = lemma_hypotheses(system);
    let hyperbolic = is_hyperbolic(system).is_hyperbolic();
    let affine_parabolic = has_affine_parabolic(system, false);
    LemmaCheck {
        hypotheses_ok,
        hyperbolic,
        affine_parabolic,
        lemma_consistent: !hypotheses_ok || hyperbolic == affine_parabolic.is_none(),
    }
}

/// How [`affine_from_commuting`] found its subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionCase {
    /// One of the two given subsets is itself affine.
    InputAffine,
    /// A rank-3 subdiagram with labels 4, 4.
    TildeC2,
    /// A cycle of 3-labels.
    TildeA,
    /// A path with 4-labels at both ends.
    TildeC,
    /// Nothing of the expected types near the joining path; found by
    /// exhaustive search instead.
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AffineConstruction {
    pub subset: VertexSubset,
    pub affine_type: AffineType,
    pub case: ConstructionCase,
    pub fallback_used: bool,
}

/// Given commuting minimal infinite subsets `I` and `J` of a connected
/// diagram satisfying the lemma's hypotheses, finds an irreducible affine
/// subdiagram near a shortest path from `I` to `J`.
pub fn affine_from_commuting(
    system: &CoxeterSystem,
    first: &VertexSubset,
    second: &VertexSubset,
) -> Result<AffineConstruction> {
    let fail = |msg: &str| Err(CoreError::Precondition(msg.to_string()));
    if first.rank() != system.rank() || second.rank() != system.rank() {
        return fail("subsets index a different rank");
    }
    if !lemma_hypotheses(system) {
        return fail("diagram must be crystallographic and simply laced or 3-spherical");
    }
    if !system.is_connected() {
        return fail("diagram must be connected");
    }
    let (i, j) = (first.mask(), second.mask());
    if i & j != 0 || !commute(system, i, j) {
        return fail("subsets must be disjoint and commuting");
    }
    let minimal = minimal_infinite_masks(system);
    if !minimal.contains(&i) || !minimal.contains(&j) {
        return fail("subsets must be minimal infinite");
    }

    let construction = |mask: u32, case: ConstructionCase| {
        let TypeClass::Affine(affine_type) = classify_mask(system, mask) else {
            unreachable!("construction only returns affine subsets")
        };
        AffineConstruction {
            subset: VertexSubset::from_mask(system.rank(), mask),
            affine_type,
            case,
            fallback_used: case == ConstructionCase::Fallback,
        }
    };

    for mask in [i, j] {
        if mask.count_ones() >= 3 && classify_mask(system, mask).is_affine() {
            return Ok(construction(mask, ConstructionCase::InputAffine));
        }
    }

    let near = shortest_path(system, i, j) | i | j;
    let local = system.restrict_mask(near);
    let lift = |m: u32| {
        bits(m)
            .map(|k| bits(near).nth(k).expect("index inside restriction"))
            .fold(0u32, |acc, v| acc | (1 << v))
    };
    let affine: Vec<(u32, AffineType)> = minimal_infinite_masks(&local)
        .into_iter()
        .filter_map(|m| match classify_mask(&local, m) {
            TypeClass::Affine(t) if m.count_ones() >= 3 => Some((lift(m), t)),
            _ => None,
        })
        .collect();
    let pick = |want: fn(&AffineType) -> bool| {
        let mut hits: Vec<u32> = affine
            .iter()
            .filter(|(_, t)| want(t))
            .map(|(m, _)| *m)
            .collect();
        hits.sort_by(|&a, &b| witness_order(a, b));
        hits.first().copied()
    };
    type Wanted = fn(&AffineType) -> bool;
    let cases: [(Wanted, ConstructionCase); 3] = [
        (|t| *t == AffineType::C(2), ConstructionCase::TildeC2),
        (|t| matches!(t, AffineType::A(_)), ConstructionCase::TildeA),
        (|t| matches!(t, AffineType::C(_)), ConstructionCase::TildeC),
    ];
    for (want, case) in cases {
        if let Some(mask) = pick(want) {
            return Ok(construction(mask, case));
        }
    }

    match has_affine_parabolic(system, false) {
        Some(subset) => Ok(construction(subset.mask(), ConstructionCase::Fallback)),
        None => Err(CoreError::NoAffineSubset),
    }
}

/// Vertices of a shortest diagram path from `from` to `to`, endpoints
/// included. Ties go to the smallest vertex indices.
fn shortest_path(system: &CoxeterSystem, from: u32, to: u32) -> u32 {
    let n = system.rank();
    let mut prev = vec![usize::MAX; n];
    let mut seen = from;
    let mut queue: VecDeque<usize> = bits(from).collect();
    while let Some(u) = queue.pop_front() {
        if to & (1 << u) != 0 {
            let mut path = 0u32;
            let mut x = u;
            loop {
                path |= 1 << x;
                if prev[x] == usize::MAX {
                    return path;
                }
                x = prev[x];
            }
        }
        for w in bits(system.neighbors(u) & !seen) {
            seen |= 1 << w;
            prev[w] = u;
            queue.push_back(w);
        }
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::is_spherical;
    use crate::system::test_labels::*;
    use crate::system::CoxeterLabel;
    use proptest::prelude::*;

    fn subset(rank: usize, idx: &[usize]) -> VertexSubset {
        VertexSubset::new(rank, idx.iter().copied()).unwrap()
    }

    /// Two triangles `{0,1,2}` and `{4,5,6}` joined through vertex 3.
    fn triangles_via_path() -> CoxeterSystem {
        CoxeterSystem::from_edges(
            7,
            [
                (0, 1, THREE),
                (1, 2, THREE),
                (0, 2, THREE),
                (2, 3, THREE),
                (3, 4, THREE),
                (4, 5, THREE),
                (5, 6, THREE),
                (4, 6, THREE),
            ],
        )
        .unwrap()
    }

    #[test]
    fn verdict_examples() {
        let tri = CoxeterSystem::cycle(&[THREE; 3]);
        assert_eq!(
            is_hyperbolic(&tri),
            HyperbolicityVerdict::NotHyperbolic(ZxZWitness::AffineSubset {
                subset: tri.full_subset()
            })
        );
        assert!(is_hyperbolic(&CoxeterSystem::path(&[Infinity])).is_hyperbolic());
        assert!(is_hyperbolic(&CoxeterSystem::path(&[THREE; 5])).is_hyperbolic());
    }

    #[test]
    fn commuting_pair_without_affine_subsets() {
        // Two infinite dihedral groups side by side give Z x Z with no
        // affine subset of rank 3.
        let s = CoxeterSystem::from_edges(4, [(0, 1, Infinity), (2, 3, Infinity)]).unwrap();
        let verdict = is_hyperbolic(&s);
        assert_eq!(
            verdict,
            HyperbolicityVerdict::NotHyperbolic(ZxZWitness::CommutingInfinitePair {
                first: subset(4, &[0, 1]),
                second: subset(4, &[2, 3]),
            })
        );
        assert!(verdict.witness().unwrap().validate(&s));
        // Joining them kills the pair.
        let joined = CoxeterSystem::path(&[Infinity, THREE, Infinity]);
        assert!(is_hyperbolic(&joined).is_hyperbolic());
    }

    #[test]
    fn witness_validation_rejects_bad_witnesses() {
        let s = CoxeterSystem::path(&[THREE, THREE, THREE]);
        assert!(!ZxZWitness::AffineSubset {
            subset: s.full_subset()
        }
        .validate(&s));
        let pair = ZxZWitness::CommutingInfinitePair {
            first: subset(4, &[0]),
            second: subset(4, &[3]),
        };
        assert!(!pair.validate(&s));
    }

    #[test]
    fn verdict_json() {
        let tri = CoxeterSystem::cycle(&[THREE; 3]);
        let json = serde_json::to_string(&is_hyperbolic(&tri)).unwrap();
        assert_eq!(
            json,
            r#"{"verdict":"not_hyperbolic","witness":{"kind":"affine_subset","subset":[0,1,2]}}"#
        );
    }

    #[test]
    fn lemma_check_examples() {
        let a3 = CoxeterSystem::cycle(&[THREE; 4]);
        let c = lemma_dynkin_check(&a3);
        assert!(
            c.hypotheses_ok && !c.hyperbolic && c.affine_parabolic.is_some() && c.lemma_consistent
        );
        let a4 = CoxeterSystem::path(&[THREE; 3]);
        let c = lemma_dynkin_check(&a4);
        assert!(
            c.hypotheses_ok && c.hyperbolic && c.affine_parabolic.is_none() && c.lemma_consistent
        );
        let h = CoxeterSystem::path(&[FIVE, THREE]);
        let c = lemma_dynkin_check(&h);
        assert!(!c.hypotheses_ok && c.lemma_consistent);
        // Outside the hypotheses the equivalence can fail and is not claimed.
        let s = CoxeterSystem::from_edges(4, [(0, 1, Infinity), (2, 3, Infinity)]).unwrap();
        let c = lemma_dynkin_check(&s);
        assert!(
            !c.hypotheses_ok && !c.hyperbolic && c.affine_parabolic.is_none() && c.lemma_consistent
        );
    }

    #[test]
    fn construction_on_triangles() {
        let s = triangles_via_path();
        let out =
            affine_from_commuting(&s, &subset(7, &[0, 1, 2]), &subset(7, &[4, 5, 6])).unwrap();
        assert_eq!(out.case, ConstructionCase::InputAffine);
        assert_eq!(out.affine_type, AffineType::A(2));
        assert!(!out.fallback_used);
        assert_eq!(Some(out.subset), has_affine_parabolic(&s, false));
    }

    /// The 4-cycle with labels 3, 3, 3, 4: minimal infinite, not affine.
    fn square_with_four() -> Vec<(usize, usize, CoxeterLabel)> {
        vec![(0, 1, THREE), (1, 2, THREE), (2, 3, THREE), (3, 0, FOUR)]
    }

    #[test]
    fn construction_through_non_affine_inputs() {
        // Two copies joined by a path of length 2 through vertex 8.
        let mut edges = square_with_four();
        edges.extend(
            square_with_four()
                .into_iter()
                .map(|(i, j, m)| (i + 4, j + 4, m)),
        );
        edges.push((2, 8, THREE));
        edges.push((8, 4, THREE));
        let s = CoxeterSystem::from_edges(9, edges).unwrap();
        let i = subset(9, &[0, 1, 2, 3]);
        let j = subset(9, &[4, 5, 6, 7]);
        assert!(!classify_mask(&s, i.mask()).is_affine());
        let out = affine_from_commuting(&s, &i, &j).unwrap();
        assert!(classify_mask(&s, out.subset.mask()).is_affine());
        assert!(out.subset.len() >= 3);
        assert!(!out.fallback_used, "{out:?}");
    }

    #[test]
    fn construction_preconditions() {
        let s = triangles_via_path();
        let i = subset(7, &[0, 1, 2]);
        assert!(affine_from_commuting(&s, &i, &subset(7, &[2, 3, 4])).is_err());
        assert!(affine_from_commuting(&s, &i, &subset(7, &[5, 6])).is_err());
        let h = CoxeterSystem::path(&[FIVE, THREE]);
        assert!(affine_from_commuting(&h, &subset(3, &[0]), &subset(3, &[2])).is_err());
    }

    fn arb_system(max_rank: usize) -> impl Strategy<Value = CoxeterSystem> {
        (1..=max_rank).prop_flat_map(|n| {
            proptest::collection::vec(
                prop_oneof![
                    Just(TWO),
                    Just(TWO),
                    Just(TWO),
                    Just(THREE),
                    Just(FOUR),
                    Just(SIX),
                    Just(Infinity)
                ],
                n * (n - 1) / 2,
            )
            .prop_map(move |ls| {
                let mut it = ls.into_iter();
                let edges: Vec<_> = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .map(|(i, j)| (i, j, it.next().unwrap()))
                    .collect();
                CoxeterSystem::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn witnesses_revalidate(s in arb_system(8)) {
            let verdict = is_hyperbolic(&s);
            if let Some(w) = verdict.witness() {
                prop_assert!(w.validate(&s));
            }
            if is_spherical(&s) {
                prop_assert!(verdict.is_hyperbolic());
            }
            if has_affine_parabolic(&s, false).is_some() {
                prop_assert!(!verdict.is_hyperbolic());
            }
        }

        #[test]
        fn verdict_is_permutation_invariant(
            (s, perm) in arb_system(7).prop_flat_map(|s| {
                let n = s.rank();
                (Just(s), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            })
        ) {
            let a = is_hyperbolic(&s);
            let b = is_hyperbolic(&s.permuted(&perm));
            prop_assert_eq!(a.is_hyperbolic(), b.is_hyperbolic());
            prop_assert_eq!(
                std::mem::discriminant(&a),
                std::mem::discriminant(&b)
            );
            if let (Some(ZxZWitness::AffineSubset { subset: x }), Some(ZxZWitness::AffineSubset { subset: y })) =
                (a.witness(), b.witness())
            {
                prop_assert_eq!(x.len(), y.len());
            }
        }
    }
}
