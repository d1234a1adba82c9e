//! Coxeter systems encoded by their symmetric label matrix.
//!
//! Vertices are `0..rank`. A pair with label 2 commutes and has no edge in
//! the Coxeter diagram; every label `>= 3` (including infinity) is an edge.
//! Vertex subsets are stored as `u32` bitmasks, which caps the rank at 32.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Largest rank a [`CoxeterSystem`] may have.
pub const MAX_RANK: usize = 32;

/// Entry `m(s, t)` of a Coxeter matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoxeterLabel {
    Finite(u16),
    Infinity,
}

impl CoxeterLabel {
    pub const ONE: Self = Self::Finite(1);
    pub const TWO: Self = Self::Finite(2);
    pub const THREE: Self = Self::Finite(3);
    pub const FOUR: Self = Self::Finite(4);
    pub const FIVE: Self = Self::Finite(5);
    pub const SIX: Self = Self::Finite(6);

    pub fn finite(self) -> Option<u16> {
        match self {
            Self::Finite(m) => Some(m),
            Self::Infinity => None,
        }
    }

    /// Whether the pair is joined by an edge in the Coxeter diagram.
    #[inline]
    pub fn is_edge(self) -> bool {
        !matches!(self, Self::Finite(0..=2))
    }

    pub fn is_crystallographic(self) -> bool {
        matches!(self, Self::Finite(2 | 3 | 4 | 6) | Self::Infinity)
    }

    pub fn is_simply_laced(self) -> bool {
        matches!(self, Self::Finite(2 | 3))
    }
}

impl From<u16> for CoxeterLabel {
    fn from(m: u16) -> Self {
        Self::Finite(m)
    }
}

impl fmt::Display for CoxeterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(m) => write!(f, "{m}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid Coxeter label {0:?}")]
pub struct ParseLabelError(pub String);

impl FromStr for CoxeterLabel {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(Self::Infinity),
            t => t
                .parse::<u16>()
                .ok()
                .filter(|&m| m >= 1)
                .map(Self::Finite)
                .ok_or_else(|| ParseLabelError(s.to_string())),
        }
    }
}

impl Serialize for CoxeterLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(m) => s.serialize_u16(*m),
            Self::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for CoxeterLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u16),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(m) => Ok(Self::Finite(m)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A subset `J` of the generators of a rank-`n` system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexSubset {
    rank: usize,
    mask: u32,
}

impl VertexSubset {
    pub fn new(rank: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_rank(rank)?;
        let mut mask = 0u32;
        for index in indices {
            if index >= rank {
                return Err(CoreError::IndexOutOfRange { index, rank });
            }
            if mask & (1 << index) != 0 {
                return Err(CoreError::DuplicateIndex(index));
            }
            mask |= 1 << index;
        }
        Ok(Self { rank, mask })
    }

    /// Builds a subset from a bitmask; bits at or above `rank` are dropped.
    pub fn from_mask(rank: usize, mask: u32) -> Self {
        debug_assert!(rank <= MAX_RANK);
        Self {
            rank,
            mask: mask & full_mask(rank),
        }
    }

    pub fn empty(rank: usize) -> Self {
        Self::from_mask(rank, 0)
    }

    pub fn full(rank: usize) -> Self {
        Self::from_mask(rank, full_mask(rank))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.rank && self.mask & (1 << index) != 0
    }

    /// Member indices in ascending order.
    pub fn indices(&self) -> Vec<usize> {
        bits(self.mask).collect()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.mask & other.mask == 0
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.mask & !other.mask == 0
    }

    /// Witness order: by size, then lexicographically by sorted indices.
    pub fn witness_cmp(&self, other: &Self) -> std::cmp::Ordering {
        witness_order(self.mask, other.mask)
    }
}

impl fmt::Display for VertexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in bits(self.mask).enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for VertexSubset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(bits(self.mask))
    }
}

/// Iterates the set bits of `mask` in ascending order.
pub(crate) fn bits(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

pub(crate) fn full_mask(rank: usize) -> u32 {
    if rank >= 32 {
        u32::MAX
    } else {
        (1u32 << rank) - 1
    }
}

/// Size first, then lexicographic on the ascending index lists.
pub(crate) fn witness_order(a: u32, b: u32) -> std::cmp::Ordering {
    a.count_ones()
        .cmp(&b.count_ones())
        .then_with(|| bits(a).cmp(bits(b)))
}

fn check_rank(rank: usize) -> Result<()> {
    if rank > MAX_RANK {
        Err(CoreError::RankTooLarge {
            rank,
            max: MAX_RANK,
        })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    DiagonalNotOne,
    Asymmetric,
    OffDiagonalBelowTwo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::DiagonalNotOne => "diagonal must be 1",
            ViolationKind::Asymmetric => "symmetry",
            ViolationKind::OffDiagonalBelowTwo => "off-diagonal label must be at least 2",
        };
        write!(f, "({}, {}): {what}", self.row, self.col)
    }
}

/// Outcome of [`CoxeterSystem::validate`]; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A Coxeter system `(W, S)` with finite `S`, given by its label matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoxeterSystem {
    rank: usize,
    labels: Vec<CoxeterLabel>,
    // Neighbour masks in the Coxeter diagram; derived from `labels`.
    adjacency: Vec<u32>,
}

impl CoxeterSystem {
    /// Builds a system from matrix rows without checking the Coxeter matrix
    /// invariants. Use [`validate`](Self::validate) to inspect the result.
    pub fn from_rows_unchecked(rows: &[Vec<CoxeterLabel>]) -> Result<Self> {
        let rank = rows.len();
        check_rank(rank)?;
        let mut labels = Vec::with_capacity(rank * rank);
        for (row, entries) in rows.iter().enumerate() {
            if entries.len() != rank {
                return Err(CoreError::NotSquare {
                    row,
                    len: entries.len(),
                    rank,
                });
            }
            labels.extend_from_slice(entries);
        }
        Ok(Self::from_flat(rank, labels))
    }

    /// Builds and validates a system from matrix rows.
    pub fn from_rows(rows: &[Vec<CoxeterLabel>]) -> Result<Self> {
        let system = Self::from_rows_unchecked(rows)?;
        let report = system.validate();
        if report.is_ok() {
            Ok(system)
        } else {
            Err(CoreError::Invalid(report))
        }
    }

    /// Builds a system where every listed pair carries the given label and all
    /// other pairs commute. Later entries for the same pair win.
    pub fn from_edges(
        rank: usize,
        edges: impl IntoIterator<Item = (usize, usize, CoxeterLabel)>,
    ) -> Result<Self> {
        check_rank(rank)?;
        let mut labels = vec![CoxeterLabel::TWO; rank * rank];
        for i in 0..rank {
            labels[i * rank + i] = CoxeterLabel::ONE;
        }
        for (i, j, m) in edges {
            for index in [i, j] {
                if index >= rank {
                    return Err(CoreError::IndexOutOfRange { index, rank });
                }
            }
            labels[i * rank + j] = m;
            labels[j * rank + i] = m;
        }
        let system = Self::from_flat(rank, labels);
        let report = system.validate();
        if report.is_ok() {
            Ok(system)
        } else {
            Err(CoreError::Invalid(report))
        }
    }

    /// Rank-`n` system with all generators commuting (type `A1^n`).
    pub fn commuting(rank: usize) -> Self {
        Self::from_edges(rank, []).expect("rank within bounds")
    }

    /// Path `0 - 1 - ... - k` whose consecutive edges carry `labels`.
    pub fn path(labels: &[CoxeterLabel]) -> Self {
        let rank = labels.len() + 1;
        Self::from_edges(rank, labels.iter().enumerate().map(|(i, &m)| (i, i + 1, m)))
            .expect("valid path labels")
    }

    /// Cycle whose edge `i` joins `i` and `i + 1 mod n`.
    pub fn cycle(labels: &[CoxeterLabel]) -> Self {
        let rank = labels.len();
        Self::from_edges(
            rank,
            labels
                .iter()
                .enumerate()
                .map(|(i, &m)| (i, (i + 1) % rank, m)),
        )
        .expect("valid cycle labels")
    }

    pub(crate) fn from_flat(rank: usize, labels: Vec<CoxeterLabel>) -> Self {
        debug_assert_eq!(labels.len(), rank * rank);
        let adjacency = (0..rank)
            .map(|i| {
                (0..rank)
                    .filter(|&j| j != i && labels[i * rank + j].is_edge())
                    .fold(0u32, |acc, j| acc | (1 << j))
            })
            .collect();
        Self {
            rank,
            labels,
            adjacency,
        }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn label(&self, s: usize, t: usize) -> CoxeterLabel {
        self.labels[s * self.rank + t]
    }

    /// Row-major label matrix.
    pub fn labels(&self) -> &[CoxeterLabel] {
        &self.labels
    }

    pub fn rows(&self) -> Vec<Vec<CoxeterLabel>> {
        self.labels
            .chunks(self.rank.max(1))
            .map(<[_]>::to_vec)
            .take(self.rank)
            .collect()
    }

    /// Diagram neighbours of `s` as a bitmask.
    #[inline]
    pub fn neighbors(&self, s: usize) -> u32 {
        self.adjacency[s]
    }

    pub fn full_subset(&self) -> VertexSubset {
        VertexSubset::full(self.rank)
    }

    #[inline]
    pub(crate) fn full_mask(&self) -> u32 {
        full_mask(self.rank)
    }

    /// Diagram edges `(i, j, m)` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, CoxeterLabel)> + '_ {
        (0..self.rank).flat_map(move |i| {
            (i + 1..self.rank).filter_map(move |j| {
                let m = self.label(i, j);
                m.is_edge().then_some((i, j, m))
            })
        })
    }

    /// Checks every Coxeter matrix invariant and lists each violation.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for i in 0..self.rank {
            if self.label(i, i) != CoxeterLabel::ONE {
                violations.push(Violation {
                    row: i,
                    col: i,
                    kind: ViolationKind::DiagonalNotOne,
                });
            }
        }
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                if self.label(i, j) != self.label(j, i) {
                    violations.push(Violation {
                        row: i,
                        col: j,
                        kind: ViolationKind::Asymmetric,
                    });
                }
                for (r, c) in [(i, j), (j, i)] {
                    if matches!(self.label(r, c), CoxeterLabel::Finite(0 | 1)) {
                        violations.push(Violation {
                            row: r,
                            col: c,
                            kind: ViolationKind::OffDiagonalBelowTwo,
                        });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    fn check_subset(&self, subset: &VertexSubset) -> Result<()> {
        if subset.rank() != self.rank {
            return Err(CoreError::RankMismatch {
                subset: subset.rank(),
                system: self.rank,
            });
        }
        Ok(())
    }

    /// The diagram of the special subgroup `W_J`, vertices in ascending order.
    pub fn restrict(&self, subset: &VertexSubset) -> Result<Self> {
        self.check_subset(subset)?;
        Ok(self.restrict_mask(subset.mask()))
    }

    pub(crate) fn restrict_mask(&self, mask: u32) -> Self {
        let keep: Vec<usize> = bits(mask).collect();
        let rank = keep.len();
        let mut labels = Vec::with_capacity(rank * rank);
        for &i in &keep {
            for &j in &keep {
                labels.push(self.label(i, j));
            }
        }
        Self::from_flat(rank, labels)
    }

    /// Vertex `i` of the result is vertex `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.rank, "permutation length mismatch");
        let n = self.rank;
        let mut labels = Vec::with_capacity(n * n);
        for &i in order {
            for &j in order {
                labels.push(self.label(i, j));
            }
        }
        Self::from_flat(n, labels)
    }

    /// Appends one vertex whose labels to the existing vertices are `row`.
    pub fn with_vertex(&self, row: &[CoxeterLabel]) -> Result<Self> {
        assert_eq!(row.len(), self.rank, "row length mismatch");
        let n = self.rank + 1;
        check_rank(n)?;
        let mut labels = Vec::with_capacity(n * n);
        for (i, &m) in row.iter().enumerate() {
            labels.extend_from_slice(&self.labels[i * self.rank..(i + 1) * self.rank]);
            labels.push(m);
        }
        labels.extend_from_slice(row);
        labels.push(CoxeterLabel::ONE);
        Ok(Self::from_flat(n, labels))
    }

    /// Disjoint union, `other`'s vertices shifted after `self`'s.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        let shift = self.rank;
        Self::from_edges(
            self.rank + other.rank,
            self.edges()
                .chain(other.edges().map(|(i, j, m)| (i + shift, j + shift, m))),
        )
    }

    /// Connected components of the diagram (edges where `m >= 3`), sorted by
    /// smallest member.
    pub fn components(&self) -> Vec<VertexSubset> {
        self.components_of(self.full_mask())
            .into_iter()
            .map(|m| VertexSubset::from_mask(self.rank, m))
            .collect()
    }

    /// Components of the subdiagram induced on `mask`, sorted by smallest
    /// member.
    pub(crate) fn components_of(&self, mask: u32) -> Vec<u32> {
        let mut rest = mask;
        let mut out = Vec::new();
        while rest != 0 {
            let comp = self.component_containing(mask, rest.trailing_zeros() as usize);
            rest &= !comp;
            out.push(comp);
        }
        out
    }

    /// The component of `start` inside the subdiagram induced on `mask`.
    #[inline]
    pub(crate) fn component_containing(&self, mask: u32, start: usize) -> u32 {
        let mut comp = 1u32 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adjacency[v] & mask & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        comp
    }

    pub(crate) fn is_connected_mask(&self, mask: u32) -> bool {
        mask == 0 || self.component_containing(mask, mask.trailing_zeros() as usize) == mask
    }

    pub fn is_connected(&self) -> bool {
        self.rank > 0 && self.is_connected_mask(self.full_mask())
    }

    /// All off-diagonal labels lie in `{2, 3}`.
    pub fn is_simply_laced(&self) -> bool {
        self.off_diagonal().all(CoxeterLabel::is_simply_laced)
    }

    /// All off-diagonal labels lie in `{2, 3, 4, 6, inf}`.
    pub fn is_crystallographic(&self) -> bool {
        self.off_diagonal().all(CoxeterLabel::is_crystallographic)
    }

    fn off_diagonal(&self) -> impl Iterator<Item = CoxeterLabel> + '_ {
        (0..self.rank).flat_map(move |i| (i + 1..self.rank).map(move |j| self.label(i, j)))
    }
}

/// Serialized as `{"rank": n, "edges": [[i, j, m], ...]}` with `i < j`.
impl Serialize for CoxeterSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let edges: Vec<(usize, usize, CoxeterLabel)> = self.edges().collect();
        let mut st = s.serialize_struct("CoxeterSystem", 2)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("edges", &edges)?;
        st.end()
    }
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoxeterSystem(rank {}", self.rank)?;
        for (i, j, m) in self.edges() {
            write!(f, ", {i}-{j}:{m}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::test_labels::*;

    fn l(m: u16) -> CoxeterLabel {
        Finite(m)
    }

    #[test]
    fn validate_accepts_a2() {
        let s = CoxeterSystem::from_rows_unchecked(&[vec![l(1), l(3)], vec![l(3), l(1)]]).unwrap();
        assert!(s.validate().is_ok());
    }

    #[test]
    fn validate_reports_bad_diagonal() {
        let s = CoxeterSystem::from_rows_unchecked(&[vec![l(2), l(3)], vec![l(3), l(1)]]).unwrap();
        let report = s.validate();
        assert_eq!(
            report.violations,
            vec![Violation {
                row: 0,
                col: 0,
                kind: ViolationKind::DiagonalNotOne
            }]
        );
        assert!(report.to_string().contains("diagonal must be 1"));
    }

    #[test]
    fn validate_reports_asymmetry() {
        let s = CoxeterSystem::from_rows_unchecked(&[vec![l(1), l(3)], vec![l(4), l(1)]]).unwrap();
        let report = s.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::Asymmetric);
        assert!(report.to_string().contains("symmetry"));
    }

    #[test]
    fn validate_lists_every_violation() {
        let rows = vec![
            vec![l(1), l(1), Infinity],
            vec![l(1), l(3), l(2)],
            vec![l(5), l(2), l(1)],
        ];
        let report = CoxeterSystem::from_rows_unchecked(&rows)
            .unwrap()
            .validate();
        let kinds: Vec<_> = report
            .violations
            .iter()
            .map(|v| (v.row, v.col, v.kind))
            .collect();
        assert!(kinds.contains(&(1, 1, ViolationKind::DiagonalNotOne)));
        assert!(kinds.contains(&(0, 1, ViolationKind::OffDiagonalBelowTwo)));
        assert!(kinds.contains(&(1, 0, ViolationKind::OffDiagonalBelowTwo)));
        assert!(kinds.contains(&(0, 2, ViolationKind::Asymmetric)));
        assert!(CoxeterSystem::from_rows(&rows).is_err());
    }

    #[test]
    fn non_square_rows_are_rejected() {
        let err = CoxeterSystem::from_rows_unchecked(&[vec![l(1), l(2)], vec![l(1)]]).unwrap_err();
        assert!(matches!(err, CoreError::NotSquare { row: 1, .. }));
    }

    #[test]
    fn restrict_extracts_submatrix() {
        let a3 = CoxeterSystem::path(&[THREE, THREE]);
        let a2 = a3.restrict(&VertexSubset::new(3, [0, 1]).unwrap()).unwrap();
        assert_eq!(a2, CoxeterSystem::path(&[THREE]));

        let tri = CoxeterSystem::cycle(&[THREE, THREE, THREE]);
        let edge = tri
            .restrict(&VertexSubset::new(3, [0, 2]).unwrap())
            .unwrap();
        assert_eq!(edge, CoxeterSystem::path(&[THREE]));

        let empty = tri.restrict(&VertexSubset::empty(3)).unwrap();
        assert_eq!(empty.rank(), 0);
    }

    #[test]
    fn subset_errors() {
        assert_eq!(
            VertexSubset::new(3, [0, 3]).unwrap_err(),
            CoreError::IndexOutOfRange { index: 3, rank: 3 }
        );
        assert_eq!(
            VertexSubset::new(3, [1, 1]).unwrap_err(),
            CoreError::DuplicateIndex(1)
        );
        let a3 = CoxeterSystem::path(&[THREE, THREE]);
        assert!(matches!(
            a3.restrict(&VertexSubset::full(4)),
            Err(CoreError::RankMismatch { .. })
        ));
    }

    #[test]
    fn components_follow_edges_only() {
        let commuting = CoxeterSystem::path(&[TWO]);
        assert_eq!(commuting.components().len(), 2);
        assert_eq!(CoxeterSystem::path(&[THREE]).components().len(), 1);

        let a2a2 = CoxeterSystem::from_edges(4, [(0, 1, THREE), (2, 3, THREE)]).unwrap();
        let comps = a2a2.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].indices(), vec![0, 1]);
        assert_eq!(comps[1].indices(), vec![2, 3]);

        let interleaved = CoxeterSystem::from_edges(4, [(0, 2, THREE), (1, 3, Infinity)]).unwrap();
        let comps = interleaved.components();
        assert_eq!(comps[0].indices(), vec![0, 2]);
        assert_eq!(comps[1].indices(), vec![1, 3]);
    }

    #[test]
    fn lacing_predicates() {
        let tri = CoxeterSystem::cycle(&[THREE, THREE, THREE]);
        assert!(tri.is_simply_laced());
        assert!(tri.is_crystallographic());
        let five = CoxeterSystem::path(&[FIVE]);
        assert!(!five.is_crystallographic());
        assert!(!five.is_simply_laced());
        let inf = CoxeterSystem::path(&[Infinity, SIX, FOUR]);
        assert!(inf.is_crystallographic());
    }

    #[test]
    fn with_vertex_appends_last() {
        let a2 = CoxeterSystem::path(&[THREE]);
        let b3 = a2.with_vertex(&[TWO, FOUR]).unwrap();
        assert_eq!(b3, CoxeterSystem::path(&[THREE, FOUR]));
    }

    #[test]
    fn label_parsing() {
        assert_eq!("inf".parse::<CoxeterLabel>().unwrap(), Infinity);
        assert_eq!("7".parse::<CoxeterLabel>().unwrap(), Finite(7));
        assert!("0".parse::<CoxeterLabel>().is_err());
        assert!("x".parse::<CoxeterLabel>().is_err());
    }

    #[test]
    fn witness_order_is_size_then_lex() {
        let a = 0b0110; // {1,2}
        let b = 0b1001; // {0,3}
        let c = 0b0111; // {0,1,2}
        assert_eq!(witness_order(b, a), std::cmp::Ordering::Less);
        assert_eq!(witness_order(a, c), std::cmp::Ordering::Less);
    }
}
