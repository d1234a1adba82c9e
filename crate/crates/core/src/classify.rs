//! Recognition of spherical and affine Coxeter diagrams.
//!
//! The recognizer works on the shape of the diagram: paths, one cycle, trees
//! with one or two branch vertices, and the label sequences along them. It is
//! independent of the Gram-matrix engine in [`crate::gram`], which serves as
//! its oracle.

use std::fmt;

use serde::Serialize;

use crate::enumerate::minimal_infinite_masks;
use crate::error::{CoreError, Result};
use crate::system::{bits, witness_order, CoxeterLabel, CoxeterSystem, VertexSubset};

/// Irreducible finite Coxeter groups. `B(n)` also stands for `C_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SphericalType {
    A(usize),
    B(usize),
    D(usize),
    E6,
    E7,
    E8,
    F4,
    G2,
    H3,
    H4,
    /// Dihedral of order `2m` for `m = 5` or `m >= 7`.
    I2(u16),
}

/// Irreducible affine Coxeter groups; the subscript is the rank minus one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AffineType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E6,
    E7,
    E8,
    F4,
    G2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TypeClass {
    Spherical(SphericalType),
    Affine(AffineType),
    Indefinite,
}

impl SphericalType {
    /// Dihedral type of order `2m`, normalized to its usual name.
    pub fn dihedral(m: u16) -> Option<Self> {
        match m {
            0..=2 => None,
            3 => Some(Self::A(2)),
            4 => Some(Self::B(2)),
            6 => Some(Self::G2),
            m => Some(Self::I2(m)),
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            Self::A(n) | Self::B(n) | Self::D(n) => n,
            Self::E6 => 6,
            Self::E7 => 7,
            Self::E8 => 8,
            Self::F4 | Self::H4 => 4,
            Self::H3 => 3,
            Self::G2 | Self::I2(_) => 2,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::A(n) => format!("A{n}"),
            Self::B(n) => format!("B{n}"),
            Self::D(n) => format!("D{n}"),
            Self::E6 => "E6".into(),
            Self::E7 => "E7".into(),
            Self::E8 => "E8".into(),
            Self::F4 => "F4".into(),
            Self::G2 => "G2".into(),
            Self::H3 => "H3".into(),
            Self::H4 => "H4".into(),
            Self::I2(m) => format!("I2({m})"),
        }
    }

    /// Other names for the same diagram.
    pub fn aliases(&self) -> Vec<String> {
        match self {
            Self::B(n) => vec![format!("C{n}")],
            Self::G2 => vec!["I2(6)".into()],
            Self::A(2) => vec!["I2(3)".into()],
            _ => vec![],
        }
    }

    /// Standard diagram, vertices numbered along the longest path.
    pub fn diagram(&self) -> CoxeterSystem {
        use CoxeterLabel as L;
        let threes = |k: usize| vec![L::THREE; k];
        match *self {
            Self::A(n) => CoxeterSystem::path(&threes(n.saturating_sub(1))),
            Self::B(n) => {
                let mut l = vec![L::FOUR];
                l.extend(threes(n - 2));
                CoxeterSystem::path(&l)
            }
            Self::D(n) => branched(&threes(n - 2), n - 3),
            Self::E6 => branched(&threes(4), 2),
            Self::E7 => branched(&threes(5), 2),
            Self::E8 => branched(&threes(6), 2),
            Self::F4 => CoxeterSystem::path(&[L::THREE, L::FOUR, L::THREE]),
            Self::G2 => CoxeterSystem::path(&[L::SIX]),
            Self::H3 => CoxeterSystem::path(&[L::FIVE, L::THREE]),
            Self::H4 => CoxeterSystem::path(&[L::FIVE, L::THREE, L::THREE]),
            Self::I2(m) => CoxeterSystem::path(&[L::Finite(m)]),
        }
    }
}

impl AffineType {
    pub fn rank(&self) -> usize {
        match *self {
            Self::A(n) | Self::B(n) | Self::C(n) | Self::D(n) => n + 1,
            Self::E6 => 7,
            Self::E7 => 8,
            Self::E8 => 9,
            Self::F4 => 5,
            Self::G2 => 3,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::A(n) => format!("~A{n}"),
            Self::B(n) => format!("~B{n}"),
            Self::C(n) => format!("~C{n}"),
            Self::D(n) => format!("~D{n}"),
            Self::E6 => "~E6".into(),
            Self::E7 => "~E7".into(),
            Self::E8 => "~E8".into(),
            Self::F4 => "~F4".into(),
            Self::G2 => "~G2".into(),
        }
    }

    /// `~C2` is also written `~B2`.
    pub fn aliases(&self) -> Vec<String> {
        match self {
            Self::C(2) => vec!["~B2".into()],
            _ => vec![],
        }
    }

    pub fn diagram(&self) -> CoxeterSystem {
        use CoxeterLabel as L;
        let threes = |k: usize| vec![L::THREE; k];
        match *self {
            Self::A(1) => CoxeterSystem::path(&[L::Infinity]),
            Self::A(n) => CoxeterSystem::cycle(&threes(n + 1)),
            Self::B(n) => {
                // Fork at vertex 1, a 4 on the far end.
                let mut l = threes(n - 2);
                l.push(L::FOUR);
                branched(&l, 1)
            }
            Self::C(n) => {
                let mut l = vec![L::FOUR];
                l.extend(threes(n - 2));
                l.push(L::FOUR);
                CoxeterSystem::path(&l)
            }
            Self::D(n) => {
                // Path 0..=n-2 with extra leaves on vertices 1 and n-3.
                let path = branched(&threes(n - 2), 1);
                let row: Vec<_> = (0..n)
                    .map(|i| if i == n - 3 { L::THREE } else { L::TWO })
                    .collect();
                path.with_vertex(&row).expect("rank within bounds")
            }
            Self::E6 => {
                let path = branched(&threes(4), 2);
                let row: Vec<_> = (0..6)
                    .map(|i| if i == 5 { L::THREE } else { L::TWO })
                    .collect();
                path.with_vertex(&row).expect("rank within bounds")
            }
            Self::E7 => branched(&threes(6), 3),
            Self::E8 => branched(&threes(7), 2),
            Self::F4 => CoxeterSystem::path(&[L::THREE, L::THREE, L::FOUR, L::THREE]),
            Self::G2 => CoxeterSystem::path(&[L::THREE, L::SIX]),
        }
    }
}

/// A path with edge labels `labels` plus one extra vertex joined by a 3-edge
/// to path vertex `at`.
fn branched(labels: &[CoxeterLabel], at: usize) -> CoxeterSystem {
    let path = CoxeterSystem::path(labels);
    let row: Vec<_> = (0..path.rank())
        .map(|i| {
            if i == at {
                CoxeterLabel::THREE
            } else {
                CoxeterLabel::TWO
            }
        })
        .collect();
    path.with_vertex(&row).expect("rank within bounds")
}

impl TypeClass {
    pub fn is_spherical(&self) -> bool {
        matches!(self, Self::Spherical(_))
    }

    /// Rank of the named type; `None` for indefinite diagrams.
    pub fn rank(&self) -> Option<usize> {
        match self {
            Self::Spherical(t) => Some(t.rank()),
            Self::Affine(t) => Some(t.rank()),
            Self::Indefinite => None,
        }
    }

    /// Standard diagram of the named type.
    pub fn diagram(&self) -> Option<CoxeterSystem> {
        match self {
            Self::Spherical(t) => Some(t.diagram()),
            Self::Affine(t) => Some(t.diagram()),
            Self::Indefinite => None,
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, Self::Affine(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Spherical(_) => "spherical",
            Self::Affine(_) => "affine",
            Self::Indefinite => "indefinite",
        }
    }

    pub fn name(&self) -> Option<String> {
        match self {
            Self::Spherical(t) => Some(t.name()),
            Self::Affine(t) => Some(t.name()),
            Self::Indefinite => None,
        }
    }

    pub fn aliases(&self) -> Vec<String> {
        match self {
            Self::Spherical(t) => t.aliases(),
            Self::Affine(t) => t.aliases(),
            Self::Indefinite => vec![],
        }
    }
}

impl fmt::Display for TypeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Spherical(t) => write!(f, "spherical {}", t.name()),
            Self::Affine(t) => write!(f, "affine {}", t.name()),
            Self::Indefinite => f.write_str("indefinite"),
        }
    }
}

/// Parses names such as `A4`, `C3`, `I2(5)`, `~A2` or `~B2`. Aliases map to
/// the type's usual name.
impl std::str::FromStr for TypeClass {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CoreError::UnknownType(s.to_string());
        let (affine, body) = match s.strip_prefix('~') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let letter = body.chars().next().ok_or_else(bad)?;
        let tail = &body[letter.len_utf8()..];
        let index = |min: usize| -> Result<usize> {
            let n: usize = tail.parse().map_err(|_| bad())?;
            if n < min || (!tail.is_empty() && tail.starts_with('0')) {
                return Err(bad());
            }
            Ok(n)
        };
        let class = if affine {
            let t = match (letter, tail) {
                ('A', _) => AffineType::A(index(1)?),
                ('B', "2") => AffineType::C(2),
                ('B', _) => AffineType::B(index(3)?),
                ('C', _) => AffineType::C(index(2)?),
                ('D', _) => AffineType::D(index(4)?),
                ('E', "6") => AffineType::E6,
                ('E', "7") => AffineType::E7,
                ('E', "8") => AffineType::E8,
                ('F', "4") => AffineType::F4,
                ('G', "2") => AffineType::G2,
                _ => return Err(bad()),
            };
            TypeClass::Affine(t)
        } else {
            let t = match (letter, tail) {
                ('A', _) => SphericalType::A(index(1)?),
                ('B' | 'C', _) => SphericalType::B(index(2)?),
                ('D', _) => SphericalType::D(index(4)?),
                ('E', "6") => SphericalType::E6,
                ('E', "7") => SphericalType::E7,
                ('E', "8") => SphericalType::E8,
                ('F', "4") => SphericalType::F4,
                ('G', "2") => SphericalType::G2,
                ('H', "3") => SphericalType::H3,
                ('H', "4") => SphericalType::H4,
                ('I', _) => {
                    let m = tail
                        .strip_prefix("2(")
                        .and_then(|r| r.strip_suffix(')'))
                        .and_then(|m| m.parse::<u16>().ok())
                        .ok_or_else(bad)?;
                    SphericalType::dihedral(m).ok_or_else(bad)?
                }
                _ => return Err(bad()),
            };
            TypeClass::Spherical(t)
        };
        if class.rank().is_some_and(|r| r > crate::system::MAX_RANK) {
            return Err(bad());
        }
        Ok(class)
    }
}

impl Serialize for TypeClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("type", self.kind())?;
        if let Some(name) = self.name() {
            map.serialize_entry("name", &name)?;
        }
        let aliases = self.aliases();
        if !aliases.is_empty() {
            map.serialize_entry("aliases", &aliases)?;
        }
        map.end()
    }
}

impl Serialize for SphericalType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl Serialize for AffineType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

/// Classifies a connected diagram by shape.
pub fn classify_irreducible(system: &CoxeterSystem) -> Result<TypeClass> {
    let components = system.components();
    if components.len() != 1 {
        return Err(CoreError::NotIrreducible {
            components: components.len(),
        });
    }
    Ok(classify_mask(system, system.full_subset().mask()))
}

/// Componentwise classification, components sorted by smallest member.
pub fn classify(system: &CoxeterSystem) -> Vec<(VertexSubset, TypeClass)> {
    system
        .components()
        .into_iter()
        .map(|c| (c, classify_mask(system, c.mask())))
        .collect()
}

/// Every component is spherical, i.e. `W` is finite.
pub fn is_spherical(system: &CoxeterSystem) -> bool {
    is_spherical_mask(system, system.full_subset().mask())
}

/// Every special subgroup generated by at most `k` generators is finite.
pub fn is_k_spherical(system: &CoxeterSystem, k: usize) -> bool {
    minimal_infinite_masks(system)
        .iter()
        .all(|m| m.count_ones() as usize > k)
}

/// First irreducible affine special subgroup in witness order (size, then
/// lexicographic). Rank-2 affine subsets (an `∞` edge) are only reported when
/// `include_rank2_infty` is set.
pub fn has_affine_parabolic(
    system: &CoxeterSystem,
    include_rank2_infty: bool,
) -> Option<VertexSubset> {
    // Irreducible affine subsets are minimal infinite, so it suffices to scan
    // those.
    let mut candidates = minimal_infinite_masks(system);
    candidates.sort_by(|&a, &b| witness_order(a, b));
    candidates
        .into_iter()
        .find(|&m| {
            (m.count_ones() >= 3 || include_rank2_infty) && classify_mask(system, m).is_affine()
        })
        .map(|m| VertexSubset::from_mask(system.rank(), m))
}

/// Largest `|J|` such that `W_J` is finite.
pub fn max_spherical_rank(system: &CoxeterSystem) -> usize {
    let mut best = 0;
    let mut seen = std::collections::HashSet::new();
    let mut pieces: Vec<Vec<u32>> = vec![Vec::new(); system.rank()];
    // Connected spherical subsets grouped by their smallest vertex.
    for (v, owned) in pieces.iter_mut().enumerate() {
        let mut stack = vec![1u32 << v];
        seen.insert(1u32 << v);
        while let Some(set) = stack.pop() {
            owned.push(set);
            let mut frontier = bits(set).fold(0, |acc, u| acc | system.neighbors(u)) & !set;
            // Only grow upwards so each set is owned by its minimum.
            frontier &= !((1u32 << v) - 1);
            for u in bits(frontier) {
                let next = set | (1 << u);
                if seen.insert(next) && classify_mask(system, next).is_spherical() {
                    stack.push(next);
                }
            }
        }
    }
    for list in &mut pieces {
        list.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
    }
    pack_spherical(system, &pieces, system.full_subset().mask(), 0, &mut best);
    best
}

/// Branch and bound over unions of pairwise non-adjacent connected
/// spherical pieces.
fn pack_spherical(
    system: &CoxeterSystem,
    pieces: &[Vec<u32>],
    available: u32,
    taken: usize,
    best: &mut usize,
) {
    if taken + available.count_ones() as usize <= *best {
        return;
    }
    if available == 0 {
        *best = taken;
        return;
    }
    let v = available.trailing_zeros() as usize;
    for &piece in &pieces[v] {
        if piece & !available != 0 {
            continue;
        }
        let blocked = bits(piece).fold(piece, |acc, u| acc | system.neighbors(u));
        pack_spherical(
            system,
            pieces,
            available & !blocked,
            taken + piece.count_ones() as usize,
            best,
        );
    }
    pack_spherical(system, pieces, available & !(1 << v), taken, best);
}

/// Every crystallographic spherical and affine type of rank at most
/// `max_rank`.
pub fn crystallographic_table(max_rank: usize) -> Vec<TypeClass> {
    let mut out = Vec::new();
    for n in 1..=max_rank {
        out.push(TypeClass::Spherical(SphericalType::A(n)));
        if n >= 2 {
            out.push(TypeClass::Spherical(SphericalType::B(n)));
        }
        if n >= 4 {
            out.push(TypeClass::Spherical(SphericalType::D(n)));
        }
    }
    let exceptional = [
        SphericalType::E6,
        SphericalType::E7,
        SphericalType::E8,
        SphericalType::F4,
        SphericalType::G2,
    ];
    out.extend(exceptional.map(TypeClass::Spherical));
    for n in 1..max_rank {
        out.push(TypeClass::Affine(AffineType::A(n)));
        if n >= 2 {
            out.push(TypeClass::Affine(AffineType::C(n)));
        }
        if n >= 3 {
            out.push(TypeClass::Affine(AffineType::B(n)));
        }
        if n >= 4 {
            out.push(TypeClass::Affine(AffineType::D(n)));
        }
    }
    let exceptional = [
        AffineType::E6,
        AffineType::E7,
        AffineType::E8,
        AffineType::F4,
        AffineType::G2,
    ];
    out.extend(exceptional.map(TypeClass::Affine));
    out.retain(|t| t.rank().is_some_and(|r| r <= max_rank));
    out
}

pub(crate) fn is_spherical_mask(system: &CoxeterSystem, mask: u32) -> bool {
    system
        .components_of(mask)
        .into_iter()
        .all(|c| classify_mask(system, c).is_spherical())
}

/// Every component is spherical or affine.
pub(crate) fn is_spherical_or_affine_mask(system: &CoxeterSystem, mask: u32) -> bool {
    system
        .components_of(mask)
        .into_iter()
        .all(|c| !matches!(classify_mask(system, c), TypeClass::Indefinite))
}

/// Shape recognizer for the connected subdiagram induced on `mask`.
pub(crate) fn classify_mask(system: &CoxeterSystem, mask: u32) -> TypeClass {
    let n = mask.count_ones() as usize;
    debug_assert!(n > 0 && system.is_connected_mask(mask));
    let first = mask.trailing_zeros() as usize;
    if n == 1 {
        return TypeClass::Spherical(SphericalType::A(1));
    }
    if n == 2 {
        let second = (mask & (mask - 1)).trailing_zeros() as usize;
        return match system.label(first, second) {
            CoxeterLabel::Infinity => TypeClass::Affine(AffineType::A(1)),
            CoxeterLabel::Finite(m) => SphericalType::dihedral(m)
                .map(TypeClass::Spherical)
                .unwrap_or(TypeClass::Indefinite),
        };
    }

    let degree = |v: usize| (system.neighbors(v) & mask).count_ones() as usize;
    let label = |u: usize, v: usize| match system.label(u, v) {
        CoxeterLabel::Finite(m) => Some(m),
        CoxeterLabel::Infinity => None,
    };

    let mut edges = 0;
    let mut branch = Vec::new();
    for v in bits(mask) {
        let d = degree(v);
        edges += d;
        if d >= 3 {
            branch.push(v);
        }
        // No spherical or affine diagram of rank >= 3 has an ∞ edge.
        if bits(system.neighbors(v) & mask).any(|u| label(u, v).is_none()) {
            return TypeClass::Indefinite;
        }
    }
    let edges = edges / 2;

    if edges == n {
        let is_cycle = bits(mask).all(|v| degree(v) == 2);
        let all_threes =
            bits(mask).all(|v| bits(system.neighbors(v) & mask).all(|u| label(u, v) == Some(3)));
        return if is_cycle && all_threes {
            TypeClass::Affine(AffineType::A(n - 1))
        } else {
            TypeClass::Indefinite
        };
    }
    if edges != n - 1 {
        return TypeClass::Indefinite;
    }

    // The subdiagram is a tree from here on.
    let walk = |from: usize, start: usize| -> Vec<u16> {
        // Labels along the branchless walk that leaves `from` through `start`.
        let mut out = vec![label(from, start).unwrap()];
        let (mut prev, mut cur) = (from, start);
        while degree(cur) == 2 {
            let next = (system.neighbors(cur) & mask & !(1 << prev)).trailing_zeros() as usize;
            out.push(label(cur, next).unwrap());
            prev = cur;
            cur = next;
        }
        out
    };

    match branch.as_slice() {
        [] => {
            let end = bits(mask).find(|&v| degree(v) == 1).unwrap();
            let start = (system.neighbors(end) & mask).trailing_zeros() as usize;
            classify_path(&walk(end, start))
        }
        [center] => {
            let center = *center;
            let d = degree(center);
            let arms: Vec<Vec<u16>> = bits(system.neighbors(center) & mask)
                .map(|u| walk(center, u))
                .collect();
            match d {
                3 => classify_tripod(arms),
                4 if n == 5 && arms.iter().all(|a| a == &[3]) => {
                    TypeClass::Affine(AffineType::D(4))
                }
                _ => TypeClass::Indefinite,
            }
        }
        [u, v] => {
            let two_leaves = |b: usize| {
                degree(b) == 3
                    && bits(system.neighbors(b) & mask)
                        .filter(|&w| degree(w) == 1)
                        .count()
                        == 2
            };
            let all_threes = bits(mask)
                .all(|x| bits(system.neighbors(x) & mask).all(|y| label(x, y) == Some(3)));
            if two_leaves(*u) && two_leaves(*v) && all_threes {
                TypeClass::Affine(AffineType::D(n - 1))
            } else {
                TypeClass::Indefinite
            }
        }
        _ => TypeClass::Indefinite,
    }
}

fn classify_path(seq: &[u16]) -> TypeClass {
    use TypeClass::{Affine, Indefinite, Spherical};
    let n = seq.len() + 1;
    let rev: Vec<u16> = seq.iter().rev().copied().collect();
    let either = |pat: &[u16]| seq == pat || rev == pat;
    let inner_threes = |s: &[u16]| s.iter().all(|&m| m == 3);

    if inner_threes(seq) {
        return Spherical(SphericalType::A(n));
    }
    let (head, tail) = (seq[0], seq[n - 2]);
    let middle = &seq[1..n - 2];
    if inner_threes(middle) {
        match (head, tail) {
            (4, 3) | (3, 4) => return Spherical(SphericalType::B(n)),
            (4, 4) => return Affine(AffineType::C(n - 1)),
            _ => {}
        }
    }
    if either(&[3, 4, 3]) {
        Spherical(SphericalType::F4)
    } else if either(&[5, 3]) {
        Spherical(SphericalType::H3)
    } else if either(&[5, 3, 3]) {
        Spherical(SphericalType::H4)
    } else if either(&[3, 3, 4, 3]) {
        Affine(AffineType::F4)
    } else if either(&[3, 6]) {
        Affine(AffineType::G2)
    } else {
        Indefinite
    }
}

/// A tree with exactly one branch vertex, of degree 3; `arms` are the label
/// sequences walking outwards from it.
fn classify_tripod(mut arms: Vec<Vec<u16>>) -> TypeClass {
    use TypeClass::{Affine, Indefinite, Spherical};
    if arms.iter().flatten().all(|&m| m == 3) {
        let mut len: Vec<usize> = arms.iter().map(Vec::len).collect();
        len.sort_unstable();
        return match len.as_slice() {
            [1, 1, r] => Spherical(SphericalType::D(r + 3)),
            [1, 2, 2] => Spherical(SphericalType::E6),
            [1, 2, 3] => Spherical(SphericalType::E7),
            [1, 2, 4] => Spherical(SphericalType::E8),
            [2, 2, 2] => Affine(AffineType::E6),
            [1, 3, 3] => Affine(AffineType::E7),
            [1, 2, 5] => Affine(AffineType::E8),
            _ => Indefinite,
        };
    }
    // ~B_n: two single-edge arms and a 4 on the outermost edge of the third.
    arms.sort_by_key(|a| a.iter().any(|&m| m != 3));
    let (plain, special) = (&arms[..2], &arms[2]);
    let last = special.len() - 1;
    let special_ok = special[last] == 4 && special[..last].iter().all(|&m| m == 3);
    if special_ok && plain.iter().all(|a| a == &[3]) {
        Affine(AffineType::B(special.len() + 2))
    } else {
        Indefinite
    }
}
