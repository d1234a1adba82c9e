//! Enumeration of Coxeter diagrams up to isomorphism.
//!
//! Diagrams of rank `r` are grown from the accepted diagrams of rank `r - 1`
//! by appending one vertex with every admissible label vector. Hereditary
//! filters are checked on label prefixes, so most vectors are cut off long
//! before the child is built. Children are deduplicated by canonical code
//! and each level is returned sorted by that code.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{canonical_form, CanonicalCode, MAX_CANON_RANK};
use crate::classify::{classify_mask, is_spherical_mask, is_spherical_or_affine_mask, TypeClass};
use crate::error::{CoreError, Result};
use crate::system::{bits, witness_order, CoxeterLabel, CoxeterSystem, VertexSubset};

const PARENT_CHUNK: usize = 256;

/// Largest rank for the minimal-infinite census.
pub const MAX_MINIMAL_INFINITE_RANK: usize = 8;

/// Allowed labels; always contains 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelSet(Vec<CoxeterLabel>);

impl LabelSet {
    pub fn new(labels: impl IntoIterator<Item = CoxeterLabel>) -> Result<Self> {
        let mut labels: Vec<CoxeterLabel> = labels.into_iter().collect();
        labels.sort_unstable();
        labels.dedup();
        if let Some(bad) = labels
            .iter()
            .find(|m| matches!(m, CoxeterLabel::Finite(0 | 1)))
        {
            return Err(CoreError::Precondition(format!(
                "label {bad} cannot appear off the diagonal"
            )));
        }
        if !labels.contains(&CoxeterLabel::TWO) {
            return Err(CoreError::Precondition("label set must contain 2".into()));
        }
        Ok(Self(labels))
    }

    /// `{2, 3}`.
    pub fn simply_laced() -> Self {
        Self(vec![CoxeterLabel::TWO, CoxeterLabel::THREE])
    }

    /// `{2, 3, 4, 6}`.
    pub fn crystallographic_finite() -> Self {
        Self(vec![
            CoxeterLabel::TWO,
            CoxeterLabel::THREE,
            CoxeterLabel::FOUR,
            CoxeterLabel::SIX,
        ])
    }

    /// `{2, 3, 4, 6, inf}`.
    pub fn crystallographic() -> Self {
        let mut set = Self::crystallographic_finite();
        set.0.push(CoxeterLabel::Infinity);
        set
    }

    pub fn labels(&self) -> &[CoxeterLabel] {
        &self.0
    }

    pub fn contains(&self, m: CoxeterLabel) -> bool {
        self.0.contains(&m)
    }

    pub fn is_crystallographic(&self) -> bool {
        self.0.iter().all(|m| m.is_crystallographic())
    }

    pub fn is_simply_laced(&self) -> bool {
        self.0.iter().all(|m| m.is_simply_laced())
    }
}

impl FromStr for LabelSet {
    type Err = CoreError;

    /// Comma separated, e.g. `2,3,4,inf`.
    fn from_str(s: &str) -> Result<Self> {
        let labels = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<CoxeterLabel>()
                    .map_err(|e| CoreError::Precondition(e.0))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels)
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl Serialize for LabelSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Which diagrams an enumeration keeps. All conditions are hereditary except
/// connectivity, which is preserved by deleting a suitable vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumFilter {
    pub label_set: LabelSet,
    pub connected_only: bool,
    pub simply_laced: bool,
    pub crystallographic: bool,
    /// Every special subgroup of rank at most `k` is finite.
    pub k_spherical: Option<usize>,
    /// Every proper special subgroup is spherical or affine, componentwise.
    pub all_proper_spherical_or_affine: bool,
}

impl EnumFilter {
    pub fn new(label_set: LabelSet) -> Self {
        Self {
            label_set,
            connected_only: false,
            simply_laced: false,
            crystallographic: false,
            k_spherical: None,
            all_proper_spherical_or_affine: false,
        }
    }

    pub fn connected(mut self) -> Self {
        self.connected_only = true;
        self
    }

    pub fn k_spherical(mut self, k: usize) -> Self {
        self.k_spherical = Some(k);
        self
    }

    pub fn proper_spherical_or_affine(mut self) -> Self {
        self.all_proper_spherical_or_affine = true;
        self
    }

    /// The label set after applying the lacing flags.
    pub fn effective_labels(&self) -> Vec<CoxeterLabel> {
        self.label_set
            .labels()
            .iter()
            .copied()
            .filter(|m| !self.simply_laced || m.is_simply_laced())
            .filter(|m| !self.crystallographic || m.is_crystallographic())
            .collect()
    }

    /// Evaluates the filter directly on one diagram, without enumeration.
    pub fn accepts(&self, system: &CoxeterSystem) -> bool {
        let labels = self.effective_labels();
        let n = system.rank();
        let labels_ok = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .all(|(i, j)| labels.contains(&system.label(i, j)));
        if !labels_ok || (self.connected_only && !system.is_connected()) {
            return false;
        }
        if let Some(k) = self.k_spherical {
            if !crate::classify::is_k_spherical(system, k) {
                return false;
            }
        }
        if self.all_proper_spherical_or_affine {
            let full = system.full_subset().mask();
            if !bits(full).all(|u| is_spherical_or_affine_mask(system, full & !(1 << u))) {
                return false;
            }
        }
        true
    }
}

/// Runs `f` on a dedicated pool of `jobs` worker threads.
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("failed to start worker threads")
        .install(f)
}

/// All isomorphism classes of rank `rank` passing `filter`, in canonical
/// code order.
pub fn enumerate_diagrams(rank: usize, filter: &EnumFilter) -> Result<Vec<CoxeterSystem>> {
    Ok(enumerate_levels(rank, filter)?.pop().unwrap_or_default())
}

/// Level `r` of the result holds the rank-`r` classes passing `filter`, for
/// `r` in `0..=max_rank`.
pub fn enumerate_levels(max_rank: usize, filter: &EnumFilter) -> Result<Vec<Vec<CoxeterSystem>>> {
    if max_rank > MAX_CANON_RANK {
        return Err(CoreError::Unsupported {
            op: "enumerate_diagrams",
            rank: max_rank,
            max: MAX_CANON_RANK,
        });
    }
    let labels = filter.effective_labels();
    let mut levels = vec![if filter.connected_only {
        Vec::new()
    } else {
        vec![CoxeterSystem::commuting(0)]
    }];
    if max_rank >= 1 {
        levels.push(vec![CoxeterSystem::commuting(1)]);
    }
    for rank in 2..=max_rank {
        let parents: Vec<&CoxeterSystem> = levels[rank - 1]
            .iter()
            .filter(|p| {
                !filter.all_proper_spherical_or_affine
                    || is_spherical_or_affine_mask(p, p.full_subset().mask())
            })
            .collect();
        // Merging chunk by chunk keeps duplicates from piling up in memory.
        let mut unique: BTreeMap<CanonicalCode, CoxeterSystem> = BTreeMap::new();
        for chunk in parents.chunks(PARENT_CHUNK) {
            let children: Vec<Vec<(CanonicalCode, CoxeterSystem)>> = chunk
                .par_iter()
                .map(|parent| Extender::new(parent, &labels, filter).run())
                .collect();
            for (code, child) in children.into_iter().flatten() {
                unique.entry(code).or_insert(child);
            }
        }
        levels.push(unique.into_values().collect());
    }
    Ok(levels)
}

/// Depth-first assignment of the new vertex's labels, one earlier vertex at
/// a time.
struct Extender<'a> {
    filter: &'a EnumFilter,
    labels: &'a [CoxeterLabel],
    rank: usize,
    flat: Vec<CoxeterLabel>,
    found: HashSet<CanonicalCode>,
    out: Vec<(CanonicalCode, CoxeterSystem)>,
}

impl<'a> Extender<'a> {
    fn new(parent: &CoxeterSystem, labels: &'a [CoxeterLabel], filter: &'a EnumFilter) -> Self {
        let p = parent.rank();
        let rank = p + 1;
        let mut flat = vec![CoxeterLabel::TWO; rank * rank];
        for i in 0..p {
            flat[i * rank..i * rank + p].copy_from_slice(&parent.labels()[i * p..(i + 1) * p]);
        }
        flat[rank * rank - 1] = CoxeterLabel::ONE;
        Self {
            filter,
            labels,
            rank,
            flat,
            found: HashSet::new(),
            out: Vec::new(),
        }
    }

    fn run(mut self) -> Vec<(CanonicalCode, CoxeterSystem)> {
        self.assign(0);
        self.out
    }

    fn set(&mut self, t: usize, m: CoxeterLabel) {
        let v = self.rank - 1;
        self.flat[t * self.rank + v] = m;
        self.flat[v * self.rank + t] = m;
    }

    fn assign(&mut self, t: usize) {
        let v = self.rank - 1;
        if t == v {
            let child = CoxeterSystem::from_flat(self.rank, self.flat.clone());
            if self.accept(&child) {
                let (code, order) = canonical_form(&child).expect("rank checked by caller");
                if self.found.insert(code.clone()) {
                    self.out.push((code, child.permuted(&order)));
                }
            }
            return;
        }
        for &m in self.labels {
            self.set(t, m);
            if !m.is_edge() || self.prefix_ok(t) {
                self.assign(t + 1);
            }
        }
        self.set(t, CoxeterLabel::TWO);
    }

    /// Checks the subdiagram on `{0, ..., t, v}`, where `t` was just joined
    /// to the new vertex `v`.
    fn prefix_ok(&self, t: usize) -> bool {
        let v = self.rank - 1;
        let system = CoxeterSystem::from_flat(self.rank, self.flat.clone());
        let prefix = ((1u32 << (t + 1)) - 1) | (1 << v);
        let size = t + 2;
        let component = system.component_containing(prefix, v);
        if self.filter.all_proper_spherical_or_affine
            && size < self.rank
            && matches!(classify_mask(&system, component), TypeClass::Indefinite)
        {
            return false;
        }
        if let Some(k) = self.filter.k_spherical {
            if size <= k && !classify_mask(&system, component).is_spherical() {
                return false;
            }
        }
        true
    }

    fn accept(&self, child: &CoxeterSystem) -> bool {
        let v = self.rank - 1;
        let full = child.full_subset().mask();
        if self.filter.connected_only && child.neighbors(v) == 0 {
            return false;
        }
        if self.filter.all_proper_spherical_or_affine {
            let ok = (0..v).all(|u| {
                let c = child.component_containing(full & !(1 << u), v);
                !matches!(classify_mask(child, c), TypeClass::Indefinite)
            });
            if !ok {
                return false;
            }
        }
        if let Some(k) = self.filter.k_spherical {
            if !k_spherical_at(child, v, k) {
                return false;
            }
        }
        true
    }
}

/// Every special subgroup of rank at most `k` containing `v` is finite,
/// given that those avoiding `v` already are.
fn k_spherical_at(system: &CoxeterSystem, v: usize, k: usize) -> bool {
    let n = system.rank();
    let full = system.full_subset().mask();
    if k + 1 >= n {
        let proper = (0..n).filter(|&u| u != v).all(|u| {
            classify_mask(system, system.component_containing(full & !(1 << u), v)).is_spherical()
        });
        return proper && (k < n || is_spherical_mask(system, full));
    }
    // A minimal infinite subset through `v` is reached by growing connected
    // finite sets from `v`.
    let mut seen = HashSet::new();
    let mut stack = vec![1u32 << v];
    while let Some(set) = stack.pop() {
        if set.count_ones() as usize >= k {
            continue;
        }
        let frontier = bits(set).fold(0, |acc, u| acc | system.neighbors(u)) & !set;
        for u in bits(frontier) {
            let next = set | (1 << u);
            if !seen.insert(next) {
                continue;
            }
            if !classify_mask(system, next).is_spherical() {
                return false;
            }
            stack.push(next);
        }
    }
    true
}

/// Minimal infinite subsets as bitmasks, in witness order (size, then
/// lexicographic).
pub(crate) fn minimal_infinite_masks(system: &CoxeterSystem) -> Vec<u32> {
    let mut found = Vec::new();
    let mut seen = HashSet::new();
    let mut stack: Vec<u32> = (0..system.rank()).map(|v| 1u32 << v).collect();
    // Minimal infinite subsets are connected and every proper subset is
    // finite, so growing connected finite sets one vertex at a time reaches
    // all of them.
    while let Some(set) = stack.pop() {
        let frontier = bits(set).fold(0, |acc, u| acc | system.neighbors(u)) & !set;
        for u in bits(frontier) {
            let next = set | (1 << u);
            if !seen.insert(next) {
                continue;
            }
            if classify_mask(system, next).is_spherical() {
                stack.push(next);
            } else if bits(next).all(|w| is_spherical_mask(system, next & !(1 << w))) {
                found.push(next);
            }
        }
    }
    found.sort_by(|&a, &b| witness_order(a, b));
    found
}

/// Every `J` with `W_J` infinite and all proper special subgroups of `W_J`
/// finite, in witness order.
pub fn minimal_infinite_subsets(system: &CoxeterSystem) -> Vec<VertexSubset> {
    minimal_infinite_masks(system)
        .into_iter()
        .map(|m| VertexSubset::from_mask(system.rank(), m))
        .collect()
}

/// One isomorphism class found by a census.
#[derive(Debug, Clone, Serialize)]
pub struct ClassRecord {
    pub code: CanonicalCode,
    pub rank: usize,
    pub class: TypeClass,
    pub simply_laced: bool,
    pub crystallographic: bool,
    pub three_spherical: bool,
    pub system: CoxeterSystem,
}

impl ClassRecord {
    fn new(system: CoxeterSystem, code: CanonicalCode) -> Self {
        Self {
            code,
            rank: system.rank(),
            class: classify_mask(&system, system.full_subset().mask()),
            simply_laced: system.is_simply_laced(),
            crystallographic: system.is_crystallographic(),
            three_spherical: crate::classify::is_k_spherical(&system, 3),
            system,
        }
    }
}

/// Connected diagrams of a special kind, by rank.
#[derive(Debug, Clone, Serialize)]
pub struct Census {
    pub label_set: LabelSet,
    pub max_rank: usize,
    /// Entry `r` lists the classes of rank `r`.
    pub by_rank: Vec<Vec<ClassRecord>>,
}

impl Census {
    pub fn classes(&self) -> impl Iterator<Item = &ClassRecord> {
        self.by_rank.iter().flatten()
    }

    pub fn counts(&self) -> BTreeMap<usize, usize> {
        (0..=self.max_rank)
            .map(|r| (r, self.by_rank[r].len()))
            .collect()
    }

    /// Highest rank with at least one class.
    pub fn max_rank_attained(&self) -> Option<usize> {
        self.by_rank.iter().rposition(|level| !level.is_empty())
    }
}

fn records(systems: impl IntoIterator<Item = CoxeterSystem>) -> Vec<ClassRecord> {
    systems
        .into_iter()
        .map(|s| {
            let code = crate::canon::canonical_code(&s).expect("enumerated ranks are supported");
            ClassRecord::new(s, code)
        })
        .collect()
}

/// Connected minimal infinite diagrams over the filter's labels, up to
/// `max_rank`.
pub fn enumerate_minimal_infinite(filter: &EnumFilter, max_rank: usize) -> Result<Census> {
    if max_rank > MAX_MINIMAL_INFINITE_RANK {
        return Err(CoreError::Unsupported {
            op: "enumerate_minimal_infinite",
            rank: max_rank,
            max: MAX_MINIMAL_INFINITE_RANK,
        });
    }
    let mut by_rank = vec![Vec::new(); max_rank + 1];
    for (rank, slot) in by_rank.iter_mut().enumerate().skip(1) {
        // Below `rank` this keeps exactly the connected finite diagrams.
        let mut f = filter.clone().connected();
        f.k_spherical = Some(rank - 1);
        f.all_proper_spherical_or_affine = false;
        let level = enumerate_diagrams(rank, &f)?;
        *slot = records(
            level
                .into_iter()
                .filter(|s| !is_spherical_mask(s, s.full_subset().mask())),
        );
    }
    Ok(Census {
        label_set: filter.label_set.clone(),
        max_rank,
        by_rank,
    })
}

/// Connected, non-spherical, non-affine diagrams all of whose proper special
/// subgroups are spherical or affine, up to `max_rank`.
pub fn enumerate_quasi_minimal(filter: &EnumFilter, max_rank: usize) -> Result<Census> {
    if !filter.all_proper_spherical_or_affine {
        return Err(CoreError::Precondition(
            "quasi-minimal enumeration needs the spherical-or-affine filter".into(),
        ));
    }
    let levels = enumerate_levels(max_rank, &filter.clone().connected())?;
    let by_rank = levels
        .into_iter()
        .map(|level| {
            records(level.into_iter().filter(|s| {
                matches!(
                    classify_mask(s, s.full_subset().mask()),
                    TypeClass::Indefinite
                )
            }))
        })
        .collect();
    Ok(Census {
        label_set: filter.label_set.clone(),
        max_rank,
        by_rank,
    })
}
