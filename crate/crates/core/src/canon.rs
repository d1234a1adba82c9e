//! Isomorphism-invariant codes for labelled Coxeter diagrams.
//!
//! The code is the lexicographically smallest label encoding over the leaves
//! of an individualization-refinement search tree. Cells of the ordered
//! partition are split by neighbourhood signatures until equitable; the
//! first non-singleton cell is then individualized vertex by vertex.
//! Automorphisms discovered at equal leaves prune sibling branches.

use std::fmt;

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::system::{bits, CoxeterLabel, CoxeterSystem};

/// Largest rank accepted by [`canonical_code`].
pub const MAX_CANON_RANK: usize = 11;

/// Byte string identifying a diagram up to isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

fn label_code(m: CoxeterLabel) -> u16 {
    match m {
        CoxeterLabel::Finite(m) => m,
        CoxeterLabel::Infinity => 0,
    }
}

/// Rank byte, then the strict upper triangle column by column, two bytes
/// per label.
pub(crate) fn encode(system: &CoxeterSystem, order: &[usize]) -> Vec<u8> {
    let n = order.len();
    let mut out = Vec::with_capacity(1 + n * n.saturating_sub(1));
    out.push(n as u8);
    for j in 1..n {
        for i in 0..j {
            out.extend_from_slice(&label_code(system.label(order[i], order[j])).to_be_bytes());
        }
    }
    out
}

pub fn canonical_code(system: &CoxeterSystem) -> Result<CanonicalCode> {
    canonical_form(system).map(|(code, _)| code)
}

/// The canonical code and a vertex order realizing it: `system.permuted(&order)`
/// is the canonical representative.
pub fn canonical_form(system: &CoxeterSystem) -> Result<(CanonicalCode, Vec<usize>)> {
    if system.rank() > MAX_CANON_RANK {
        return Err(CoreError::Unsupported {
            op: "canonical_code",
            rank: system.rank(),
            max: MAX_CANON_RANK,
        });
    }
    let mut search = Search {
        system,
        best: None,
        automorphisms: Vec::new(),
    };
    let root = search.refine(vec![(0..system.rank()).collect()]);
    search.explore(root, &mut Vec::new());
    let (code, order) = search.best.unwrap_or_default();
    Ok((CanonicalCode(code), order))
}

/// The canonical representative of the isomorphism class of `system`.
pub fn canonical_representative(system: &CoxeterSystem) -> Result<CoxeterSystem> {
    let (_, order) = canonical_form(system)?;
    Ok(system.permuted(&order))
}

type Partition = Vec<Vec<usize>>;

struct Search<'a> {
    system: &'a CoxeterSystem,
    best: Option<(Vec<u8>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Splits cells by `(cell, label)` neighbourhood multisets until stable.
    fn refine(&self, mut cells: Partition) -> Partition {
        let n = self.system.rank();
        let mut cell_of = vec![0usize; n];
        loop {
            for (c, cell) in cells.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = c;
                }
            }
            let signature = |v: usize| {
                let mut sig: Vec<(usize, u16)> = bits(self.system.neighbors(v))
                    .map(|w| (cell_of[w], label_code(self.system.label(v, w))))
                    .collect();
                sig.sort_unstable();
                sig
            };
            let mut next: Partition = Vec::with_capacity(cells.len());
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<(usize, u16)>, usize)> =
                    cell.iter().map(|&v| (signature(v), v)).collect();
                keyed.sort();
                let mut start = 0;
                for k in 1..=keyed.len() {
                    if k == keyed.len() || keyed[k].0 != keyed[start].0 {
                        next.push(keyed[start..k].iter().map(|(_, v)| *v).collect());
                        start = k;
                    }
                }
            }
            if next.len() == cells.len() {
                return next;
            }
            cells = next;
        }
    }

    fn explore(&mut self, cells: Partition, fixed: &mut Vec<usize>) {
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.into_iter().flatten().collect();
            self.leaf(order);
            return;
        };
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cells[target] {
            if !explored.is_empty() {
                let orbit = self.orbit_roots(fixed);
                if explored.iter().any(|&u| orbit[u] == orbit[v]) {
                    continue;
                }
            }
            explored.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(vec![v]);
            child.push(cells[target].iter().copied().filter(|&w| w != v).collect());
            child.extend_from_slice(&cells[target + 1..]);
            let child = self.refine(child);
            fixed.push(v);
            self.explore(child, fixed);
            fixed.pop();
        }
    }

    fn leaf(&mut self, order: Vec<usize>) {
        let code = encode(self.system, &order);
        match &self.best {
            Some((best, best_order)) if *best == code => {
                let mut gamma = vec![0; order.len()];
                for (&a, &b) in best_order.iter().zip(&order) {
                    gamma[a] = b;
                }
                self.automorphisms.push(gamma);
            }
            Some((best, _)) if *best < code => {}
            _ => self.best = Some((code, order)),
        }
    }

    /// Orbit representative of every vertex under the known automorphisms
    /// that fix `fixed` pointwise.
    fn orbit_roots(&self, fixed: &[usize]) -> Vec<usize> {
        let n = self.system.rank();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for gamma in &self.automorphisms {
            if fixed.iter().any(|&x| gamma[x] != x) {
                continue;
            }
            for (x, &y) in gamma.iter().enumerate() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        (0..n).map(|x| find(&mut parent, x)).collect()
    }
}
