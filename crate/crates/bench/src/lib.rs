//! Shared inputs for the benchmarks.

use coxdiag::{CoxeterLabel, CoxeterSystem, TypeClass};

/// Standard diagrams of assorted ranks and shapes.
pub fn sample_diagrams() -> Vec<(String, CoxeterSystem)> {
    ["A8", "D8", "E8", "H4", "~A7", "~E8", "~D9"]
        .iter()
        .map(|name| {
            let t: TypeClass = name.parse().expect("known type");
            (
                name.to_string(),
                t.diagram().expect("named types have diagrams"),
            )
        })
        .chain(std::iter::once(("K10".to_string(), complete(10))))
        .collect()
}

/// The complete graph with every label 3, the worst case for canonical
/// forms.
pub fn complete(n: usize) -> CoxeterSystem {
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, CoxeterLabel::Finite(3))));
    CoxeterSystem::from_edges(n, edges).expect("valid diagram")
}
