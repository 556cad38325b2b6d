//! Small named graphs for tests and the command line.

use crate::error::{Error, Result};

use super::MultiGraph;

/// Cycle on `n ≥ 3` nodes `0..n`.
pub fn cycle(n: usize) -> Result<MultiGraph> {
    if n < 3 {
        return Err(Error::Domain(format!("a cycle needs at least 3 nodes, got {n}")));
    }
    build(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Complete graph on `n ≥ 2` nodes `0..n`.
pub fn complete(n: usize) -> Result<MultiGraph> {
    if n < 2 {
        return Err(Error::Domain(format!("a complete graph needs at least 2 nodes, got {n}")));
    }
    build(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
}

/// Triangular prism: triangles `0 1 2` and `3 4 5` joined by `i–i+3`.
pub fn prism() -> Result<MultiGraph> {
    build(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)])
}

/// Triangles `0 1 2` and `3 4 5` joined by the bridge `2–3`.
pub fn bridged_triangles() -> Result<MultiGraph> {
    build(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])
}

/// Parses `C5`, `K4`, `prism` or `bridged-triangles`.
pub fn named(name: &str) -> Option<Result<MultiGraph>> {
    let sized = |prefix: char| name.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
    match name {
        "prism" => Some(prism()),
        "bridged-triangles" => Some(bridged_triangles()),
        _ => sized('C').map(cycle).or_else(|| sized('K').map(complete)),
    }
}

fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<MultiGraph> {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let nodes: Vec<&str> = names.iter().map(String::as_str).collect();
    let pairs: Vec<(&str, &str)> = edges.into_iter().map(|(a, b)| (nodes[a], nodes[b])).collect();
    MultiGraph::from_names(&nodes, &pairs)
}
