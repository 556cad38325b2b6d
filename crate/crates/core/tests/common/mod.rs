#![allow(dead_code)]

use std::collections::VecDeque;

use flaplab_core::graph::{edge_connectivity, EdgeId, MultiGraph, NodeId};
use rand::rngs::StdRng;
use rand::Rng;

/// Random multigraph on up to `max_nodes` nodes that is at least
/// `k`-edge-connected.
pub fn random_graph(rng: &mut StdRng, k: usize, max_nodes: usize) -> MultiGraph {
    loop {
        let n = rng.gen_range(k.max(2) + 1..=max_nodes.max(k + 2));
        let p = rng.gen_range(0.4..=1.0);
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let nodes: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(p) {
                    edges.push((nodes[a], nodes[b]));
                }
            }
        }
        if rng.gen_bool(0.3) {
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            edges.push((nodes[a], nodes[b]));
        }
        let g = MultiGraph::from_names(&nodes, &edges).unwrap();
        if edge_connectivity(&g).unwrap() >= k {
            return g;
        }
    }
}

/// Nodes reachable from `s` without the `removed` edges, by flood fill.
pub fn reach(g: &MultiGraph, removed: &[EdgeId], s: NodeId) -> Vec<bool> {
    let mut seen = vec![false; g.node_count()];
    seen[s.0] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &e in g.incident(v) {
            if removed.contains(&e) {
                continue;
            }
            let w = g.other(e, v).unwrap();
            if !seen[w.0] {
                seen[w.0] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

pub fn is_connected(g: &MultiGraph, removed: &[EdgeId]) -> bool {
    g.node_count() == 0 || reach(g, removed, NodeId(0)).iter().all(|&x| x)
}

/// Every subset of `0..n` of size `size`.
pub fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == size).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}
