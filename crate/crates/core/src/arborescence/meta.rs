use serde::Serialize;

use crate::graph::{EdgeId, EdgeSet, MultiGraph};

use super::ArborescenceSet;

/// One meta-edge per failed edge covered by some tree; `a == b` is a
/// self-loop (only one direction lies on a tree).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MetaEdge {
    pub a: usize,
    pub b: usize,
    #[serde(skip)]
    pub failure: EdgeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetaGraph {
    pub nodes: usize,
    pub edges: Vec<MetaEdge>,
}

pub fn meta_graph(g: &MultiGraph, ts: &ArborescenceSet, failures: &EdgeSet) -> MetaGraph {
    let mut edges = Vec::new();
    for e in failures.iter() {
        let [u, v] = g.ends(e);
        let fwd = g.arc_from(e, u).and_then(|a| ts.owner(a));
        let back = g.arc_from(e, v).and_then(|a| ts.owner(a));
        match (fwd, back) {
            (Some(i), Some(j)) => edges.push(MetaEdge { a: i.min(j), b: i.max(j), failure: e }),
            (Some(i), None) | (None, Some(i)) => edges.push(MetaEdge { a: i, b: i, failure: e }),
            (None, None) => {}
        }
    }
    MetaGraph { nodes: ts.k(), edges }
}

/// Components that are trees: as many edges as nodes minus one, which
/// rules out cycles, parallel edges and self-loops.
pub fn tree_components(mg: &MetaGraph) -> usize {
    let mut parent: Vec<usize> = (0..mg.nodes).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for e in &mg.edges {
        let (a, b) = (find(&mut parent, e.a), find(&mut parent, e.b));
        parent[a] = b;
    }
    let mut nodes = vec![0usize; mg.nodes];
    let mut edges = vec![0usize; mg.nodes];
    for x in 0..mg.nodes {
        let r = find(&mut parent, x);
        nodes[r] += 1;
    }
    for e in &mg.edges {
        let r = find(&mut parent, e.a);
        edges[r] += 1;
    }
    (0..mg.nodes).filter(|&r| nodes[r] > 0 && edges[r] + 1 == nodes[r]).count()
}

/// Trees all of whose failed arcs bounce onto a tree with a failure-free
/// path to the root. Failures are read as permanently down.
pub fn good_arborescences(ts: &ArborescenceSet, failures: &EdgeSet) -> Vec<usize> {
    (0..ts.k())
        .filter(|&i| {
            ts.tree(i).arcs().filter(|a| failures.contains(a.edge)).all(|a| {
                ts.bounce_reverse(a).is_some_and(|j| {
                    ts.path_to_root(j, a.tail).iter().all(|b| !failures.contains(b.edge))
                })
            })
        })
        .collect()
}
