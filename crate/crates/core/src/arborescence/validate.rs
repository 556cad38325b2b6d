use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::graph::{Arc, MultiGraph, NodeId};

use super::ArborescenceSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Violation {
    MissingParent { tree: usize, node: String },
    RootHasParent { tree: usize },
    NotRooted { tree: usize, node: String },
    SharedArc { trees: [usize; 2], tail: String, head: String },
    SharedEdge { trees: [usize; 2], edge: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingParent { tree, node } => {
                write!(f, "T{tree}: node `{node}` has no parent arc")
            }
            Violation::RootHasParent { tree } => write!(f, "T{tree}: the root has a parent arc"),
            Violation::NotRooted { tree, node } => {
                write!(f, "T{tree}: parent arcs from `{node}` cycle before reaching the root")
            }
            Violation::SharedArc { trees: [a, b], tail, head } => {
                write!(f, "T{a} and T{b} share arc ({tail},{head})")
            }
            Violation::SharedEdge { trees: [a, b], edge } => {
                write!(f, "T{a} and T{b} share edge {{{edge}}}")
            }
        }
    }
}

/// Outcome of [`validate`]; tree numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

/// Which tree pairs must be edge-disjoint in a bipartitioned set: the
/// even-position trees among themselves and the odd-position trees among
/// themselves, excluding the last tree when `k` is odd.
pub(crate) fn half(k: usize, i: usize) -> Option<usize> {
    if i < 2 * (k / 2) {
        Some(i % 2)
    } else {
        None
    }
}

/// Checks spanning, rootedness and arc-disjointness; with `bipartition`,
/// also edge-disjointness inside each half.
pub fn validate(g: &MultiGraph, ts: &ArborescenceSet, bipartition: bool) -> ValidationReport {
    let mut violations = Vec::new();
    let name = |v: NodeId| g.name(v).to_string();
    let root = ts.root();
    for t in ts.trees() {
        let tree = t.index + 1;
        if t.parent(root).is_some() {
            violations.push(Violation::RootHasParent { tree });
        }
        for v in g.nodes().filter(|&v| v != root) {
            if t.parent(v).is_none() {
                violations.push(Violation::MissingParent { tree, node: name(v) });
                continue;
            }
            let mut cur = v;
            let mut steps = 0;
            while cur != root {
                match t.parent(cur) {
                    Some(a) if steps <= g.node_count() => {
                        cur = a.head;
                        steps += 1;
                    }
                    Some(_) => {
                        violations.push(Violation::NotRooted { tree, node: name(v) });
                        break;
                    }
                    None => break,
                }
            }
        }
    }
    let mut arc_holder: HashMap<(usize, NodeId), usize> = HashMap::new();
    let mut edge_holders: HashMap<usize, Vec<(usize, Arc)>> = HashMap::new();
    for t in ts.trees() {
        for a in t.arcs() {
            if let Some(&other) = arc_holder.get(&(a.edge.0, a.tail)) {
                violations.push(Violation::SharedArc {
                    trees: [other + 1, t.index + 1],
                    tail: name(a.tail),
                    head: name(a.head),
                });
            } else {
                arc_holder.insert((a.edge.0, a.tail), t.index);
            }
            edge_holders.entry(a.edge.0).or_default().push((t.index, a));
        }
    }
    if bipartition {
        let k = ts.k();
        let mut edges: Vec<_> = edge_holders.into_iter().collect();
        edges.sort_by_key(|(e, _)| *e);
        for (e, holders) in edges {
            for (x, &(i, _)) in holders.iter().enumerate() {
                for &(j, _) in &holders[x + 1..] {
                    if i != j && half(k, i).is_some() && half(k, i) == half(k, j) {
                        violations.push(Violation::SharedEdge {
                            trees: [i.min(j) + 1, i.max(j) + 1],
                            edge: g.edge_label(crate::graph::EdgeId(e)),
                        });
                    }
                }
            }
        }
    }
    ValidationReport { pass: violations.is_empty(), violations }
}
