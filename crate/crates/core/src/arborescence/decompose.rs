use crate::error::{domain, Error, Result};
use crate::graph::{edge_connectivity, Arc, FlowNetwork, MultiGraph, NodeId};

use super::validate::{half, validate};
use super::ArborescenceSet;

/// Extra structure demanded of a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    None,
    /// Trees at even positions pairwise edge-disjoint, likewise odd ones.
    Bipartition,
}

/// Default cap on candidate arcs tried by the search.
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// `k` arc-disjoint spanning arborescences rooted at `root`.
pub fn decompose(g: &MultiGraph, root: NodeId, k: usize) -> Result<ArborescenceSet> {
    decompose_with(g, root, k, Constraint::None, DEFAULT_BUDGET)
}

/// As [`decompose`], with the two halves `{T1, T3, ..}` and `{T2, T4, ..}`
/// each pairwise edge-disjoint.
pub fn decompose_bipartitioned(g: &MultiGraph, root: NodeId, k: usize) -> Result<ArborescenceSet> {
    decompose_with(g, root, k, Constraint::Bipartition, DEFAULT_BUDGET)
}

/// Trees are grown one at a time. An arc joins the current tree only if
/// every node keeps enough arc-disjoint residual paths to the root for the
/// trees still to be built; without extra constraints this never needs to
/// backtrack. Constrained searches backtrack within `budget` tried arcs.
pub fn decompose_with(
    g: &MultiGraph,
    root: NodeId,
    k: usize,
    constraint: Constraint,
    budget: usize,
) -> Result<ArborescenceSet> {
    g.check_node(root)?;
    if k == 0 {
        return ArborescenceSet::from_parent_arcs(g, root, Vec::new());
    }
    if g.node_count() < 2 {
        return domain("decomposition needs at least two nodes");
    }
    let lambda = edge_connectivity(g)?;
    if lambda < k {
        return domain(format!(
            "graph is {lambda}-edge-connected; {k} arc-disjoint arborescences need {k}"
        ));
    }
    let mut search = Search {
        g,
        root,
        k,
        constraint,
        used: vec![false; 2 * g.edge_count()],
        half_used: vec![[false; 2]; g.edge_count()],
        parents: vec![vec![None; g.node_count()]; k],
        tried: 0,
        budget,
    };
    if !search.tree(0)? {
        return Err(Error::Internal(format!(
            "no decomposition into {k} trees found after {} candidate arcs",
            search.tried
        )));
    }
    let lists = search
        .parents
        .iter()
        .map(|p| p.iter().flatten().map(|&a| search.arc(a)).collect())
        .collect();
    let ts = ArborescenceSet::from_parent_arcs(g, root, lists)?;
    let report = validate(g, &ts, constraint == Constraint::Bipartition);
    if !report.pass {
        return Err(Error::Internal(format!(
            "decomposition failed validation: {}",
            report.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
        )));
    }
    Ok(ts)
}

struct Search<'a> {
    g: &'a MultiGraph,
    root: NodeId,
    k: usize,
    constraint: Constraint,
    // arc id 2e + d: d = 0 runs ends[0] -> ends[1]
    used: Vec<bool>,
    half_used: Vec<[bool; 2]>,
    parents: Vec<Vec<Option<usize>>>,
    tried: usize,
    budget: usize,
}

impl Search<'_> {
    fn arc(&self, id: usize) -> Arc {
        let [a, b] = self.g.ends(crate::graph::EdgeId(id / 2));
        let (tail, head) = if id.is_multiple_of(2) { (a, b) } else { (b, a) };
        Arc { edge: crate::graph::EdgeId(id / 2), tail, head }
    }

    fn arc_id(&self, edge: crate::graph::EdgeId, tail: NodeId) -> usize {
        2 * edge.0 + usize::from(self.g.ends(edge)[0] != tail)
    }

    fn allowed(&self, i: usize, id: usize) -> bool {
        if self.used[id] {
            return false;
        }
        match (self.constraint, half(self.k, i)) {
            (Constraint::Bipartition, Some(h)) => !self.half_used[id / 2][h],
            _ => true,
        }
    }

    fn tree(&mut self, i: usize) -> Result<bool> {
        if i == self.k {
            return Ok(true);
        }
        let mut inside = vec![false; self.g.node_count()];
        inside[self.root.0] = true;
        let mut members = vec![self.root];
        self.grow(i, &mut inside, &mut members)
    }

    fn grow(&mut self, i: usize, inside: &mut [bool], members: &mut Vec<NodeId>) -> Result<bool> {
        if members.len() == self.g.node_count() {
            return self.tree(i + 1);
        }
        let mut candidates = Vec::new();
        for &w in members.iter() {
            for &e in self.g.incident(w) {
                let u = self.g.other(e, w).expect("incident edge");
                if !inside[u.0] {
                    let id = self.arc_id(e, u);
                    if self.allowed(i, id) {
                        candidates.push((id, u));
                    }
                }
            }
        }
        for (id, u) in candidates {
            self.tried += 1;
            if self.tried > self.budget {
                return Err(Error::Internal(format!(
                    "decomposition search exceeded its budget of {} candidate arcs",
                    self.budget
                )));
            }
            self.take(i, id, u, true);
            inside[u.0] = true;
            members.push(u);
            if self.feasible(i, inside) && self.grow(i, inside, members)? {
                return Ok(true);
            }
            members.pop();
            inside[u.0] = false;
            self.take(i, id, u, false);
        }
        Ok(false)
    }

    fn take(&mut self, i: usize, id: usize, u: NodeId, on: bool) {
        self.used[id] = on;
        if let Some(h) = half(self.k, i) {
            self.half_used[id / 2][h] = on;
        }
        self.parents[i][u.0] = if on { Some(id) } else { None };
    }

    /// Residual paths for the remaining trees, plus reachability of the
    /// partial tree under the constraint.
    fn feasible(&self, i: usize, inside: &[bool]) -> bool {
        let n = self.g.node_count();
        let need = (self.k - i - 1) as u32;
        if need > 0 {
            let mut net = FlowNetwork::new(n);
            for id in 0..self.used.len() {
                if !self.used[id] {
                    let a = self.arc(id);
                    net.add_arc(a.tail.0, a.head.0, 1);
                }
            }
            for v in 0..n {
                if v != self.root.0 && net.clone().max_flow(v, self.root.0, Some(need)) < need {
                    return false;
                }
            }
        }
        if self.constraint == Constraint::Bipartition {
            let mut reach = inside.to_vec();
            let mut stack: Vec<NodeId> = (0..n).filter(|&v| inside[v]).map(NodeId).collect();
            while let Some(w) = stack.pop() {
                for &e in self.g.incident(w) {
                    let u = self.g.other(e, w).expect("incident edge");
                    if !reach[u.0] && self.allowed(i, self.arc_id(e, u)) {
                        reach[u.0] = true;
                        stack.push(u);
                    }
                }
            }
            if reach.iter().any(|r| !r) {
                return false;
            }
        }
        true
    }
}
