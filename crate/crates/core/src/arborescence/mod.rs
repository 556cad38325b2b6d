//! Arc-disjoint arborescences rooted at the destination.
//!
//! Trees are indexed from 0 in code; reports print them 1-based as
//! `T1..Tk`. Circular arithmetic over `k` trees is the same either way.

mod decompose;
mod format;
mod meta;
mod validate;

use std::collections::HashMap;

use crate::error::{domain, Error, Result};
use crate::graph::{Arc, EdgeId, MultiGraph, NodeId};

pub use decompose::{decompose, decompose_bipartitioned, decompose_with, Constraint};
pub use format::ArborescenceFile;
pub use meta::{good_arborescences, meta_graph, tree_components, MetaEdge, MetaGraph};
pub use validate::{validate, ValidationReport, Violation};

/// A spanning in-tree given by one parent arc per non-root node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arborescence {
    pub root: NodeId,
    pub index: usize,
    parent: Vec<Option<Arc>>,
}

impl Arborescence {
    pub fn parent(&self, v: NodeId) -> Option<Arc> {
        self.parent[v.0]
    }

    /// Parent arcs in node order.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.parent.iter().flatten().copied()
    }
}

/// An ordered list of arborescences over one host graph.
///
/// Construction only checks that arcs exist in the host graph; the
/// structural invariants are checked by [`validate`].
#[derive(Debug, Clone)]
pub struct ArborescenceSet {
    root: NodeId,
    trees: Vec<Arborescence>,
    owner: HashMap<(EdgeId, NodeId), usize>,
    // children[i][v]: (edge, child) pairs in edge-id order
    children: Vec<Vec<Vec<(EdgeId, NodeId)>>>,
}

impl ArborescenceSet {
    /// Builds a set from per-tree lists of parent arcs.
    pub fn from_parent_arcs(g: &MultiGraph, root: NodeId, trees: Vec<Vec<Arc>>) -> Result<Self> {
        g.check_node(root)?;
        let n = g.node_count();
        let mut built = Vec::with_capacity(trees.len());
        for (index, arcs) in trees.into_iter().enumerate() {
            let mut parent = vec![None; n];
            for a in arcs {
                g.check_edge(a.edge)?;
                if g.other(a.edge, a.tail) != Some(a.head) {
                    return domain(format!(
                        "arc {}->{} does not match edge {}",
                        g.name(a.tail),
                        g.name(a.head),
                        g.edge_label(a.edge)
                    ));
                }
                if parent[a.tail.0].replace(a).is_some() {
                    return domain(format!(
                        "T{} lists two parent arcs at `{}`",
                        index + 1,
                        g.name(a.tail)
                    ));
                }
            }
            built.push(Arborescence { root, index, parent });
        }
        let mut owner = HashMap::new();
        let mut children = vec![vec![Vec::new(); n]; built.len()];
        for t in &built {
            for a in t.arcs() {
                owner.entry((a.edge, a.tail)).or_insert(t.index);
                children[t.index][a.head.0].push((a.edge, a.tail));
            }
        }
        for per_tree in &mut children {
            for list in per_tree {
                list.sort();
            }
        }
        Ok(Self { root, trees: built, owner, children })
    }

    /// Builds a set from parent maps given by node names.
    pub fn from_named(g: &MultiGraph, root: &str, trees: &[&[(&str, &str)]]) -> Result<Self> {
        let root = g.require(root)?;
        let mut lists = Vec::new();
        for arcs in trees {
            let mut list = Vec::new();
            for (tail, head) in arcs.iter() {
                let (x, y) = (g.require(tail)?, g.require(head)?);
                let e = g.edge_between(x, y).ok_or_else(|| {
                    Error::Domain(format!("no edge between `{tail}` and `{head}`"))
                })?;
                list.push(Arc { edge: e, tail: x, head: y });
            }
            lists.push(list);
        }
        Self::from_parent_arcs(g, root, lists)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn k(&self) -> usize {
        self.trees.len()
    }

    pub fn trees(&self) -> &[Arborescence] {
        &self.trees
    }

    pub fn tree(&self, i: usize) -> &Arborescence {
        &self.trees[i]
    }

    /// Index of the tree holding `arc`.
    pub fn owner(&self, arc: Arc) -> Option<usize> {
        self.owner.get(&(arc.edge, arc.tail)).copied()
    }

    /// Children of `v` in tree `i`, as (edge, child) in edge-id order.
    pub fn children(&self, i: usize, v: NodeId) -> &[(EdgeId, NodeId)] {
        &self.children[i][v.0]
    }

    /// Parent arc of `v` on tree `i`.
    pub fn canonical_next(&self, i: usize, v: NodeId) -> Result<Arc> {
        self.check_index(i)?;
        if v == self.root {
            return domain("the root has no canonical next hop");
        }
        self.trees[i].parent(v).ok_or_else(|| {
            Error::Domain(format!("node {} has no parent arc on T{}", v.0, i + 1))
        })
    }

    /// Tree holding the reverse of `failed`, if any.
    pub fn bounce_reverse(&self, failed: Arc) -> Option<usize> {
        self.owner(failed.reversed())
    }

    /// First tree after `i` in circular order whose out-arc at `v` is
    /// active; `i` itself is tried last.
    pub fn next_available(
        &self,
        i: usize,
        v: NodeId,
        active: impl Fn(EdgeId) -> bool,
    ) -> Result<usize> {
        let order: Vec<usize> = (0..self.k()).collect();
        self.next_available_in(&order, i, v, active)
    }

    /// As [`Self::next_available`] over a custom circular order.
    pub fn next_available_in(
        &self,
        order: &[usize],
        i: usize,
        v: NodeId,
        active: impl Fn(EdgeId) -> bool,
    ) -> Result<usize> {
        let k = order.len();
        let pos = order
            .iter()
            .position(|&x| x == i)
            .ok_or_else(|| Error::Domain(format!("T{} is not in the circular order", i + 1)))?;
        for step in 1..=k {
            let j = order[(pos + step) % k];
            if active(self.canonical_next(j, v)?.edge) {
                return Ok(j);
            }
        }
        domain(format!("node {} is isolated: every out-arc is inactive", v.0))
    }

    /// Arcs from `v` to the root on tree `i`.
    pub fn path_to_root(&self, i: usize, v: NodeId) -> Vec<Arc> {
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(a) = self.trees[i].parent(cur) {
            if path.len() > self.trees[i].parent.len() {
                break;
            }
            path.push(a);
            cur = a.head;
        }
        path
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.k() {
            Ok(())
        } else {
            domain(format!("tree index {} out of range for k = {}", i + 1, self.k()))
        }
    }
}
