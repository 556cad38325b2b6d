//! Undirected multigraphs with stable edge identifiers.
//!
//! Edges are identified by dense integer ids in insertion order. Forwarding
//! functions refer to these ids (ports), never to neighbour names, so
//! parallel edges stay distinguishable.

mod connectivity;
mod expand;
mod flow;
mod format;
pub mod samples;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub use connectivity::{
    bridges, component_labels, components, connected, edge_connectivity, local_edge_connectivity,
};
pub use expand::{expand_edges, Expansion, Gadget};
pub use flow::FlowNetwork;
pub use format::GraphFile;
pub(crate) use format::escape;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A directed use of an undirected edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub edge: EdgeId,
    pub tail: NodeId,
    pub head: NodeId,
}

impl Arc {
    pub fn reversed(self) -> Arc {
        Arc { edge: self.edge, tail: self.head, head: self.tail }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiGraph {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    ends: Vec<[NodeId; 2]>,
    incident: Vec<Vec<EdgeId>>,
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from node names and named edge pairs.
    pub fn from_names(nodes: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let mut g = Self::new();
        for n in nodes {
            g.add_node(n)?;
        }
        for (a, b) in edges {
            let (a, b) = (g.require(a)?, g.require(b)?);
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_node(&mut self, name: &str) -> Result<NodeId> {
        if self.index.contains_key(name) {
            return domain(format!("duplicate node `{name}`"));
        }
        let id = NodeId(self.names.len());
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        self.incident.push(Vec::new());
        Ok(id)
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<EdgeId> {
        self.check_node(a)?;
        self.check_node(b)?;
        if a == b {
            return domain(format!("self-loop at `{}`", self.name(a)));
        }
        let id = EdgeId(self.ends.len());
        self.ends.push([a, b]);
        self.incident[a.0].push(id);
        self.incident[b.0].push(id);
        Ok(id)
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.names.len()).map(NodeId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.ends.len()).map(EdgeId)
    }

    pub fn node(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<NodeId> {
        self.node(name).ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v.0]
    }

    pub fn ends(&self, e: EdgeId) -> [NodeId; 2] {
        self.ends[e.0]
    }

    /// The endpoint of `e` opposite to `v`.
    pub fn other(&self, e: EdgeId, v: NodeId) -> Option<NodeId> {
        let [a, b] = self.ends[e.0];
        if a == v {
            Some(b)
        } else if b == v {
            Some(a)
        } else {
            None
        }
    }

    /// The arc leaving `tail` over `e`.
    pub fn arc_from(&self, e: EdgeId, tail: NodeId) -> Option<Arc> {
        self.other(e, tail).map(|head| Arc { edge: e, tail, head })
    }

    pub fn incident(&self, v: NodeId) -> &[EdgeId] {
        &self.incident[v.0]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.incident[v.0].len()
    }

    pub fn max_degree(&self) -> usize {
        self.incident.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// First edge joining the two named nodes, in id order.
    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<EdgeId> {
        self.incident[a.0].iter().copied().find(|&e| self.other(e, a) == Some(b))
    }

    /// Looks an edge up by endpoint names.
    pub fn edge_named(&self, a: &str, b: &str) -> Result<EdgeId> {
        let (x, y) = (self.require(a)?, self.require(b)?);
        self.edge_between(x, y)
            .ok_or_else(|| Error::Domain(format!("no edge between `{a}` and `{b}`")))
    }

    /// `a-b` label used in reports.
    pub fn edge_label(&self, e: EdgeId) -> String {
        let [a, b] = self.ends[e.0];
        format!("{}-{}", self.name(a), self.name(b))
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v.0 < self.names.len() {
            Ok(())
        } else {
            domain(format!("node id {} out of range", v.0))
        }
    }

    pub fn check_edge(&self, e: EdgeId) -> Result<()> {
        if e.0 < self.ends.len() {
            Ok(())
        } else {
            Err(Error::UnknownEdge(e.0))
        }
    }
}

/// An ordered set of edge ids of one host graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(BTreeSet<EdgeId>);

impl EdgeSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Rejects duplicates and ids foreign to `g`.
    pub fn new(g: &MultiGraph, ids: impl IntoIterator<Item = EdgeId>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for e in ids {
            g.check_edge(e)?;
            if !set.insert(e) {
                return domain(format!("duplicate edge id {} in edge set", e.0));
            }
        }
        Ok(Self(set))
    }

    /// Parses `a-b,c-d` style edge lists. `a-b#3` and `3` name edge id 3.
    pub fn parse(g: &MultiGraph, text: &str) -> Result<Self> {
        let mut ids = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (label, id) = match item.rsplit_once('#') {
                Some((label, id)) => (Some(label), id),
                None => (None, item),
            };
            if let Ok(id) = id.parse::<usize>() {
                let e = EdgeId(id);
                g.check_edge(e)?;
                if let Some((a, b)) = label.and_then(|l| l.split_once('-')) {
                    let ends = [g.require(a.trim())?, g.require(b.trim())?];
                    let mut want = g.ends(e);
                    let mut got = ends;
                    want.sort();
                    got.sort();
                    if want != got {
                        return domain(format!("edge {id} does not join `{}` and `{}`", a.trim(), b.trim()));
                    }
                }
                ids.push(e);
                continue;
            }
            let (a, b) = item
                .split_once('-')
                .ok_or_else(|| Error::Domain(format!("edge `{item}` is not of the form a-b")))?;
            ids.push(g.edge_named(a.trim(), b.trim())?);
        }
        Self::new(g, ids)
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.contains(&e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<EdgeId> {
        self.0.iter().copied().collect()
    }

    pub fn labels(&self, g: &MultiGraph) -> Vec<String> {
        self.iter().map(|e| g.edge_label(e)).collect()
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}
