use std::collections::HashMap;

use serde_json::json;

use crate::arborescence::decompose;
use crate::error::{domain, Result};
use crate::graph::{bridges, connected, Arc, EdgeId, EdgeSet, MultiGraph, NodeId};

use super::{Decision, PortRef, RouteError, RouteInput, RoutingScheme, SchemeInfo};

/// Bit-free 1-resilient routing on any connected graph.
///
/// Every bridge is doubled in a logical copy of the graph, which is then
/// 2-edge-connected and splits into two arc-disjoint arborescences `T0`
/// and `T1`. Both copies of a bridge necessarily point toward the root, so
/// physically the two trees share every bridge arc. The packet follows
/// `T0`; at a dead out-arc it takes the `T1` out-arc. Arriving over a
/// bridge is ambiguous and always resumes on `T0`; any other in-arc names
/// its tree.
#[derive(Debug, Clone)]
pub struct OneResilientScheme {
    root: NodeId,
    parents: [Vec<Option<Arc>>; 2],
    owner: HashMap<(EdgeId, NodeId), usize>,
    bridges: EdgeSet,
}

impl OneResilientScheme {
    pub fn new(g: &MultiGraph, root: NodeId) -> Result<Self> {
        g.check_node(root)?;
        if g.node_count() < 2 {
            return domain("1-resilient routing needs at least two nodes");
        }
        if !g.nodes().all(|v| connected(g, &EdgeSet::empty(), v, root).unwrap_or(false)) {
            return domain("1-resilient routing needs a connected graph");
        }
        let bridges = bridges(g);
        let mut logical = g.clone();
        let mut physical: Vec<EdgeId> = g.edge_ids().collect();
        for e in bridges.iter() {
            let [a, b] = g.ends(e);
            logical.add_edge(a, b)?;
            physical.push(e);
        }
        let ts = decompose(&logical, root, 2)?;
        let mut parents = [vec![None; g.node_count()], vec![None; g.node_count()]];
        let mut owner = HashMap::new();
        for (i, tree) in ts.trees().iter().enumerate() {
            for a in tree.arcs() {
                let arc = Arc { edge: physical[a.edge.0], ..a };
                parents[i][a.tail.0] = Some(arc);
                if !bridges.contains(arc.edge) {
                    owner.insert((arc.edge, arc.tail), i);
                }
            }
        }
        Ok(Self { root, parents, owner, bridges })
    }

    /// Physical parent arc of `v` on tree `i`.
    pub fn parent(&self, i: usize, v: NodeId) -> Option<Arc> {
        self.parents[i][v.0]
    }

    pub fn bridges(&self) -> &EdgeSet {
        &self.bridges
    }
}

impl RoutingScheme for OneResilientScheme {
    fn destination(&self) -> NodeId {
        self.root
    }

    fn bit_capacity(&self) -> u8 {
        0
    }

    fn decide(&self, g: &MultiGraph, input: &RouteInput<'_>) -> std::result::Result<Decision, RouteError> {
        let v = input.node;
        let tree = match input.in_port {
            PortRef::Origin => 0,
            PortRef::Edge(e) if self.bridges.contains(e) => 0,
            PortRef::Edge(e) => {
                let w = g.other(e, v).ok_or_else(|| super::missing_arc(g, e, v))?;
                *self.owner.get(&(e, w)).ok_or_else(|| super::missing_arc(g, e, v))?
            }
        };
        [tree, 1 - tree]
            .into_iter()
            .filter_map(|i| self.parent(i, v))
            .find(|a| input.is_active(a.edge))
            .map(|a| Decision { out: a.edge, header: input.header })
            .ok_or(RouteError::Stuck)
    }

    fn info(&self, g: &MultiGraph) -> SchemeInfo {
        SchemeInfo {
            kind: "one-resilient".into(),
            params: json!({ "root": g.name(self.root), "bridges": self.bridges.labels(g) }),
        }
    }
}
