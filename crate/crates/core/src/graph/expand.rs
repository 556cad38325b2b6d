use crate::error::{domain, Result};

use super::{EdgeId, MultiGraph, NodeId};

/// Result of [`expand_edges`] with the bookkeeping needed to check it.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub graph: MultiGraph,
    /// Node of the expanded graph for each node of the outer graph.
    pub outer: Vec<NodeId>,
    /// Per outer edge: copies of the entry and exit nodes.
    pub gadgets: Vec<Gadget>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gadget {
    pub edge: EdgeId,
    pub entry: NodeId,
    pub exit: NodeId,
}

/// Replaces every edge `{v_i, v_j}` of `g` by a fresh copy of `h` wired as
/// `v_i – entry' … exit' – v_j`. Copy nodes are named `x^{v_i,v_j}`; a
/// parallel edge gets a `#id` suffix to keep names unique.
pub fn expand_edges(
    g: &MultiGraph,
    h: &MultiGraph,
    h_entry: NodeId,
    h_exit: NodeId,
) -> Result<Expansion> {
    h.check_node(h_entry)?;
    h.check_node(h_exit)?;
    if h_entry == h_exit {
        return domain("expansion entry and exit must differ");
    }
    if g.node_count() == 0 || h.node_count() == 0 {
        return domain("expansion needs nonempty graphs");
    }
    let mut out = MultiGraph::new();
    let outer = g.nodes().map(|v| out.add_node(g.name(v))).collect::<Result<Vec<_>>>()?;
    let mut gadgets = Vec::with_capacity(g.edge_count());
    for e in g.edge_ids() {
        let [a, b] = g.ends(e);
        let parallel = g.incident(a).iter().any(|&f| f != e && g.other(f, a) == Some(b));
        let tag = if parallel {
            format!("{{{},{}}}#{}", g.name(a), g.name(b), e.0)
        } else {
            format!("{{{},{}}}", g.name(a), g.name(b))
        };
        let copy = h
            .nodes()
            .map(|x| out.add_node(&format!("{}^{}", h.name(x), tag)))
            .collect::<Result<Vec<_>>>()?;
        for f in h.edge_ids() {
            let [x, y] = h.ends(f);
            out.add_edge(copy[x.0], copy[y.0])?;
        }
        let (entry, exit) = (copy[h_entry.0], copy[h_exit.0]);
        out.add_edge(outer[a.0], entry)?;
        out.add_edge(exit, outer[b.0])?;
        gadgets.push(Gadget { edge: e, entry, exit });
    }
    Ok(Expansion { graph: out, outer, gadgets })
}
