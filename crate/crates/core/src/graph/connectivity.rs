use crate::error::{domain, Result};

use super::{EdgeId, EdgeSet, FlowNetwork, MultiGraph, NodeId};

fn network(g: &MultiGraph) -> FlowNetwork {
    let mut net = FlowNetwork::new(g.node_count());
    for e in g.edge_ids() {
        let [a, b] = g.ends(e);
        net.add_edge(a.0, b.0);
    }
    net
}

/// Maximum number of edge-disjoint `s`–`t` paths.
pub fn local_edge_connectivity(g: &MultiGraph, s: NodeId, t: NodeId) -> Result<usize> {
    g.check_node(s)?;
    g.check_node(t)?;
    if s == t {
        return domain("local connectivity needs distinct endpoints");
    }
    Ok(network(g).max_flow(s.0, t.0, None) as usize)
}

/// Global edge connectivity; 0 when disconnected.
pub fn edge_connectivity(g: &MultiGraph) -> Result<usize> {
    if g.node_count() < 2 {
        return domain("edge connectivity needs at least two nodes");
    }
    let base = network(g);
    let mut best = u32::MAX;
    for v in 1..g.node_count() {
        best = best.min(base.clone().max_flow(0, v, Some(best)));
        if best == 0 {
            break;
        }
    }
    Ok(best as usize)
}

/// Component label per node of `g` minus `removed`; labels number
/// components by their smallest node id.
pub fn component_labels(g: &MultiGraph, removed: &EdgeSet) -> Result<Vec<usize>> {
    for e in removed.iter() {
        g.check_edge(e)?;
    }
    let n = g.node_count();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        let mut stack = vec![NodeId(start)];
        while let Some(v) = stack.pop() {
            for &e in g.incident(v) {
                if removed.contains(e) {
                    continue;
                }
                let w = g.other(e, v).expect("incident edge");
                if label[w.0] == usize::MAX {
                    label[w.0] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    Ok(label)
}

/// Connected components of `g` minus `removed`, each sorted, ordered by
/// smallest member.
pub fn components(g: &MultiGraph, removed: &EdgeSet) -> Result<Vec<Vec<NodeId>>> {
    let label = component_labels(g, removed)?;
    let count = label.iter().copied().max().map_or(0, |m| m + 1);
    let mut parts = vec![Vec::new(); count];
    for (v, &l) in label.iter().enumerate() {
        parts[l].push(NodeId(v));
    }
    Ok(parts)
}

pub fn connected(g: &MultiGraph, removed: &EdgeSet, s: NodeId, t: NodeId) -> Result<bool> {
    let label = component_labels(g, removed)?;
    Ok(label[s.0] == label[t.0])
}

/// Cut edges, found with low-link numbers over edge ids so that parallel
/// edges never qualify.
pub fn bridges(g: &MultiGraph) -> EdgeSet {
    let n = g.node_count();
    let mut order = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut found = Vec::new();
    let mut clock = 0;
    for root in 0..n {
        if order[root] != usize::MAX {
            continue;
        }
        // (node, edge used to enter it, next incident position)
        let mut stack: Vec<(NodeId, Option<EdgeId>, usize)> = vec![(NodeId(root), None, 0)];
        order[root] = clock;
        low[root] = clock;
        clock += 1;
        while let Some(top) = stack.last_mut() {
            let (v, via, pos) = *top;
            if pos < g.degree(v) {
                top.2 += 1;
                let e = g.incident(v)[pos];
                if Some(e) == via {
                    continue;
                }
                let w = g.other(e, v).expect("incident edge");
                if order[w.0] == usize::MAX {
                    order[w.0] = clock;
                    low[w.0] = clock;
                    clock += 1;
                    stack.push((w, Some(e), 0));
                } else {
                    low[v.0] = low[v.0].min(order[w.0]);
                }
            } else {
                stack.pop();
                if let (Some(e), Some(&(parent, _, _))) = (via, stack.last()) {
                    low[parent.0] = low[parent.0].min(low[v.0]);
                    if low[v.0] > order[parent.0] {
                        found.push(e);
                    }
                }
            }
        }
    }
    found.into_iter().collect()
}
