use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{domain, Result};
use crate::graph::{EdgeId, MultiGraph, NodeId};

use super::{Decision, Header, PortRef, RouteError, RouteInput, RoutingScheme, SchemeInfo};

/// On-disk explicit forwarding table.
///
/// Per node, `ports` repeats the node's incident edge ids; bit `i` of an
/// entry's `mask` is set when `ports[i]` is active. `in` is the in-port
/// edge id, or `null` for a packet originating at the node. Missing
/// entries mean the packet is stuck. Tables carry no header bits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub destination: String,
    pub nodes: BTreeMap<String, NodeTable>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeTable {
    pub ports: Vec<usize>,
    pub rules: Vec<TableEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    #[serde(rename = "in")]
    pub in_port: Option<usize>,
    pub mask: u32,
    pub out: usize,
}

impl TableFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes") + "\n"
    }

    /// Tabulates `scheme` at every non-destination node for every in-port
    /// and every nonempty active set, as seen by packets from `source`.
    /// Combinations the scheme rejects are left out.
    pub fn tabulate(g: &MultiGraph, scheme: &dyn RoutingScheme, source: NodeId, notes: Vec<String>) -> Result<Self> {
        if scheme.bit_capacity() != 0 {
            return domain("only bit-free schemes can be tabulated");
        }
        let mut nodes = BTreeMap::new();
        for v in g.nodes().filter(|&v| v != scheme.destination()) {
            let ports: Vec<EdgeId> = g.incident(v).to_vec();
            if ports.len() > 16 {
                return domain(format!("`{}` has too many ports to tabulate", g.name(v)));
            }
            let mut rules = Vec::new();
            let ins = std::iter::once(PortRef::Origin).chain(ports.iter().map(|&e| PortRef::Edge(e)));
            for in_port in ins {
                for mask in 1u32..(1 << ports.len()) {
                    let mut active: Vec<EdgeId> =
                        (0..ports.len()).filter(|i| mask >> i & 1 == 1).map(|i| ports[i]).collect();
                    active.sort();
                    let input = RouteInput { node: v, in_port, active: &active, header: Header::new(0), source };
                    match super::route(scheme, g, &input) {
                        Ok(d) => rules.push(TableEntry {
                            in_port: match in_port {
                                PortRef::Origin => None,
                                PortRef::Edge(e) => Some(e.0),
                            },
                            mask,
                            out: d.out.0,
                        }),
                        Err(RouteError::Stuck) | Err(RouteError::Domain(_)) => {}
                    }
                }
            }
            nodes.insert(
                g.name(v).to_string(),
                NodeTable { ports: ports.iter().map(|e| e.0).collect(), rules },
            );
        }
        Ok(Self { notes, destination: g.name(scheme.destination()).to_string(), nodes })
    }
}

/// Forwarding by explicit table lookup.
#[derive(Debug, Clone)]
pub struct TableScheme {
    destination: NodeId,
    ports: Vec<Vec<EdgeId>>,
    rules: HashMap<(NodeId, PortRef, u32), EdgeId>,
}

impl TableScheme {
    pub fn from_file(g: &MultiGraph, file: &TableFile) -> Result<Self> {
        let destination = g.require(&file.destination)?;
        let mut ports = vec![Vec::new(); g.node_count()];
        let mut rules = HashMap::new();
        for (name, table) in &file.nodes {
            let v = g.require(name)?;
            let incident: Vec<usize> = g.incident(v).iter().map(|e| e.0).collect();
            if table.ports != incident {
                return domain(format!("ports of `{name}` do not match the graph"));
            }
            ports[v.0] = g.incident(v).to_vec();
            for r in &table.rules {
                let in_port = match r.in_port {
                    None => PortRef::Origin,
                    Some(e) if incident.contains(&e) => PortRef::Edge(EdgeId(e)),
                    Some(e) => return domain(format!("in-port {e} is not incident to `{name}`")),
                };
                let out_bit = incident.iter().position(|&e| e == r.out);
                let valid = r.mask >> incident.len() == 0 && out_bit.is_some_and(|b| r.mask >> b & 1 == 1);
                if !valid {
                    return domain(format!("rule at `{name}` forwards outside its active set"));
                }
                if rules.insert((v, in_port, r.mask), EdgeId(r.out)).is_some() {
                    return domain(format!("duplicate rule at `{name}`"));
                }
            }
        }
        Ok(Self { destination, ports, rules })
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }
}

impl RoutingScheme for TableScheme {
    fn destination(&self) -> NodeId {
        self.destination
    }

    fn bit_capacity(&self) -> u8 {
        0
    }

    fn decide(&self, g: &MultiGraph, input: &RouteInput<'_>) -> std::result::Result<Decision, RouteError> {
        let ports = &self.ports[input.node.0];
        if ports.is_empty() {
            return Err(RouteError::Domain(format!("no table at `{}`", g.name(input.node))));
        }
        let mask = ports
            .iter()
            .enumerate()
            .filter(|(_, &e)| input.is_active(e))
            .fold(0u32, |m, (i, _)| m | 1 << i);
        self.rules
            .get(&(input.node, input.in_port, mask))
            .map(|&out| Decision { out, header: input.header })
            .ok_or(RouteError::Stuck)
    }

    fn info(&self, g: &MultiGraph) -> SchemeInfo {
        SchemeInfo {
            kind: "table".into(),
            params: json!({ "destination": g.name(self.destination), "rules": self.rules.len() }),
        }
    }
}
