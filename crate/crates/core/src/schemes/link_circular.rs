use serde_json::json;

use crate::error::{domain, Error, Result};
use crate::graph::{EdgeId, MultiGraph, NodeId};

use super::{Decision, PortRef, RouteError, RouteInput, RoutingScheme, SchemeInfo};

/// Per node, a circular sequence of its incident edges plus the port a
/// packet originating there is sent to first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkCircularOrder {
    cycles: Vec<Option<Vec<EdgeId>>>,
    start: Vec<Option<EdgeId>>,
}

impl LinkCircularOrder {
    pub fn empty(g: &MultiGraph) -> Self {
        Self { cycles: vec![None; g.node_count()], start: vec![None; g.node_count()] }
    }

    /// Sets the cycle of `node` from neighbour names; with parallel edges
    /// each repetition of a name takes the next edge in id order.
    pub fn set(&mut self, g: &MultiGraph, node: &str, neighbours: &[&str]) -> Result<()> {
        let v = g.require(node)?;
        let mut cycle = Vec::new();
        for name in neighbours {
            let w = g.require(name)?;
            let e = g
                .incident(v)
                .iter()
                .copied()
                .find(|&e| g.other(e, v) == Some(w) && !cycle.contains(&e))
                .ok_or_else(|| Error::Domain(format!("no free edge `{node}`-`{name}`")))?;
            cycle.push(e);
        }
        let mut sorted = cycle.clone();
        sorted.sort();
        let mut incident = g.incident(v).to_vec();
        incident.sort();
        if sorted != incident {
            return domain(format!("order at `{node}` is not a permutation of its links"));
        }
        self.cycles[v.0] = Some(cycle);
        Ok(())
    }

    pub fn set_start(&mut self, g: &MultiGraph, node: &str, neighbour: &str) -> Result<()> {
        let v = g.require(node)?;
        let e = g.edge_named(node, neighbour)?;
        self.start[v.0] = Some(e);
        Ok(())
    }

    /// Gives every node without a cycle its only possible one (degree at
    /// most two), in incidence order.
    pub fn fill_forced(&mut self, g: &MultiGraph) -> Result<()> {
        for v in g.nodes() {
            if self.cycles[v.0].is_none() {
                if g.degree(v) > 2 {
                    return domain(format!("`{}` has degree {} and needs an order", g.name(v), g.degree(v)));
                }
                self.cycles[v.0] = Some(g.incident(v).to_vec());
            }
        }
        Ok(())
    }

    pub fn cycle(&self, v: NodeId) -> Option<&[EdgeId]> {
        self.cycles[v.0].as_deref()
    }

    /// Start port, defaulting to the first link of the cycle.
    pub fn start(&self, v: NodeId) -> Option<EdgeId> {
        self.start[v.0].or_else(|| self.cycle(v).and_then(|c| c.first().copied()))
    }
}

/// Forward to the circular successor of the in-port, skipping dead links;
/// a packet with no other live link bounces back.
#[derive(Debug, Clone)]
pub struct LinkCircularScheme {
    destination: NodeId,
    orders: LinkCircularOrder,
}

impl LinkCircularScheme {
    pub fn new(g: &MultiGraph, destination: NodeId, orders: LinkCircularOrder) -> Result<Self> {
        g.check_node(destination)?;
        for v in g.nodes().filter(|&v| v != destination) {
            if orders.cycle(v).is_none() {
                return domain(format!("no link order at `{}`", g.name(v)));
            }
        }
        Ok(Self { destination, orders })
    }

    pub fn orders(&self) -> &LinkCircularOrder {
        &self.orders
    }
}

impl RoutingScheme for LinkCircularScheme {
    fn destination(&self) -> NodeId {
        self.destination
    }

    fn bit_capacity(&self) -> u8 {
        0
    }

    fn decide(&self, g: &MultiGraph, input: &RouteInput<'_>) -> std::result::Result<Decision, RouteError> {
        let v = input.node;
        let cycle = self
            .orders
            .cycle(v)
            .ok_or_else(|| RouteError::Domain(format!("no link order at `{}`", g.name(v))))?;
        let (from, skip) = match input.in_port {
            PortRef::Origin => {
                let start = self.orders.start(v).ok_or(RouteError::Stuck)?;
                (start, 0)
            }
            PortRef::Edge(e) => (e, 1),
        };
        let pos = cycle.iter().position(|&e| e == from).ok_or_else(|| {
            RouteError::Domain(format!("port {} is not in the order at `{}`", from.0, g.name(v)))
        })?;
        let n = cycle.len();
        (0..n)
            .map(|step| cycle[(pos + skip + step) % n])
            .find(|&e| input.is_active(e))
            .map(|out| Decision { out, header: input.header })
            .ok_or(RouteError::Stuck)
    }

    fn info(&self, g: &MultiGraph) -> SchemeInfo {
        let orders: serde_json::Map<String, serde_json::Value> = g
            .nodes()
            .filter_map(|v| {
                let cycle = self.orders.cycle(v)?;
                let names: Vec<&str> =
                    cycle.iter().map(|&e| g.name(g.other(e, v).expect("incident"))).collect();
                let start = self.orders.start(v).map(|e| g.name(g.other(e, v).expect("incident")));
                Some((g.name(v).to_string(), json!({ "cycle": names, "start": start })))
            })
            .collect();
        SchemeInfo {
            kind: "link-circular".into(),
            params: json!({ "destination": g.name(self.destination), "orders": orders }),
        }
    }
}
