use std::sync::Arc as Shared;

use serde_json::json;

use crate::arborescence::ArborescenceSet;
use crate::error::{domain, Result};
use crate::graph::{MultiGraph, NodeId};

use super::{in_tree, Decision, PortRef, RouteError, RouteInput, RoutingScheme, SchemeInfo};

/// Circular-arborescence routing: follow the tree of the in-arc; when its
/// out-arc is down, move to the next tree in the circular order whose
/// out-arc is up. Packets start on the first tree of the order.
#[derive(Debug, Clone)]
pub struct CircularScheme {
    trees: Shared<ArborescenceSet>,
    order: Vec<usize>,
}

impl CircularScheme {
    pub fn new(trees: Shared<ArborescenceSet>, order: Vec<usize>) -> Result<Self> {
        check_permutation(&order, trees.k())?;
        if order.is_empty() {
            return domain("circular routing needs at least one arborescence");
        }
        Ok(Self { trees, order })
    }

    /// Identity order `T1, ..., Tk`.
    pub fn in_order(trees: Shared<ArborescenceSet>) -> Result<Self> {
        let order = (0..trees.k()).collect();
        Self::new(trees, order)
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn trees(&self) -> &ArborescenceSet {
        &self.trees
    }

    /// Decision once the current tree is known.
    pub(crate) fn continue_on(
        trees: &ArborescenceSet,
        order: &[usize],
        current: usize,
        input: &RouteInput<'_>,
    ) -> std::result::Result<Decision, RouteError> {
        let pos = order.iter().position(|&x| x == current).ok_or_else(|| {
            RouteError::Domain(format!("T{} is outside the circular order", current + 1))
        })?;
        for step in 0..order.len() {
            let j = order[(pos + step) % order.len()];
            let arc = trees
                .canonical_next(j, input.node)
                .map_err(|e| RouteError::Domain(e.to_string()))?;
            if input.is_active(arc.edge) {
                return Ok(Decision { out: arc.edge, header: input.header });
            }
        }
        Err(RouteError::Stuck)
    }
}

impl RoutingScheme for CircularScheme {
    fn destination(&self) -> NodeId {
        self.trees.root()
    }

    fn bit_capacity(&self) -> u8 {
        0
    }

    fn decide(&self, g: &MultiGraph, input: &RouteInput<'_>) -> std::result::Result<Decision, RouteError> {
        let current = match input.in_port {
            PortRef::Origin => self.order[0],
            PortRef::Edge(e) => in_tree(g, &self.trees, e, input.node)?,
        };
        Self::continue_on(&self.trees, &self.order, current, input)
    }

    fn info(&self, g: &MultiGraph) -> SchemeInfo {
        SchemeInfo {
            kind: "circular".into(),
            params: json!({
                "k": self.trees.k(),
                "root": g.name(self.trees.root()),
                "order": self.order.iter().map(|i| i + 1).collect::<Vec<_>>(),
            }),
        }
    }
}

pub(crate) fn check_permutation(order: &[usize], k: usize) -> Result<()> {
    let mut seen = vec![false; k];
    for &i in order {
        if i >= k || std::mem::replace(&mut seen[i], true) {
            return domain(format!("order {order:?} is not a permutation of 0..{k}"));
        }
    }
    if order.len() != k {
        return domain(format!("order {order:?} is not a permutation of 0..{k}"));
    }
    Ok(())
}
