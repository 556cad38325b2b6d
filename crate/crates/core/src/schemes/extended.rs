use std::sync::Arc as Shared;

use serde_json::json;

use crate::arborescence::ArborescenceSet;
use crate::error::{domain, Result};
use crate::graph::{MultiGraph, NodeId};

use super::circular::{check_permutation, CircularScheme};
use super::{in_tree, Decision, PortRef, RouteError, RouteInput, RoutingScheme, SchemeInfo};

/// Route on the last tree `Tk` until its first failure `(x, y)`, then run
/// circular routing over `T1..T(k-1)` starting from the tree holding
/// `(y, x)`, or from the first tree of the inner order if none does.
#[derive(Debug, Clone)]
pub struct ExtendedScheme {
    trees: Shared<ArborescenceSet>,
    inner: Vec<usize>,
}

impl ExtendedScheme {
    pub fn new(trees: Shared<ArborescenceSet>, inner: Vec<usize>) -> Result<Self> {
        if trees.k() < 2 {
            return domain("the extended scheme needs at least two arborescences");
        }
        check_permutation(&inner, trees.k() - 1)?;
        Ok(Self { trees, inner })
    }

    pub fn in_order(trees: Shared<ArborescenceSet>) -> Result<Self> {
        let inner = (0..trees.k().saturating_sub(1)).collect();
        Self::new(trees, inner)
    }

    fn outer(&self) -> usize {
        self.trees.k() - 1
    }
}

impl RoutingScheme for ExtendedScheme {
    fn destination(&self) -> NodeId {
        self.trees.root()
    }

    fn bit_capacity(&self) -> u8 {
        0
    }

    fn decide(&self, g: &MultiGraph, input: &RouteInput<'_>) -> std::result::Result<Decision, RouteError> {
        let current = match input.in_port {
            PortRef::Origin => self.outer(),
            PortRef::Edge(e) => in_tree(g, &self.trees, e, input.node)?,
        };
        if current != self.outer() {
            return CircularScheme::continue_on(&self.trees, &self.inner, current, input);
        }
        let arc = self
            .trees
            .canonical_next(current, input.node)
            .map_err(|e| RouteError::Domain(e.to_string()))?;
        if input.is_active(arc.edge) {
            return Ok(Decision { out: arc.edge, header: input.header });
        }
        let start = match self.trees.bounce_reverse(arc) {
            Some(j) if j != self.outer() => j,
            _ => self.inner[0],
        };
        CircularScheme::continue_on(&self.trees, &self.inner, start, input)
    }

    fn info(&self, g: &MultiGraph) -> SchemeInfo {
        SchemeInfo {
            kind: "extended".into(),
            params: json!({
                "k": self.trees.k(),
                "root": g.name(self.trees.root()),
                "innerOrder": self.inner.iter().map(|i| i + 1).collect::<Vec<_>>(),
            }),
        }
    }
}
