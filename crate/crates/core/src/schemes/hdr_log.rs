use std::sync::Arc as Shared;

use serde_json::json;

use crate::arborescence::ArborescenceSet;
use crate::error::{domain, Result};
use crate::graph::{MultiGraph, NodeId};

use super::{ceil_log2, in_tree, Decision, PortRef, RouteError, RouteInput, RoutingScheme, SchemeInfo};

/// Header-rewriting routing with `ceil(log2 k)` bits holding `current_id`.
///
/// The packet travels on tree `i` (read from the in-arc). When the out-arc
/// of `T_i` is down and its reverse lies on `T_j`: if `current_id != i` the
/// id advances and the packet moves to `T_current_id`, otherwise it bounces
/// to `T_j`. A failure not shared with any tree also advances the id.
#[derive(Debug, Clone)]
pub struct HdrLogScheme {
    trees: Shared<ArborescenceSet>,
    bits: u8,
}

impl HdrLogScheme {
    pub fn new(trees: Shared<ArborescenceSet>) -> Result<Self> {
        if trees.k() == 0 {
            return domain("header routing needs at least one arborescence");
        }
        let bits = ceil_log2(trees.k());
        Ok(Self { trees, bits })
    }
}

impl RoutingScheme for HdrLogScheme {
    fn destination(&self) -> NodeId {
        self.trees.root()
    }

    fn bit_capacity(&self) -> u8 {
        self.bits
    }

    fn decide(&self, g: &MultiGraph, input: &RouteInput<'_>) -> std::result::Result<Decision, RouteError> {
        let k = self.trees.k();
        let (mut i, mut current) = match input.in_port {
            PortRef::Origin => (0, 0),
            PortRef::Edge(e) => {
                let current = input.header.bits() as usize;
                if current >= k {
                    return Err(RouteError::Domain(format!(
                        "header names tree {} but k = {k}",
                        current + 1
                    )));
                }
                (in_tree(g, &self.trees, e, input.node)?, current)
            }
        };
        for _ in 0..=2 * k {
            let arc = self
                .trees
                .canonical_next(i, input.node)
                .map_err(|e| RouteError::Domain(e.to_string()))?;
            if input.is_active(arc.edge) {
                return Ok(Decision { out: arc.edge, header: input.header.with_bits(current as u32)? });
            }
            match self.trees.bounce_reverse(arc) {
                Some(j) if current == i => i = j,
                _ => {
                    current = (current + 1) % k;
                    i = current;
                }
            }
        }
        Err(RouteError::Stuck)
    }

    fn info(&self, g: &MultiGraph) -> SchemeInfo {
        SchemeInfo {
            kind: "hdr-log-k".into(),
            params: json!({ "k": self.trees.k(), "root": g.name(self.trees.root()), "bits": self.bits }),
        }
    }
}
