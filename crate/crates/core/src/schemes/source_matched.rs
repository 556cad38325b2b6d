use std::collections::BTreeMap;
use std::sync::Arc as Shared;

use serde_json::json;

use crate::error::{domain, Result};
use crate::graph::{MultiGraph, NodeId};

use super::{Decision, RouteError, RouteInput, RoutingScheme, SchemeInfo};

/// Dispatches on the packet's source to one inner scheme per source.
#[derive(Debug, Clone)]
pub struct SourceMatched {
    destination: NodeId,
    bits: u8,
    inner: BTreeMap<NodeId, Shared<dyn RoutingScheme>>,
}

impl SourceMatched {
    pub fn new(inner: BTreeMap<NodeId, Shared<dyn RoutingScheme>>) -> Result<Self> {
        let mut dests = inner.values().map(|s| s.destination());
        let destination = match dests.next() {
            Some(d) => d,
            None => return domain("source matching needs at least one scheme"),
        };
        if dests.any(|d| d != destination) {
            return domain("source-matched schemes disagree on the destination");
        }
        let bits = inner.values().map(|s| s.bit_capacity()).max().unwrap_or(0);
        if inner.values().any(|s| s.bit_capacity() != bits) {
            return domain("source-matched schemes disagree on the header width");
        }
        Ok(Self { destination, bits, inner })
    }

    pub fn sources(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.inner.keys().copied()
    }
}

impl RoutingScheme for SourceMatched {
    fn destination(&self) -> NodeId {
        self.destination
    }

    fn bit_capacity(&self) -> u8 {
        self.bits
    }

    fn decide(&self, g: &MultiGraph, input: &RouteInput<'_>) -> std::result::Result<Decision, RouteError> {
        let scheme = self.inner.get(&input.source).ok_or_else(|| {
            RouteError::Domain(format!("no scheme for source `{}`", g.name(input.source)))
        })?;
        scheme.decide(g, input)
    }

    fn info(&self, g: &MultiGraph) -> SchemeInfo {
        let inner: serde_json::Map<String, serde_json::Value> = self
            .inner
            .iter()
            .map(|(s, scheme)| (g.name(*s).to_string(), serde_json::to_value(scheme.info(g)).unwrap()))
            .collect();
        SchemeInfo { kind: "source-matched".into(), params: json!({ "schemes": inner }) }
    }
}
