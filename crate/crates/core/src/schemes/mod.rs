//! Deterministic forwarding functions.
//!
//! A scheme decides, at node `v`, an out-port from the in-port, the active
//! incident links and the packet header. [`route`] wraps every scheme and
//! enforces the contract shared by all of them: the packet is not at its
//! destination, the active set is incident, the chosen link is active and
//! the header stays within the declared bit capacity.

mod circular;
mod extended;
mod hdr3;
mod hdr_log;
mod link_circular;
mod one_resilient;
mod source_matched;
mod table;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{EdgeId, MultiGraph, NodeId};

pub use circular::CircularScheme;
pub use extended::ExtendedScheme;
pub use hdr3::{Hdr3Scheme, Hdr3State, Hdr3Mode};
pub use hdr_log::HdrLogScheme;
pub use link_circular::{LinkCircularOrder, LinkCircularScheme};
pub use one_resilient::OneResilientScheme;
pub use source_matched::SourceMatched;
pub use table::{TableEntry, TableFile, TableScheme};

/// Rewritable header bits with a fixed capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Header {
    bits: u32,
    capacity: u8,
}

impl Header {
    /// All-zero header of the given width.
    pub fn new(capacity: u8) -> Self {
        Self { bits: 0, capacity }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn capacity(self) -> u8 {
        self.capacity
    }

    pub fn with_bits(self, bits: u32) -> std::result::Result<Self, RouteError> {
        if self.capacity < 32 && bits >> self.capacity != 0 {
            return Err(RouteError::Domain(format!(
                "header value {bits} exceeds {} bits",
                self.capacity
            )));
        }
        Ok(Self { bits, capacity: self.capacity })
    }
}

impl fmt::Display for Header {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.capacity == 0 {
            return f.write_str("-");
        }
        write!(f, "{:0width$b}", self.bits, width = self.capacity as usize)
    }
}

/// Where a packet entered the current node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PortRef {
    /// The packet originates here.
    Origin,
    Edge(EdgeId),
}

#[derive(Debug, Clone, Copy)]
pub struct RouteInput<'a> {
    pub node: NodeId,
    pub in_port: PortRef,
    /// Active incident links, sorted by id.
    pub active: &'a [EdgeId],
    pub header: Header,
    /// Originating node, read only by source-matched schemes.
    pub source: NodeId,
}

impl RouteInput<'_> {
    pub fn is_active(&self, e: EdgeId) -> bool {
        self.active.binary_search(&e).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub out: EdgeId,
    pub header: Header,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RouteError {
    /// No admissible out-port: the packet cannot move.
    #[error("packet stuck")]
    Stuck,
    #[error("{0}")]
    Domain(String),
}

/// Type and parameters of a generated scheme, exported instead of tables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeInfo {
    #[serde(rename = "type")]
    pub kind: String,
    pub params: serde_json::Value,
}

pub trait RoutingScheme: Send + Sync + fmt::Debug {
    fn destination(&self) -> NodeId;

    fn bit_capacity(&self) -> u8;

    /// The per-node decision; called through [`route`].
    fn decide(&self, g: &MultiGraph, input: &RouteInput<'_>) -> std::result::Result<Decision, RouteError>;

    fn info(&self, g: &MultiGraph) -> SchemeInfo;
}

/// One forwarding decision with the shared contract checked.
pub fn route(
    scheme: &dyn RoutingScheme,
    g: &MultiGraph,
    input: &RouteInput<'_>,
) -> std::result::Result<Decision, RouteError> {
    let v = input.node;
    if v == scheme.destination() {
        return Err(RouteError::Domain(format!("`{}` is the destination", g.name(v))));
    }
    if input.header.capacity() != scheme.bit_capacity() {
        return Err(RouteError::Domain(format!(
            "header carries {} bits, scheme declares {}",
            input.header.capacity(),
            scheme.bit_capacity()
        )));
    }
    if let PortRef::Edge(e) = input.in_port {
        if g.other(e, v).is_none() {
            return Err(RouteError::Domain(format!(
                "in-port {} is not incident to `{}`",
                e.0,
                g.name(v)
            )));
        }
    }
    if input.active.iter().any(|&e| g.other(e, v).is_none()) {
        return Err(RouteError::Domain(format!("active set not incident to `{}`", g.name(v))));
    }
    if input.active.is_empty() {
        return Err(RouteError::Stuck);
    }
    let decision = scheme.decide(g, input)?;
    if !input.is_active(decision.out) {
        return Err(RouteError::Domain(format!(
            "scheme chose inactive link {} at `{}`",
            g.edge_label(decision.out),
            g.name(v)
        )));
    }
    if decision.header.capacity() != scheme.bit_capacity() {
        return Err(RouteError::Domain("scheme changed the header width".into()));
    }
    if scheme.bit_capacity() == 0 && decision.header.bits() != 0 {
        return Err(RouteError::Domain("bit-free scheme wrote header bits".into()));
    }
    Ok(decision)
}

pub(crate) fn missing_arc(g: &MultiGraph, e: EdgeId, v: NodeId) -> RouteError {
    RouteError::Domain(format!(
        "in-arc over {} into `{}` lies on no arborescence",
        g.edge_label(e),
        g.name(v)
    ))
}

/// Tree owning the arc that carried the packet into `v` over `e`.
pub(crate) fn in_tree(
    g: &MultiGraph,
    ts: &crate::arborescence::ArborescenceSet,
    e: EdgeId,
    v: NodeId,
) -> std::result::Result<usize, RouteError> {
    let w = g.other(e, v).ok_or_else(|| missing_arc(g, e, v))?;
    g.arc_from(e, w)
        .and_then(|a| ts.owner(a))
        .ok_or_else(|| missing_arc(g, e, v))
}

pub(crate) fn ceil_log2(k: usize) -> u8 {
    let mut bits = 0;
    while (1usize << bits) < k {
        bits += 1;
    }
    bits
}
