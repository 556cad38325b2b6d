use std::sync::Arc as Shared;

use serde_json::json;

use crate::arborescence::ArborescenceSet;
use crate::error::{domain, Result};
use crate::graph::{EdgeId, MultiGraph, NodeId};

use super::{Decision, Header, PortRef, RouteError, RouteInput, RoutingScheme, SchemeInfo};

/// Header mode, stored in the two low bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hdr3Mode {
    Canonical = 0,
    /// Bounced: walking the depth-first tour of the bounce tree.
    DfsForward = 1,
    /// Walking the tour backwards to the first failure.
    DfsReverse = 2,
}

/// Decoded header: mode plus the direction flag in bit 2, set when a tour
/// hop went from parent to child.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hdr3State {
    pub mode: Hdr3Mode,
    pub from_parent: bool,
}

impl Hdr3State {
    pub fn encode(self) -> u32 {
        self.mode as u32 | (u32::from(self.from_parent) << 2)
    }

    pub fn decode(bits: u32) -> std::result::Result<Self, RouteError> {
        let mode = match bits & 0b11 {
            0 => Hdr3Mode::Canonical,
            1 => Hdr3Mode::DfsForward,
            2 => Hdr3Mode::DfsReverse,
            m => return Err(RouteError::Domain(format!("undecodable header mode {m}"))),
        };
        Ok(Self { mode, from_parent: bits & 0b100 != 0 })
    }
}

/// Three-bit header routing.
///
/// Canonical routing on `T_i`. A dead out-arc `(u, v)` whose reverse lies
/// on `T_j` bounces the packet onto the depth-first tour of `T_j`, entered
/// at `u` as if it had just come up from `v`. The tour leaves a node by
/// the tree edge after the in-edge in the node's rotation (its `T_j`
/// edges in edge-id order). At a dead tour edge the packet walks the tour
/// backwards; the next dead edge `{y, z}` met is taken to be the first
/// failure, the tree holding `(y, z)` is read as `T_i`, and canonical
/// routing resumes on `T_(i+1)` at `y`. Failures not shared with another
/// tree advance to the next tree directly.
///
/// The current tree is always recovered from the in-arc; on the tour the
/// direction flag tells whether that arc belongs to the tree as traversed
/// or reversed.
#[derive(Debug, Clone)]
pub struct Hdr3Scheme {
    trees: Shared<ArborescenceSet>,
}

#[derive(Debug, Clone, Copy)]
enum Local {
    Canonical(usize),
    /// On the tour of a tree, having arrived over an edge.
    Forward { tree: usize, via: EdgeId },
    Reverse { tree: usize, via: EdgeId },
}

impl Hdr3Scheme {
    pub fn new(trees: Shared<ArborescenceSet>) -> Result<Self> {
        if trees.k() == 0 {
            return domain("header routing needs at least one arborescence");
        }
        Ok(Self { trees })
    }

    fn next(&self, i: usize) -> usize {
        (i + 1) % self.trees.k()
    }

    fn owner_from(&self, g: &MultiGraph, e: EdgeId, tail: NodeId) -> Option<usize> {
        g.arc_from(e, tail).and_then(|a| self.trees.owner(a))
    }

    /// Tree edges of `v` on `T_i` in edge-id order.
    fn rotation(&self, i: usize, v: NodeId) -> Vec<EdgeId> {
        let mut ring: Vec<EdgeId> = self.trees.children(i, v).iter().map(|&(e, _)| e).collect();
        ring.extend(self.trees.tree(i).parent(v).map(|a| a.edge));
        ring.sort();
        ring
    }

    /// Tour edge `step` places after `via` in the rotation of `v` on `T_i`.
    fn turn(&self, i: usize, v: NodeId, via: EdgeId, step: isize) -> Option<EdgeId> {
        let ring = self.rotation(i, v);
        let pos = ring.iter().position(|&e| e == via)? as isize;
        Some(ring[(pos + step).rem_euclid(ring.len() as isize) as usize])
    }

    fn is_child_edge(&self, i: usize, v: NodeId, e: EdgeId) -> bool {
        self.trees.children(i, v).iter().any(|&(c, _)| c == e)
    }

    fn emit(out: EdgeId, header: Header, mode: Hdr3Mode, from_parent: bool) -> std::result::Result<Decision, RouteError> {
        Ok(Decision { out, header: header.with_bits(Hdr3State { mode, from_parent }.encode())? })
    }
}

impl RoutingScheme for Hdr3Scheme {
    fn destination(&self) -> NodeId {
        self.trees.root()
    }

    fn bit_capacity(&self) -> u8 {
        3
    }

    fn decide(&self, g: &MultiGraph, input: &RouteInput<'_>) -> std::result::Result<Decision, RouteError> {
        let v = input.node;
        let mut local = match input.in_port {
            PortRef::Origin => Local::Canonical(0),
            PortRef::Edge(e) => {
                let unowned = || super::missing_arc(g, e, v);
                let w = g.other(e, v).ok_or_else(unowned)?;
                let state = Hdr3State::decode(input.header.bits())?;
                let tail = if state.from_parent { v } else { w };
                let tree = self.owner_from(g, e, tail).ok_or_else(unowned)?;
                match state.mode {
                    Hdr3Mode::Canonical => Local::Canonical(tree),
                    Hdr3Mode::DfsForward => Local::Forward { tree, via: e },
                    Hdr3Mode::DfsReverse => Local::Reverse { tree, via: e },
                }
            }
        };
        let stuck = |e: String| RouteError::Domain(e);
        for _ in 0..4 * self.trees.k() + 4 {
            local = match local {
                Local::Canonical(i) => {
                    let arc = self.trees.canonical_next(i, v).map_err(|e| stuck(e.to_string()))?;
                    if input.is_active(arc.edge) {
                        return Self::emit(arc.edge, input.header, Hdr3Mode::Canonical, false);
                    }
                    match self.trees.bounce_reverse(arc) {
                        Some(j) if j != i => Local::Forward { tree: j, via: arc.edge },
                        _ => Local::Canonical(self.next(i)),
                    }
                }
                Local::Forward { tree, via } => {
                    let out = self.turn(tree, v, via, 1).ok_or_else(|| super::missing_arc(g, via, v))?;
                    if input.is_active(out) {
                        let down = self.is_child_edge(tree, v, out);
                        return Self::emit(out, input.header, Hdr3Mode::DfsForward, down);
                    }
                    Local::Reverse { tree, via: out }
                }
                Local::Reverse { tree, via } => {
                    let out = self.turn(tree, v, via, -1).ok_or_else(|| super::missing_arc(g, via, v))?;
                    if input.is_active(out) {
                        let down = self.is_child_edge(tree, v, out);
                        return Self::emit(out, input.header, Hdr3Mode::DfsReverse, down);
                    }
                    match self.owner_from(g, out, v) {
                        Some(i) => Local::Canonical(self.next(i)),
                        None => Local::Canonical(self.next(tree)),
                    }
                }
            };
        }
        Err(RouteError::Stuck)
    }

    fn info(&self, g: &MultiGraph) -> SchemeInfo {
        SchemeInfo {
            kind: "hdr-3-bits".into(),
            params: json!({
                "k": self.trees.k(),
                "root": g.name(self.trees.root()),
                "encoding": "bits 0-1 mode (0 canonical, 1 dfs-forward, 2 dfs-reverse), bit 2 parent-to-child hop",
            }),
        }
    }
}
