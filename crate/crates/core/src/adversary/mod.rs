//! Failure models, simulation and exhaustive verification.
//!
//! Link states are assigned once per packet hop: at every step the packet
//! sees the active links of its current node, and the link it picks stays
//! up for that hop. Failed links whose endpoints lie in different
//! components of `G \ F` are always down, so no schedule can carry a packet
//! between components.
//!
//! Verification treats the adversary as a player in a finite game over
//! states `(node, in-port, header)`, extended by the set of links already
//! fallen in semi-dynamic mode. Since routing is deterministic, a packet
//! can be kept from its destination exactly when a cycle or a stuck state
//! is reachable.

mod enumerate;
mod report;
mod schedule;
mod simulate;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::{component_labels, EdgeId, EdgeSet, MultiGraph, NodeId};
use crate::schemes::{Header, PortRef};

pub use enumerate::{enumerate_failure_sets, enumerate_link_circular_schemes, OrderChoice};
pub use report::{RunReport, VerdictReport};
pub use schedule::Schedule;
pub use simulate::{simulate, DEFAULT_MAX_STEPS};
pub use verify::{check_failure_set, verify, Sources, VerifyOptions, VerifyStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// All of F down at every step.
    Static,
    /// Each link of F may go down at any step and stays down.
    SemiDynamic,
    /// Links of F flap freely.
    Dynamic,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Static => "static",
            Mode::SemiDynamic => "semi-dynamic",
            Mode::Dynamic => "dynamic",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "static" => Ok(Mode::Static),
            "semi-dynamic" | "semidynamic" | "semi" => Ok(Mode::SemiDynamic),
            "dynamic" => Ok(Mode::Dynamic),
            _ => domain(format!("unknown failure mode `{s}`")),
        }
    }
}

/// A failure set `F` and the adversary's powers over it.
///
/// Link-state assignments over `F` are bit masks: bit `i` set means the
/// `i`-th edge of `F` in id order is down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureModel {
    pub failures: EdgeSet,
    pub mode: Mode,
}

impl FailureModel {
    pub fn new(failures: EdgeSet, mode: Mode) -> Result<Self> {
        if failures.len() > 64 {
            return domain("at most 64 failed links are supported");
        }
        Ok(Self { failures, mode })
    }

    pub fn all_down(&self) -> u64 {
        full_mask(self.failures.len())
    }

    /// Mask with exactly the given edges of F down.
    pub fn mask_of(&self, down: &[EdgeId]) -> Result<u64> {
        let list = self.failures.to_vec();
        let mut mask = 0;
        for e in down {
            let i = list
                .iter()
                .position(|f| f == e)
                .ok_or_else(|| Error::Domain(format!("link {} is not in F", e.0)))?;
            mask |= 1 << i;
        }
        Ok(mask)
    }

    /// Edges of F set down by `mask`.
    pub fn down_edges(&self, mask: u64) -> Vec<EdgeId> {
        self.failures.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e).collect()
    }

    /// Links of F joining different components of `G \ F`.
    pub fn forced_down(&self, g: &MultiGraph) -> Result<u64> {
        let label = component_labels(g, &self.failures)?;
        let mut mask = 0;
        for (i, e) in self.failures.iter().enumerate() {
            let [a, b] = g.ends(e);
            if label[a.0] != label[b.0] {
                mask |= 1 << i;
            }
        }
        Ok(mask)
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Position of a packet between hops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimState {
    pub node: NodeId,
    pub in_port: PortRef,
    pub header: Header,
    /// Links of F already down for good; used in semi-dynamic mode only.
    pub fallen: u64,
}

/// One hop of a run: the state, the down links of F at that step, and the
/// link taken (`None` for the final entry).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    pub state: SimState,
    pub down: u64,
    pub out: Option<EdgeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Delivered,
    Loop,
    Stuck,
    Resilient,
    CounterExample,
}

impl Outcome {
    /// Process exit code: 0 for success, 1 for a failing verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Delivered | Outcome::Resilient => 0,
            Outcome::Loop | Outcome::Stuck | Outcome::CounterExample => 1,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// How a single run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunEnd {
    Delivered,
    /// The final trace entry repeats the entry at `start`.
    Loop { start: usize },
    /// The final trace entry has no admissible out-link.
    Stuck,
}

/// One packet's walk under one schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub source: NodeId,
    pub destination: NodeId,
    pub model: FailureModel,
    pub schedule: Schedule,
    pub trace: Vec<TraceStep>,
    pub end: RunEnd,
}

impl Run {
    pub fn outcome(&self) -> Outcome {
        match self.end {
            RunEnd::Delivered => Outcome::Delivered,
            RunEnd::Loop { .. } => Outcome::Loop,
            RunEnd::Stuck => Outcome::Stuck,
        }
    }

    /// Visited nodes in order, the final entry included.
    pub fn nodes(&self) -> Vec<NodeId> {
        self.trace.iter().map(|s| s.state.node).collect()
    }

    pub fn node_names(&self, g: &MultiGraph) -> Vec<String> {
        self.nodes().into_iter().map(|v| g.name(v).to_string()).collect()
    }

    /// Nodes on the repeating part of a loop, or the stuck node.
    pub fn recurrent_nodes(&self) -> Vec<NodeId> {
        let from = match self.end {
            RunEnd::Loop { start } => start,
            RunEnd::Stuck => self.trace.len().saturating_sub(1),
            RunEnd::Delivered => self.trace.len(),
        };
        let mut nodes: Vec<NodeId> = self.trace[from..].iter().map(|s| s.state.node).collect();
        nodes.sort();
        nodes.dedup();
        nodes
    }

    /// Arcs traversed, as (tail, head).
    pub fn arcs(&self, g: &MultiGraph) -> Vec<(NodeId, NodeId)> {
        self.trace
            .iter()
            .filter_map(|s| s.out.and_then(|e| g.other(e, s.state.node).map(|w| (s.state.node, w))))
            .collect()
    }

    /// Whether the schedule never changes.
    pub fn is_static(&self) -> bool {
        self.schedule.is_constant()
    }
}

/// Result of [`simulate`] or [`verify`].
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    /// The simulated run, or the counter-example witness.
    pub run: Option<Run>,
    pub stats: Option<VerifyStats>,
}
