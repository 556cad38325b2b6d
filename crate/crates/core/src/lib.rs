//! Local fast failover routing.
//!
//! Every node forwards a packet using only its in-port, the set of
//! currently active incident links and, for some schemes, a few
//! rewritable header bits. The crate builds such schemes from
//! arc-disjoint arborescences and checks their resilience against an
//! adversary that fails links statically, permanently at chosen times,
//! or by flapping them.
//!
//! * [`graph`]: multigraphs, connectivity, edge expansion, file formats.
//! * [`arborescence`]: decomposition, validation, meta-graphs and the
//!   primitive routing moves.
//! * [`schemes`]: the forwarding-function interface and concrete schemes.
//! * [`adversary`]: simulation and exhaustive verification.
//! * [`corpus`]: graphs, schemes and scenarios shipped as regression cases.

pub mod adversary;
pub mod arborescence;
pub mod corpus;
mod error;
pub mod graph;
pub mod schemes;

pub use error::{Error, Result};
