use std::collections::HashMap;

use crate::error::{domain, Error, Result};
use crate::graph::{EdgeId, MultiGraph, NodeId};
use crate::schemes::{route, Header, PortRef, RouteError, RouteInput, RoutingScheme};

use super::{FailureModel, Mode, Run, RunEnd, Schedule, SimState, TraceStep, Verdict};

/// Shared context of a packet walk under a fixed failure model.
pub(crate) struct Walk<'a> {
    pub g: &'a MultiGraph,
    pub scheme: &'a dyn RoutingScheme,
    pub model: &'a FailureModel,
    pub source: NodeId,
    pub forced: u64,
    pub all: u64,
    edge_bit: Vec<Option<u8>>,
}

/// Result of one forwarding step.
pub(crate) enum Hop {
    Next(EdgeId, SimState),
    Stuck,
}

impl<'a> Walk<'a> {
    pub fn new(
        g: &'a MultiGraph,
        scheme: &'a dyn RoutingScheme,
        model: &'a FailureModel,
        source: NodeId,
    ) -> Result<Self> {
        g.check_node(source)?;
        let mut edge_bit = vec![None; g.edge_count()];
        for (i, e) in model.failures.iter().enumerate() {
            g.check_edge(e)?;
            edge_bit[e.0] = Some(i as u8);
        }
        Ok(Self {
            g,
            scheme,
            model,
            source,
            forced: model.forced_down(g)?,
            all: model.all_down(),
            edge_bit,
        })
    }

    pub fn initial(&self) -> SimState {
        let fallen = if self.model.mode == Mode::SemiDynamic { self.forced } else { 0 };
        SimState {
            node: self.source,
            in_port: PortRef::Origin,
            header: Header::new(self.scheme.bit_capacity()),
            fallen,
        }
    }

    /// Bit of `e` in F masks.
    pub fn bit(&self, e: EdgeId) -> Option<u8> {
        self.edge_bit[e.0]
    }

    /// Mask of the F-links at `v` the adversary may still switch.
    pub fn free_at(&self, v: NodeId, fallen: u64) -> u64 {
        let mut mask = 0;
        for &e in self.g.incident(v) {
            if let Some(b) = self.bit(e) {
                mask |= 1 << b;
            }
        }
        let fixed = match self.model.mode {
            Mode::Static => self.all,
            Mode::SemiDynamic => self.forced | fallen,
            Mode::Dynamic => self.forced,
        };
        mask & !fixed
    }

    /// Forwards once from `state` with `down` links of F down.
    pub fn hop(&self, state: SimState, down: u64) -> Result<Hop> {
        let v = state.node;
        let active: Vec<EdgeId> = {
            let mut a: Vec<EdgeId> = self
                .g
                .incident(v)
                .iter()
                .copied()
                .filter(|&e| self.bit(e).is_none_or(|b| down >> b & 1 == 0))
                .collect();
            a.sort();
            a.dedup();
            a
        };
        let input = RouteInput {
            node: v,
            in_port: state.in_port,
            active: &active,
            header: state.header,
            source: self.source,
        };
        match route(self.scheme, self.g, &input) {
            Ok(d) => {
                let w = self.g.other(d.out, v).expect("route checks incidence");
                let fallen = if self.model.mode == Mode::SemiDynamic { down } else { 0 };
                Ok(Hop::Next(
                    d.out,
                    SimState { node: w, in_port: PortRef::Edge(d.out), header: d.header, fallen },
                ))
            }
            Err(RouteError::Stuck) => Ok(Hop::Stuck),
            Err(RouteError::Domain(msg)) => Err(Error::Domain(msg)),
        }
    }

    /// Checks one step's assignment against the mode and non-trap rules.
    fn admissible(&self, step: usize, down: u64, fallen: u64) -> Result<()> {
        if down & !self.all != 0 {
            return domain(format!("step {step}: schedule downs links outside F"));
        }
        if down & self.forced != self.forced {
            return domain(format!(
                "step {step}: schedule raises a link joining two components of G \\ F"
            ));
        }
        match self.model.mode {
            Mode::Static if down != self.all => {
                domain(format!("step {step}: static failures must all be down"))
            }
            Mode::SemiDynamic if down & fallen != fallen => {
                domain(format!("step {step}: semi-dynamic schedule revives a fallen link"))
            }
            _ => Ok(()),
        }
    }

    /// Plays `schedule` from the initial state. With `stop_on_repeat` the
    /// walk ends at the first repeated state; otherwise it runs exactly
    /// `max_steps` hops unless delivered or stuck.
    pub fn run(&self, schedule: &Schedule, max_steps: usize, stop_on_repeat: bool) -> Result<Run> {
        let t = self.scheme.destination();
        let mut trace = Vec::new();
        let mut seen: HashMap<SimState, usize> = HashMap::new();
        let mut state = self.initial();
        let finish = |trace: Vec<TraceStep>, end| Run {
            source: self.source,
            destination: t,
            model: self.model.clone(),
            schedule: schedule.clone(),
            trace,
            end,
        };
        for step in 0.. {
            let down = schedule.at(step, self.all);
            if state.node == t {
                trace.push(TraceStep { state, down, out: None });
                return Ok(finish(trace, RunEnd::Delivered));
            }
            if stop_on_repeat {
                if let Some(&start) = seen.get(&state) {
                    trace.push(TraceStep { state, down, out: None });
                    return Ok(finish(trace, RunEnd::Loop { start }));
                }
                seen.insert(state, step);
            }
            if step >= max_steps {
                if stop_on_repeat {
                    return Err(Error::StepLimit(max_steps));
                }
                trace.push(TraceStep { state, down, out: None });
                return Ok(finish(trace, RunEnd::Loop { start: step }));
            }
            self.admissible(step, down, state.fallen)?;
            match self.hop(state, down)? {
                Hop::Next(out, next) => {
                    trace.push(TraceStep { state, down, out: Some(out) });
                    state = next;
                }
                Hop::Stuck => {
                    trace.push(TraceStep { state, down, out: None });
                    return Ok(finish(trace, RunEnd::Stuck));
                }
            }
        }
        unreachable!("the step loop only exits by returning")
    }
}

/// Default step cap for [`simulate`].
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

/// Runs one packet from `s` to `t` under `schedule`.
///
/// Ends with `Delivered`, `Loop` at the first repeated state, or `Stuck`.
/// Schedules that revive a fallen link in semi-dynamic mode, raise a link
/// between components of `G \ F`, or leave a static link up are rejected.
pub fn simulate(
    g: &MultiGraph,
    scheme: &dyn RoutingScheme,
    model: &FailureModel,
    schedule: &Schedule,
    s: NodeId,
    t: NodeId,
    max_steps: usize,
) -> Result<Verdict> {
    g.check_node(t)?;
    if scheme.destination() != t {
        return domain(format!(
            "scheme routes to `{}`, not `{}`",
            g.name(scheme.destination()),
            g.name(t)
        ));
    }
    let walk = Walk::new(g, scheme, model, s)?;
    let run = walk.run(schedule, max_steps, true)?;
    Ok(Verdict { outcome: run.outcome(), run: Some(run), stats: None })
}
