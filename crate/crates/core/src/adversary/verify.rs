use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::graph::{component_labels, EdgeId, EdgeSet, MultiGraph, NodeId};
use crate::schemes::RoutingScheme;

use super::enumerate::Combinations;
use super::simulate::{Hop, Walk};
use super::{FailureModel, Mode, Run, RunEnd, Schedule, SimState, Verdict};

/// Which packet sources to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sources {
    One(NodeId),
    /// Every node except the destination.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Cap on reachable states per (F, source) game.
    pub budget: usize,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { budget: 2_000_000, workers: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyStats {
    /// Failure sets inside the resilience scope, over all sources.
    pub failure_sets: usize,
    /// Solved (F, source) games.
    pub games: usize,
    pub states: usize,
    pub max_states: usize,
}

impl VerifyStats {
    fn add(&mut self, other: VerifyStats) {
        self.failure_sets += other.failure_sets;
        self.games += other.games;
        self.states += other.states;
        self.max_states = self.max_states.max(other.max_states);
    }
}

/// Witness ranking inside one failure-set size: constant schedules first,
/// then shorter traces, then enumeration order.
type Rank = (bool, usize, usize, usize);

/// Checks every failure set of size at most `k` that leaves the source
/// connected to `t`. Returns `Resilient`, or the best counter-example of
/// the smallest failing size.
pub fn verify(
    g: &MultiGraph,
    scheme: &dyn RoutingScheme,
    sources: Sources,
    t: NodeId,
    k: usize,
    mode: Mode,
    options: VerifyOptions,
) -> Result<Verdict> {
    g.check_node(t)?;
    if scheme.destination() != t {
        return domain(format!(
            "scheme routes to `{}`, not `{}`",
            g.name(scheme.destination()),
            g.name(t)
        ));
    }
    let sources: Vec<NodeId> = match sources {
        Sources::One(s) => {
            g.check_node(s)?;
            vec![s]
        }
        Sources::All => g.nodes().filter(|&v| v != t).collect(),
    };
    let run = || verify_levels(g, scheme, &sources, t, k, mode, options);
    match options.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(run),
        None => run(),
    }
}

fn verify_levels(
    g: &MultiGraph,
    scheme: &dyn RoutingScheme,
    sources: &[NodeId],
    t: NodeId,
    k: usize,
    mode: Mode,
    options: VerifyOptions,
) -> Result<Verdict> {
    let mut stats = VerifyStats::default();
    if sources.iter().all(|&s| s == t) {
        return Ok(Verdict { outcome: super::Outcome::Resilient, run: None, stats: Some(stats) });
    }
    for size in 0..=k.min(g.edge_count()) {
        let sets: Vec<Vec<EdgeId>> =
            Combinations::new(g.edge_count(), size).map(|c| c.into_iter().map(EdgeId).collect()).collect();
        let results: Vec<Result<(Option<(Rank, Run)>, VerifyStats)>> = sets
            .par_iter()
            .enumerate()
            .map(|(index, set)| {
                let failures: EdgeSet = set.iter().copied().collect();
                check_set(g, scheme, sources, t, &failures, mode, options.budget, index)
            })
            .collect();
        let mut best: Option<(Rank, Run)> = None;
        for r in results {
            let (found, s) = r?;
            stats.add(s);
            if let Some((rank, run)) = found {
                if best.as_ref().is_none_or(|(b, _)| rank < *b) {
                    best = Some((rank, run));
                }
            }
        }
        if let Some((_, run)) = best {
            return Ok(Verdict {
                outcome: super::Outcome::CounterExample,
                run: Some(run),
                stats: Some(stats),
            });
        }
    }
    Ok(Verdict { outcome: super::Outcome::Resilient, run: None, stats: Some(stats) })
}

#[allow(clippy::too_many_arguments)]
fn check_set(
    g: &MultiGraph,
    scheme: &dyn RoutingScheme,
    sources: &[NodeId],
    t: NodeId,
    failures: &EdgeSet,
    mode: Mode,
    budget: usize,
    index: usize,
) -> Result<(Option<(Rank, Run)>, VerifyStats)> {
    let label = component_labels(g, failures)?;
    let model = FailureModel::new(failures.clone(), mode)?;
    let mut stats = VerifyStats::default();
    let mut best: Option<(Rank, Run)> = None;
    for (si, &s) in sources.iter().enumerate() {
        if s == t || label[s.0] != label[t.0] {
            continue;
        }
        stats.failure_sets += 1;
        stats.games += 1;
        let walk = Walk::new(g, scheme, &model, s)?;
        let (found, states) = solve(&walk, budget)?;
        stats.states += states;
        stats.max_states = stats.max_states.max(states);
        if let Some(run) = found {
            let rank = (!run.is_static(), run.trace.len(), index, si);
            if best.as_ref().is_none_or(|(b, _)| rank < *b) {
                best = Some((rank, run));
            }
        }
    }
    Ok((best, stats))
}

/// Solves the game for one failure set and source, returning a witness
/// run if the adversary can keep the packet from `t`.
pub fn check_failure_set(
    g: &MultiGraph,
    scheme: &dyn RoutingScheme,
    s: NodeId,
    t: NodeId,
    failures: &EdgeSet,
    mode: Mode,
    budget: usize,
) -> Result<Option<Run>> {
    if scheme.destination() != t {
        return domain("scheme destination differs from t");
    }
    let model = FailureModel::new(failures.clone(), mode)?;
    let walk = Walk::new(g, scheme, &model, s)?;
    Ok(solve(&walk, budget)?.0)
}

struct Edge {
    to: u32,
    down: u64,
}

fn state_bound(walk: &Walk<'_>) -> u128 {
    let g = walk.g;
    let f = walk.model.failures.len() as u32;
    let fallen = if walk.model.mode == Mode::SemiDynamic { 1u128 << f.min(100) } else { 1 };
    g.node_count() as u128
        * (g.max_degree() as u128 + 1)
        * (1u128 << walk.scheme.bit_capacity())
        * fallen
}

fn solve(walk: &Walk<'_>, budget: usize) -> Result<(Option<Run>, usize)> {
    let t = walk.scheme.destination();
    let bound = state_bound(walk);
    let static_cap = usize::try_from(bound).unwrap_or(usize::MAX).saturating_add(1);
    let fixed = walk.run(&Schedule::AllDown, static_cap, true)?;
    if fixed.end != RunEnd::Delivered {
        let steps = fixed.trace.len();
        return Ok((Some(fixed), steps));
    }
    if walk.model.mode == Mode::Static {
        return Ok((None, fixed.trace.len()));
    }

    let fixed_mask = |fallen: u64| match walk.model.mode {
        Mode::Dynamic => walk.forced,
        _ => walk.forced | fallen,
    };
    let init = walk.initial();
    let mut states: Vec<SimState> = vec![init];
    let mut index: HashMap<SimState, u32> = HashMap::from([(init, 0)]);
    let mut dist: Vec<u32> = vec![0];
    let mut parent: Vec<Option<(u32, u64)>> = vec![None];
    let mut succ: Vec<Vec<Edge>> = Vec::new();
    let mut stuck: Vec<(u32, u64)> = Vec::new();
    let mut queue = VecDeque::from([0u32]);
    while let Some(x) = queue.pop_front() {
        let state = states[x as usize];
        let free = walk.free_at(state.node, state.fallen);
        let base = fixed_mask(state.fallen);
        let mut out = Vec::new();
        let mut sub = 0u64;
        loop {
            let down = base | sub;
            match walk.hop(state, down)? {
                Hop::Stuck => stuck.push((x, down)),
                Hop::Next(_, next) if next.node == t => {}
                Hop::Next(_, next) => {
                    let id = match index.get(&next) {
                        Some(&id) => id,
                        None => {
                            let id = states.len() as u32;
                            if states.len() >= budget {
                                return Err(Error::Budget { explored: states.len(), budget });
                            }
                            states.push(next);
                            index.insert(next, id);
                            dist.push(dist[x as usize] + 1);
                            parent.push(Some((x, down)));
                            queue.push_back(id);
                            id
                        }
                    };
                    out.push(Edge { to: id, down });
                }
            }
            if sub == free {
                break;
            }
            sub = (sub.wrapping_sub(free)) & free;
        }
        debug_assert_eq!(succ.len(), x as usize);
        succ.push(out);
    }
    let explored = states.len();
    if explored as u128 > bound {
        return Err(Error::Internal(format!(
            "{explored} reachable states exceed the bound {bound}"
        )));
    }

    // Best witness: (length, stuck?, state)
    let mut best: Option<(usize, Vec<u64>, Vec<u64>)> = None;
    for &(x, down) in &stuck {
        let len = dist[x as usize] as usize + 1;
        if best.as_ref().is_none_or(|(l, _, _)| len < *l) {
            let prefix = path_masks(&parent, x);
            best = Some((len, prefix, vec![down]));
        }
    }
    let comp = scc(&succ);
    let mut size = vec![0u32; explored];
    for &c in &comp {
        size[c as usize] += 1;
    }
    let mut order: Vec<u32> = (0..explored as u32)
        .filter(|&y| {
            let c = comp[y as usize];
            size[c as usize] > 1 || succ[y as usize].iter().any(|e| e.to == y)
        })
        .collect();
    order.sort_by_key(|&y| (dist[y as usize], y));
    for y in order {
        let d = dist[y as usize] as usize;
        if best.as_ref().is_some_and(|(l, _, _)| d + 1 >= *l) {
            break;
        }
        if let Some(cycle) = shortest_cycle(&succ, &comp, y) {
            let len = d + cycle.len();
            if best.as_ref().is_none_or(|(l, _, _)| len < *l) {
                best = Some((len, path_masks(&parent, y), cycle));
            }
        }
    }
    let Some((_, prefix, cycle)) = best else {
        return Ok((None, explored));
    };
    let schedule = Schedule::periodic(prefix.clone(), cycle.clone());
    let mut witness = walk.run(&schedule, prefix.len() + cycle.len(), false)?;
    self_check(walk, &schedule, &mut witness, prefix.len(), cycle.len())?;
    Ok((Some(witness), explored))
}

/// Masks along the BFS path from the initial state to `x`.
fn path_masks(parent: &[Option<(u32, u64)>], x: u32) -> Vec<u64> {
    let mut masks = Vec::new();
    let mut cur = x;
    while let Some((p, down)) = parent[cur as usize] {
        masks.push(down);
        cur = p;
    }
    masks.reverse();
    masks
}

/// Masks of a shortest cycle from `y` back to itself inside its component.
fn shortest_cycle(succ: &[Vec<Edge>], comp: &[u32], y: u32) -> Option<Vec<u64>> {
    let c = comp[y as usize];
    let mut via: HashMap<u32, (u32, u64)> = HashMap::new();
    let mut queue = VecDeque::from([y]);
    while let Some(x) = queue.pop_front() {
        for e in &succ[x as usize] {
            if comp[e.to as usize] != c {
                continue;
            }
            if e.to == y {
                let mut masks = vec![e.down];
                let mut cur = x;
                while cur != y {
                    let (p, down) = via[&cur];
                    masks.push(down);
                    cur = p;
                }
                masks.reverse();
                return Some(masks);
            }
            if let std::collections::hash_map::Entry::Vacant(slot) = via.entry(e.to) {
                slot.insert((x, e.down));
                queue.push_back(e.to);
            }
        }
    }
    None
}

/// Strongly connected components (iterative Tarjan).
fn scc(succ: &[Vec<Edge>]) -> Vec<u32> {
    let n = succ.len();
    let mut index = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![u32::MAX; n];
    let mut stack = Vec::new();
    let mut counter = 0u32;
    let mut next_comp = 0u32;
    for root in 0..n {
        if index[root] != u32::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < succ[v].len() {
                let w = succ[v][*pos].to as usize;
                *pos += 1;
                if index[w] == u32::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Replays a witness: a stuck run must end where the game said, and a
/// loop must return to its entry state after one and two periods.
fn self_check(walk: &Walk<'_>, schedule: &Schedule, witness: &mut Run, prefix: usize, period: usize) -> Result<()> {
    let bad = |why: &str| Err(Error::Internal(format!("witness replay failed: {why}")));
    match witness.end {
        RunEnd::Stuck if witness.trace.len() == prefix + 1 => Ok(()),
        RunEnd::Loop { .. } if witness.trace.len() == prefix + period + 1 => {
            let long = walk.run(schedule, prefix + 2 * period, false)?;
            let at = |i: usize| long.trace.get(i).map(|s| s.state);
            if !matches!(long.end, RunEnd::Loop { .. }) {
                return bad("the doubled schedule does not keep the packet away");
            }
            if at(prefix).is_none() || at(prefix) != at(prefix + period) || at(prefix) != at(prefix + 2 * period) {
                return bad("the doubled schedule does not return to the loop state");
            }
            witness.end = RunEnd::Loop { start: prefix };
            Ok(())
        }
        _ => bad("the schedule does not reproduce the game's witness"),
    }
}
