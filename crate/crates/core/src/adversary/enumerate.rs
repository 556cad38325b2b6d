use crate::error::Result;
use crate::graph::{connected, EdgeId, EdgeSet, MultiGraph, NodeId};
use crate::schemes::{LinkCircularOrder, LinkCircularScheme};

use super::simulate::Walk;
use super::{FailureModel, Mode, RunEnd, Schedule};

/// Index combinations of `k` out of `n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, current: (k <= n).then(|| (0..k).collect()) }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Every `F` with `|F| <= k` that leaves `s` and `t` connected, by size and
/// then lexicographically by edge id.
pub fn enumerate_failure_sets(
    g: &MultiGraph,
    s: NodeId,
    t: NodeId,
    k: usize,
) -> impl Iterator<Item = EdgeSet> + '_ {
    (0..=k.min(g.edge_count()))
        .flat_map(move |size| Combinations::new(g.edge_count(), size))
        .map(|c| c.into_iter().map(EdgeId).collect::<EdgeSet>())
        .filter(move |f| connected(g, f, s, t).unwrap_or(false))
}

/// Candidate cycles at one node, each with a label such as `cw`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderChoice {
    pub node: String,
    pub options: Vec<(String, Vec<String>)>,
}

impl OrderChoice {
    pub fn new(node: &str, options: &[(&str, &[&str])]) -> Self {
        Self {
            node: node.to_string(),
            options: options
                .iter()
                .map(|(l, c)| (l.to_string(), c.iter().map(|s| s.to_string()).collect()))
                .collect(),
        }
    }
}

/// Cartesian product of per-node cycle choices; nodes of degree at most
/// two get their only cycle. Start ports listed in `starts` are fixed.
/// With `auto_start`, every other node starts on the first port of its
/// cycle from which a packet reaches `t` without failures, or on the
/// first port if none does. Each scheme comes with `node:label` tags.
pub fn enumerate_link_circular_schemes(
    g: &MultiGraph,
    t: NodeId,
    choices: &[OrderChoice],
    starts: &[(&str, &str)],
    auto_start: bool,
) -> Result<Vec<(Vec<String>, LinkCircularScheme)>> {
    let mut out = Vec::new();
    let total: usize = choices.iter().map(|c| c.options.len()).product();
    for mut index in 0..total {
        let mut picks = vec![0; choices.len()];
        for (slot, c) in picks.iter_mut().zip(choices).rev() {
            *slot = index % c.options.len();
            index /= c.options.len();
        }
        let mut orders = LinkCircularOrder::empty(g);
        let mut tags = Vec::new();
        for (c, &p) in choices.iter().zip(&picks) {
            let (label, cycle) = &c.options[p];
            let names: Vec<&str> = cycle.iter().map(String::as_str).collect();
            orders.set(g, &c.node, &names)?;
            tags.push(format!("{}:{}", c.node, label));
        }
        orders.fill_forced(g)?;
        for (node, port) in starts {
            orders.set_start(g, node, port)?;
        }
        if auto_start {
            let fixed: Vec<NodeId> =
                starts.iter().map(|(n, _)| g.require(n)).collect::<Result<_>>()?;
            for v in g.nodes().filter(|&v| v != t && !fixed.contains(&v)) {
                let cycle = orders.cycle(v).map(<[EdgeId]>::to_vec).unwrap_or_default();
                for e in cycle {
                    let w = g.other(e, v).expect("incident");
                    orders.set_start(g, g.name(v), g.name(w))?;
                    let scheme = LinkCircularScheme::new(g, t, orders.clone())?;
                    if delivers_without_failures(g, &scheme, v)? {
                        break;
                    }
                }
                if !delivers_without_failures(g, &LinkCircularScheme::new(g, t, orders.clone())?, v)? {
                    let first = orders.cycle(v).and_then(|c| c.first().copied());
                    if let Some(e) = first {
                        let w = g.other(e, v).expect("incident");
                        orders.set_start(g, g.name(v), g.name(w))?;
                    }
                }
            }
        }
        out.push((tags, LinkCircularScheme::new(g, t, orders)?));
    }
    Ok(out)
}

fn delivers_without_failures(g: &MultiGraph, scheme: &LinkCircularScheme, s: NodeId) -> Result<bool> {
    let model = FailureModel::new(EdgeSet::empty(), Mode::Static)?;
    let walk = Walk::new(g, scheme, &model, s)?;
    let run = walk.run(&Schedule::AllDown, 4 * g.edge_count() + 4, true)?;
    Ok(run.end == RunEnd::Delivered)
}
