//! Graphs, schemes and scenarios shipped as regression cases.
//!
//! Every graph, drawn arborescence set, planar link ordering and
//! hand-transcribed table lives in `corpus/` as JSON and is compiled into
//! the crate. Expected verdicts are never stored: each case re-derives its
//! verdict through [`crate::adversary`] and compares it with the expected
//! outcome and trace fragment.

mod cases;
mod spaa;

use std::collections::BTreeMap;
use std::sync::Arc as Shared;

use serde::Deserialize;

use crate::adversary::{enumerate_link_circular_schemes, OrderChoice};
use crate::arborescence::{ArborescenceFile, ArborescenceSet};
use crate::error::{domain, Error, Result};
use crate::graph::{edge_connectivity, expand_edges, GraphFile, MultiGraph, NodeId};
use crate::schemes::{LinkCircularOrder, LinkCircularScheme, RoutingScheme, SourceMatched, TableFile, TableScheme};

pub use cases::{case_names, cases, repro, CaseReport, Check, CorpusCase};
pub use spaa::{tabulate as tabulate_arc_families, ArcFamilyFile, ArcFamilyScheme, SplicedScheme};

const FIG1: &str = include_str!("../../corpus/fig1.json");
const FIG2: &str = include_str!("../../corpus/fig2.json");
const FIG3: &str = include_str!("../../corpus/fig3.json");
const FIG_SPAA: &str = include_str!("../../corpus/fig_spaa.json");
const FIG2_TREES: &str = include_str!("../../corpus/fig2.trees.json");
const FIG1_ORDERS: &str = include_str!("../../corpus/fig1.orders.json");
const FIG3_ORDERS: &str = include_str!("../../corpus/fig3.orders.json");
const FIG_SPAA_ORDERS: &str = include_str!("../../corpus/fig_spaa.orders.json");
const FIG_SPAA_ARCS: &str = include_str!("../../corpus/fig_spaa.arcs.json");
const FIG_SPAA_TABLE: &str = include_str!("../../corpus/fig_spaa.table.json");

/// Named corpus graphs with their edge connectivity.
pub const GRAPHS: [(&str, usize); 4] = [("fig1", 2), ("fig2", 4), ("fig3", 2), ("fig_spaa", 2)];

pub fn graph_file(name: &str) -> Result<GraphFile> {
    let text = match name {
        "fig1" => FIG1,
        "fig2" => FIG2,
        "fig3" => FIG3,
        "fig_spaa" => FIG_SPAA,
        _ => return Err(Error::UnknownCorpus(name.to_string())),
    };
    GraphFile::parse(text)
}

/// A corpus graph by name. `expand(g,h)` replaces every edge of `g` by a
/// copy of `h` entered at `s` and left at `t`; `expand(g,h,x,y)` names the
/// entry and exit.
pub fn corpus_graph(name: &str) -> Result<MultiGraph> {
    if let Some(args) = name.strip_prefix("expand(").and_then(|r| r.strip_suffix(')')) {
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        let (g, h, entry, exit) = match parts[..] {
            [g, h] => (g, h, "s", "t"),
            [g, h, x, y] => (g, h, x, y),
            _ => return Err(Error::UnknownCorpus(name.to_string())),
        };
        let (g, h) = (corpus_graph(g)?, corpus_graph(h)?);
        let (entry, exit) = (h.require(entry)?, h.require(exit)?);
        return Ok(expand_edges(&g, &h, entry, exit)?.graph);
    }
    graph_file(name)?.to_graph()
}

/// Destination declared by a corpus graph file.
pub fn corpus_root(name: &str) -> Result<Option<String>> {
    if name.starts_with("expand(") {
        return Ok(None);
    }
    Ok(graph_file(name)?.root)
}

/// Checks every corpus graph against its stated edge connectivity.
pub fn check_graphs() -> Result<()> {
    for (name, expected) in GRAPHS {
        let found = edge_connectivity(&corpus_graph(name)?)?;
        if found != expected {
            return domain(format!("corpus graph `{name}` has edge connectivity {found}, expected {expected}"));
        }
    }
    Ok(())
}

/// The four arborescences drawn for fig2, in drawing order.
pub fn fig2_drawn_trees(g: &MultiGraph) -> Result<ArborescenceSet> {
    ArborescenceFile::parse(FIG2_TREES)?.to_set(g)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrderFile {
    #[allow(dead_code)]
    graph: String,
    orders: BTreeMap<String, BTreeMap<String, Vec<String>>>,
}

/// Clockwise and counter-clockwise neighbour orders of `nodes`, as drawn.
pub fn order_choices(graph: &str, nodes: &[&str]) -> Result<Vec<OrderChoice>> {
    let text = match graph {
        "fig1" => FIG1_ORDERS,
        "fig3" => FIG3_ORDERS,
        "fig_spaa" => FIG_SPAA_ORDERS,
        _ => return Err(Error::UnknownCorpus(format!("{graph} orders"))),
    };
    let file: OrderFile = serde_json::from_str(text)?;
    nodes
        .iter()
        .map(|&node| {
            let options = file
                .orders
                .get(node)
                .ok_or_else(|| Error::Domain(format!("no drawn order at `{node}`")))?;
            let mut list = Vec::new();
            for label in ["cw", "ccw"] {
                let cycle = options
                    .get(label)
                    .ok_or_else(|| Error::Domain(format!("no `{label}` order at `{node}`")))?;
                list.push((label.to_string(), cycle.clone()));
            }
            Ok(OrderChoice { node: node.to_string(), options: list })
        })
        .collect()
}

/// Restricts `choices` to one labelled option per node.
pub fn pick(choices: &[OrderChoice], picks: &[(&str, &str)]) -> Result<Vec<OrderChoice>> {
    choices
        .iter()
        .map(|c| {
            let Some((_, label)) = picks.iter().find(|(n, _)| *n == c.node) else {
                return Ok(c.clone());
            };
            let option = c
                .options
                .iter()
                .find(|(l, _)| l == label)
                .ok_or_else(|| Error::Domain(format!("no `{label}` order at `{}`", c.node)))?;
            Ok(OrderChoice { node: c.node.clone(), options: vec![option.clone()] })
        })
        .collect()
}

/// The four link-circular schemes of fig1, tagged `a:cw b:ccw` and so on.
/// Start ports are the first in cycle order that deliver without failures.
pub fn fig1_schemes(g: &MultiGraph) -> Result<Vec<(Vec<String>, LinkCircularScheme)>> {
    let t = g.require("t")?;
    enumerate_link_circular_schemes(g, t, &order_choices("fig1", &["a", "b"])?, &[], true)
}

/// Source-matched link-circular schemes for `(s, t)` on fig3 with the
/// packet leaving `s` toward `v0`, over the four order choices at `v1` and
/// `v3`. The other side is clockwise.
pub fn fig3_schemes(g: &MultiGraph) -> Result<Vec<(Vec<String>, Shared<dyn RoutingScheme>)>> {
    let t = g.require("t")?;
    let s = g.require("s")?;
    let choices = pick(&order_choices("fig3", &["v1", "v3", "u1", "u3"])?, &[("u1", "cw"), ("u3", "cw")])?;
    enumerate_link_circular_schemes(g, t, &choices, &[("s", "v0")], true)?
        .into_iter()
        .map(|(mut tags, scheme)| {
            tags.retain(|tag| tag.starts_with('v'));
            Ok((tags, source_matched(s, Shared::new(scheme))?))
        })
        .collect()
}

pub fn source_matched(s: NodeId, scheme: Shared<dyn RoutingScheme>) -> Result<Shared<dyn RoutingScheme>> {
    Ok(Shared::new(SourceMatched::new(BTreeMap::from([(s, scheme)]))?))
}

pub fn spaa_arcs() -> Result<ArcFamilyFile> {
    ArcFamilyFile::parse(FIG_SPAA_ARCS)
}

/// The checked-in table of the fig_spaa rules.
pub fn spaa_table() -> Result<TableFile> {
    TableFile::parse(FIG_SPAA_TABLE)
}

/// The transcribed source-matched scheme for `(s, t)` on fig_spaa, read
/// from its table.
pub fn spaa_scheme(g: &MultiGraph) -> Result<Shared<dyn RoutingScheme>> {
    let table = TableScheme::from_file(g, &spaa_table()?)?;
    source_matched(g.require("s")?, Shared::new(table))
}

/// Families given to packets arriving at `v3` over `{v2,v3}` and at `v4`
/// over `{v1,v4}` in the adapted fig_spaa scheme.
pub const SPAA_ARRIVALS: [(&str, &str, &str); 2] = [("v2", "v3", "green"), ("v1", "v4", "green")];

/// The fig_spaa rules with `v1` and `v2` switched to clockwise
/// link-circular routing over all their links. Every other node keeps its
/// transcribed rules; `arrivals` assigns families to the arcs that now
/// reach `v3` and `v4` over non-kernel edges.
pub fn spaa_adapted_scheme(g: &MultiGraph, arrivals: &[(&str, &str, &str)]) -> Result<Shared<dyn RoutingScheme>> {
    spaa_spliced_scheme(g, &[("v1", "cw"), ("v2", "cw")], arrivals)
}

/// As [`spaa_adapted_scheme`] with the drawn order at `v1` and `v2` picked
/// per node.
pub fn spaa_spliced_scheme(
    g: &MultiGraph,
    picks: &[(&str, &str)],
    arrivals: &[(&str, &str, &str)],
) -> Result<Shared<dyn RoutingScheme>> {
    let mut families = ArcFamilyScheme::new(g, &spaa_arcs()?)?;
    for (tail, head, family) in arrivals {
        families = families.with_arrival(g, tail, head, family)?;
    }
    let mut orders = LinkCircularOrder::empty(g);
    for c in pick(&order_choices("fig_spaa", &["v1", "v2"])?, picks)? {
        let names: Vec<&str> = c.options[0].1.iter().map(String::as_str).collect();
        orders.set(g, &c.node, &names)?;
    }
    let t = g.require("t")?;
    let rest: Vec<NodeId> = g.nodes().filter(|&v| v != t && orders.cycle(v).is_none()).collect();
    for v in rest {
        let names: Vec<&str> = g.incident(v).iter().map(|&e| g.name(g.other(e, v).expect("incident"))).collect();
        orders.set(g, g.name(v), &names)?;
    }
    let circular = LinkCircularScheme::new(g, t, orders)?;
    let at = vec![g.require("v1")?, g.require("v2")?];
    let scheme = SplicedScheme::new(families, circular, at)?;
    source_matched(g.require("s")?, Shared::new(scheme))
}
