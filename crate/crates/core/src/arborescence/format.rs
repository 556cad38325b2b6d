use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{escape, Arc, MultiGraph};

use super::ArborescenceSet;

const PALETTE: [&str; 8] =
    ["red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan"];

/// On-disk set: `{"root": t, "arborescences": [[[tail, head], ..], ..]}`,
/// one parent arc per non-root node. With parallel edges, the first
/// unused edge between the two nodes is taken, in id order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArborescenceFile {
    pub root: String,
    pub arborescences: Vec<Vec<[String; 2]>>,
}

impl ArborescenceFile {
    pub fn from_set(g: &MultiGraph, ts: &ArborescenceSet) -> Self {
        Self {
            root: g.name(ts.root()).to_string(),
            arborescences: ts
                .trees()
                .iter()
                .map(|t| {
                    t.arcs()
                        .map(|a| [g.name(a.tail).to_string(), g.name(a.head).to_string()])
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_set(&self, g: &MultiGraph) -> Result<ArborescenceSet> {
        let root = g.require(&self.root)?;
        let mut lists = Vec::new();
        for tree in &self.arborescences {
            let mut list = Vec::new();
            for [tail, head] in tree {
                let (x, y) = (g.require(tail)?, g.require(head)?);
                let edges: Vec<_> =
                    g.incident(x).iter().copied().filter(|&e| g.other(e, x) == Some(y)).collect();
                let taken = |e| {
                    list.iter().any(|a: &Arc| a.edge == e && a.tail == x)
                        || lists.iter().flatten().any(|a: &Arc| a.edge == e && a.tail == x)
                };
                let e = edges
                    .iter()
                    .copied()
                    .find(|&e| !taken(e))
                    .or_else(|| edges.first().copied())
                    .ok_or_else(|| Error::Domain(format!("no edge between `{tail}` and `{head}`")))?;
                list.push(Arc { edge: e, tail: x, head: y });
            }
            lists.push(list);
        }
        ArborescenceSet::from_parent_arcs(g, root, lists)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("arborescence file serializes") + "\n"
    }
}

impl ArborescenceSet {
    /// Directed DOT, one colour per tree.
    pub fn to_dot(&self, g: &MultiGraph) -> String {
        let mut out = String::from("digraph T {\n");
        for v in g.nodes() {
            writeln!(out, "  \"{}\";", escape(g.name(v))).unwrap();
        }
        for t in self.trees() {
            let colour = PALETTE[t.index % PALETTE.len()];
            for a in t.arcs() {
                writeln!(
                    out,
                    "  \"{}\" -> \"{}\" [color={colour}, label=\"T{}\"];",
                    escape(g.name(a.tail)),
                    escape(g.name(a.head)),
                    t.index + 1
                )
                .unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}
