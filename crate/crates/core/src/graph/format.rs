use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::{MultiGraph, NodeId};

/// On-disk graph: `{"nodes": [..], "edges": [[a, b], ..], "root": t}`.
/// Edge order defines edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub nodes: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
}

impl GraphFile {
    pub fn from_graph(g: &MultiGraph, root: Option<NodeId>) -> Self {
        Self {
            nodes: g.nodes().map(|v| g.name(v).to_string()).collect(),
            edges: g
                .edge_ids()
                .map(|e| {
                    let [a, b] = g.ends(e);
                    [g.name(a).to_string(), g.name(b).to_string()]
                })
                .collect(),
            root: root.map(|r| g.name(r).to_string()),
        }
    }

    pub fn to_graph(&self) -> Result<MultiGraph> {
        let nodes: Vec<&str> = self.nodes.iter().map(String::as_str).collect();
        let edges: Vec<(&str, &str)> =
            self.edges.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        let g = MultiGraph::from_names(&nodes, &edges)?;
        if let Some(r) = &self.root {
            g.require(r)?;
        }
        Ok(g)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph file serializes") + "\n"
    }
}

impl MultiGraph {
    /// Undirected DOT with edges labelled by id.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in self.nodes() {
            writeln!(out, "  \"{}\";", escape(self.name(v))).unwrap();
        }
        for e in self.edge_ids() {
            let [a, b] = self.ends(e);
            writeln!(
                out,
                "  \"{}\" -- \"{}\" [label=\"{}\"];",
                escape(self.name(a)),
                escape(self.name(b)),
                e.0
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
