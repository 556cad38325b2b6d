use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::graph::{EdgeId, MultiGraph};
use crate::schemes::{PortRef, SchemeInfo};

use super::{Mode, Outcome, Run, RunEnd, Verdict, VerifyStats};

/// Port label `a-b#id` used in every report.
pub fn port_label(g: &MultiGraph, e: EdgeId) -> String {
    format!("{}#{}", g.edge_label(e), e.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StepReport {
    pub node: String,
    pub in_port: Option<String>,
    pub header: String,
    pub link_states: BTreeMap<String, &'static str>,
    pub out_edge: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleReport {
    pub prefix: Vec<Vec<String>>,
    pub cycle: Vec<Vec<String>>,
}

/// JSON form of a [`Run`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub outcome: Outcome,
    pub source: String,
    pub destination: String,
    pub mode: Mode,
    pub failures: Vec<String>,
    pub schedule: ScheduleReport,
    pub constant_schedule: bool,
    pub loop_start: Option<usize>,
    pub nodes: Vec<String>,
    pub trace: Vec<StepReport>,
}

impl RunReport {
    pub fn new(g: &MultiGraph, run: &Run) -> Self {
        let model = &run.model;
        let all = model.all_down();
        let down_list = |mask: u64| -> Vec<String> {
            model.down_edges(mask).into_iter().map(|e| port_label(g, e)).collect()
        };
        let (prefix, cycle) = run.schedule.parts(all);
        let trace = run
            .trace
            .iter()
            .map(|s| StepReport {
                node: g.name(s.state.node).to_string(),
                in_port: match s.state.in_port {
                    PortRef::Origin => None,
                    PortRef::Edge(e) => Some(port_label(g, e)),
                },
                header: s.state.header.to_string(),
                link_states: model
                    .failures
                    .iter()
                    .enumerate()
                    .map(|(i, e)| (port_label(g, e), if s.down >> i & 1 == 1 { "down" } else { "up" }))
                    .collect(),
                out_edge: s.out.map(|e| port_label(g, e)),
            })
            .collect();
        Self {
            outcome: run.outcome(),
            source: g.name(run.source).to_string(),
            destination: g.name(run.destination).to_string(),
            mode: model.mode,
            failures: model.failures.iter().map(|e| port_label(g, e)).collect(),
            schedule: ScheduleReport {
                prefix: prefix.into_iter().map(down_list).collect(),
                cycle: cycle.into_iter().map(down_list).collect(),
            },
            constant_schedule: run.is_static(),
            loop_start: match run.end {
                RunEnd::Loop { start } => Some(start),
                _ => None,
            },
            nodes: run.node_names(g),
            trace,
        }
    }

    /// Short human-readable account.
    pub fn text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}: {} -> {} under {} failures {:?}", self.outcome, self.source, self.destination, self.mode, self.failures).unwrap();
        writeln!(out, "  walk: {}", self.nodes.join(" "),).unwrap();
        if let Some(start) = self.loop_start {
            writeln!(out, "  loop from step {start}: {}", self.nodes[start..].join(" ")).unwrap();
        }
        let constant = if self.constant_schedule { " (constant)" } else { "" };
        writeln!(out, "  schedule{constant}: prefix {:?}, cycle {:?}", self.schedule.prefix, self.schedule.cycle).unwrap();
        out
    }
}

/// JSON form of a [`Verdict`] with its context.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerdictReport {
    pub outcome: Outcome,
    pub scheme: SchemeInfo,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub sources: String,
    pub destination: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<VerifyStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run: Option<RunReport>,
}

impl VerdictReport {
    pub fn new(
        g: &MultiGraph,
        verdict: &Verdict,
        scheme: SchemeInfo,
        mode: Mode,
        k: Option<usize>,
        sources: String,
        destination: String,
    ) -> Self {
        Self {
            outcome: verdict.outcome,
            scheme,
            mode,
            k,
            sources,
            destination,
            stats: verdict.stats,
            run: verdict.run.as_ref().map(|r| RunReport::new(g, r)),
        }
    }

    pub fn text(&self) -> String {
        let mut out = format!("{} ({} to {}, {} mode", self.outcome, self.sources, self.destination, self.mode);
        if let Some(k) = self.k {
            write!(out, ", k = {k}").unwrap();
        }
        out.push_str(")\n");
        if let Some(s) = &self.stats {
            writeln!(out, "  {} failure sets, {} games, {} states (max {} per game)", s.failure_sets, s.games, s.states, s.max_states).unwrap();
        }
        if let Some(r) = &self.run {
            out.push_str(&r.text());
        }
        out
    }
}
