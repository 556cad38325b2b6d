use std::fmt::Write;
use std::sync::Arc as Shared;

use serde::Serialize;

use crate::adversary::{
    simulate, verify, FailureModel, Mode, Outcome, Run, RunReport, Schedule, Sources, VerdictReport, VerifyOptions,
    DEFAULT_MAX_STEPS,
};
use crate::arborescence::validate;
use crate::error::{Error, Result};
use crate::graph::{local_edge_connectivity, EdgeId, EdgeSet, MultiGraph};
use crate::schemes::{Hdr3Scheme, RoutingScheme};

use super::{
    check_graphs, corpus_graph, fig1_schemes, fig2_drawn_trees, fig3_schemes, spaa_adapted_scheme, spaa_arcs,
    spaa_scheme, spaa_table, tabulate_arc_families, SPAA_ARRIVALS,
};

/// What a case exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// One walk under a fixed schedule.
    Simulate,
    /// Exhaustive verification.
    Verify,
    /// Structural facts about a graph or arborescence set.
    Structure,
}

#[derive(Debug, Clone, Copy)]
pub struct CorpusCase {
    pub name: &'static str,
    pub summary: &'static str,
    pub check: Check,
    run: fn(&mut CaseReport) -> Result<()>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub pass: bool,
    pub what: String,
}

/// Outcome of [`repro`]: every expectation with its result, plus the runs
/// and verdicts behind them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub summary: String,
    pub check: Check,
    pub pass: bool,
    pub checks: Vec<CheckLine>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub runs: Vec<RunReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<VerdictReport>,
}

impl CaseReport {
    fn expect(&mut self, pass: bool, what: impl Into<String>) {
        self.checks.push(CheckLine { pass, what: what.into() });
    }

    pub fn text(&self) -> String {
        let mut out = format!("{} {}: {}\n", if self.pass { "PASS" } else { "FAIL" }, self.case, self.summary);
        for c in &self.checks {
            writeln!(out, "  [{}] {}", if c.pass { "ok" } else { "FAILED" }, c.what).unwrap();
        }
        for r in &self.runs {
            for line in r.text().lines() {
                writeln!(out, "  {line}").unwrap();
            }
        }
        for v in &self.verdicts {
            for line in v.text().lines() {
                writeln!(out, "  {line}").unwrap();
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("case report serializes") + "\n"
    }
}

const CASES: &[CorpusCase] = &[
    CorpusCase {
        name: "fig1-clockwise-dynamic",
        summary: "clockwise link-circular routing loops when {c,b} is down only at origination",
        check: Check::Simulate,
        run: fig1_clockwise,
    },
    CorpusCase {
        name: "fig1-counterclockwise-dynamic",
        summary: "counter-clockwise link-circular routing loops when {b,d} is down only at origination",
        check: Check::Simulate,
        run: fig1_counterclockwise,
    },
    CorpusCase {
        name: "fig1-mixed-static",
        summary: "a counter-clockwise, b clockwise: a static failure {v,t} loops (c,v,d,v')",
        check: Check::Simulate,
        run: fig1_mixed,
    },
    CorpusCase {
        name: "fig1-link-circular-verify",
        summary: "every link-circular scheme on fig1 fails against one dynamic failure",
        check: Check::Verify,
        run: fig1_verify,
    },
    CorpusCase {
        name: "fig2-drawn-trees",
        summary: "the four drawn arborescences are arc-disjoint spanning in-trees",
        check: Check::Structure,
        run: fig2_trees,
    },
    CorpusCase {
        name: "fig2-hdr3bits-static",
        summary: "three-bit header routing delivers from every source under static {a,b},{b,c},{c,d}",
        check: Check::Simulate,
        run: fig2_hdr3_static,
    },
    CorpusCase {
        name: "fig2-hdr3bits-dynamic",
        summary: "three-bit header routing loops under flapping {a,b},{b,c},{c,d}, re-hitting (b,a)",
        check: Check::Simulate,
        run: fig2_hdr3_dynamic,
    },
    CorpusCase {
        name: "fig3-clockwise-dynamic",
        summary: "source-matched link-circular routing with v1, v3 clockwise loops when {v2,v3} is down only at its first hit",
        check: Check::Verify,
        run: fig3_clockwise,
    },
    CorpusCase {
        name: "fig3-mixed-static",
        summary: "v1 clockwise, v3 counter-clockwise: static {s,u0} sends the packet around and back to s",
        check: Check::Simulate,
        run: fig3_mixed,
    },
    CorpusCase {
        name: "fig_spaa-table",
        summary: "the checked-in table matches the arc families and routes along the solid arcs",
        check: Check::Structure,
        run: spaa_table_case,
    },
    CorpusCase {
        name: "fig_spaa-semidynamic-stuck",
        summary: "dropping {v7,v9} then {v1,v2} traps the packet on {v2,v7}",
        check: Check::Simulate,
        run: spaa_stuck,
    },
    CorpusCase {
        name: "fig_spaa-adapted-semidynamic",
        summary: "the clockwise completion at v1, v2 is 2-resilient against semi-dynamic failures",
        check: Check::Verify,
        run: spaa_adapted,
    },
    CorpusCase {
        name: "expand-fig3",
        summary: "replacing every fig3 edge by a copy of fig3 gives 238 nodes and keeps s-t 2-edge-connected",
        check: Check::Structure,
        run: expand_fig3,
    },
];

pub fn cases() -> &'static [CorpusCase] {
    CASES
}

pub fn case_names() -> Vec<&'static str> {
    CASES.iter().map(|c| c.name).collect()
}

/// Runs a registered case after checking every corpus graph.
pub fn repro(name: &str) -> Result<CaseReport> {
    let case = CASES
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownCorpus(name.to_string()))?;
    check_graphs()?;
    let mut report = CaseReport {
        case: case.name.to_string(),
        summary: case.summary.to_string(),
        check: case.check,
        pass: false,
        checks: Vec::new(),
        runs: Vec::new(),
        verdicts: Vec::new(),
    };
    (case.run)(&mut report)?;
    report.pass = !report.checks.is_empty() && report.checks.iter().all(|c| c.pass);
    Ok(report)
}

fn edges(g: &MultiGraph, list: &str) -> Result<Vec<EdgeId>> {
    Ok(EdgeSet::parse(g, list)?.to_vec())
}

/// Walks one packet; `prefix` and `cycle` list the down links per step.
fn walk(
    g: &MultiGraph,
    scheme: &dyn RoutingScheme,
    failures: &str,
    mode: Mode,
    prefix: &[&str],
    cycle: &[&str],
    source: &str,
) -> Result<Run> {
    let model = FailureModel::new(EdgeSet::parse(g, failures)?, mode)?;
    let steps = |list: &[&str]| list.iter().map(|s| edges(g, s)).collect::<Result<Vec<_>>>();
    let schedule = if mode == Mode::Static {
        Schedule::AllDown
    } else {
        Schedule::from_edges(&model, &steps(prefix)?, &steps(cycle)?)?
    };
    let verdict =
        simulate(g, scheme, &model, &schedule, g.require(source)?, scheme.destination(), DEFAULT_MAX_STEPS)?;
    verdict.run.ok_or_else(|| Error::Internal("simulation returned no run".into()))
}

fn contains_walk(names: &[String], fragment: &[&str]) -> bool {
    names.windows(fragment.len()).any(|w| w.iter().zip(fragment).all(|(a, b)| a == b))
}

fn expect_loop(report: &mut CaseReport, g: &MultiGraph, run: &Run, fragment: &[&str]) {
    let names = run.node_names(g);
    report.expect(run.outcome() == Outcome::Loop, format!("outcome Loop (observed {})", run.outcome()));
    report.expect(
        contains_walk(&names, fragment),
        format!("walk contains ({}) (observed {})", fragment.join(","), names.join(",")),
    );
    report.runs.push(RunReport::new(g, run));
}

fn fig1_scheme(g: &MultiGraph, a: &str, b: &str) -> Result<Shared<dyn RoutingScheme>> {
    let tags = vec![format!("a:{a}"), format!("b:{b}")];
    fig1_schemes(g)?
        .into_iter()
        .find(|(t, _)| *t == tags)
        .map(|(_, s)| Shared::new(s) as Shared<dyn RoutingScheme>)
        .ok_or_else(|| Error::Internal(format!("no fig1 scheme {tags:?}")))
}

fn fig1_clockwise(report: &mut CaseReport) -> Result<()> {
    let g = corpus_graph("fig1")?;
    let scheme = fig1_scheme(&g, "cw", "cw")?;
    let run = walk(&g, &*scheme, "c-b", Mode::Dynamic, &["c-b"], &[""], "c")?;
    expect_loop(report, &g, &run, &["c", "a", "d", "b", "c"]);
    Ok(())
}

fn fig1_counterclockwise(report: &mut CaseReport) -> Result<()> {
    let g = corpus_graph("fig1")?;
    let scheme = fig1_scheme(&g, "ccw", "ccw")?;
    let run = walk(&g, &*scheme, "b-d", Mode::Dynamic, &["b-d"], &[""], "d")?;
    expect_loop(report, &g, &run, &["d", "a", "c", "b", "d"]);
    Ok(())
}

fn fig1_mixed(report: &mut CaseReport) -> Result<()> {
    let g = corpus_graph("fig1")?;
    let scheme = fig1_scheme(&g, "ccw", "cw")?;
    let run = walk(&g, &*scheme, "a-t", Mode::Static, &[], &[], "c")?;
    report.expect(run.nodes().get(1) == Some(&g.require("a")?), "c sends its own packet to a");
    expect_loop(report, &g, &run, &["c", "a", "d", "b"]);
    Ok(())
}

fn fig1_verify(report: &mut CaseReport) -> Result<()> {
    let g = corpus_graph("fig1")?;
    let t = g.require("t")?;
    for (tags, scheme) in fig1_schemes(&g)? {
        let verdict = verify(&g, &scheme, Sources::All, t, 1, Mode::Dynamic, VerifyOptions::default())?;
        let label = tags.join(" ");
        report.expect(verdict.outcome == Outcome::CounterExample, format!("{label}: counter-example (observed {})", verdict.outcome));
        let mixed = tags[0].ends_with(":cw") != tags[1].ends_with(":cw");
        if mixed {
            let constant = verdict.run.as_ref().is_some_and(Run::is_static);
            report.expect(constant, format!("{label}: the witness schedule is constant"));
        }
        report.verdicts.push(VerdictReport::new(
            &g,
            &verdict,
            scheme.info(&g),
            Mode::Dynamic,
            Some(1),
            "all".into(),
            "t".into(),
        ));
    }
    Ok(())
}

fn fig2_trees(report: &mut CaseReport) -> Result<()> {
    let g = corpus_graph("fig2")?;
    let ts = fig2_drawn_trees(&g)?;
    report.expect(validate(&g, &ts, false).pass, "arc-disjoint spanning arborescences rooted at t");
    let bip = validate(&g, &ts, true);
    report.expect(!bip.pass, format!("not bipartitioned ({} violations)", bip.violations.len()));
    let c = g.require("c")?;
    let next = ts.canonical_next(0, c)?;
    report.expect(g.name(next.head) == "x", "T1 forwards c to x");
    let ba = g.arc_from(g.edge_named("b", "a")?, g.require("b")?).expect("incident");
    report.expect(ts.owner(ba) == Some(0) && ts.bounce_reverse(ba) == Some(1), "(b,a) on T1 bounces to T2");
    Ok(())
}

fn fig2_hdr3_static(report: &mut CaseReport) -> Result<()> {
    let g = corpus_graph("fig2")?;
    let scheme = Hdr3Scheme::new(Shared::new(fig2_drawn_trees(&g)?))?;
    for s in ["a", "b", "c", "d", "x"] {
        let run = walk(&g, &scheme, "a-b,b-c,c-d", Mode::Static, &[], &[], s)?;
        report.expect(run.outcome() == Outcome::Delivered, format!("from {s}: Delivered (observed {})", run.outcome()));
        report.runs.push(RunReport::new(&g, &run));
    }
    Ok(())
}

fn fig2_hdr3_dynamic(report: &mut CaseReport) -> Result<()> {
    let g = corpus_graph("fig2")?;
    let scheme = Hdr3Scheme::new(Shared::new(fig2_drawn_trees(&g)?))?;
    let cycle = ["a-b,c-d", "a-b,b-c,c-d", "a-b,c-d"];
    let (b, x) = (g.require("b")?, g.require("x")?);
    let ab = g.edge_named("a", "b")?;
    let bx = g.edge_named("b", "x")?;
    for (source, prefix) in [("x", &["a-b,c-d"][..]), ("b", &[][..])] {
        let run = walk(&g, &scheme, "a-b,b-c,c-d", Mode::Dynamic, prefix, &cycle, source)?;
        expect_loop(report, &g, &run, &["b", "c", "x", "b"]);
        let start = match run.end {
            crate::adversary::RunEnd::Loop { start } => start,
            _ => run.trace.len(),
        };
        let rehit = run.trace[start..].iter().any(|s| {
            s.state.node == b
                && s.state.in_port == crate::schemes::PortRef::Edge(bx)
                && run.model.down_edges(s.down).contains(&ab)
        });
        report.expect(rehit, format!("from {source}: the loop returns to b over (x,b) with (b,a) down"));
        if source == "x" {
            report.expect(run.nodes().first() == Some(&x), "the packet originates at x");
        }
    }
    Ok(())
}

fn fig3_clockwise(report: &mut CaseReport) -> Result<()> {
    let g = corpus_graph("fig3")?;
    let (s, t) = (g.require("s")?, g.require("t")?);
    let tags = vec!["v1:cw".to_string(), "v3:cw".to_string()];
    let (_, scheme) = fig3_schemes(&g)?
        .into_iter()
        .find(|(t, _)| *t == tags)
        .ok_or_else(|| Error::Internal("no clockwise fig3 scheme".into()))?;
    let verdict = verify(&g, &*scheme, Sources::One(s), t, 2, Mode::Dynamic, VerifyOptions::default())?;
    report.expect(verdict.outcome == Outcome::CounterExample, format!("counter-example (observed {})", verdict.outcome));
    let mut prefix = vec!["s-u0"; 3];
    prefix.push("s-u0,v2-v3");
    let run = walk(&g, &*scheme, "s-u0,v2-v3", Mode::Dynamic, &prefix, &["s-u0"], "s")?;
    expect_loop(report, &g, &run, &["s", "v0", "v1", "v2", "v1", "v4", "v3", "v2", "v1"]);
    report.verdicts.push(VerdictReport::new(&g, &verdict, scheme.info(&g), Mode::Dynamic, Some(2), "s".into(), "t".into()));
    Ok(())
}

fn fig3_mixed(report: &mut CaseReport) -> Result<()> {
    let g = corpus_graph("fig3")?;
    let tags = vec!["v1:cw".to_string(), "v3:ccw".to_string()];
    let (_, scheme) = fig3_schemes(&g)?
        .into_iter()
        .find(|(t, _)| *t == tags)
        .ok_or_else(|| Error::Internal("no mixed fig3 scheme".into()))?;
    let run = walk(&g, &*scheme, "s-u0", Mode::Static, &[], &[], "s")?;
    expect_loop(report, &g, &run, &["s", "v0", "v1", "v2", "v3", "v4", "v1", "v0", "s"]);
    Ok(())
}

fn spaa_table_case(report: &mut CaseReport) -> Result<()> {
    let g = corpus_graph("fig_spaa")?;
    let regenerated = tabulate_arc_families(&g, &spaa_arcs()?)?;
    report.expect(regenerated == spaa_table()?, "the checked-in table equals the one built from the arc families");
    let scheme = spaa_scheme(&g)?;
    let run = walk(&g, &*scheme, "", Mode::Static, &[], &[], "s")?;
    let route = ["s", "v10", "v0", "v5", "v1", "v2", "v7", "v9", "v11", "t"];
    report.expect(
        run.outcome() == Outcome::Delivered && run.node_names(&g) == route,
        format!("failure-free walk ({})", route.join(",")),
    );
    report.runs.push(RunReport::new(&g, &run));
    Ok(())
}

fn spaa_stuck(report: &mut CaseReport) -> Result<()> {
    let g = corpus_graph("fig_spaa")?;
    let scheme = spaa_scheme(&g)?;
    let mut prefix = vec!["v7-v9"; 5];
    prefix.extend(["v1-v2,v7-v9"]);
    let run = walk(&g, &*scheme, "v1-v2,v7-v9", Mode::SemiDynamic, &prefix[..5], &prefix[5..], "s")?;
    expect_loop(report, &g, &run, &["s", "v10", "v0", "v5", "v1", "v2", "v7", "v2", "v7"]);
    let trapped: Vec<String> = run.recurrent_nodes().into_iter().map(|v| g.name(v).to_string()).collect();
    report.expect(
        trapped.iter().all(|v| v == "v2" || v == "v7"),
        format!("the packet never leaves {{v2,v7}} (recurrent nodes {})", trapped.join(",")),
    );
    let label = crate::graph::component_labels(&g, &run.model.failures)?;
    let (v7, t) = (g.require("v7")?, g.require("t")?);
    report.expect(label[v7.0] == label[t.0], "v7 and t stay connected in G \\ F");
    Ok(())
}

fn spaa_adapted(report: &mut CaseReport) -> Result<()> {
    let g = corpus_graph("fig_spaa")?;
    let (s, t) = (g.require("s")?, g.require("t")?);
    let scheme = spaa_adapted_scheme(&g, &SPAA_ARRIVALS)?;
    let run = walk(&g, &*scheme, "v1-v2,v7-v9", Mode::SemiDynamic, &["v7-v9"; 5], &["v1-v2,v7-v9"], "s")?;
    report.expect(run.outcome() == Outcome::Delivered, format!("the trapping schedule is delivered (observed {})", run.outcome()));
    report.runs.push(RunReport::new(&g, &run));
    let verdict = verify(&g, &*scheme, Sources::One(s), t, 2, Mode::SemiDynamic, VerifyOptions::default())?;
    report.expect(verdict.outcome == Outcome::Resilient, format!("2-resilient, semi-dynamic (observed {})", verdict.outcome));
    report.verdicts.push(VerdictReport::new(
        &g,
        &verdict,
        scheme.info(&g),
        Mode::SemiDynamic,
        Some(2),
        "s".into(),
        "t".into(),
    ));
    Ok(())
}

fn expand_fig3(report: &mut CaseReport) -> Result<()> {
    let g = corpus_graph("fig3")?;
    let x = crate::graph::expand_edges(&g, &g, g.require("s")?, g.require("t")?)?;
    let n = x.graph.node_count();
    report.expect(n == 238, format!("238 nodes (observed {n})"));
    let (s, t) = (x.outer[g.require("s")?.0], x.outer[g.require("t")?.0]);
    let lambda = local_edge_connectivity(&x.graph, s, t)?;
    report.expect(lambda == 2, format!("s-t edge connectivity 2 (observed {lambda})"));
    let entries = x.gadgets.iter().all(|gad| {
        let [a, _] = g.ends(gad.edge);
        let outer_a = x.outer[a.0];
        x.graph.edge_between(outer_a, gad.entry).is_some()
    });
    report.expect(entries && x.gadgets.len() == g.edge_count(), "one gadget per edge, entered from its first endpoint");
    Ok(())
}
