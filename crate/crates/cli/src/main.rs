//! `flaplab`: decompose graphs into arc-disjoint arborescences, build
//! failover schemes over them, and simulate or verify those schemes
//! against static, semi-dynamic and dynamic link failures.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc as Shared;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use flaplab_core::adversary::{
    simulate, verify, FailureModel, Mode, RunReport, Schedule, Sources, VerdictReport, VerifyOptions,
    DEFAULT_MAX_STEPS,
};
use flaplab_core::arborescence::{
    decompose_with, good_arborescences, meta_graph, tree_components, validate, ArborescenceFile, ArborescenceSet,
    Constraint,
};
use flaplab_core::corpus::{case_names, cases, corpus_graph, corpus_root, repro, GRAPHS};
use flaplab_core::graph::{edge_connectivity, samples, EdgeSet, GraphFile, MultiGraph, NodeId};
use flaplab_core::schemes::{
    CircularScheme, ExtendedScheme, Hdr3Scheme, HdrLogScheme, OneResilientScheme, RoutingScheme, TableFile,
    TableScheme,
};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "flaplab", version, about = "Failover routing over arc-disjoint arborescences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute k arc-disjoint spanning arborescences rooted at the destination.
    Decompose(DecomposeArgs),
    /// Check an arborescence file against a graph.
    Validate(ValidateArgs),
    /// Build the meta-graph of an arborescence set under a failure set.
    Metagraph(MetagraphArgs),
    /// Walk one packet under a failure set and link-state schedule.
    Simulate(SimulateArgs),
    /// Exhaustively check k-resilience of a scheme.
    Verify(VerifyArgs),
    /// Run a corpus case (or `all`) and compare with its expected outcome.
    Repro(ReproArgs),
    /// List corpus graphs, sample graphs and cases.
    ListCorpus,
}

#[derive(Args)]
struct GraphArgs {
    /// Graph JSON file.
    #[arg(long, conflicts_with = "corpus", required_unless_present = "corpus")]
    graph: Option<PathBuf>,
    /// Corpus or sample graph: fig1, fig2, fig3, fig_spaa, expand(g,h), C5, K4, prism, bridged-triangles.
    #[arg(long)]
    corpus: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the JSON report here instead of printing text.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Leave the generation timestamp out of JSON reports.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Destination (root).
    #[arg(short = 't', long = "dest")]
    dest: Option<String>,
    /// Number of arborescences; defaults to the edge connectivity.
    #[arg(short = 'k', long = "k")]
    k: Option<usize>,
    /// Make the even- and odd-position halves each pairwise edge-disjoint.
    #[arg(long)]
    bipartition: bool,
    /// Write the arborescence file here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a DOT drawing.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Cap on arcs tried by the constrained search.
    #[arg(long, default_value_t = 2_000_000)]
    budget: usize,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Arborescence JSON file.
    #[arg(long)]
    trees: PathBuf,
    #[arg(long)]
    bipartition: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct MetagraphArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    trees: PathBuf,
    /// Failed links, e.g. `a-b,c-d`.
    #[arg(long, short = 'f', default_value = "")]
    failures: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SchemeArgs {
    /// circular[:bipartitioned], hdr-log-k, hdr-3-bits, extended, one-resilient, table:FILE.
    #[arg(long)]
    scheme: String,
    /// Arborescence file; otherwise trees are decomposed from the graph.
    #[arg(long)]
    trees: Option<PathBuf>,
    /// Number of arborescences to decompose; defaults to the edge connectivity.
    #[arg(long)]
    arborescences: Option<usize>,
    /// Destination.
    #[arg(short = 't', long = "dest")]
    dest: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Source node.
    #[arg(short = 's', long = "source")]
    source: String,
    #[arg(long, short = 'f', default_value = "")]
    failures: String,
    #[arg(long, default_value = "static")]
    mode: Mode,
    /// Down links for one step, played once in order (repeatable).
    #[arg(long)]
    prefix: Vec<String>,
    /// Down links for one step of the repeating cycle (repeatable). Defaults to all of F.
    #[arg(long)]
    cycle: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Source node, or `all`.
    #[arg(short = 's', long = "source", default_value = "all")]
    source: String,
    #[arg(long, default_value = "dynamic")]
    mode: Mode,
    /// Largest failure-set size.
    #[arg(short = 'k', long = "k")]
    k: usize,
    /// Cap on reachable states per game.
    #[arg(long, default_value_t = 2_000_000)]
    budget: usize,
    #[arg(long, env = "FLAPLAB_WORKERS")]
    workers: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ReproArgs {
    /// Case name, or `all`.
    case: String,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Decompose(a) => cmd_decompose(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Metagraph(a) => cmd_metagraph(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Repro(a) => cmd_repro(a),
        Command::ListCorpus => cmd_list(),
    }
}

struct Loaded {
    graph: MultiGraph,
    root: Option<String>,
}

fn load_graph(args: &GraphArgs) -> anyhow::Result<Loaded> {
    if let Some(path) = &args.graph {
        let file = GraphFile::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
        let graph = file.to_graph()?;
        return Ok(Loaded { graph, root: file.root });
    }
    let name = args.corpus.as_deref().ok_or_else(|| anyhow!("give --graph or --corpus"))?;
    if let Some(g) = samples::named(name) {
        return Ok(Loaded { graph: g?, root: Some("0".into()) });
    }
    Ok(Loaded { graph: corpus_graph(name)?, root: corpus_root(name)? })
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// The named node, else the file's root, else a node called `t`.
fn destination(loaded: &Loaded, given: Option<&str>) -> anyhow::Result<NodeId> {
    let name = given
        .map(str::to_string)
        .or_else(|| loaded.root.clone())
        .or_else(|| loaded.graph.node("t").map(|_| "t".to_string()))
        .ok_or_else(|| anyhow!("no destination: pass -t"))?;
    Ok(loaded.graph.require(&name)?)
}

fn load_trees(g: &MultiGraph, path: &Path) -> anyhow::Result<ArborescenceSet> {
    let file = ArborescenceFile::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(file.to_set(g)?)
}

fn emit(output: &OutputArgs, mut report: Value, text: String) -> anyhow::Result<()> {
    if !output.no_timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        report["generatedAt"] = json!(secs);
    }
    let body = serde_json::to_string_pretty(&report)? + "\n";
    match &output.out {
        Some(path) => {
            write(path, &body)?;
            print!("{text}");
        }
        None if output.json => print!("{body}"),
        None => print!("{text}"),
    }
    Ok(())
}

fn to_value(x: &impl Serialize) -> anyhow::Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn cmd_decompose(a: DecomposeArgs) -> anyhow::Result<u8> {
    let loaded = load_graph(&a.graph)?;
    let g = &loaded.graph;
    let t = destination(&loaded, a.dest.as_deref())?;
    let k = match a.k {
        Some(k) => k,
        None => edge_connectivity(g)?,
    };
    let constraint = if a.bipartition { Constraint::Bipartition } else { Constraint::None };
    let trees = decompose_with(g, t, k, constraint, a.budget)?;
    let file = ArborescenceFile::from_set(g, &trees);
    match &a.out {
        Some(path) => write(path, &file.to_json())?,
        None => print!("{}", file.to_json()),
    }
    if let Some(path) = &a.dot {
        write(path, &trees.to_dot(g))?;
    }
    Ok(0)
}

fn cmd_validate(a: ValidateArgs) -> anyhow::Result<u8> {
    let loaded = load_graph(&a.graph)?;
    let trees = load_trees(&loaded.graph, &a.trees)?;
    let report = validate(&loaded.graph, &trees, a.bipartition);
    let mut text = format!("{} ({} arborescences)\n", if report.pass { "valid" } else { "invalid" }, trees.k());
    for v in &report.violations {
        text.push_str(&format!("  {v}\n"));
    }
    emit(&a.output, to_value(&report)?, text)?;
    Ok(u8::from(!report.pass))
}

fn cmd_metagraph(a: MetagraphArgs) -> anyhow::Result<u8> {
    let loaded = load_graph(&a.graph)?;
    let g = &loaded.graph;
    let trees = load_trees(g, &a.trees)?;
    let failures = EdgeSet::parse(g, &a.failures)?;
    let mg = meta_graph(g, &trees, &failures);
    let components = tree_components(&mg);
    let good: Vec<usize> = good_arborescences(&trees, &failures).into_iter().map(|i| i + 1).collect();
    let edges: Vec<Value> = mg
        .edges
        .iter()
        .map(|e| json!({ "a": e.a + 1, "b": e.b + 1, "failure": g.edge_label(e.failure) }))
        .collect();
    let report = json!({
        "arborescences": mg.nodes,
        "edges": edges,
        "treeComponents": components,
        "good": good,
    });
    let mut text = format!("{} arborescences, {} meta-edges, {components} tree components\n", mg.nodes, mg.edges.len());
    for e in &mg.edges {
        text.push_str(&format!("  T{} - T{} ({})\n", e.a + 1, e.b + 1, g.edge_label(e.failure)));
    }
    let good_text: Vec<String> = good.iter().map(|i| format!("T{i}")).collect();
    text.push_str(&format!("good: {}\n", good_text.join(" ")));
    emit(&a.output, report, text)?;
    Ok(0)
}

fn build_scheme(loaded: &Loaded, args: &SchemeArgs) -> anyhow::Result<Shared<dyn RoutingScheme>> {
    let g = &loaded.graph;
    let t = destination(loaded, args.dest.as_deref())?;
    if let Some(path) = args.scheme.strip_prefix("table:") {
        let table = TableFile::parse(&read(Path::new(path))?)?;
        let scheme = TableScheme::from_file(g, &table)?;
        if scheme.destination() != t {
            bail!("table routes to `{}`, not `{}`", table.destination, g.name(t));
        }
        return Ok(Shared::new(scheme));
    }
    if args.scheme == "one-resilient" {
        return Ok(Shared::new(OneResilientScheme::new(g, t)?));
    }
    let required = args.scheme == "circular:bipartitioned";
    let bipartition = required || args.scheme == "extended";
    let trees = match &args.trees {
        Some(path) => {
            let trees = load_trees(g, path)?;
            let report = validate(g, &trees, required);
            if !report.pass {
                let first = report.violations.first().map(ToString::to_string).unwrap_or_default();
                bail!("{} is not a valid arborescence set for `{}`: {first}", path.display(), args.scheme);
            }
            trees
        }
        None => {
            let k = match args.arborescences {
                Some(k) => k,
                None => edge_connectivity(g)?,
            };
            let constraint = if bipartition { Constraint::Bipartition } else { Constraint::None };
            decompose_with(g, t, k, constraint, 2_000_000)?
        }
    };
    if trees.root() != t {
        bail!("arborescences are rooted at `{}`, not `{}`", g.name(trees.root()), g.name(t));
    }
    let trees = Shared::new(trees);
    let scheme: Shared<dyn RoutingScheme> = match args.scheme.as_str() {
        "circular" | "circular:bipartitioned" => Shared::new(CircularScheme::in_order(trees)?),
        "hdr-log-k" => Shared::new(HdrLogScheme::new(trees)?),
        "hdr-3-bits" => Shared::new(Hdr3Scheme::new(trees)?),
        "extended" => Shared::new(ExtendedScheme::in_order(trees)?),
        other => bail!("unknown scheme `{other}`"),
    };
    Ok(scheme)
}

fn step_edges(g: &MultiGraph, model: &FailureModel, steps: &[String]) -> anyhow::Result<Vec<Vec<flaplab_core::graph::EdgeId>>> {
    steps
        .iter()
        .map(|s| {
            let set = EdgeSet::parse(g, s)?;
            if let Some(e) = set.iter().find(|&e| !model.failures.contains(e)) {
                bail!("schedule step `{s}` downs {}, which is not in F", g.edge_label(e));
            }
            Ok(set.to_vec())
        })
        .collect()
}

fn cmd_simulate(a: SimulateArgs) -> anyhow::Result<u8> {
    let loaded = load_graph(&a.graph)?;
    let g = &loaded.graph;
    let scheme = build_scheme(&loaded, &a.scheme)?;
    let s = g.require(&a.source)?;
    let model = FailureModel::new(EdgeSet::parse(g, &a.failures)?, a.mode)?;
    let schedule = if a.mode == Mode::Static || (a.prefix.is_empty() && a.cycle.is_empty()) {
        Schedule::AllDown
    } else {
        let prefix = step_edges(g, &model, &a.prefix)?;
        let cycle = if a.cycle.is_empty() { vec![model.failures.to_vec()] } else { step_edges(g, &model, &a.cycle)? };
        Schedule::from_edges(&model, &prefix, &cycle)?
    };
    let verdict = simulate(g, &*scheme, &model, &schedule, s, scheme.destination(), a.max_steps)?;
    let run = verdict.run.as_ref().ok_or_else(|| anyhow!("simulation returned no run"))?;
    let report = RunReport::new(g, run);
    let mut value = to_value(&report)?;
    value["scheme"] = to_value(&scheme.info(g))?;
    emit(&a.output, value, report.text())?;
    Ok(verdict.outcome.exit_code() as u8)
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<u8> {
    let loaded = load_graph(&a.graph)?;
    let g = &loaded.graph;
    let scheme = build_scheme(&loaded, &a.scheme)?;
    let t = scheme.destination();
    let sources = if a.source == "all" { Sources::All } else { Sources::One(g.require(&a.source)?) };
    let options = VerifyOptions { budget: a.budget, workers: a.workers };
    let verdict = verify(g, &*scheme, sources, t, a.k, a.mode, options)?;
    let report =
        VerdictReport::new(g, &verdict, scheme.info(g), a.mode, Some(a.k), a.source.clone(), g.name(t).to_string());
    emit(&a.output, to_value(&report)?, report.text())?;
    Ok(verdict.outcome.exit_code() as u8)
}

fn cmd_repro(a: ReproArgs) -> anyhow::Result<u8> {
    let names: Vec<&str> = if a.case == "all" { case_names() } else { vec![a.case.as_str()] };
    let mut reports = Vec::new();
    let mut text = String::new();
    for name in names {
        let report = repro(name)?;
        text.push_str(&report.text());
        reports.push(report);
    }
    let pass = reports.iter().all(|r| r.pass);
    let value = if reports.len() == 1 { to_value(&reports[0])? } else { json!({ "pass": pass, "cases": reports }) };
    emit(&a.output, value, text)?;
    Ok(u8::from(!pass))
}

fn cmd_list() -> anyhow::Result<u8> {
    println!("graphs:");
    for (name, lambda) in GRAPHS {
        let g = corpus_graph(name)?;
        println!("  {name:<10} {} nodes, {} edges, edge connectivity {lambda}", g.node_count(), g.edge_count());
    }
    println!("  expand(g,h[,entry,exit])  every edge of g replaced by a copy of h");
    println!("samples:");
    println!("  Cn, Kn, prism, bridged-triangles");
    println!("cases:");
    for case in cases() {
        println!("  {:<30} {}", case.name, case.summary);
    }
    Ok(0)
}
