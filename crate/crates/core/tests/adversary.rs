mod common;

use std::sync::Arc as Shared;

use flaplab_core::adversary::{
    enumerate_failure_sets, simulate, verify, FailureModel, Mode, Outcome, Run, Schedule, Sources, VerifyOptions,
};
use flaplab_core::arborescence::decompose_bipartitioned;
use flaplab_core::corpus::{corpus_graph, fig1_schemes, fig2_drawn_trees, fig3_schemes};
use flaplab_core::graph::{connected, samples, EdgeId, EdgeSet, MultiGraph, NodeId};
use flaplab_core::schemes::{CircularScheme, Hdr3Scheme, RoutingScheme};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

const SCHEDULES: usize = 1000;

fn options() -> VerifyOptions {
    VerifyOptions::default()
}

/// Random failure set of size at most `k` that keeps `s` and `t` connected.
fn random_failures(rng: &mut StdRng, g: &MultiGraph, s: NodeId, t: NodeId, k: usize) -> EdgeSet {
    loop {
        let mut ids: Vec<EdgeId> = g.edge_ids().collect();
        ids.shuffle(rng);
        ids.truncate(rng.gen_range(0..=k));
        let f = EdgeSet::new(g, ids).unwrap();
        if connected(g, &f, s, t).unwrap() {
            return f;
        }
    }
}

/// Random admissible schedule for `model`.
fn random_schedule(rng: &mut StdRng, g: &MultiGraph, model: &FailureModel) -> Schedule {
    let all = model.all_down();
    let forced = model.forced_down(g).unwrap();
    match model.mode {
        Mode::Static => Schedule::constant(all),
        Mode::Dynamic => {
            let (p, c) = (rng.gen_range(0..6), rng.gen_range(1..8));
            let mut mask = || (rng.gen::<u64>() & all) | forced;
            let prefix = (0..p).map(|_| mask()).collect();
            let cycle = (0..c).map(|_| mask()).collect();
            Schedule::periodic(prefix, cycle)
        }
        Mode::SemiDynamic => {
            let mut fallen = forced;
            let mut prefix = Vec::new();
            for _ in 0..rng.gen_range(0..10) {
                fallen |= rng.gen::<u64>() & rng.gen::<u64>() & all;
                prefix.push(fallen);
            }
            Schedule::periodic(prefix, vec![fallen])
        }
    }
}

fn cross_check(g: &MultiGraph, scheme: &dyn RoutingScheme, k: usize, mode: Mode, seed: u64) {
    let t = scheme.destination();
    let verdict = verify(g, scheme, Sources::All, t, k, mode, options()).unwrap();
    assert_eq!(verdict.outcome, Outcome::Resilient);
    let sources: Vec<NodeId> = g.nodes().filter(|&v| v != t).collect();
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..SCHEDULES {
        let s = *sources.choose(&mut rng).unwrap();
        let model = FailureModel::new(random_failures(&mut rng, g, s, t, k), mode).unwrap();
        let schedule = random_schedule(&mut rng, g, &model);
        let run = simulate(g, scheme, &model, &schedule, s, t, 10_000).unwrap();
        assert_eq!(run.outcome, Outcome::Delivered, "{:?}", run.run);
    }
}

/// Replays a witness and checks it is admissible.
fn check_witness(g: &MultiGraph, scheme: &dyn RoutingScheme, run: &Run) {
    let forced = run.model.forced_down(g).unwrap();
    let all = run.model.all_down();
    let mut fallen = 0;
    for step in &run.trace {
        assert_eq!(step.down & forced, forced, "a link between components came up");
        match run.model.mode {
            Mode::Static => assert_eq!(step.down, all),
            Mode::SemiDynamic => {
                assert_eq!(step.down & fallen, fallen, "a fallen link came back");
                fallen |= step.down;
            }
            Mode::Dynamic => {}
        }
        if let Some(e) = step.out {
            assert!(!run.model.down_edges(step.down).contains(&e), "packet left over a down link");
        }
    }
    let replay = simulate(g, scheme, &run.model, &run.schedule, run.source, run.destination, 10_000).unwrap();
    assert_eq!(replay.outcome, run.outcome());
    assert_ne!(replay.outcome, Outcome::Delivered);
}

#[test]
fn failure_sets_of_fig1() {
    let g = corpus_graph("fig1").unwrap();
    let (c, t) = (g.require("c").unwrap(), g.require("t").unwrap());
    let sets: Vec<EdgeSet> = enumerate_failure_sets(&g, c, t, 1).collect();
    assert_eq!(sets.len(), 7);
    assert!(sets[0].is_empty());
    assert!(sets[1..].iter().all(|f| f.len() == 1));

    let single = MultiGraph::from_names(&["a", "b"], &[("a", "b")]).unwrap();
    let sets: Vec<EdgeSet> = enumerate_failure_sets(&single, NodeId(0), NodeId(1), 1).collect();
    assert_eq!(sets, vec![EdgeSet::empty()]);
}

#[test]
fn failure_sets_against_brute_force() {
    let mut rng = StdRng::seed_from_u64(21);
    for _ in 0..30 {
        let g = common::random_graph(&mut rng, 2, 6);
        let (s, t) = (NodeId(0), NodeId(g.node_count() - 1));
        let k = rng.gen_range(0..=3);
        let found: Vec<EdgeSet> = enumerate_failure_sets(&g, s, t, k).collect();
        let mut expected = Vec::new();
        for size in 0..=k.min(g.edge_count()) {
            for cut in common::subsets(g.edge_count(), size) {
                let ids: Vec<EdgeId> = cut.into_iter().map(EdgeId).collect();
                if common::reach(&g, &ids, s)[t.0] {
                    expected.push(EdgeSet::new(&g, ids).unwrap());
                }
            }
        }
        assert_eq!(found.len(), expected.len());
        for f in &expected {
            assert!(found.contains(f));
        }
    }
}

#[test]
fn link_circular_enumeration() {
    let fig1 = corpus_graph("fig1").unwrap();
    let tags: Vec<Vec<String>> = fig1_schemes(&fig1).unwrap().into_iter().map(|(t, _)| t).collect();
    assert_eq!(tags.len(), 4);
    assert_eq!(tags[0], vec!["a:cw".to_string(), "b:cw".to_string()]);
    let fig3 = corpus_graph("fig3").unwrap();
    assert_eq!(fig3_schemes(&fig3).unwrap().len(), 4);
}

#[test]
fn resilient_verdicts_survive_random_dynamic_schedules() {
    let g = corpus_graph("fig2").unwrap();
    let t = g.require("t").unwrap();
    let scheme = CircularScheme::in_order(Shared::new(decompose_bipartitioned(&g, t, 4).unwrap())).unwrap();
    cross_check(&g, &scheme, 3, Mode::Dynamic, 31);
}

#[test]
fn resilient_verdicts_survive_random_semidynamic_schedules() {
    let g = corpus_graph("fig2").unwrap();
    let scheme = Hdr3Scheme::new(Shared::new(fig2_drawn_trees(&g).unwrap())).unwrap();
    cross_check(&g, &scheme, 3, Mode::SemiDynamic, 32);
}

#[test]
fn witnesses_replay_and_respect_the_rules() {
    let g = corpus_graph("fig1").unwrap();
    for (_, scheme) in fig1_schemes(&g).unwrap() {
        for mode in [Mode::Static, Mode::SemiDynamic, Mode::Dynamic] {
            let v = verify(&g, &scheme, Sources::All, scheme.destination(), 1, mode, options()).unwrap();
            if let Some(run) = &v.run {
                check_witness(&g, &scheme, run);
            }
        }
    }
    let fig2 = corpus_graph("fig2").unwrap();
    let hdr3 = Hdr3Scheme::new(Shared::new(fig2_drawn_trees(&fig2).unwrap())).unwrap();
    let v = verify(&fig2, &hdr3, Sources::All, hdr3.destination(), 3, Mode::Dynamic, options()).unwrap();
    assert_eq!(v.outcome, Outcome::CounterExample);
    check_witness(&fig2, &hdr3, v.run.as_ref().unwrap());
}

#[test]
fn modes_are_monotone() {
    let g = corpus_graph("fig1").unwrap();
    let rank = |o: Outcome| if o == Outcome::Resilient { 0 } else { 1 };
    for (tags, scheme) in fig1_schemes(&g).unwrap() {
        let outcomes: Vec<Outcome> = [Mode::Static, Mode::SemiDynamic, Mode::Dynamic]
            .into_iter()
            .map(|m| verify(&g, &scheme, Sources::All, scheme.destination(), 1, m, options()).unwrap().outcome)
            .collect();
        assert!(outcomes.windows(2).all(|w| rank(w[0]) <= rank(w[1])), "{tags:?}: {outcomes:?}");
    }
}

#[test]
fn inadmissible_schedules_are_rejected() {
    let g = corpus_graph("fig1").unwrap();
    let (_, scheme) = fig1_schemes(&g).unwrap().remove(0);
    let (c, t) = (g.require("c").unwrap(), g.require("t").unwrap());
    let f = EdgeSet::parse(&g, "a-c").unwrap();
    let semi = FailureModel::new(f.clone(), Mode::SemiDynamic).unwrap();
    assert!(simulate(&g, &scheme, &semi, &Schedule::periodic(vec![1], vec![0]), c, t, 100).is_err());
    let fixed = FailureModel::new(f, Mode::Static).unwrap();
    assert!(simulate(&g, &scheme, &fixed, &Schedule::constant(0), c, t, 100).is_err());

    let g = samples::bridged_triangles().unwrap();
    let (s, t) = (NodeId(0), NodeId(1));
    let scheme = flaplab_core::schemes::OneResilientScheme::new(&g, t).unwrap();
    let bridge = g.edge_between(NodeId(2), NodeId(3)).unwrap();
    let dynamic = FailureModel::new(EdgeSet::new(&g, [bridge]).unwrap(), Mode::Dynamic).unwrap();
    assert_eq!(dynamic.forced_down(&g).unwrap(), 1);
    assert!(simulate(&g, &scheme, &dynamic, &Schedule::constant(0), s, t, 100).is_err());
    assert!(simulate(&g, &scheme, &dynamic, &Schedule::constant(1), s, t, 100).is_ok());
}

#[test]
fn verdicts_are_deterministic() {
    let g = corpus_graph("fig2").unwrap();
    let hdr3 = Hdr3Scheme::new(Shared::new(fig2_drawn_trees(&g).unwrap())).unwrap();
    let run = |workers| {
        let opts = VerifyOptions { workers, ..options() };
        verify(&g, &hdr3, Sources::All, hdr3.destination(), 3, Mode::Dynamic, opts).unwrap()
    };
    let (a, b) = (run(Some(1)), run(Some(4)));
    assert_eq!(a.outcome, b.outcome);
    assert_eq!(a.run, b.run);
    assert_eq!(a.stats, b.stats);
}
