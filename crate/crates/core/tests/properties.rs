mod common;

use std::sync::Arc as Shared;

use flaplab_core::adversary::{verify, Mode, Sources, VerifyOptions};
use flaplab_core::arborescence::{
    decompose, decompose_bipartitioned, good_arborescences, meta_graph, tree_components, validate, ArborescenceFile,
};
use flaplab_core::graph::{bridges, components, EdgeId, EdgeSet, MultiGraph, NodeId};
use flaplab_core::schemes::{CircularScheme, Hdr3State};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn instance(seed: u64, k: usize) -> (MultiGraph, NodeId, StdRng) {
    let mut rng = StdRng::seed_from_u64(seed);
    let g = common::random_graph(&mut rng, k, 7);
    let t = NodeId(rng.gen_range(0..g.node_count()));
    (g, t, rng)
}

fn failures(rng: &mut StdRng, g: &MultiGraph, max: usize) -> EdgeSet {
    let mut ids: Vec<EdgeId> = g.edge_ids().collect();
    ids.shuffle(rng);
    ids.truncate(rng.gen_range(0..=max));
    EdgeSet::new(g, ids).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bridges_are_cut_edges(seed in any::<u64>()) {
        let (g, _, _) = instance(seed, 1);
        let found = bridges(&g);
        for e in g.edge_ids() {
            let split = components(&g, &EdgeSet::new(&g, [e]).unwrap()).unwrap().len() > 1;
            prop_assert_eq!(found.contains(e), split);
        }
    }

    #[test]
    fn decompositions_validate(seed in any::<u64>(), k in 1usize..=4) {
        let (g, t, _) = instance(seed, k);
        let ts = decompose(&g, t, k).unwrap();
        prop_assert_eq!(ts.k(), k);
        let report = validate(&g, &ts, false);
        prop_assert!(report.pass, "{:?}", report.violations);
        if let Ok(split) = decompose_bipartitioned(&g, t, k) {
            let report = validate(&g, &split, true);
            prop_assert!(report.pass, "{:?}", report.violations);
        }
    }

    #[test]
    fn decomposition_is_deterministic(seed in any::<u64>(), k in 1usize..=3) {
        let (g, t, _) = instance(seed, k);
        let a = ArborescenceFile::from_set(&g, &decompose(&g, t, k).unwrap());
        let b = ArborescenceFile::from_set(&g, &decompose(&g, t, k).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn meta_graph_keeps_tree_components(seed in any::<u64>(), k in 2usize..=4) {
        let (g, t, mut rng) = instance(seed, k);
        let ts = decompose(&g, t, k).unwrap();
        let f = failures(&mut rng, &g, k - 1);
        let mg = meta_graph(&g, &ts, &f);
        prop_assert!(mg.edges.len() <= f.len());
        prop_assert!(tree_components(&mg) >= k - f.len());
        prop_assert!(!good_arborescences(&ts, &f).is_empty());
    }

    #[test]
    fn good_trees_have_clean_bounces(seed in any::<u64>(), k in 2usize..=4) {
        let (g, t, mut rng) = instance(seed, k);
        let ts = decompose(&g, t, k).unwrap();
        let f = failures(&mut rng, &g, k - 1);
        for i in good_arborescences(&ts, &f) {
            for a in ts.tree(i).arcs().filter(|a| f.contains(a.edge)) {
                let j = ts.owner(a.reversed()).unwrap();
                prop_assert!(ts.path_to_root(j, a.tail).iter().all(|b| !f.contains(b.edge)));
            }
        }
    }

    #[test]
    fn verdicts_are_reproducible(seed in any::<u64>()) {
        let (g, t, _) = instance(seed, 2);
        let scheme = CircularScheme::in_order(Shared::new(decompose(&g, t, 2).unwrap())).unwrap();
        let run = || verify(&g, &scheme, Sources::All, t, 1, Mode::Dynamic, VerifyOptions::default()).unwrap();
        let (a, b) = (run(), run());
        prop_assert_eq!(a.outcome, b.outcome);
        prop_assert_eq!(a.run, b.run);
    }

    #[test]
    fn hdr3_headers_decode(bits in 0u32..8) {
        match Hdr3State::decode(bits) {
            Ok(state) => prop_assert_eq!(state.encode(), bits),
            Err(_) => prop_assert_eq!(bits & 0b11, 3),
        }
    }
}
