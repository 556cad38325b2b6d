mod common;

use common::{is_connected, reach, subsets};
use flaplab_core::graph::{
    bridges, components, connected, edge_connectivity, local_edge_connectivity, samples, EdgeId, EdgeSet, GraphFile, MultiGraph,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Smallest number of edges whose removal disconnects the graph.
fn brute_connectivity(g: &MultiGraph) -> usize {
    for size in 0..=g.edge_count() {
        for cut in subsets(g.edge_count(), size) {
            let ids: Vec<EdgeId> = cut.into_iter().map(EdgeId).collect();
            if !is_connected(g, &ids) {
                return size;
            }
        }
    }
    g.edge_count()
}

fn small_random(rng: &mut StdRng) -> MultiGraph {
    let n = rng.gen_range(2..=5);
    let m = rng.gen_range(1..=10);
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let nodes: Vec<&str> = names.iter().map(String::as_str).collect();
    let edges: Vec<(&str, &str)> = (0..m)
        .map(|_| {
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            (nodes[a], nodes[b])
        })
        .collect();
    MultiGraph::from_names(&nodes, &edges).unwrap()
}

#[test]
fn edge_connectivity_matches_brute_force() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..300 {
        let g = small_random(&mut rng);
        assert_eq!(edge_connectivity(&g).unwrap(), brute_connectivity(&g), "{:?}", GraphFile::from_graph(&g, None));
    }
}

#[test]
fn local_connectivity_matches_brute_force() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..100 {
        let g = small_random(&mut rng);
        let (s, t) = (g.nodes().next().unwrap(), g.nodes().last().unwrap());
        let expected = (0..=g.edge_count())
            .find(|&size| {
                subsets(g.edge_count(), size).into_iter().any(|cut| {
                    let ids: Vec<EdgeId> = cut.into_iter().map(EdgeId).collect();
                    !reach(&g, &ids, s)[t.0]
                })
            })
            .unwrap();
        assert_eq!(local_edge_connectivity(&g, s, t).unwrap(), expected);
    }
}

#[test]
fn connected_matches_flood_fill() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..100 {
        let g = small_random(&mut rng);
        for size in 0..=g.edge_count().min(3) {
            for cut in subsets(g.edge_count(), size) {
                let ids: Vec<EdgeId> = cut.into_iter().map(EdgeId).collect();
                let f = EdgeSet::new(&g, ids.clone()).unwrap();
                let seen = reach(&g, &ids, g.nodes().next().unwrap());
                for t in g.nodes() {
                    assert_eq!(connected(&g, &f, g.nodes().next().unwrap(), t).unwrap(), seen[t.0]);
                }
            }
        }
    }
}

#[test]
fn bridges_disconnect() {
    let mut rng = StdRng::seed_from_u64(14);
    for _ in 0..200 {
        let g = small_random(&mut rng);
        let found = bridges(&g);
        let base = components(&g, &EdgeSet::empty()).unwrap().len();
        for e in g.edge_ids() {
            let split = components(&g, &EdgeSet::new(&g, [e]).unwrap()).unwrap().len() > base;
            assert_eq!(found.contains(e), split, "edge {}", g.edge_label(e));
        }
    }
}

#[test]
fn sample_connectivity() {
    for (g, lambda) in [
        (samples::cycle(5).unwrap(), 2),
        (samples::complete(4).unwrap(), 3),
        (samples::complete(6).unwrap(), 5),
        (samples::prism().unwrap(), 3),
        (samples::bridged_triangles().unwrap(), 1),
    ] {
        assert_eq!(edge_connectivity(&g).unwrap(), lambda);
    }
    assert!(samples::named("K5").is_some());
    assert!(samples::named("C3").is_some());
    assert!(samples::named("fig1").is_none());
}

#[test]
fn edge_set_syntax() {
    let g = MultiGraph::from_names(&["a", "b", "c"], &[("a", "b"), ("a", "b"), ("b", "c")]).unwrap();
    assert_eq!(EdgeSet::parse(&g, "").unwrap().len(), 0);
    assert_eq!(EdgeSet::parse(&g, "b-c").unwrap().to_vec(), vec![EdgeId(2)]);
    assert_eq!(EdgeSet::parse(&g, "a-b#1").unwrap().to_vec(), vec![EdgeId(1)]);
    assert_eq!(EdgeSet::parse(&g, "0, 2").unwrap().to_vec(), vec![EdgeId(0), EdgeId(2)]);
    assert!(EdgeSet::parse(&g, "a-c").is_err());
    assert!(EdgeSet::parse(&g, "7").is_err());
    assert!(EdgeSet::parse(&g, "a-b#2").is_err());
}

#[test]
fn graph_file_round_trip() {
    let g = samples::prism().unwrap();
    let file = GraphFile::from_graph(&g, g.node("0"));
    let back = GraphFile::parse(&file.to_json()).unwrap();
    assert_eq!(back, file);
    let h = back.to_graph().unwrap();
    assert_eq!(h.node_count(), 6);
    assert_eq!(h.edge_count(), 9);
    assert!(GraphFile::parse("{\"nodes\": [\"a\"], \"edges\": [[\"a\", \"a\"]]}").and_then(|f| f.to_graph()).is_err());
}
