mod common;

use std::collections::HashSet;

use flaplab_core::arborescence::{
    decompose, decompose_bipartitioned, good_arborescences, meta_graph, tree_components, validate, ArborescenceFile,
    ArborescenceSet, Violation,
};
use flaplab_core::corpus::{corpus_graph, fig2_drawn_trees};
use flaplab_core::graph::{samples, EdgeSet, MultiGraph, NodeId};

fn fig2() -> (MultiGraph, NodeId) {
    let g = corpus_graph("fig2").unwrap();
    let t = g.require("t").unwrap();
    (g, t)
}

/// Independent check: every non-root node has one parent per tree, walking
/// parents reaches the root, and no arc is used twice.
fn spanning_and_disjoint(g: &MultiGraph, ts: &ArborescenceSet) -> bool {
    let mut arcs = HashSet::new();
    for tree in ts.trees() {
        for v in g.nodes().filter(|&v| v != ts.root()) {
            let mut cur = v;
            for _ in 0..=g.node_count() {
                match tree.parent(cur) {
                    Some(a) => {
                        if a.tail != cur || g.other(a.edge, cur) != Some(a.head) {
                            return false;
                        }
                        cur = a.head;
                    }
                    None => break,
                }
            }
            if cur != ts.root() {
                return false;
            }
        }
        for a in tree.arcs() {
            if !arcs.insert((a.edge, a.tail)) {
                return false;
            }
        }
    }
    true
}

#[test]
fn fig2_decompositions() {
    let (g, t) = fig2();
    let plain = decompose(&g, t, 4).unwrap();
    assert!(validate(&g, &plain, false).pass);
    assert!(spanning_and_disjoint(&g, &plain));
    let split = decompose_bipartitioned(&g, t, 4).unwrap();
    assert!(validate(&g, &split, true).pass);
    assert!(spanning_and_disjoint(&g, &split));
    for half in [[0, 2], [1, 3]] {
        let edges = |i: usize| split.tree(i).arcs().map(|a| a.edge).collect::<HashSet<_>>();
        assert!(edges(half[0]).is_disjoint(&edges(half[1])));
    }
}

#[test]
fn drawn_fig2_trees() {
    let (g, _) = fig2();
    let ts = fig2_drawn_trees(&g).unwrap();
    assert_eq!(ts.k(), 4);
    assert!(validate(&g, &ts, false).pass);
    assert!(spanning_and_disjoint(&g, &ts));
    let c = g.require("c").unwrap();
    let next = ts.canonical_next(0, c).unwrap();
    assert_eq!(next.head, g.require("x").unwrap());
}

#[test]
fn too_many_trees() {
    let g = samples::cycle(5).unwrap();
    assert!(decompose(&g, NodeId(0), 3).is_err());
    assert_eq!(decompose(&g, NodeId(0), 2).unwrap().k(), 2);
}

#[test]
fn shared_arc_is_reported() {
    let g = samples::complete(4).unwrap();
    let ts = decompose(&g, NodeId(0), 3).unwrap();
    let mut file = ArborescenceFile::from_set(&g, &ts);
    file.arborescences[1] = file.arborescences[0].clone();
    let report = validate(&g, &file.to_set(&g).unwrap(), false);
    assert!(!report.pass);
    assert!(report.violations.iter().any(|v| matches!(v, Violation::SharedArc { .. })));
}

#[test]
fn file_round_trip() {
    let (g, t) = fig2();
    let ts = decompose(&g, t, 4).unwrap();
    let file = ArborescenceFile::from_set(&g, &ts);
    let back = ArborescenceFile::parse(&file.to_json()).unwrap();
    assert_eq!(back, file);
    assert_eq!(ArborescenceFile::from_set(&g, &back.to_set(&g).unwrap()), file);
    assert!(ts.to_dot(&g).starts_with("digraph"));
}

#[test]
fn no_failures_every_tree_is_good() {
    let (g, t) = fig2();
    let ts = decompose(&g, t, 4).unwrap();
    let none = EdgeSet::empty();
    assert_eq!(tree_components(&meta_graph(&g, &ts, &none)), 4);
    assert_eq!(good_arborescences(&ts, &none), vec![0, 1, 2, 3]);
}

#[test]
fn shared_failure_links_two_trees() {
    let (g, t) = fig2();
    let ts = fig2_drawn_trees(&g).unwrap();
    let shared = g
        .edge_ids()
        .find(|&e| {
            let [u, v] = g.ends(e);
            let fwd = g.arc_from(e, u).and_then(|a| ts.owner(a));
            let back = g.arc_from(e, v).and_then(|a| ts.owner(a));
            fwd.is_some() && back.is_some() && u != t && v != t
        })
        .unwrap();
    let f = EdgeSet::new(&g, [shared]).unwrap();
    let mg = meta_graph(&g, &ts, &f);
    assert_eq!(mg.edges.len(), 1);
    let (i, j) = (mg.edges[0].a, mg.edges[0].b);
    assert_ne!(i, j);
    assert_eq!(tree_components(&mg), 3);
    // One failure: the reverse arc's tree is otherwise intact, so both are good.
    let good = good_arborescences(&ts, &f);
    assert!(good.contains(&i) && good.contains(&j), "{good:?}");
}

#[test]
fn fig2_three_failures_leave_a_good_tree() {
    let (g, _) = fig2();
    let f = EdgeSet::parse(&g, "a-b,b-c,c-d").unwrap();
    for ts in [fig2_drawn_trees(&g).unwrap(), decompose_bipartitioned(&g, g.require("t").unwrap(), 4).unwrap()] {
        assert!(!good_arborescences(&ts, &f).is_empty());
        assert!(tree_components(&meta_graph(&g, &ts, &f)) >= 1);
    }
}

#[test]
fn next_available_skips_dead_arcs() {
    let (g, t) = fig2();
    let ts = decompose(&g, t, 4).unwrap();
    let v = g.require("b").unwrap();
    let dead = ts.canonical_next(1, v).unwrap().edge;
    assert_eq!(ts.next_available(0, v, |e| e != dead).unwrap(), 2);
    assert_eq!(ts.next_available(0, v, |_| true).unwrap(), 1);
    assert!(ts.next_available(0, v, |_| false).is_err());
    let path = ts.path_to_root(2, v);
    assert_eq!(path.first().unwrap().tail, v);
    assert_eq!(path.last().unwrap().head, t);
}
