use std::sync::Arc as Shared;

use flaplab_core::adversary::{simulate, FailureModel, Mode, Outcome, Schedule};
use flaplab_core::arborescence::{decompose, decompose_bipartitioned};
use flaplab_core::corpus::{corpus_graph, fig1_schemes, spaa_arcs, spaa_table, tabulate_arc_families};
use flaplab_core::graph::{samples, EdgeId, EdgeSet, MultiGraph, NodeId};
use flaplab_core::schemes::{
    route, CircularScheme, ExtendedScheme, Hdr3Mode, Hdr3Scheme, Hdr3State, HdrLogScheme, Header, OneResilientScheme, PortRef,
    RouteError, RouteInput, RoutingScheme, TableFile, TableScheme,
};

fn static_run(g: &MultiGraph, scheme: &dyn RoutingScheme, failures: &str, s: NodeId) -> Outcome {
    let model = FailureModel::new(EdgeSet::parse(g, failures).unwrap(), Mode::Static).unwrap();
    let schedule = Schedule::constant(model.all_down());
    simulate(g, scheme, &model, &schedule, s, scheme.destination(), 1000).unwrap().outcome
}

fn all_schemes(g: &MultiGraph, t: NodeId, k: usize) -> Vec<Shared<dyn RoutingScheme>> {
    let plain = Shared::new(decompose(g, t, k).unwrap());
    let split = Shared::new(decompose_bipartitioned(g, t, k).unwrap());
    vec![
        Shared::new(CircularScheme::in_order(plain.clone()).unwrap()),
        Shared::new(CircularScheme::in_order(split.clone()).unwrap()),
        Shared::new(HdrLogScheme::new(plain.clone()).unwrap()),
        Shared::new(Hdr3Scheme::new(plain.clone()).unwrap()),
        Shared::new(ExtendedScheme::in_order(split).unwrap()),
    ]
}

#[test]
fn every_scheme_delivers_without_failures() {
    for name in ["fig1", "fig2", "fig3"] {
        let g = corpus_graph(name).unwrap();
        let t = g.require("t").unwrap();
        let k = if name == "fig2" { 4 } else { 2 };
        for scheme in all_schemes(&g, t, k) {
            for s in g.nodes().filter(|&s| s != t) {
                assert_eq!(static_run(&g, &*scheme, "", s), Outcome::Delivered, "{name} {:?}", scheme.info(&g).kind);
            }
        }
    }
}

#[test]
fn header_widths() {
    let g = corpus_graph("fig2").unwrap();
    let t = g.require("t").unwrap();
    let schemes = all_schemes(&g, t, 4);
    let widths: Vec<u8> = schemes.iter().map(|s| s.bit_capacity()).collect();
    assert_eq!(widths, vec![0, 0, 2, 3, 0]);
    let three = Shared::new(decompose(&g, t, 3).unwrap());
    assert_eq!(HdrLogScheme::new(three).unwrap().bit_capacity(), 2);
    let k5 = samples::complete(6).unwrap();
    let five = Shared::new(decompose(&k5, NodeId(0), 5).unwrap());
    assert_eq!(HdrLogScheme::new(five).unwrap().bit_capacity(), 3);
}

#[test]
fn hdr3_header_round_trip() {
    for mode in [Hdr3Mode::Canonical, Hdr3Mode::DfsForward, Hdr3Mode::DfsReverse] {
        for from_parent in [false, true] {
            let state = Hdr3State { mode, from_parent };
            assert!(state.encode() < 8);
            assert_eq!(Hdr3State::decode(state.encode()).unwrap(), state);
        }
    }
    assert!(Hdr3State::decode(3).is_err());
    assert!(Hdr3State::decode(7).is_err());
}

#[test]
fn fig1_clockwise_turn_at_a() {
    let g = corpus_graph("fig1").unwrap();
    let (_, scheme) = fig1_schemes(&g).unwrap().into_iter().find(|(tags, _)| tags[0] == "a:cw").unwrap();
    let a = g.require("a").unwrap();
    let input = RouteInput {
        node: a,
        in_port: PortRef::Edge(g.edge_named("c", "a").unwrap()),
        active: g.incident(a),
        header: Header::new(0),
        source: a,
    };
    let out = route(&scheme, &g, &input).unwrap().out;
    assert_eq!(out, g.edge_named("a", "d").unwrap());
}

#[test]
fn route_contract() {
    let g = corpus_graph("fig2").unwrap();
    let t = g.require("t").unwrap();
    let scheme = HdrLogScheme::new(Shared::new(decompose(&g, t, 4).unwrap())).unwrap();
    let b = g.require("b").unwrap();
    let input = |node: NodeId, header: Header, in_port: PortRef| RouteInput { node, in_port, active: g.incident(node), header, source: node };
    assert!(route(&scheme, &g, &input(b, Header::new(2), PortRef::Origin)).is_ok());
    assert!(matches!(route(&scheme, &g, &input(t, Header::new(2), PortRef::Origin)), Err(RouteError::Domain(_))));
    assert!(matches!(route(&scheme, &g, &input(b, Header::new(3), PortRef::Origin)), Err(RouteError::Domain(_))));
    let far = g.edge_ids().find(|&e| g.other(e, b).is_none()).unwrap();
    assert!(matches!(route(&scheme, &g, &input(b, Header::new(2), PortRef::Edge(far))), Err(RouteError::Domain(_))));
    let none: [EdgeId; 0] = [];
    let isolated = RouteInput { node: b, in_port: PortRef::Origin, active: &none, header: Header::new(2), source: b };
    assert!(route(&scheme, &g, &isolated).is_err());
}

#[test]
fn table_round_trip() {
    let g = corpus_graph("fig1").unwrap();
    let c = g.require("c").unwrap();
    for (_, scheme) in fig1_schemes(&g).unwrap() {
        let table = TableFile::tabulate(&g, &scheme, c, vec!["fig1".into()]).unwrap();
        let back = TableFile::parse(&table.to_json()).unwrap();
        assert_eq!(back, table);
        let loaded = TableScheme::from_file(&g, &back).unwrap();
        for v in g.nodes().filter(|&v| v != scheme.destination()) {
            let ports = g.incident(v);
            for mask in 1u32..1 << ports.len() {
                let active: Vec<EdgeId> = (0..ports.len()).filter(|i| mask >> i & 1 == 1).map(|i| ports[i]).collect();
                let mut ins: Vec<PortRef> = ports.iter().map(|&e| PortRef::Edge(e)).collect();
                ins.push(PortRef::Origin);
                for in_port in ins {
                    let input = RouteInput { node: v, in_port, active: &active, header: Header::new(0), source: c };
                    let want = route(&scheme, &g, &input).ok().map(|d| d.out);
                    let got = route(&loaded, &g, &input).ok().map(|d| d.out);
                    assert_eq!(got, want);
                }
            }
        }
    }
}

#[test]
fn spaa_table_matches_families() {
    let g = corpus_graph("fig_spaa").unwrap();
    assert_eq!(tabulate_arc_families(&g, &spaa_arcs().unwrap()).unwrap(), spaa_table().unwrap());
}

#[test]
fn one_resilient_survives_any_single_failure() {
    for g in [samples::bridged_triangles().unwrap(), corpus_graph("fig3").unwrap(), samples::prism().unwrap()] {
        for t in g.nodes() {
            let scheme = OneResilientScheme::new(&g, t).unwrap();
            for e in g.edge_ids() {
                let f = EdgeSet::new(&g, [e]).unwrap();
                for s in g.nodes().filter(|&s| s != t) {
                    if !flaplab_core::graph::connected(&g, &f, s, t).unwrap() {
                        continue;
                    }
                    let label = format!("{}#{}", g.edge_label(e), e.0);
                    assert_eq!(static_run(&g, &scheme, &label, s), Outcome::Delivered, "t={} e={label}", g.name(t));
                }
            }
        }
    }
}

#[test]
fn constructor_preconditions() {
    let g = samples::cycle(4).unwrap();
    let one = Shared::new(decompose(&g, NodeId(0), 1).unwrap());
    assert!(ExtendedScheme::in_order(one.clone()).is_err());
    assert!(CircularScheme::new(one, vec![1]).is_err());
    let two = Shared::new(decompose(&g, NodeId(0), 2).unwrap());
    assert!(CircularScheme::new(two.clone(), vec![1, 0]).is_ok());
    assert!(CircularScheme::new(two, vec![0, 0]).is_err());
}
