use std::collections::BTreeMap;

use ncl_core::drawing::{crossings, vertex_collisions};
use ncl_core::gadgets::*;
use ncl_core::{is_legal, Configuration, ConstraintGraph, EdgeId, Orientation, VertexId};

fn behavior(g: &Gadget) -> Behavior {
    gadget_behavior(g, DEFAULT_GADGET_LIMIT).unwrap()
}

fn legal_count(g: &Gadget) -> usize {
    let m = g.graph.edge_count();
    (0..1u64 << m)
        .filter(|&x| is_legal(&g.graph, &Configuration::from_mask(m, x)).unwrap())
        .count()
}

#[test]
fn every_shipped_gadget_meets_its_contract() {
    for (g, spec) in shipped_gadgets() {
        let report = verify_behavior(&g, &spec).unwrap();
        assert!(report.is_empty(), "{}: {report:?}", g.name);
        assert!(
            is_legal(&g.graph, &g.initial).unwrap(),
            "{} initial state",
            g.name
        );
    }
}

#[test]
fn composition_agrees_with_enumeration() {
    let mut checked = 0;
    for (g, _) in shipped_gadgets() {
        if g.graph.edge_count() > 22 {
            continue;
        }
        let a = behavior(&g);
        let b = gadget_behavior_enumerated(&g, 22).unwrap();
        assert_eq!(a.canonical(), b.canonical(), "{}", g.name);
        assert_eq!(a.class_count(), b.class_count(), "{}", g.name);
        checked += 1;
    }
    assert!(checked >= 13);
}

#[test]
fn legal_state_counts() {
    assert_eq!(behavior(&build_or()).legal_states().len(), 7);
    assert_eq!(behavior(&build_blue_terminator()).legal_states().len(), 1);
    assert_eq!(legal_count(&build_blue_terminator()), 8);
    assert_eq!(legal_count(&build_half_crossover()), 308);
    assert_eq!(behavior(&build_half_crossover()).legal_states().len(), 11);
    assert_eq!(legal_count(&build_crossover(false)), 824);
    let x = behavior(&build_crossover(false));
    assert_eq!(x.class_count(), 9);
    assert_eq!(x.legal_states().len(), 9);
}

#[test]
fn single_vertex_kinds() {
    use ncl_core::{classify_vertex, VertexKind};
    let and = build_and();
    assert_eq!(
        classify_vertex(&and.graph, and.internal_vertices()[0]).unwrap(),
        VertexKind::And
    );
    let or = build_or();
    assert_eq!(
        classify_vertex(&or.graph, or.internal_vertices()[0]).unwrap(),
        VertexKind::Or
    );
    // or_tree(0) is the OR vertex up to port names
    let map: BTreeMap<String, String> = [("p0", "b"), ("p1", "a"), ("p2", "c")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    assert_eq!(
        behavior(&build_or_tree(0)).renamed(&map).canonical(),
        behavior(&or).canonical()
    );
}

#[test]
fn or_tree_examples() {
    let t1 = behavior(&build_or_tree(1));
    assert_eq!(t1.ports.len(), 4);
    assert!(!t1.legal_states().contains(&0));
    let t3 = behavior(&build_or_tree(3));
    assert_eq!(t3.ports.len(), 6);
    assert!(!t3.legal_states().contains(&0));
    for i in 0..6 {
        assert!(t3.legal_states().contains(&(1 << i)));
    }
}

#[test]
fn pure_crossover_has_the_plain_behavior() {
    let plain = behavior(&build_crossover(false));
    let pure = behavior(&build_crossover(true));
    assert_eq!(plain.canonical(), pure.canonical());
    assert_eq!(plain.canonical(), include_str!("snapshots/crossover.txt"));
}

#[test]
fn half_crossover_snapshot() {
    assert_eq!(
        behavior(&build_half_crossover()).canonical(),
        include_str!("snapshots/half_crossover.txt")
    );
}

#[test]
fn restriction_exemptions() {
    for (g, _) in shipped_gadgets() {
        assert!(
            g.restricted_violations().is_empty(),
            "{}: {:?}",
            g.name,
            g.restricted_violations()
        );
        let expected_exempt = match g.name.as_str() {
            "crossover" => 4,
            "red_terminator" | "red_blue_converter" => 1,
            _ => 0,
        };
        assert_eq!(g.exempt.len(), expected_exempt, "{}", g.name);
    }
}

#[test]
fn drawings_are_plane() {
    for (g, _) in shipped_gadgets() {
        let d = g.drawing();
        assert!(crossings(&g.graph, &d).is_empty(), "{}", g.name);
        assert!(vertex_collisions(&g.graph, &d).is_empty(), "{}", g.name);
    }
}

/// Latch with the weights of `A` and the blue edge `AT` swapped, started
/// in some locked legal state.
fn corrupted_latch() -> Gadget {
    let mut g = build_latch();
    let (a, at) = (g.named_edge("A").unwrap(), g.named_edge("AT").unwrap());
    g.graph.set_weight(a, 2).unwrap();
    g.graph.set_weight(at, 1).unwrap();
    let m = g.graph.edge_count();
    let l = g.port("L").unwrap().clone();
    g.initial = (0..1u64 << m)
        .map(|x| Configuration::from_mask(m, x))
        .find(|c| is_legal(&g.graph, c).unwrap() && g.port_dir(c, &l) == PortDir::Out)
        .expect("some locked state is legal");
    g
}

#[test]
fn corrupted_latch_fails_its_contract() {
    let report = verify_behavior(&corrupted_latch(), &latch_spec()).unwrap();
    assert!(!report.is_empty());
    assert!(report.iter().any(|r| r.contains("cycle")), "{report:?}");
}

#[test]
fn empty_contract_always_verifies() {
    let spec = BehaviorSpec::new("empty");
    assert!(verify_behavior(&corrupted_latch(), &spec)
        .unwrap()
        .is_empty());
}

#[test]
fn attach_terminates_a_port() {
    let g = attach(&build_and(), "b", &build_blue_terminator(), "A").unwrap();
    let mut names = g.port_names();
    names.sort();
    assert_eq!(names, ["r1", "r2"]);
    // the terminator keeps the blue edge pointing away from the AND, so
    // both reds must point in
    let b = behavior(&g);
    assert_eq!(b.legal_states().into_iter().collect::<Vec<_>>(), [0b11]);
}

#[test]
fn attach_rejects_weight_mismatch() {
    assert!(attach(&build_and(), "r1", &build_blue_terminator(), "A").is_err());
    assert!(attach(&build_and(), "missing", &build_blue_terminator(), "A").is_err());
}

#[test]
fn attach_is_associative_up_to_renaming() {
    let or = build_or();
    let term = build_blue_terminator();
    // (or -- or) -- terminator
    let left = attach(&attach(&or, "c", &or, "a").unwrap(), "b.c", &term, "A").unwrap();
    // or -- (or -- terminator)
    let right = attach(&or, "c", &attach(&or, "c", &term, "A").unwrap(), "a").unwrap();
    let lb = behavior(&left);
    let rb = behavior(&right);
    let mut ln = lb.ports.clone();
    ln.sort();
    assert_eq!(ln, ["a.a", "a.b", "b.b"]);
    let to_common = |pairs: &[(&str, &str)]| -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    };
    let l = lb.renamed(&to_common(&[("a.a", "x"), ("a.b", "y"), ("b.b", "z")]));
    let r = rb.renamed(&to_common(&[
        ("or.a", "x"),
        ("or.b", "y"),
        ("or+blue_terminator.b", "z"),
    ]));
    assert_eq!(l.canonical(), r.canonical());
}

#[test]
fn splicing_preserves_legality() {
    let and = build_and();
    let term = build_blue_terminator();
    let g = attach(&and, "b", &term, "A").unwrap();
    // the spliced gadget's initial state restricts to legal states of both parts
    assert!(is_legal(&g.graph, &g.initial).unwrap());
    let m = g.graph.edge_count();
    let legal = (0..1u64 << m)
        .filter(|&x| is_legal(&g.graph, &Configuration::from_mask(m, x)).unwrap())
        .count();
    // the terminator's 8 states, each with both reds in
    assert_eq!(legal, 8);
}

#[test]
fn behavior_invariant_under_renaming() {
    for (g, _) in shipped_gadgets() {
        let map: BTreeMap<String, String> = g
            .port_names()
            .into_iter()
            .map(|n| (n.clone(), format!("z_{n}")))
            .collect();
        let renamed = g.renamed(&map).unwrap();
        assert_eq!(
            behavior(&renamed).canonical(),
            behavior(&g).renamed(&map).canonical(),
            "{}",
            g.name
        );
    }
}

/// Copy of `g` with vertex and edge ids reversed.
fn relabeled(g: &Gadget) -> Gadget {
    let n = g.graph.vertex_count();
    let m = g.graph.edge_count();
    let vmap = |v: VertexId| VertexId((n - 1 - v.index()) as u32);
    let emap = |e: EdgeId| EdgeId((m - 1 - e.index()) as u32);
    let mut h = ConstraintGraph::new();
    for i in (0..n).rev() {
        h.add_vertex(g.graph.min_inflow(VertexId(i as u32)));
    }
    let mut orient = vec![Orientation::TowardV; m];
    for i in (0..m).rev() {
        let e = EdgeId(i as u32);
        let ed = g.graph.edge(e);
        // also swap the endpoint order
        h.add_edge(vmap(ed.v), vmap(ed.u), ed.weight).unwrap();
        orient[emap(e).index()] = g.initial.get(e).reversed();
    }
    let ports = g
        .ports
        .iter()
        .map(|p| Port {
            edge: emap(p.edge),
            inner: vmap(p.inner),
            boundary: vmap(p.boundary),
            ..p.clone()
        })
        .collect();
    Gadget {
        name: g.name.clone(),
        graph: h,
        ports,
        initial: Configuration::from_orientations(&orient),
        positions: g.positions.iter().rev().copied().collect(),
        labels: g.labels.iter().rev().cloned().collect(),
        edge_labels: g.edge_labels.iter().rev().cloned().collect(),
        exempt: g.exempt.iter().map(|&v| vmap(v)).collect(),
        named_edges: g
            .named_edges
            .iter()
            .map(|(k, &e)| (k.clone(), emap(e)))
            .collect(),
    }
}

#[test]
fn behavior_invariant_under_relabeling() {
    for (g, spec) in shipped_gadgets() {
        let r = relabeled(&g);
        assert!(is_legal(&r.graph, &r.initial).unwrap());
        assert_eq!(
            behavior(&r).canonical(),
            behavior(&g).canonical(),
            "{}",
            g.name
        );
        assert!(verify_behavior(&r, &spec).unwrap().is_empty(), "{}", g.name);
    }
}

#[test]
fn locked_latch_never_moves_a() {
    // the graph-level example: with L locked, A is absent from legal_moves
    // in every configuration reachable with L held
    let g = build_latch();
    let a = g.named_edge("A").unwrap();
    let l = g.port("L").unwrap().edge;
    let mut pinned = g.graph.clone();
    let boundary = g.port("L").unwrap().boundary;
    // L points at its boundary vertex when locked; demanding its weight
    // there pins it
    pinned.set_min_inflow(boundary, 2).unwrap();
    let reach =
        ncl_core::search::reachable_set(&pinned, &g.initial, ncl_core::SolverLimits::unlimited())
            .unwrap();
    assert!(reach.len() > 1);
    for c in reach {
        assert_eq!(c.get(l), g.initial.get(l));
        assert!(!ncl_core::legal_moves(&pinned, &c).unwrap().contains(&a));
    }
}
