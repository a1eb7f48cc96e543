use proptest::prelude::*;

use ncl_core::compose::c2c_reachable;
use ncl_core::drawing::Drawing;
use ncl_core::format::{self, Document};
use ncl_core::fpt::{solve_c2e_kernelized, StepSemantics};
use ncl_core::hword::{
    parse_instance, print_instance, solve_hword_reconfig, HGoal, HRelation, HWordInstance,
};
use ncl_core::search::{
    replay, solve_bounded_c2c, solve_bounded_c2e, solve_c2c, solve_c2e, solve_cgs_bruteforce,
};
use ncl_core::treewidth::{
    heuristic_decomposition, to_nice, validate_decomposition, validate_nice,
};
use ncl_core::{
    inflow, is_legal, legal_moves, Configuration, ConstraintGraph, EdgeId, Orientation,
    SolverLimits, VertexId,
};

/// A graph, a configuration legal for it and a second configuration that is
/// legal as well. Minimum inflows are drawn below what both configurations
/// provide, scaled by a per-vertex fraction.
#[derive(Debug, Clone)]
struct Instance {
    g: ConstraintGraph,
    start: Configuration,
    goal: Configuration,
}

fn orientations(bits: &[bool]) -> Configuration {
    let os: Vec<Orientation> = bits
        .iter()
        .map(|&b| {
            if b {
                Orientation::TowardU
            } else {
                Orientation::TowardV
            }
        })
        .collect();
    Configuration::from_orientations(&os)
}

fn arb_instance(max_n: usize, max_m: usize) -> impl Strategy<Value = Instance> {
    (2..=max_n, 0..=max_m)
        .prop_flat_map(|(n, m)| {
            (
                Just(n),
                prop::collection::vec((0..n, 0..n - 1, 1u64..=3), m),
                prop::collection::vec(any::<bool>(), m),
                prop::collection::vec(any::<bool>(), m),
                prop::collection::vec(0u64..=4, n),
            )
        })
        .prop_map(|(n, edges, s, t, frac)| {
            let mut g = ConstraintGraph::new();
            for _ in 0..n {
                g.add_vertex(0);
            }
            for (a, b, w) in edges {
                let b = if b >= a { b + 1 } else { b };
                g.add_edge(VertexId(a as u32), VertexId(b as u32), w)
                    .unwrap();
            }
            let (start, goal) = (orientations(&s), orientations(&t));
            for v in 0..n {
                let v = VertexId(v as u32);
                let cap = inflow(&g, &start, v)
                    .unwrap()
                    .min(inflow(&g, &goal, v).unwrap());
                g.set_min_inflow(v, cap * frac[v.index()] / 4).unwrap();
            }
            Instance { g, start, goal }
        })
}

fn document(inst: &Instance, pos: &[(i32, i32)]) -> Document {
    let mut d = Document::from_graph(inst.g.clone()).with_config("start", inst.start.clone());
    d.configs.push(("goal".into(), inst.goal.clone()));
    if inst.g.edge_count() > 0 {
        d.target = Some(EdgeId(0));
    }
    let mut dr = Drawing::new();
    for (i, &(x, y)) in pos.iter().take(inst.g.vertex_count()).enumerate() {
        dr.push(i as u32 % 3, x as f64 / 7.0, y as f64 * 0.1);
    }
    if dr.len() == inst.g.vertex_count() {
        d.drawing = Some(dr);
    }
    d.bags = vec![inst.g.vertices().collect()];
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reversal_is_an_involution(inst in arb_instance(6, 10), pick in any::<prop::sample::Index>()) {
        prop_assume!(inst.g.edge_count() > 0);
        let e = EdgeId(pick.index(inst.g.edge_count()) as u32);
        let c = &inst.start;
        prop_assert_eq!(&c.reversed(e).reversed(e), c);
        prop_assert_ne!(&c.reversed(e), c);
        prop_assert_eq!(c.get(e).reversed().reversed(), c.get(e));
        prop_assert_eq!(c.reversed(e).differing(c), vec![e]);
    }

    #[test]
    fn format_round_trips(inst in arb_instance(7, 12), pos in prop::collection::vec((-1000i32..1000, -1000i32..1000), 7)) {
        let d = document(&inst, &pos);
        let text = format::print(&d);
        let back = format::parse(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(format::print(&back), text);
    }

    #[test]
    fn legal_moves_preserve_legality(inst in arb_instance(6, 10)) {
        prop_assert!(is_legal(&inst.g, &inst.start).unwrap());
        prop_assert!(is_legal(&inst.g, &inst.goal).unwrap());
        let moves = legal_moves(&inst.g, &inst.start).unwrap();
        for e in inst.g.edge_ids() {
            let after = is_legal(&inst.g, &inst.start.reversed(e)).unwrap();
            prop_assert_eq!(after, moves.contains(&e));
        }
    }

    #[test]
    fn bfs_sequences_are_shortest(inst in arb_instance(5, 9)) {
        prop_assume!(inst.g.edge_count() > 0);
        let lim = SolverLimits::default();
        if let Some(seq) = solve_c2c(&inst.g, &inst.start, &inst.goal, lim).unwrap() {
            prop_assert_eq!(&replay(&inst.g, &inst.start, &seq).unwrap(), &inst.goal);
            prop_assert!(seq.len() >= inst.start.differing(&inst.goal).len());
            if !seq.is_empty() {
                let shorter = solve_c2c(&inst.g, &inst.start, &inst.goal, lim.with_max_len(seq.len() - 1)).unwrap();
                prop_assert!(shorter.is_none());
            }
        }
        let t = EdgeId(0);
        if let Some(seq) = solve_c2e(&inst.g, &inst.start, t, lim).unwrap() {
            let end = replay(&inst.g, &inst.start, &seq).unwrap();
            prop_assert_ne!(end.get(t), inst.start.get(t));
            prop_assert_eq!(seq.last(), Some(&t));
            let shorter = solve_c2e(&inst.g, &inst.start, t, lim.with_max_len(seq.len() - 1)).unwrap();
            prop_assert!(shorter.is_none());
        }
    }

    #[test]
    fn c2c_is_symmetric(inst in arb_instance(5, 9)) {
        let lim = SolverLimits::default();
        let forward = solve_c2c(&inst.g, &inst.start, &inst.goal, lim).unwrap();
        let backward = solve_c2c(&inst.g, &inst.goal, &inst.start, lim).unwrap();
        prop_assert_eq!(forward.is_some(), backward.is_some());
        if let (Some(f), Some(b)) = (forward, backward) {
            prop_assert_eq!(f.len(), b.len());
        }
        let composed = c2c_reachable(&inst.g, &inst.start, &inst.goal).unwrap();
        prop_assert_eq!(composed, c2c_reachable(&inst.g, &inst.goal, &inst.start).unwrap());
    }

    #[test]
    fn bounded_implies_unbounded(inst in arb_instance(5, 9)) {
        prop_assume!(inst.g.edge_count() > 0);
        let lim = SolverLimits::default();
        if let Some(b) = solve_bounded_c2c(&inst.g, &inst.start, &inst.goal, lim).unwrap() {
            prop_assert!(ncl_core::search::is_bounded_sequence(&b));
            let u = solve_c2c(&inst.g, &inst.start, &inst.goal, lim).unwrap();
            prop_assert!(u.is_some_and(|u| u.len() <= b.len()));
        }
        if let Some(b) = solve_bounded_c2e(&inst.g, &inst.start, EdgeId(0), lim).unwrap() {
            prop_assert!(ncl_core::search::is_bounded_sequence(&b));
            let u = solve_c2e(&inst.g, &inst.start, EdgeId(0), lim).unwrap();
            prop_assert!(u.is_some_and(|u| u.len() <= b.len()));
        }
    }

    #[test]
    fn legal_starts_witness_satisfiability(inst in arb_instance(6, 10)) {
        prop_assert!(solve_cgs_bruteforce(&inst.g, SolverLimits::default()).unwrap().is_some());
    }

    #[test]
    fn heuristic_decompositions_are_valid(inst in arb_instance(8, 14)) {
        let td = heuristic_decomposition(&inst.g);
        prop_assert!(validate_decomposition(&inst.g, &td).is_empty());
        let nice = to_nice(&inst.g, &td).unwrap();
        prop_assert!(validate_nice(&inst.g, &nice).is_empty());
        prop_assert_eq!(nice.width(), td.width());
    }

    #[test]
    fn kernels_preserve_short_answers(inst in arb_instance(6, 10), l in 0usize..5) {
        prop_assume!(inst.g.edge_count() > 0);
        let lim = SolverLimits::default().with_max_len(l);
        let t = EdgeId(0);
        for (semantics, direct) in [
            (StepSemantics::Unbounded, solve_c2e(&inst.g, &inst.start, t, lim).unwrap()),
            (StepSemantics::Bounded, solve_bounded_c2e(&inst.g, &inst.start, t, lim).unwrap()),
        ] {
            let k = solve_c2e_kernelized(&inst.g, &inst.start, t, l, semantics, None).unwrap();
            prop_assert_eq!(k.is_some(), direct.is_some());
            if let Some(seq) = k {
                let end = replay(&inst.g, &inst.start, &seq).unwrap();
                prop_assert_ne!(end.get(t), inst.start.get(t));
            }
        }
    }

    #[test]
    fn hword_reconfiguration_is_symmetric(
        allowed in prop::collection::btree_set((0usize..3, 0usize..3), 1..9),
        ws in prop::collection::vec(0usize..3, 1..5),
        wg_seed in prop::collection::vec(0usize..3, 4),
    ) {
        let names = ["a", "b", "c"];
        let pairs: Vec<(&str, &str)> = allowed.iter().map(|&(x, y)| (names[x], names[y])).collect();
        let h = HRelation::new(&names, &pairs).unwrap();
        let wg: Vec<usize> = wg_seed[..ws.len()].to_vec();
        prop_assume!(ncl_core::hword::is_hword(&h, &ws) && ncl_core::hword::is_hword(&h, &wg));
        let lim = SolverLimits::default();
        let f = solve_hword_reconfig(&h, &ws, &wg, lim).unwrap();
        let b = solve_hword_reconfig(&h, &wg, &ws, lim).unwrap();
        prop_assert_eq!(f.is_some(), b.is_some());
        if let Some(path) = f {
            for pair in path.windows(2) {
                prop_assert_eq!(pair[0].iter().zip(&pair[1]).filter(|(x, y)| x != y).count(), 1);
            }
        }
        let inst = HWordInstance { h, start: ws, goal: HGoal::Word(wg) };
        let text = print_instance(&inst);
        prop_assert_eq!(parse_instance(&text).unwrap(), inst);
    }
}
