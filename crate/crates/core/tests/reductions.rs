use std::collections::BTreeSet;

use ncl_core::compose::{c2c_reachable, c2e_reachable};
use ncl_core::hword::{is_hword, solve_hword_reconfig, HGoal, HRelation, HWordInstance};
use ncl_core::reduce::*;
use ncl_core::search::{
    is_bounded_sequence, reachable_set, replay, solve_bounded_c2c, solve_bounded_c2e, solve_c2c,
    solve_c2e, solve_cgs_bruteforce, solve_cgs_with_fixed, SolverLimits,
};
use ncl_core::treewidth::{
    dp_bounded_ncl, dp_cgs_degree, dp_cgs_unary, heuristic_decomposition, to_nice,
    validate_decomposition, BoundedVariant, DpLimits,
};
use ncl_core::verify::{self, example_relations};
use ncl_core::{is_legal, validate_restricted, ConstraintGraph, Orientation, VertexId};

fn part(xs: &[u64]) -> PartitionInstance {
    PartitionInstance::new(xs.to_vec()).unwrap()
}

fn cgs_answers(out: &ReductionOutput) -> [bool; 3] {
    let ntd = to_nice(&out.graph, out.decomposition.as_ref().unwrap()).unwrap();
    [
        solve_cgs_bruteforce(&out.graph, SolverLimits::default())
            .unwrap()
            .is_some(),
        dp_cgs_degree(&out.graph, &ntd, DpLimits::default())
            .unwrap()
            .is_some(),
        dp_cgs_unary(&out.graph, &ntd, DpLimits::default())
            .unwrap()
            .is_some(),
    ]
}

#[test]
fn partition_cgs_examples() {
    assert_eq!(
        cgs_answers(&partition_to_cgs(&part(&[1, 1, 2])).unwrap()),
        [true; 3]
    );
    assert_eq!(
        cgs_answers(&partition_to_cgs(&part(&[1, 1, 4])).unwrap()),
        [false; 3]
    );
    let out = partition_to_cgs(&part(&[2, 2])).unwrap();
    assert_eq!(cgs_answers(&out), [true; 3]);
    // (U, v_1) toward U and (W, v_2) toward W extend to a legal configuration
    let g = &out.graph;
    let find = |a: &str, b: &str| {
        g.edge_ids()
            .find(|&e| {
                let ed = g.edge(e);
                out.vertex_origin[ed.u.index()] == a && out.vertex_origin[ed.v.index()] == b
            })
            .unwrap()
    };
    let mut fixed = vec![None; g.edge_count()];
    fixed[find("U", "v1").index()] = Some(Orientation::TowardU);
    fixed[find("W", "v2").index()] = Some(Orientation::TowardU);
    assert!(solve_cgs_with_fixed(g, &fixed, SolverLimits::default())
        .unwrap()
        .is_some());
}

#[test]
fn partition_rejects_odd_sums_and_zeros() {
    assert!(PartitionInstance::new(vec![1, 2]).is_err());
    assert!(PartitionInstance::new(vec![0, 2]).is_err());
    assert!(PartitionInstance::new(vec![]).is_err());
    assert!(PartitionInstance { xs: vec![1] }.has_partition().is_err());
}

#[test]
fn partition_decomposition_has_width_two() {
    for xs in [&[1, 1, 2][..], &[3, 5, 2, 4], &[6]] {
        let out = partition_to_cgs(&part(xs)).unwrap();
        let td = out.decomposition.as_ref().unwrap();
        assert!(validate_decomposition(&out.graph, td).is_empty());
        assert_eq!(td.width(), 2);
        assert!(heuristic_decomposition(&out.graph).width() <= 2);
    }
}

#[test]
fn partition_bounded_examples() {
    let solve = |xs: &[u64], goal: PartitionGoal| {
        let out = partition_to_bounded_ncl(&part(xs), goal).unwrap();
        let s = out.start.clone().unwrap();
        assert!(is_legal(&out.graph, &s).unwrap());
        let ntd = to_nice(&out.graph, out.decomposition.as_ref().unwrap()).unwrap();
        let (bf, variant) = match goal {
            PartitionGoal::C2E => {
                let t = out.target.unwrap();
                (
                    solve_bounded_c2e(&out.graph, &s, t, SolverLimits::default()).unwrap(),
                    BoundedVariant::C2E(t),
                )
            }
            PartitionGoal::C2C => {
                let goal = out.goal.clone().unwrap();
                assert!(goal.differing(&s).len() == out.graph.edge_count());
                (
                    solve_bounded_c2c(&out.graph, &s, &goal, SolverLimits::default()).unwrap(),
                    BoundedVariant::C2C(goal),
                )
            }
        };
        let dp = dp_bounded_ncl(&out.graph, &ntd, &variant, &s, DpLimits::default()).unwrap();
        assert_eq!(bf.is_some(), dp.is_some());
        if let Some(seq) = &bf {
            assert!(is_bounded_sequence(seq));
        }
        bf.is_some()
    };
    assert!(solve(&[1, 1, 2], PartitionGoal::C2E));
    assert!(!solve(&[1, 1, 4], PartitionGoal::C2E));
    assert!(solve(&[1, 1, 2], PartitionGoal::C2C));
    assert!(!solve(&[1, 1, 4], PartitionGoal::C2C));
}

fn k4_minus_edge() -> Vec<(usize, usize)> {
    vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]
}

#[test]
fn clique_examples() {
    let cases = [
        (
            CliqueInstance::new(3, vec![(0, 1), (1, 2), (0, 2)], 3).unwrap(),
            true,
        ),
        (
            CliqueInstance::new(3, vec![(0, 1), (1, 2)], 3).unwrap(),
            false,
        ),
        (CliqueInstance::new(4, k4_minus_edge(), 3).unwrap(), true),
    ];
    for (c, want) in cases {
        assert_eq!(c.has_clique(), want);
        let e = clique_to_c2e(&c).unwrap();
        let s = e.start.clone().unwrap();
        assert!(is_legal(&e.graph, &s).unwrap());
        let t = e.target.unwrap();
        let bfs = solve_c2e(&e.graph, &s, t, SolverLimits::default()).unwrap();
        assert_eq!(bfs.is_some(), want, "{c:?}");
        assert_eq!(c2e_reachable(&e.graph, &s, t).unwrap(), want);
        // each edge reversed at most once, within the recorded bound
        let bounded = solve_bounded_c2e(&e.graph, &s, t, SolverLimits::default()).unwrap();
        assert_eq!(bounded.is_some(), want);
        if let Some(seq) = bounded {
            assert!(seq.len() <= e.length_bound.unwrap());
            assert!(is_bounded_sequence(&seq));
        }
        let cc = clique_to_c2c(&c).unwrap();
        let (s, g) = (cc.start.clone().unwrap(), cc.goal.clone().unwrap());
        assert!(is_legal(&cc.graph, &s).unwrap() && is_legal(&cc.graph, &g).unwrap());
        assert_eq!(c2c_reachable(&cc.graph, &s, &g).unwrap(), want, "{c:?}");
    }
}

#[test]
fn clique_weights() {
    let c = CliqueInstance::new(4, k4_minus_edge(), 3).unwrap();
    let out = clique_to_c2e(&c).unwrap();
    let g = &out.graph;
    let find =
        |name: &str| VertexId(out.vertex_origin.iter().position(|l| l == name).unwrap() as u32);
    // Δ = 3, so U demands 3 (n - k) = 3; V demands k(k - 1) = 6
    assert_eq!(g.min_inflow(find("U")), 3);
    assert_eq!(g.min_inflow(find("V")), 6);
    assert_eq!(g.min_inflow(find("W")), 0);
    assert_eq!(g.edge(out.target.unwrap()).weight, 6);
    assert_eq!(g.min_inflow(find("v1")), 3);
    assert_eq!(out.length_bound, Some(3 + 6 + 3 + 1));
}

#[test]
fn clique_rejects_bad_instances() {
    assert!(CliqueInstance::new(3, vec![], 4).is_err());
    assert!(CliqueInstance::new(3, vec![], 0).is_err());
    assert!(CliqueInstance::new(3, vec![(0, 0)], 1).is_err());
    assert!(CliqueInstance::new(3, vec![(0, 1), (1, 0)], 1).is_err());
    assert!(CliqueInstance::new(3, vec![(0, 3)], 1).is_err());
}

fn rel(sigma: &[&str], allowed: &[(&str, &str)]) -> HRelation {
    HRelation::new(sigma, allowed).unwrap()
}

fn word_instance(h: &HRelation, ws: &[&str], wg: &[&str]) -> HWordInstance {
    HWordInstance {
        h: h.clone(),
        start: h.word(ws).unwrap(),
        goal: HGoal::Word(h.word(wg).unwrap()),
    }
}

const ALL_OPTIONS: [HWordOptions; 4] = [
    HWordOptions {
        pure_and_or: false,
        planarize: false,
    },
    HWordOptions {
        pure_and_or: false,
        planarize: true,
    },
    HWordOptions {
        pure_and_or: true,
        planarize: false,
    },
    HWordOptions {
        pure_and_or: true,
        planarize: true,
    },
];

#[test]
fn hword_trivial_example() {
    let h = rel(&["a"], &[("a", "a")]);
    for opts in ALL_OPTIONS {
        let out = hword_to_ncl(&word_instance(&h, &["a", "a"], &["a", "a"]), opts).unwrap();
        assert!(!out.vertex_origin.iter().any(|l| l.starts_with("D[")));
        let (s, g) = (out.start.clone().unwrap(), out.goal.clone().unwrap());
        assert_eq!(s, g);
        assert_eq!(
            solve_c2c(&out.graph, &s, &g, SolverLimits::default()).unwrap(),
            Some(vec![])
        );
    }
}

#[test]
fn hword_swap_example() {
    let h = rel(&["a", "b"], &[("a", "a"), ("a", "b"), ("b", "a")]);
    let inst = word_instance(&h, &["a", "b"], &["b", "a"]);
    assert!(
        solve_hword_reconfig(&h, &inst.start, &[1, 0], SolverLimits::default())
            .unwrap()
            .is_some()
    );
    for opts in ALL_OPTIONS {
        let out = hword_to_ncl(&inst, opts).unwrap();
        let (s, g) = (out.start.clone().unwrap(), out.goal.clone().unwrap());
        assert!(c2c_reachable(&out.graph, &s, &g).unwrap(), "{opts:?}");
    }
    // the plain output is small enough for breadth-first search
    let out = hword_to_ncl(&inst, HWordOptions::default()).unwrap();
    let (s, g) = (out.start.clone().unwrap(), out.goal.clone().unwrap());
    let seq = solve_c2c(&out.graph, &s, &g, SolverLimits::default())
        .unwrap()
        .unwrap();
    assert_eq!(replay(&out.graph, &s, &seq).unwrap(), g);
}

#[test]
fn hword_target_example() {
    let h = rel(&["a", "b"], &[("a", "a"), ("b", "b")]);
    let inst = HWordInstance {
        h: h.clone(),
        start: vec![0, 0],
        goal: HGoal::Target {
            position: 1,
            symbol: 1,
        },
    };
    assert!(inst.solve(SolverLimits::default()).unwrap().is_none());
    for opts in [ALL_OPTIONS[0], ALL_OPTIONS[1], ALL_OPTIONS[2]] {
        let out = hword_to_ncl(&inst, opts).unwrap();
        assert!(
            !c2e_reachable(&out.graph, out.start.as_ref().unwrap(), out.target.unwrap()).unwrap(),
            "{opts:?}"
        );
    }
    let out = hword_to_ncl(&inst, HWordOptions::default()).unwrap();
    assert!(solve_c2e(
        &out.graph,
        out.start.as_ref().unwrap(),
        out.target.unwrap(),
        SolverLimits::default()
    )
    .unwrap()
    .is_none());
}

#[test]
fn hword_bfs_agrees_on_forbidden_bb() {
    let h = rel(&["a", "b"], &[("a", "a"), ("a", "b"), ("b", "a")]);
    let words = verify::hwords(&h, 2);
    for ws in &words {
        for wg in &words {
            let inst = HWordInstance {
                h: h.clone(),
                start: ws.clone(),
                goal: HGoal::Word(wg.clone()),
            };
            let out = hword_to_ncl(&inst, HWordOptions::default()).unwrap();
            let ncl = solve_c2c(
                &out.graph,
                out.start.as_ref().unwrap(),
                out.goal.as_ref().unwrap(),
                SolverLimits::default(),
            )
            .unwrap()
            .is_some();
            assert_eq!(
                ncl,
                solve_hword_reconfig(&h, ws, wg, SolverLimits::default())
                    .unwrap()
                    .is_some()
            );
        }
    }
}

#[test]
fn hword_oracles_agree_in_every_mode_on_two_symbols() {
    for opts in [ALL_OPTIONS[0], ALL_OPTIONS[1], ALL_OPTIONS[2]] {
        let r = verify::hword(2, 3, opts).unwrap();
        assert!(
            r.failures.is_empty(),
            "{opts:?}: {:?}",
            &r.failures[..r.failures.len().min(5)]
        );
        assert!(r.checked > 500);
    }
}

#[test]
fn satisfied_target_uses_a_free_witness_edge() {
    let h = rel(&["a", "b"], &[("a", "a"), ("b", "b")]);
    let inst = HWordInstance {
        h,
        start: vec![0, 0],
        goal: HGoal::Target {
            position: 0,
            symbol: 0,
        },
    };
    let out = hword_to_ncl(&inst, HWordOptions::default()).unwrap();
    let t = out.target.unwrap();
    assert_eq!(out.edge_origin[t.index()], "witness");
    let s = out.start.as_ref().unwrap();
    assert_eq!(
        solve_c2e(&out.graph, s, t, SolverLimits::default()).unwrap(),
        Some(vec![t])
    );
}

#[test]
fn neighbouring_words_reconfigure() {
    let h = rel(
        &["a", "b", "c"],
        &[
            ("a", "a"),
            ("a", "b"),
            ("b", "c"),
            ("c", "a"),
            ("b", "b"),
            ("c", "c"),
        ],
    );
    let words = verify::hwords(&h, 3);
    let base = hword_to_ncl(
        &HWordInstance {
            h: h.clone(),
            start: words[0].clone(),
            goal: HGoal::Word(words[0].clone()),
        },
        HWordOptions::default(),
    )
    .unwrap();
    for a in &words {
        for b in &words {
            if a.iter().zip(b).filter(|(x, y)| x != y).count() == 1 {
                let (ca, cb) = (
                    encode_word_config(&base, a).unwrap(),
                    encode_word_config(&base, b).unwrap(),
                );
                assert!(
                    c2c_reachable(&base.graph, &ca, &cb).unwrap(),
                    "{a:?} -> {b:?}"
                );
            }
        }
    }
}

#[test]
fn decoding_reachable_configurations() {
    let h = rel(&["a", "b"], &[("a", "a"), ("a", "b"), ("b", "a")]);
    let out = hword_to_ncl(
        &word_instance(&h, &["a", "b", "a"], &["a", "a", "a"]),
        HWordOptions::default(),
    )
    .unwrap();
    let reach = reachable_set(
        &out.graph,
        out.start.as_ref().unwrap(),
        SolverLimits::default(),
    )
    .unwrap();
    assert!(reach.len() > 100);
    let mut seen = BTreeSet::new();
    for c in &reach {
        let words = decode_config(&out, c).unwrap();
        assert!(!words.is_empty());
        for w in words {
            assert!(is_hword(&h, &w), "{w:?}");
            seen.insert(w);
        }
    }
    // the whole class of "aba" is met
    assert_eq!(seen.len(), verify::hwords(&h, 3).len());
}

#[test]
fn decoding_rejects_illegal_configurations() {
    let h = rel(&["a", "b"], &[("a", "a"), ("a", "b"), ("b", "a")]);
    let out = hword_to_ncl(
        &word_instance(&h, &["a", "b"], &["a", "b"]),
        HWordOptions::default(),
    )
    .unwrap();
    let mut c = out.start.clone().unwrap();
    // X[0,a] is in the word; turning its blue edge back in still leaves it
    // legal, but pointing both of its reds out is not
    let x = out.hword.as_ref().unwrap().x[0][0];
    for &e in out.graph.incident(x) {
        c.set(e, out.graph.toward(e, out.graph.edge(e).other(x)));
    }
    assert!(!is_legal(&out.graph, &c).unwrap());
    assert!(decode_config(&out, &c).is_err());
}

#[test]
fn encoding_rejects_non_words() {
    let h = rel(&["a", "b"], &[("a", "a"), ("b", "b")]);
    let out = hword_to_ncl(
        &word_instance(&h, &["a", "a"], &["b", "b"]),
        HWordOptions::default(),
    )
    .unwrap();
    assert!(encode_word_config(&out, &[0, 1]).is_err());
    assert!(encode_word_config(&out, &[0]).is_err());
    assert!(encode_word_config(&out, &[0, 0, 0]).is_err());
}

#[test]
fn pure_planar_outputs_are_restricted_and_plane() {
    for (h, w) in example_relations() {
        let inst = HWordInstance {
            h: h.clone(),
            start: w.clone(),
            goal: HGoal::Word(w.clone()),
        };
        let out = hword_to_ncl(&inst, ALL_OPTIONS[3]).unwrap();
        assert!(validate_restricted(&out.graph).is_empty());
        assert!(ncl_core::drawing::crossings(&out.graph, &out.drawing).is_empty());
        assert!(ncl_core::drawing::vertex_collisions(&out.graph, &out.drawing).is_empty());
        assert!(is_legal(&out.graph, out.start.as_ref().unwrap()).unwrap());
    }
}

#[test]
fn unplanarized_outputs_do_cross() {
    let h = rel(&["a", "b"], &[("a", "a"), ("b", "b")]);
    let out = hword_to_ncl(&word_instance(&h, &["a", "a"], &["a", "a"]), ALL_OPTIONS[2]).unwrap();
    assert!(!ncl_core::drawing::crossings(&out.graph, &out.drawing).is_empty());
}

#[test]
fn layout_constant_does_not_grow_with_length() {
    for (h, w) in example_relations() {
        for opts in ALL_OPTIONS {
            let c = |w: &[usize]| {
                let inst = HWordInstance {
                    h: h.clone(),
                    start: w.to_vec(),
                    goal: HGoal::Word(w.to_vec()),
                };
                let out = hword_to_ncl(&inst, opts).unwrap();
                let l = layout_from_bags(&out).unwrap();
                let max_bag = out
                    .bags
                    .as_ref()
                    .unwrap()
                    .iter()
                    .map(Vec::len)
                    .max()
                    .unwrap();
                assert!(l.value <= 2 * max_bag);
                assert_eq!(l.value, layout_bandwidth(&out.graph, &l.order));
                l.value
            };
            let w2 = [w.clone(), w.clone()].concat();
            assert_eq!(c(&w), c(&w2), "{:?} {opts:?}", h.allowed);
        }
    }
}

#[test]
fn bags_form_a_path_decomposition() {
    for (h, w) in example_relations() {
        for opts in ALL_OPTIONS {
            let w3 = [w.clone(), vec![w[0]]].concat();
            let inst = HWordInstance {
                h: h.clone(),
                start: w3.clone(),
                goal: HGoal::Word(w3),
            };
            let out = hword_to_ncl(&inst, opts).unwrap();
            let td = out.decomposition.as_ref().unwrap();
            assert_eq!(td.bags.len(), 2);
            assert!(
                validate_decomposition(&out.graph, td).is_empty(),
                "{opts:?}"
            );
        }
    }
}

fn simple(n: usize, edges: &[(usize, usize)]) -> ConstraintGraph {
    let mut g = ConstraintGraph::new();
    for _ in 0..n {
        g.add_vertex(0);
    }
    for &(a, b) in edges {
        g.add_edge(VertexId(a as u32), VertexId(b as u32), 1)
            .unwrap();
    }
    g
}

#[test]
fn exact_layout_examples() {
    let p4 = simple(4, &[(0, 1), (1, 2), (2, 3)]);
    let c4 = simple(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    let star = simple(4, &[(0, 1), (0, 2), (0, 3)]);
    let k4 = simple(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let bw = |g| bandwidth_exact(g, BAG_LAYOUT_LIMIT).unwrap().value;
    let cw = |g| cutwidth_exact(g, BAG_LAYOUT_LIMIT).unwrap().value;
    assert_eq!((bw(&p4), bw(&c4), bw(&star)), (1, 2, 2));
    assert_eq!((cw(&p4), cw(&k4), cw(&c4)), (1, 4, 2));
    let big = simple(13, &[]);
    assert!(bandwidth_exact(&big, BAG_LAYOUT_LIMIT).is_err());
    assert!(cutwidth_exact(&big, BAG_LAYOUT_LIMIT).is_err());
    let empty = simple(0, &[]);
    assert_eq!(bw(&empty), 0);
    assert_eq!(cw(&empty), 0);
}

#[test]
fn every_reduction_start_is_legal() {
    let outs = [
        partition_to_bounded_ncl(&part(&[3, 3, 2, 4]), PartitionGoal::C2C).unwrap(),
        clique_to_c2c(
            &CliqueInstance::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], 2).unwrap(),
        )
        .unwrap(),
        hword_to_ncl(
            &word_instance(
                &rel(&["a", "b"], &[("a", "b"), ("b", "a")]),
                &["a", "b", "a"],
                &["b", "a", "b"],
            ),
            ALL_OPTIONS[3],
        )
        .unwrap(),
    ];
    for out in outs {
        assert!(is_legal(&out.graph, out.start.as_ref().unwrap()).unwrap());
        assert!(is_legal(&out.graph, out.goal.as_ref().unwrap()).unwrap());
        assert_eq!(out.vertex_origin.len(), out.graph.vertex_count());
        assert_eq!(out.edge_origin.len(), out.graph.edge_count());
        assert_eq!(out.drawing.len(), out.graph.vertex_count());
    }
}

#[test]
fn instance_formats_round_trip() {
    let p = parse_partition("# values\nx 1 1\nx 2\n").unwrap();
    assert_eq!(p.xs, [1, 1, 2]);
    assert_eq!(parse_partition(&print_partition(&p)).unwrap(), p);
    assert!(parse_partition("x 1 a").is_err());
    assert!(parse_partition("y 1").is_err());
    assert!(parse_partition("x 1 2").is_err());

    let c = parse_clique("edge 0 1\nedge 1 2\nedge 0 2\nk 3\n").unwrap();
    assert_eq!((c.n, c.k), (3, 3));
    assert_eq!(parse_clique(&print_clique(&c)).unwrap(), c);
    assert_eq!(parse_clique("n 5\nk 2\n").unwrap().n, 5);
    assert!(parse_clique("edge 0 1\n").is_err());
    assert!(parse_clique("edge 0\nk 1\n").is_err());
    assert!(parse_clique("n 2\nk 3\n").is_err());
}
