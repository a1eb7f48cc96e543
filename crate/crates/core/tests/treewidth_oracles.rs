use ncl_core::random::{random_graph, random_reconf, rng};
use ncl_core::search::{
    replay, solve_bounded_c2c, solve_bounded_c2e, solve_cgs_bruteforce, SolverLimits,
};
use ncl_core::treewidth::*;
use ncl_core::{is_legal, ConstraintGraph, EdgeId, VertexId};
use rand::Rng;

#[test]
fn cgs_dps_agree_with_bruteforce_on_random_graphs() {
    let mut r = rng(11);
    let mut sat = 0;
    for _ in 0..300 {
        let n = r.gen_range(2..=8);
        let m = r.gen_range(0..=14);
        let g = random_graph(&mut r, n, m, 4);
        let ntd = nice_decomposition(&g);
        let bf = solve_cgs_bruteforce(&g, SolverLimits::default()).unwrap();
        let deg = dp_cgs_degree(
            &g,
            &ntd,
            DpLimits {
                max_edge_bits: 20,
                ..Default::default()
            },
        )
        .unwrap();
        let un = dp_cgs_unary(&g, &ntd, DpLimits::default()).unwrap();
        assert_eq!(bf.is_some(), deg.is_some(), "degree DP disagrees on {g:?}");
        assert_eq!(bf.is_some(), un.is_some(), "unary DP disagrees on {g:?}");
        for w in [&deg, &un].into_iter().flatten() {
            assert!(is_legal(&g, w).unwrap());
        }
        sat += bf.is_some() as usize;
    }
    assert!(
        sat > 50 && sat < 290,
        "suite is degenerate: {sat} satisfiable"
    );
}

#[test]
fn to_nice_preserves_width_and_validity() {
    let mut r = rng(5);
    for _ in 0..200 {
        let n = r.gen_range(2..=12);
        let m = r.gen_range(0..=20);
        let g = random_graph(&mut r, n, m, 2);
        let td = heuristic_decomposition(&g);
        assert!(validate_decomposition(&g, &td).is_empty());
        let nice = to_nice(&g, &td).unwrap();
        assert!(validate_nice(&g, &nice).is_empty());
        assert_eq!(nice.width(), td.width());
        assert!(nice.len() <= (td.width() as usize + 2) * 3 * n.max(1) + 1);
    }
}

#[test]
fn star_with_large_degree() {
    // Centre needs 37 of the weights 1..=20 (sum 210); far ends are free.
    let mut g = ConstraintGraph::new();
    let c = g.add_vertex(37);
    for w in 1..=20 {
        let b = g.add_vertex(0);
        g.add_edge(c, b, w).unwrap();
    }
    let ntd = nice_decomposition(&g);
    assert!(matches!(
        dp_cgs_degree(&g, &ntd, DpLimits::default()),
        Err(ncl_core::NclError::LimitExceeded { .. })
    ));
    let w = dp_cgs_unary(&g, &ntd, DpLimits::default())
        .unwrap()
        .expect("satisfiable");
    assert!(is_legal(&g, &w).unwrap());
    // closed form: satisfiable iff the incident weights can reach the minimum
    g.set_min_inflow(c, 211).unwrap();
    assert!(dp_cgs_unary(&g, &ntd, DpLimits::default())
        .unwrap()
        .is_none());
}

#[test]
fn zero_minimums_are_satisfiable() {
    let mut r = rng(3);
    let mut g = random_graph(&mut r, 6, 10, 3);
    for v in 0..6 {
        g.set_min_inflow(VertexId(v), 0).unwrap();
    }
    let ntd = nice_decomposition(&g);
    assert!(dp_cgs_unary(&g, &ntd, DpLimits::default())
        .unwrap()
        .is_some());
}

#[test]
fn bounded_dp_agrees_with_search() {
    let mut r = rng(21);
    let (mut yes_e, mut yes_c) = (0, 0);
    for _ in 0..200 {
        let n = r.gen_range(2..=6);
        let m = r.gen_range(1..=8);
        let inst = random_reconf(&mut r, n, m, 3, 8);
        let g = &inst.graph;
        let ntd = nice_decomposition(g);
        let lim = DpLimits::default();
        let dp =
            dp_bounded_ncl(g, &ntd, &BoundedVariant::C2E(inst.target), &inst.start, lim).unwrap();
        let bf = solve_bounded_c2e(g, &inst.start, inst.target, SolverLimits::default()).unwrap();
        assert_eq!(dp.is_some(), bf.is_some(), "C2E disagreement");
        if let Some(seq) = dp {
            let end = replay(g, &inst.start, &seq).unwrap();
            assert_ne!(end.get(inst.target), inst.start.get(inst.target));
            assert!(ncl_core::search::is_bounded_sequence(&seq));
            yes_e += 1;
        }
        let dp = dp_bounded_ncl(
            g,
            &ntd,
            &BoundedVariant::C2C(inst.goal.clone()),
            &inst.start,
            lim,
        )
        .unwrap();
        let bf = solve_bounded_c2c(g, &inst.start, &inst.goal, SolverLimits::default()).unwrap();
        assert_eq!(dp.is_some(), bf.is_some(), "C2C disagreement");
        if let Some(seq) = dp {
            assert_eq!(replay(g, &inst.start, &seq).unwrap(), inst.goal);
            yes_c += 1;
        }
    }
    assert!(
        yes_e > 20 && yes_e < 190 && yes_c > 20 && yes_c < 190,
        "degenerate suite {yes_e} {yes_c}"
    );
    let _ = EdgeId(0);
}
