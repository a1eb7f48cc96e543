use ncl_core::fpt::*;
use ncl_core::random::{random_reconf, rng};
use ncl_core::search::{
    replay, solve_bounded_c2c, solve_bounded_c2e, solve_c2c, solve_c2e, SolverLimits,
};
use rand::Rng;

#[test]
fn subset_dp_matches_bounded_search() {
    let mut r = rng(101);
    let mut yes = 0;
    for _ in 0..200 {
        let n = r.gen_range(2..=7);
        let m = r.gen_range(1..=10);
        let inst = random_reconf(&mut r, n, m, 3, 8);
        let dp =
            solve_bounded_c2c_subsetdp(&inst.graph, &inst.start, &inst.goal, DEFAULT_SUBSET_LIMIT)
                .unwrap();
        let bfs = solve_bounded_c2c(
            &inst.graph,
            &inst.start,
            &inst.goal,
            SolverLimits::default(),
        )
        .unwrap();
        assert_eq!(dp.is_some(), bfs.is_some());
        if let Some(seq) = dp {
            assert_eq!(replay(&inst.graph, &inst.start, &seq).unwrap(), inst.goal);
            yes += 1;
        }
    }
    assert!(yes > 20 && yes < 190, "degenerate suite: {yes} yes");
}

fn unbounded_c2e(inst: &ncl_core::random::ReconfInstance, l: usize) -> bool {
    solve_c2e(
        &inst.graph,
        &inst.start,
        inst.target,
        SolverLimits::default().with_max_len(l),
    )
    .unwrap()
    .is_some()
}

#[test]
fn kernels_preserve_length_bounded_answers() {
    let mut r = rng(202);
    let mut shrunk = 0;
    let mut yes = [0usize; 4];
    for i in 0..300 {
        // alternate dense and sparse instances so the radius actually cuts
        let n = if i % 2 == 0 {
            r.gen_range(2..=7)
        } else {
            r.gen_range(8..=13)
        };
        let m = r.gen_range(1..=12);
        let inst = random_reconf(&mut r, n, m, 3, 4);
        let (g, s, t, e) = (&inst.graph, &inst.start, &inst.goal, inst.target);
        for l in 0..=4 {
            let lim = SolverLimits::default().with_max_len(l);
            let orig = [
                unbounded_c2e(&inst, l),
                solve_bounded_c2e(g, s, e, lim).unwrap().is_some(),
                solve_c2c(g, s, t, lim).unwrap().is_some(),
                solve_bounded_c2c(g, s, t, lim).unwrap().is_some(),
            ];
            let sems = [StepSemantics::Unbounded, StepSemantics::Bounded];
            for (j, &want) in orig.iter().enumerate() {
                let sem = sems[j % 2];
                let got = if j < 2 {
                    solve_c2e_kernelized(g, s, e, l, sem, None).unwrap()
                } else {
                    solve_c2c_kernelized(g, s, t, l, sem, None).unwrap()
                };
                assert_eq!(got.is_some(), want, "variant {j}, l = {l}");
                if let Some(seq) = got {
                    assert!(seq.len() <= l);
                    let end = replay(g, s, &seq).unwrap();
                    if j < 2 {
                        assert!(seq.contains(&e));
                    } else {
                        assert_eq!(&end, t);
                    }
                    yes[j] += 1;
                }
            }
            if let KernelResult::Kernel(k) = kernelize_c2e(g, s, e, l).unwrap() {
                shrunk += (k.retained.len() < g.edge_count()) as usize;
            }
        }
    }
    assert!(shrunk > 100, "kernels rarely shrink: {shrunk}");
    assert!(yes.iter().all(|&y| y > 50), "degenerate suite: {yes:?}");
}

#[test]
fn enlarging_l_never_loses_a_solution() {
    let mut r = rng(303);
    for _ in 0..100 {
        let n = r.gen_range(2..=10);
        let m = r.gen_range(1..=10);
        let inst = random_reconf(&mut r, n, m, 3, 4);
        let mut prev = false;
        for l in 0..=5 {
            let now = solve_c2e_kernelized(
                &inst.graph,
                &inst.start,
                inst.target,
                l,
                StepSemantics::Unbounded,
                None,
            )
            .unwrap()
            .is_some();
            assert!(!prev || now, "yes at l = {} but no at l = {l}", l - 1);
            prev = now;
        }
    }
}

#[test]
fn kernel_sizes_respect_the_ball_bound() {
    let mut r = rng(404);
    for _ in 0..100 {
        let inst = random_reconf(&mut r, 12, 14, 2, 3);
        let g = &inst.graph;
        let delta = g.max_degree();
        for l in 1..=4 {
            if let KernelResult::Kernel(k) = kernelize_c2e(g, &inst.start, inst.target, l).unwrap()
            {
                assert!(k.retained.len() as u128 <= ball_size_bound(delta, l - 1));
                for (i, &old) in k.vertex_map.iter().enumerate() {
                    let credit = k.inflow_credit.get(&old).copied().unwrap_or(0);
                    let v = ncl_core::VertexId(i as u32);
                    assert_eq!(
                        k.graph.min_inflow(v),
                        g.min_inflow(old).saturating_sub(credit)
                    );
                }
            }
            if let KernelResult::Kernel(k) = kernelize_c2c(g, &inst.start, &inst.goal, l).unwrap() {
                let d = inst.start.differing(&inst.goal).len() as u128;
                assert!(k.retained.len() as u128 <= d * ball_size_bound(delta, l));
            }
        }
    }
}

/// The product `l * (Δ-1)^(l-1) * Δ` undercounts the line-graph ball: on a
/// sub-cubic graph with `l = 1` it equals 3 although a C2C kernel around a
/// single edge of distance 1 already holds 5 edges.
#[test]
fn product_form_bound_is_too_small() {
    let mut g = ncl_core::ConstraintGraph::new();
    let v: Vec<_> = (0..6).map(|_| g.add_vertex(0)).collect();
    g.add_edge(v[0], v[1], 1).unwrap();
    for (a, b) in [(0, 2), (0, 3), (1, 4), (1, 5)] {
        g.add_edge(v[a], v[b], 1).unwrap();
    }
    let s = ncl_core::Configuration::uniform(5, ncl_core::Orientation::TowardV);
    let mut t = s.clone();
    t.flip(ncl_core::EdgeId(0));
    let KernelResult::Kernel(k) = kernelize_c2c(&g, &s, &t, 1).unwrap() else {
        panic!()
    };
    let delta = g.max_degree();
    assert_eq!(delta, 3);
    assert_eq!(k.retained.len(), 5);
    assert!(k.retained.len() > delta * (delta - 1).pow(0));
}
