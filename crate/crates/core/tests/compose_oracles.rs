use ncl_core::compose::{analyze, c2c_reachable, c2e_reachable, greedy_order, DEFAULT_MAX_PRODUCT};
use ncl_core::random::{random_graph, random_reconf, rng};
use ncl_core::search::{reachable_set, solve_c2c, solve_c2e, solve_cgs_bruteforce, SolverLimits};
use ncl_core::{is_legal, Configuration, EdgeId, VertexId};
use rand::seq::SliceRandom;
use rand::Rng;

#[test]
fn composition_matches_bfs() {
    let mut r = rng(77);
    let (mut yes_c, mut yes_e) = (0, 0);
    for _ in 0..300 {
        let n = r.gen_range(2..=8);
        let m = r.gen_range(1..=12);
        let inst = random_reconf(&mut r, n, m, 3, 6);
        let (g, s, t) = (&inst.graph, &inst.start, &inst.goal);
        let bfs_c = solve_c2c(g, s, t, SolverLimits::unlimited())
            .unwrap()
            .is_some();
        let bfs_e = solve_c2e(g, s, inst.target, SolverLimits::unlimited())
            .unwrap()
            .is_some();
        assert_eq!(c2c_reachable(g, s, t).unwrap(), bfs_c);
        assert_eq!(c2e_reachable(g, s, inst.target).unwrap(), bfs_e);
        yes_c += bfs_c as usize;
        yes_e += bfs_e as usize;
        // any absorption order gives the same answer
        let mut order: Vec<VertexId> = (0..n as u32).map(VertexId).collect();
        order.shuffle(&mut r);
        let an = analyze(
            g,
            &order,
            &[s.clone(), t.clone()],
            &[inst.target],
            DEFAULT_MAX_PRODUCT,
        )
        .unwrap();
        assert_eq!(an.connected(0, 1), bfs_c);
        assert_eq!(
            an.target_reachable(0, 0, s.get(inst.target).reversed()),
            bfs_e
        );
    }
    assert!(yes_c > 30 && yes_e > 30, "degenerate: {yes_c} {yes_e}");
}

#[test]
fn composition_matches_bfs_on_tight_targets() {
    let mut r = rng(79);
    let (mut yes, mut yes_c, mut total) = (0, 0, 0);
    while total < 200 {
        let n = r.gen_range(2..=8);
        let m = r.gen_range(1..=12);
        let g = random_graph(&mut r, n, m, 3);
        let Some(s) = solve_cgs_bruteforce(&g, SolverLimits::default()).unwrap() else {
            continue;
        };
        let e = EdgeId(r.gen_range(0..m) as u32);
        let bfs = solve_c2e(&g, &s, e, SolverLimits::unlimited())
            .unwrap()
            .is_some();
        assert_eq!(c2e_reachable(&g, &s, e).unwrap(), bfs);
        yes += bfs as usize;
        // goal drawn uniformly from all legal configurations
        let legal: Vec<Configuration> = (0..(1u64 << m))
            .map(|mask| Configuration::from_mask(m, mask))
            .filter(|c| is_legal(&g, c).unwrap())
            .collect();
        let t = &legal[r.gen_range(0..legal.len())];
        let bfs_c = solve_c2c(&g, &s, t, SolverLimits::unlimited())
            .unwrap()
            .is_some();
        assert_eq!(c2c_reachable(&g, &s, t).unwrap(), bfs_c);
        yes_c += bfs_c as usize;
        total += 1;
    }
    assert!(yes > 30 && yes < 170, "degenerate: {yes}");
    assert!(yes_c > 30 && total - yes_c >= 10, "degenerate: {yes_c}");
}

#[test]
fn component_count_matches_enumeration() {
    let mut r = rng(78);
    for _ in 0..100 {
        let n = r.gen_range(2..=6);
        let m = r.gen_range(1..=9);
        let inst = random_reconf(&mut r, n, m, 2, 3);
        let g = &inst.graph;
        // count components of the configuration graph by flood fill
        let mut legal: Vec<Configuration> = Vec::new();
        for mask in 0..(1u64 << m) {
            let c = Configuration::from_mask(m, mask);
            if is_legal(g, &c).unwrap() {
                legal.push(c);
            }
        }
        let mut seen = std::collections::HashSet::new();
        let mut comps = 0;
        for c in &legal {
            if seen.contains(c) {
                continue;
            }
            comps += 1;
            for x in reachable_set(g, c, SolverLimits::unlimited()).unwrap() {
                seen.insert(x);
            }
        }
        let an = analyze(g, &greedy_order(g), &[], &[], DEFAULT_MAX_PRODUCT).unwrap();
        assert_eq!(an.components(), comps);
    }
}
