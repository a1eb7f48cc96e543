use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use ncl_bench::{clique_c2e, hword, partition_bounded, partition_cgs, reconf};
use ncl_core::compose::c2c_reachable;
use ncl_core::fpt::{
    solve_bounded_c2c_subsetdp, solve_c2e_kernelized, StepSemantics, DEFAULT_SUBSET_LIMIT,
};
use ncl_core::gadgets::{build_crossover, gadget_behavior, DEFAULT_GADGET_LIMIT};
use ncl_core::reduce::{
    bandwidth_exact, cutwidth_exact, HWordOptions, PartitionGoal, BAG_LAYOUT_LIMIT,
};
use ncl_core::search::{solve_bounded_c2c, solve_c2c, solve_cgs_bruteforce};
use ncl_core::treewidth::{
    dp_bounded_ncl, dp_cgs_degree, dp_cgs_unary, to_nice, BoundedVariant, DpLimits,
};
use ncl_core::SolverLimits;

fn satisfiability(c: &mut Criterion) {
    let mut group = c.benchmark_group("cgs");
    // the degree DP tracks every bag-incident edge; U and W sit in every
    // bag, so 8 values (16 edges) is its ceiling
    for n in [4u64, 6, 8] {
        let out = partition_cgs(n);
        let ntd = to_nice(&out.graph, out.decomposition.as_ref().unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::new("bruteforce", n), &out, |b, out| {
            b.iter(|| {
                solve_cgs_bruteforce(black_box(&out.graph), SolverLimits::unlimited()).unwrap()
            })
        });
        group.bench_with_input(BenchmarkId::new("dp_degree", n), &out, |b, out| {
            b.iter(|| dp_cgs_degree(black_box(&out.graph), &ntd, DpLimits::default()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("dp_unary", n), &out, |b, out| {
            b.iter(|| dp_cgs_unary(black_box(&out.graph), &ntd, DpLimits::default()).unwrap())
        });
    }
    group.finish();
}

fn bounded(c: &mut Criterion) {
    let mut group = c.benchmark_group("bounded_c2c");
    // the ordering DP keeps orderings of bag-incident edges, which grow
    // factorially with the number of values
    for n in [2u64, 3, 4] {
        let out = partition_bounded(n, PartitionGoal::C2C);
        let (s, g) = (out.start.clone().unwrap(), out.goal.clone().unwrap());
        let ntd = to_nice(&out.graph, out.decomposition.as_ref().unwrap()).unwrap();
        let variant = BoundedVariant::C2C(g.clone());
        group.bench_function(BenchmarkId::new("search", n), |b| {
            b.iter(|| solve_bounded_c2c(&out.graph, &s, &g, SolverLimits::unlimited()).unwrap())
        });
        group.bench_function(BenchmarkId::new("ordering_dp", n), |b| {
            b.iter(|| dp_bounded_ncl(&out.graph, &ntd, &variant, &s, DpLimits::default()).unwrap())
        });
        group.bench_function(BenchmarkId::new("subset_dp", n), |b| {
            b.iter(|| solve_bounded_c2c_subsetdp(&out.graph, &s, &g, DEFAULT_SUBSET_LIMIT).unwrap())
        });
    }
    group.finish();
}

fn reconfiguration(c: &mut Criterion) {
    let mut group = c.benchmark_group("c2c");
    for m in [8usize, 12, 16] {
        let inst = reconf(7, m / 2 + 1, m);
        group.bench_function(BenchmarkId::new("bfs", m), |b| {
            b.iter(|| {
                solve_c2c(
                    &inst.graph,
                    &inst.start,
                    &inst.goal,
                    SolverLimits::unlimited(),
                )
                .unwrap()
            })
        });
        group.bench_function(BenchmarkId::new("compose", m), |b| {
            b.iter(|| c2c_reachable(&inst.graph, &inst.start, &inst.goal).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("c2e_kernelized");
    for n in [5usize, 8] {
        let out = clique_c2e(n);
        let s = out.start.clone().unwrap();
        let t = out.target.unwrap();
        let l = out.length_bound.unwrap();
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| {
                solve_c2e_kernelized(&out.graph, &s, t, l, StepSemantics::Bounded, None).unwrap()
            })
        });
    }
    group.finish();
}

fn hword_reduction(c: &mut Criterion) {
    let mut group = c.benchmark_group("hword");
    group.sample_size(20);
    for n in [2usize, 4] {
        let out = hword(n, HWordOptions::default());
        let (s, g) = (out.start.clone().unwrap(), out.goal.clone().unwrap());
        group.bench_function(BenchmarkId::new("compile_pure_planar", n), |b| {
            b.iter(|| {
                hword(
                    n,
                    HWordOptions {
                        pure_and_or: true,
                        planarize: true,
                    },
                )
            })
        });
        group.bench_function(BenchmarkId::new("c2c_compose", n), |b| {
            b.iter(|| c2c_reachable(&out.graph, &s, &g).unwrap())
        });
    }
    group.finish();
}

fn gadgets_and_layout(c: &mut Criterion) {
    let crossover = build_crossover(false);
    c.bench_function("gadget_behavior/crossover", |b| {
        b.iter(|| gadget_behavior(black_box(&crossover), DEFAULT_GADGET_LIMIT).unwrap())
    });
    let out = partition_cgs(8);
    c.bench_function("layout/bandwidth_exact", |b| {
        b.iter(|| bandwidth_exact(black_box(&out.graph), BAG_LAYOUT_LIMIT).unwrap())
    });
    c.bench_function("layout/cutwidth_exact", |b| {
        b.iter(|| cutwidth_exact(black_box(&out.graph), BAG_LAYOUT_LIMIT).unwrap())
    });
}

criterion_group!(
    benches,
    satisfiability,
    bounded,
    reconfiguration,
    hword_reduction,
    gadgets_and_layout
);
criterion_main!(benches);
