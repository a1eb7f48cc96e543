//! Self-checking suites shared by the acceptance harness and the `verify`
//! command. Each suite compares two independent computations over a fixed
//! (seeded) family of instances and reports every disagreement.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::Rng;

use crate::compose::{analyze, c2c_reachable, c2e_reachable, greedy_order, DEFAULT_MAX_PRODUCT};
use crate::drawing::{crossings, vertex_collisions};
use crate::error::{NclError, Result};
use crate::fpt::{
    kernelize_c2e, solve_bounded_c2c_subsetdp, solve_c2c_kernelized, solve_c2e_kernelized,
    StepSemantics, DEFAULT_SUBSET_LIMIT,
};
use crate::gadgets::{
    build_and, build_or, build_or_tree, gadget_behavior, shipped_gadgets, verify_behavior, Gadget,
    DEFAULT_GADGET_LIMIT,
};
use crate::graph::{is_legal, validate_restricted, ConstraintGraph, EdgeId, VertexId};
use crate::hword::{
    is_hword, solve_hword_reconfig, solve_hword_target, HGoal, HRelation, HWordInstance, Word,
};
use crate::random::{random_graph, random_reconf, rng};
use crate::reduce::{
    bandwidth_exact, clique_to_c2c, clique_to_c2e, cutwidth_exact, decode_config,
    encode_word_config, hword_to_ncl, layout_bandwidth, layout_cutwidth, layout_from_bags,
    partition_to_bounded_ncl, partition_to_cgs, CliqueInstance, HWordOptions, PartitionGoal,
    PartitionInstance,
};
use crate::search::{
    replay, solve_bounded_c2c, solve_bounded_c2e, solve_c2c, solve_c2e, solve_cgs_bruteforce,
    SolverLimits,
};
use crate::treewidth::{
    dp_bounded_ncl, dp_cgs_degree, dp_cgs_unary, nice_decomposition, to_nice, BoundedVariant,
    DpLimits, NiceTreeDecomposition,
};

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct Report {
    pub name: &'static str,
    /// Number of individual comparisons made.
    pub checked: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
    /// Wall-clock budget, when the suite has one.
    pub budget: Option<Duration>,
}

impl Report {
    fn new(name: &'static str, budget: Option<Duration>) -> Self {
        Report {
            name,
            checked: 0,
            failures: Vec::new(),
            elapsed: Duration::ZERO,
            budget,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn within_budget(&self) -> bool {
        self.budget.is_none_or(|b| self.elapsed <= b)
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.within_budget()
    }

    /// One line: name, verdict, counts and timing.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} ({} checks, {} failures, {:.2}s",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checked,
            self.failures.len(),
            self.elapsed.as_secs_f64()
        );
        if let Some(b) = self.budget {
            s.push_str(&format!(" of {:.0}s", b.as_secs_f64()));
        }
        s.push(')');
        if let Some(f) = self.failures.first() {
            s.push_str(&format!("; first failure: {f}"));
        }
        s
    }
}

/// Suite names in acceptance order.
pub const SUITES: [&str; 10] = [
    "gadgets",
    "semantics",
    "cgs-dp",
    "bounded-dp",
    "fpt",
    "partition",
    "clique",
    "hword",
    "restricted",
    "layout",
];

/// Runs the named suite; `seed` offsets the seeds of the randomized ones.
pub fn run_suite(name: &str, seed: u64) -> Result<Report> {
    let t = Instant::now();
    let mut r = match name {
        "gadgets" => gadgets()?,
        "semantics" => semantics()?,
        "cgs-dp" => cgs_dp(seed)?,
        "bounded-dp" => bounded_dp(seed)?,
        "fpt" => fpt(seed)?,
        "partition" => partition()?,
        "clique" => clique()?,
        "hword" => hword(3, 3, HWordOptions::default())?,
        "restricted" => restricted()?,
        "layout" => layout(7)?,
        _ => {
            return Err(NclError::InvalidInstance(format!(
                "unknown suite {name}; one of {}",
                SUITES.join(", ")
            )))
        }
    };
    r.elapsed = t.elapsed();
    Ok(r)
}

fn gadgets() -> Result<Report> {
    let mut r = Report::new("gadget specs", Some(Duration::from_secs(10)));
    for (g, spec) in shipped_gadgets() {
        let failures = verify_behavior(&g, &spec)?;
        r.check(failures.is_empty(), || format!("{}: {failures:?}", g.name));
        let ok = is_legal(&g.graph, &g.initial)?;
        r.check(ok, || format!("{}: initial state illegal", g.name));
    }
    Ok(r)
}

fn semantics() -> Result<Report> {
    let mut r = Report::new("vertex semantics", None);
    let states = |g: Gadget| gadget_behavior(&g, DEFAULT_GADGET_LIMIT).map(|b| b.legal_states());
    let and = states(build_and())?.len();
    r.check(and == 5, || format!("AND has {and} of 8 legal port states"));
    let or = states(build_or())?.len();
    r.check(or == 7, || format!("OR has {or} of 8 legal port states"));
    for n in 0..=3 {
        // state bit set = port points in
        let s = states(build_or_tree(n))?;
        r.check(!s.contains(&0), || {
            format!("or_tree({n}) allows every port out")
        });
    }
    Ok(r)
}

/// Every multiset of `1..=max_value` with `1..=max_n` elements and an even
/// total (odd totals have no reduction).
pub fn partition_instances(max_n: usize, max_value: u64) -> Vec<PartitionInstance> {
    (1..=max_n)
        .flat_map(|n| (1..=max_value).combinations_with_replacement(n))
        .filter_map(|xs| PartitionInstance::new(xs).ok())
        .collect()
}

fn compare_cgs(
    r: &mut Report,
    g: &ConstraintGraph,
    ntd: &NiceTreeDecomposition,
    what: &dyn Fn() -> String,
) -> Result<()> {
    let bf = solve_cgs_bruteforce(g, SolverLimits::default())?.is_some();
    let deg = dp_cgs_degree(
        g,
        ntd,
        DpLimits {
            max_edge_bits: 20,
            ..Default::default()
        },
    )?;
    let un = dp_cgs_unary(g, ntd, DpLimits::default())?;
    r.check(deg.is_some() == bf, || format!("degree DP on {}", what()));
    r.check(un.is_some() == bf, || format!("unary DP on {}", what()));
    for w in [deg, un].into_iter().flatten() {
        let ok = is_legal(g, &w)?;
        r.check(ok, || format!("illegal DP witness on {}", what()));
    }
    Ok(())
}

fn cgs_dp(seed: u64) -> Result<Report> {
    let mut r = Report::new(
        "CGS dynamic programs vs brute force",
        Some(Duration::from_secs(60)),
    );
    let mut rand = rng(seed.wrapping_add(11));
    for i in 0..500 {
        let n = rand.gen_range(2..=8);
        let m = rand.gen_range(0..=14);
        let g = random_graph(&mut rand, n, m, 4);
        compare_cgs(&mut r, &g, &nice_decomposition(&g), &|| {
            format!("random graph {i}")
        })?;
    }
    for p in partition_instances(5, 6) {
        let out = partition_to_cgs(&p)?;
        let td = out.decomposition.as_ref().expect("partition decomposition");
        let ntd = to_nice(&out.graph, td)?;
        compare_cgs(&mut r, &out.graph, &ntd, &|| {
            format!("partition {:?}", p.xs)
        })?;
    }
    Ok(r)
}

fn bounded_dp(seed: u64) -> Result<Report> {
    let mut r = Report::new("bounded DP vs bounded search", None);
    let mut rand = rng(seed.wrapping_add(21));
    for i in 0..200 {
        let n = rand.gen_range(2..=6);
        let m = rand.gen_range(1..=8);
        let inst = random_reconf(&mut rand, n, m, 3, 8);
        let g = &inst.graph;
        let ntd = nice_decomposition(g);
        let lim = DpLimits::default();
        let dp = dp_bounded_ncl(g, &ntd, &BoundedVariant::C2E(inst.target), &inst.start, lim)?;
        let bf = solve_bounded_c2e(g, &inst.start, inst.target, SolverLimits::default())?;
        r.check(dp.is_some() == bf.is_some(), || format!("C2E on graph {i}"));
        let dp = dp_bounded_ncl(
            g,
            &ntd,
            &BoundedVariant::C2C(inst.goal.clone()),
            &inst.start,
            lim,
        )?;
        let bf = solve_bounded_c2c(g, &inst.start, &inst.goal, SolverLimits::default())?;
        r.check(dp.is_some() == bf.is_some(), || format!("C2C on graph {i}"));
        if let Some(seq) = dp {
            let end = replay(g, &inst.start, &seq)?;
            r.check(end == inst.goal, || format!("C2C witness on graph {i}"));
        }
    }
    Ok(r)
}

fn fpt(seed: u64) -> Result<Report> {
    let mut r = Report::new("subset DP and kernels", None);
    let mut rand = rng(seed.wrapping_add(101));
    for i in 0..200 {
        let n = rand.gen_range(2..=7);
        let m = rand.gen_range(1..=10);
        let inst = random_reconf(&mut rand, n, m, 3, 8);
        let dp =
            solve_bounded_c2c_subsetdp(&inst.graph, &inst.start, &inst.goal, DEFAULT_SUBSET_LIMIT)?;
        let bf = solve_bounded_c2c(
            &inst.graph,
            &inst.start,
            &inst.goal,
            SolverLimits::default(),
        )?;
        r.check(dp.is_some() == bf.is_some(), || {
            format!("subset DP on graph {i}")
        });
    }
    let mut rand = rng(seed.wrapping_add(202));
    for i in 0..300 {
        let n = if i % 2 == 0 {
            rand.gen_range(2..=7)
        } else {
            rand.gen_range(8..=13)
        };
        let m = rand.gen_range(1..=12);
        let inst = random_reconf(&mut rand, n, m, 3, 4);
        let (g, s, t, e) = (&inst.graph, &inst.start, &inst.goal, inst.target);
        for l in 0..=4 {
            let lim = SolverLimits::default().with_max_len(l);
            let direct = [
                solve_c2e(g, s, e, lim)?.is_some(),
                solve_bounded_c2e(g, s, e, lim)?.is_some(),
                solve_c2c(g, s, t, lim)?.is_some(),
                solve_bounded_c2c(g, s, t, lim)?.is_some(),
            ];
            let sems = [StepSemantics::Unbounded, StepSemantics::Bounded];
            for (j, &want) in direct.iter().enumerate() {
                let got = if j < 2 {
                    solve_c2e_kernelized(g, s, e, l, sems[j % 2], None)?
                } else {
                    solve_c2c_kernelized(g, s, t, l, sems[j % 2], None)?
                };
                r.check(got.is_some() == want, || {
                    format!("kernel variant {j} on graph {i}, l = {l}")
                });
            }
            // the kernel itself must be computable for every l
            kernelize_c2e(g, s, e, l)?;
        }
    }
    Ok(r)
}

fn partition() -> Result<Report> {
    let mut r = Report::new("Partition reductions", None);
    for p in partition_instances(5, 6) {
        let yes = p.has_partition()?;
        let cgs = partition_to_cgs(&p)?;
        let sat = solve_cgs_bruteforce(&cgs.graph, SolverLimits::default())?.is_some();
        r.check(sat == yes, || format!("CGS on {:?}", p.xs));
        let e = partition_to_bounded_ncl(&p, PartitionGoal::C2E)?;
        let se = e.start.as_ref().expect("bounded start");
        let c2e = solve_bounded_c2e(
            &e.graph,
            se,
            e.target.expect("target"),
            SolverLimits::default(),
        )?
        .is_some();
        r.check(c2e == yes, || format!("bounded C2E on {:?}", p.xs));
        let c = partition_to_bounded_ncl(&p, PartitionGoal::C2C)?;
        let (sc, gc) = (
            c.start.as_ref().expect("start"),
            c.goal.as_ref().expect("goal"),
        );
        let c2c = solve_bounded_c2c(&c.graph, sc, gc, SolverLimits::default())?.is_some();
        r.check(c2c == yes, || format!("bounded C2C on {:?}", p.xs));
    }
    Ok(r)
}

/// Adjacency bitmask of a simple graph on `n` vertices: bit `i * n + j`
/// for `i < j`.
type AdjMask = u64;

fn edge_bit(n: usize, i: usize, j: usize) -> AdjMask {
    let (a, b) = (i.min(j), i.max(j));
    1 << (a * n + b)
}

fn canonical(n: usize, adj: AdjMask) -> AdjMask {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| adj & edge_bit(n, i, j) != 0)
        .collect();
    (0..n)
        .permutations(n)
        .map(|p| {
            edges
                .iter()
                .fold(0, |m, &(i, j)| m | edge_bit(n, p[i], p[j]))
        })
        .min()
        .unwrap_or(0)
}

/// One representative edge list per isomorphism class of simple graphs on
/// `n` vertices, found by extending the classes on `n - 1` vertices by a
/// vertex with every possible neighbourhood.
pub fn nonisomorphic_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut classes: BTreeSet<AdjMask> = BTreeSet::from([0]);
    for k in 1..=n {
        let mut next = BTreeSet::new();
        for &adj in &classes {
            // re-index from k - 1 to k vertices
            let mut base = 0;
            for i in 0..k - 1 {
                for j in i + 1..k - 1 {
                    if adj & edge_bit(k - 1, i, j) != 0 {
                        base |= edge_bit(k, i, j);
                    }
                }
            }
            for nb in 0..1u64 << (k - 1) {
                let mut m = base;
                for i in 0..k - 1 {
                    if nb >> i & 1 == 1 {
                        m |= edge_bit(k, i, k - 1);
                    }
                }
                next.insert(canonical(k, m));
            }
        }
        classes = next;
    }
    classes
        .into_iter()
        .map(|adj| {
            (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| adj & edge_bit(n, i, j) != 0)
                .collect()
        })
        .collect()
}

fn clique() -> Result<Report> {
    let mut r = Report::new("Clique reductions", None);
    for n in 1..=5 {
        for edges in nonisomorphic_graphs(n) {
            for k in 1..=n.min(4) {
                let c = CliqueInstance::new(n, edges.clone(), k)?;
                let yes = c.has_clique();
                let e = clique_to_c2e(&c)?;
                let se = e.start.as_ref().expect("start");
                let t = e.target.expect("target");
                let c2e = c2e_reachable(&e.graph, se, t)?;
                let name = || format!("n = {n}, k = {k}, edges {edges:?}");
                r.check(c2e == yes, || format!("C2E on {}", name()));
                let b = solve_bounded_c2e(&e.graph, se, t, SolverLimits::default())?;
                r.check(b.is_some() == yes, || format!("bounded C2E on {}", name()));
                if let Some(seq) = &b {
                    let bound = e.length_bound.expect("length bound");
                    r.check(seq.len() <= bound, || {
                        format!("solution of {} > {bound} moves on {}", seq.len(), name())
                    });
                }
                let cc = clique_to_c2c(&c)?;
                let c2c = c2c_reachable(
                    &cc.graph,
                    cc.start.as_ref().expect("start"),
                    cc.goal.as_ref().expect("goal"),
                )?;
                r.check(c2c == yes, || format!("C2C on {}", name()));
            }
        }
    }
    Ok(r)
}

/// One relation per class of relations over `0..sigma` equal up to
/// renaming the symbols.
pub fn canonical_relations(sigma: usize) -> Vec<HRelation> {
    let names: Vec<String> = ["a", "b", "c", "d", "e"]
        .iter()
        .take(sigma)
        .map(|s| s.to_string())
        .collect();
    let perms: Vec<Vec<usize>> = (0..sigma).permutations(sigma).collect();
    let key = |mask: u64, p: &[usize]| -> u64 {
        (0..sigma * sigma)
            .filter(|&b| mask >> b & 1 == 1)
            .fold(0, |m, b| m | 1 << (p[b / sigma] * sigma + p[b % sigma]))
    };
    let reps: BTreeSet<u64> = (0..1u64 << (sigma * sigma))
        .map(|m| perms.iter().map(|p| key(m, p)).min().unwrap_or(m))
        .collect();
    reps.into_iter()
        .map(|m| HRelation {
            alphabet: names.clone(),
            allowed: (0..sigma * sigma)
                .filter(|&b| m >> b & 1 == 1)
                .map(|b| (b / sigma, b % sigma))
                .collect(),
        })
        .collect()
}

/// Every H-word of length `n`, in lexicographic order.
pub fn hwords(h: &HRelation, n: usize) -> Vec<Word> {
    (0..n)
        .map(|_| 0..h.size())
        .multi_cartesian_product()
        .filter(|w| is_hword(h, w))
        .collect()
}

/// Dual-oracle check of one relation and length. The graph only depends on
/// the relation and length (plus a witness edge for already satisfied
/// targets), so one composition run tracks the encodings of all words at
/// once; every instance's own output is checked to be that graph with the
/// matching start, goal and target.
fn hword_relation(r: &mut Report, h: &HRelation, n: usize, opts: HWordOptions) -> Result<()> {
    let words = hwords(h, n);
    let Some(first) = words.first() else {
        return Ok(());
    };
    let base = hword_to_ncl(
        &HWordInstance {
            h: h.clone(),
            start: first.clone(),
            goal: HGoal::Word(first.clone()),
        },
        opts,
    )?;
    let g = &base.graph;
    let encs = words
        .iter()
        .map(|w| encode_word_config(&base, w))
        .collect::<Result<Vec<_>>>()?;
    let label = |w: &[usize]| format!("{:?} over {:?}, word {}", h.allowed, h.alphabet, h.spell(w));
    for (w, c) in words.iter().zip(&encs) {
        let back = decode_config(&base, c)?;
        r.check(back == BTreeSet::from([w.clone()]), || {
            format!("round trip of {}: {back:?}", label(w))
        });
    }
    let map = base.hword.as_ref().expect("hword map");
    let targets: Vec<EdgeId> = map.word_edge.iter().flatten().copied().collect();
    let an = analyze(g, &greedy_order(g), &encs, &targets, DEFAULT_MAX_PRODUCT)?;
    let lim = SolverLimits::default();
    for (a, wa) in words.iter().enumerate() {
        for (b, wb) in words.iter().enumerate() {
            let oracle = solve_hword_reconfig(h, wa, wb, lim)?.is_some();
            r.check(an.connected(a, b) == oracle, || {
                format!("C2C {} -> {}", label(wa), h.spell(wb))
            });
            let out = hword_to_ncl(
                &HWordInstance {
                    h: h.clone(),
                    start: wa.clone(),
                    goal: HGoal::Word(wb.clone()),
                },
                opts,
            )?;
            let same = &out.graph == g
                && out.start.as_ref() == Some(&encs[a])
                && out.goal.as_ref() == Some(&encs[b]);
            r.check(same, || {
                format!(
                    "C2C output of {} -> {} differs from the shared graph",
                    label(wa),
                    h.spell(wb)
                )
            });
        }
        for pos in 0..n {
            for sym in 0..h.size() {
                let oracle = solve_hword_target(h, wa, pos, sym, lim)?.is_some();
                let inst = HWordInstance {
                    h: h.clone(),
                    start: wa.clone(),
                    goal: HGoal::Target {
                        position: pos,
                        symbol: sym,
                    },
                };
                let out = hword_to_ncl(&inst, opts)?;
                let t = out.target.expect("target");
                let ncl = if wa[pos] == sym {
                    c2e_reachable(&out.graph, out.start.as_ref().expect("start"), t)?
                } else {
                    let k = pos * h.size() + sym;
                    let same =
                        &out.graph == g && out.start.as_ref() == Some(&encs[a]) && t == targets[k];
                    r.check(same, || {
                        format!("C2E output of {} differs from the shared graph", label(wa))
                    });
                    an.target_reachable(a, k, encs[a].get(t).reversed())
                };
                r.check(ncl == oracle, || {
                    format!("C2E {} target ({pos}, {})", label(wa), h.alphabet[sym])
                });
            }
        }
    }
    Ok(())
}

/// H-word oracle against the NCL oracle for every relation up to renaming
/// with at most `max_sigma` symbols and every length up to `max_len`.
pub fn hword(max_sigma: usize, max_len: usize, opts: HWordOptions) -> Result<Report> {
    let mut r = Report::new("H-word reduction", Some(Duration::from_secs(600)));
    for sigma in 1..=max_sigma {
        for h in canonical_relations(sigma) {
            for n in 1..=max_len {
                hword_relation(&mut r, &h, n, opts)?;
            }
        }
    }
    Ok(r)
}

/// The three relations of the worked examples, with a word of length 2
/// each.
pub fn example_relations() -> Vec<(HRelation, Word)> {
    let mk = |sigma: &[&str], allowed: &[(&str, &str)]| {
        HRelation::new(sigma, allowed).expect("valid relation")
    };
    vec![
        (mk(&["a"], &[("a", "a")]), vec![0, 0]),
        (
            mk(&["a", "b"], &[("a", "a"), ("a", "b"), ("b", "a")]),
            vec![0, 1],
        ),
        (mk(&["a", "b"], &[("a", "a"), ("b", "b")]), vec![0, 0]),
    ]
}

fn restricted() -> Result<Report> {
    let mut r = Report::new("restricted planar output and layout constant", None);
    let opts = HWordOptions {
        pure_and_or: true,
        planarize: true,
    };
    let check_output = |r: &mut Report, h: &HRelation, w: &Word| -> Result<usize> {
        let inst = HWordInstance {
            h: h.clone(),
            start: w.clone(),
            goal: HGoal::Word(w.clone()),
        };
        let out = hword_to_ncl(&inst, opts)?;
        let what = || format!("{:?} over {:?}, word {}", h.allowed, h.alphabet, h.spell(w));
        let v = validate_restricted(&out.graph);
        r.check(v.is_empty(), || {
            format!("{} violations on {}, e.g. {:?}", v.len(), what(), v.first())
        });
        let x = crossings(&out.graph, &out.drawing);
        r.check(x.is_empty(), || {
            format!("{} crossings on {}", x.len(), what())
        });
        let col = vertex_collisions(&out.graph, &out.drawing);
        r.check(col.is_empty(), || {
            format!("{} vertices on edges on {}", col.len(), what())
        });
        let legal = is_legal(&out.graph, out.start.as_ref().expect("start"))?;
        r.check(legal, || format!("illegal start on {}", what()));
        Ok(layout_from_bags(&out)?.value)
    };
    for (h, w) in example_relations() {
        let c1 = check_output(&mut r, &h, &w)?;
        let w2 = [w.clone(), w.clone()].concat();
        let c2 = check_output(&mut r, &h, &w2)?;
        r.check(c1 == c2, || {
            format!(
                "layout constant {c1} at length {} but {c2} at {}",
                w.len(),
                w2.len()
            )
        });
    }
    for sigma in 1..=2 {
        for h in canonical_relations(sigma) {
            if let Some(w) = hwords(&h, 3).first() {
                check_output(&mut r, &h, w)?;
            }
        }
    }
    Ok(r)
}

fn simple_graph(n: usize, edges: &[(usize, usize)]) -> ConstraintGraph {
    let mut g = ConstraintGraph::new();
    for _ in 0..n {
        g.add_vertex(0);
    }
    for &(a, b) in edges {
        g.add_edge(VertexId(a as u32), VertexId(b as u32), 1)
            .expect("simple edge");
    }
    g
}

fn layout(max_n: usize) -> Result<Report> {
    let mut r = Report::new("exact bandwidth and cutwidth", None);
    for n in 1..=max_n {
        let perms: Vec<Vec<VertexId>> = (0..n as u32).map(VertexId).permutations(n).collect();
        for edges in nonisomorphic_graphs(n) {
            let g = simple_graph(n, &edges);
            let (bw, cw) = perms
                .iter()
                .map(|p| (layout_bandwidth(&g, p), layout_cutwidth(&g, p)))
                .fold((usize::MAX, usize::MAX), |(a, b), (x, y)| {
                    (a.min(x), b.min(y))
                });
            let b = bandwidth_exact(&g, max_n.max(12))?;
            r.check(
                b.value == bw && layout_bandwidth(&g, &b.order) == bw,
                || format!("bandwidth {} vs {bw} on {edges:?}", b.value),
            );
            let c = cutwidth_exact(&g, max_n.max(12))?;
            r.check(c.value == cw && layout_cutwidth(&g, &c.order) == cw, || {
                format!("cutwidth {} vs {cw} on {edges:?}", c.value)
            });
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_class_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| nonisomorphic_graphs(n).len()).collect();
        assert_eq!(counts, [1, 2, 4, 11, 34]);
    }

    #[test]
    fn relation_class_counts() {
        // 2, 10 and 104 relations up to renaming (OEIS A000595)
        let counts: Vec<usize> = (1..=3).map(|s| canonical_relations(s).len()).collect();
        assert_eq!(counts, [2, 10, 104]);
    }

    #[test]
    fn partition_instance_count() {
        // multisets of size 1..=5 from 6 values with an even sum
        assert_eq!(partition_instances(5, 6).len(), 235);
    }
}
