//! Seeded random instance generators shared by the property suites, the
//! acceptance target and the `verify` command.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Configuration, ConstraintGraph, EdgeId, Orientation, VertexId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random multigraph on `n` vertices with `m` edges (no self-loops), weights
/// in `1..=max_weight` and every minimum inflow in `0..=` half the incident
/// weight plus one, which yields a healthy mix of satisfiable and
/// unsatisfiable instances.
pub fn random_graph(r: &mut impl Rng, n: usize, m: usize, max_weight: u64) -> ConstraintGraph {
    assert!(n >= 2 || m == 0);
    let mut g = ConstraintGraph::new();
    for _ in 0..n {
        g.add_vertex(0);
    }
    for _ in 0..m {
        let a = r.gen_range(0..n);
        let mut b = r.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        g.add_edge(
            VertexId(a as u32),
            VertexId(b as u32),
            r.gen_range(1..=max_weight),
        )
        .unwrap();
    }
    for v in 0..n {
        let v = VertexId(v as u32);
        let total = g.total_incident_weight(v).unwrap();
        g.set_min_inflow(v, r.gen_range(0..=total / 2 + 1)).unwrap();
    }
    g
}

pub fn random_configuration(r: &mut impl Rng, m: usize) -> Configuration {
    let os: Vec<Orientation> = (0..m)
        .map(|_| {
            if r.gen_bool(0.5) {
                Orientation::TowardU
            } else {
                Orientation::TowardV
            }
        })
        .collect();
    Configuration::from_orientations(&os)
}

/// A reconfiguration instance: random graph, random start and a goal
/// differing in a random subset of edges, with minimum inflows drawn so that
/// both configurations are legal.
pub struct ReconfInstance {
    pub graph: ConstraintGraph,
    pub start: Configuration,
    pub goal: Configuration,
    pub target: EdgeId,
}

pub fn random_reconf(
    r: &mut impl Rng,
    n: usize,
    m: usize,
    max_weight: u64,
    max_flip: usize,
) -> ReconfInstance {
    let mut g = ConstraintGraph::new();
    for _ in 0..n {
        g.add_vertex(0);
    }
    for _ in 0..m {
        let a = r.gen_range(0..n);
        let mut b = r.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        g.add_edge(
            VertexId(a as u32),
            VertexId(b as u32),
            r.gen_range(1..=max_weight),
        )
        .unwrap();
    }
    let start = random_configuration(r, m);
    let mut goal = start.clone();
    let mut ids: Vec<usize> = (0..m).collect();
    ids.shuffle(r);
    let flips = r.gen_range(1.min(m)..=max_flip.min(m));
    for &i in &ids[..flips] {
        goal.flip(EdgeId(i as u32));
    }
    for v in 0..n {
        let v = VertexId(v as u32);
        let a = g.inflow_unchecked(&start, v);
        let b = g.inflow_unchecked(&goal, v);
        let cap = a.min(b);
        // pinned at the cap most of the time so move order matters
        let lo = match r.gen_range(0..5) {
            0..=2 => cap,
            3 => cap / 2,
            _ => 0,
        };
        g.set_min_inflow(v, r.gen_range(lo..=cap)).unwrap();
    }
    let target = EdgeId(r.gen_range(0..m.max(1)) as u32);
    ReconfInstance {
        graph: g,
        start,
        goal,
        target,
    }
}
