//! Solvers parameterized by solution length: a subset dynamic program for
//! bounded configuration-to-configuration and line-graph distance kernels
//! for all four reconfiguration variants.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{NclError, Result};
use crate::format::Document;
use crate::graph::{require_legal, Configuration, ConstraintGraph, EdgeId, Orientation, VertexId};
use crate::search::{self, MoveSequence, SolverLimits};

pub const DEFAULT_SUBSET_LIMIT: usize = 24;

/// Bounded C2C in `O*(2^l)` where `l` is the number of differing edges.
/// `reachable[S]` holds iff some `e` in `S` can be reversed after the edges
/// of `S \ {e}`, which themselves form a reachable set. Edges outside the
/// differing set never move: moving one would leave it reversed at the end.
pub fn solve_bounded_c2c_subsetdp(
    g: &ConstraintGraph,
    start: &Configuration,
    goal: &Configuration,
    limit: usize,
) -> Result<Option<MoveSequence>> {
    g.check_arithmetic()?;
    require_legal(g, start)?;
    require_legal(g, goal)?;
    let d = start.differing(goal);
    let l = d.len();
    if l > limit || l > 30 {
        return Err(NclError::LimitExceeded {
            what: "differing edge",
            limit: limit as u64,
        });
    }
    let full = (1usize << l) - 1;
    // parent[S] = index of the last edge reversed, or NONE if unreachable
    const NONE: u8 = u8::MAX;
    let mut parent = vec![NONE; 1 << l];
    let mut reachable = vec![false; 1 << l];
    reachable[0] = true;
    // For each vertex, the differing edges incident to it with the sign of
    // their inflow change at that vertex when reversed.
    let n = g.vertex_count();
    let base: Vec<u64> = (0..n)
        .map(|v| g.inflow_unchecked(start, VertexId(v as u32)))
        .collect();
    let heads: Vec<VertexId> = d.iter().map(|&e| g.head(start, e)).collect();
    let tails: Vec<VertexId> = d.iter().map(|&e| g.tail(start, e)).collect();
    let weights: Vec<u64> = d.iter().map(|&e| g.edge(e).weight).collect();
    let inflow_after = |h: VertexId, s: usize| -> u64 {
        let mut x = base[h.index()];
        let mut rest = s;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if heads[j] == h {
                x -= weights[j];
            }
            if tails[j] == h {
                x += weights[j];
            }
        }
        x
    };
    for s in 1..=full {
        let mut rest = s;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << j);
            if !reachable[prev] {
                continue;
            }
            let h = heads[j];
            if inflow_after(h, prev) >= g.min_inflow(h) + weights[j] {
                reachable[s] = true;
                parent[s] = j as u8;
                break;
            }
        }
    }
    if !reachable[full] {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(l);
    let mut s = full;
    while s != 0 {
        let j = parent[s] as usize;
        out.push(d[j]);
        s &= !(1 << j);
    }
    out.reverse();
    Ok(Some(out))
}

/// A reduced instance plus the maps back to the original.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    pub graph: ConstraintGraph,
    pub start: Configuration,
    /// Goal restricted to the retained edges (C2C kernels only).
    pub goal: Option<Configuration>,
    /// Target in kernel ids (C2E kernels only).
    pub target: Option<EdgeId>,
    /// Original ids of the retained edges; kernel edge `i` is `retained[i]`.
    pub retained: Vec<EdgeId>,
    /// Original ids of kernel vertices.
    pub vertex_map: Vec<VertexId>,
    /// Inflow granted by removed edges, by original vertex id.
    pub inflow_credit: BTreeMap<VertexId, u64>,
}

impl Kernel {
    /// The kernel in the core text format: `start` (and `goal`) configs,
    /// the target, `credit` records keyed by kernel vertex id, and back-map
    /// records naming the original ids.
    pub fn to_document(&self) -> Document {
        let mut d =
            Document::from_graph(self.graph.clone()).with_config("start", self.start.clone());
        if let Some(g) = &self.goal {
            d.configs.push(("goal".into(), g.clone()));
        }
        d.target = self.target;
        for (i, orig) in self.vertex_map.iter().enumerate() {
            let v = VertexId(i as u32);
            if let Some(&c) = self.inflow_credit.get(orig) {
                d.credits.push((v, c));
            }
            d.backmap_vertices.insert(v, format!("v{orig}"));
        }
        for (i, orig) in self.retained.iter().enumerate() {
            d.backmap_edges.insert(EdgeId(i as u32), format!("e{orig}"));
        }
        d
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum KernelResult {
    /// The instance has no solution of the requested length.
    Reject,
    Kernel(Kernel),
}

/// Hop distance in the line graph from the `sources` to every edge.
pub fn edge_distances(g: &ConstraintGraph, sources: &[EdgeId]) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.edge_count()];
    let mut q = VecDeque::new();
    for &s in sources {
        if dist[s.index()].is_none() {
            dist[s.index()] = Some(0);
            q.push_back(s);
        }
    }
    while let Some(e) = q.pop_front() {
        let de = dist[e.index()].unwrap();
        let ed = g.edge(e);
        for x in [ed.u, ed.v] {
            for &f in g.incident(x) {
                if dist[f.index()].is_none() {
                    dist[f.index()] = Some(de + 1);
                    q.push_back(f);
                }
            }
        }
    }
    dist
}

fn build_kernel(g: &ConstraintGraph, start: &Configuration, keep: &[bool]) -> Kernel {
    let mut credit: BTreeMap<VertexId, u64> = BTreeMap::new();
    for e in g.edge_ids() {
        if !keep[e.index()] {
            *credit.entry(g.head(start, e)).or_insert(0) += g.edge(e).weight;
        }
    }
    let mut new_id = vec![None::<VertexId>; g.vertex_count()];
    let mut kg = ConstraintGraph::new();
    let mut vertex_map = Vec::new();
    let mut retained = Vec::new();
    let mut os = Vec::new();
    for e in g.edge_ids().filter(|e| keep[e.index()]) {
        let ed = *g.edge(e);
        let mut map = |x: VertexId, kg: &mut ConstraintGraph| -> VertexId {
            *new_id[x.index()].get_or_insert_with(|| {
                let c = credit.get(&x).copied().unwrap_or(0);
                vertex_map.push(x);
                kg.add_vertex(g.min_inflow(x).saturating_sub(c))
            })
        };
        let u = map(ed.u, &mut kg);
        let v = map(ed.v, &mut kg);
        kg.add_edge(u, v, ed.weight).expect("endpoints exist");
        retained.push(e);
        os.push(start.get(e));
    }
    // Only credits at kernel vertices matter.
    credit.retain(|v, _| new_id[v.index()].is_some());
    Kernel {
        graph: kg,
        start: Configuration::from_orientations(&os),
        goal: None,
        target: None,
        retained,
        vertex_map,
        inflow_credit: credit,
    }
}

/// `1 + 2 * sum_{i=1}^{r} (Δ-1)^i`: the number of edges within line-graph
/// distance `r` of one edge when every vertex has degree at most `Δ`.
pub fn ball_size_bound(max_degree: usize, r: usize) -> u128 {
    let b = max_degree.saturating_sub(1) as u128;
    let mut total = 1u128;
    let mut p = 1u128;
    for _ in 0..r {
        p = p.saturating_mul(b);
        total = total.saturating_add(p.saturating_mul(2));
    }
    total
}

/// Keeps edges within distance `l - 1` of the target; removed edges are
/// frozen and credited to the vertex they point into at start.
pub fn kernelize_c2e(
    g: &ConstraintGraph,
    start: &Configuration,
    target: EdgeId,
    l: usize,
) -> Result<KernelResult> {
    g.check_arithmetic()?;
    require_legal(g, start)?;
    g.check_edge(target)?;
    if l == 0 {
        return Ok(KernelResult::Reject);
    }
    let dist = edge_distances(g, &[target]);
    let keep: Vec<bool> = dist.iter().map(|d| d.is_some_and(|d| d < l)).collect();
    let mut k = build_kernel(g, start, &keep);
    k.target = Some(EdgeId(
        k.retained.iter().position(|&e| e == target).unwrap() as u32,
    ));
    let bound = ball_size_bound(g.max_degree(), l - 1);
    assert!(
        k.retained.len() as u128 <= bound,
        "kernel exceeds the distance-ball bound"
    );
    Ok(KernelResult::Kernel(k))
}

/// Keeps edges within distance `l` of some differing edge. More than `l`
/// differing edges is an immediate rejection.
pub fn kernelize_c2c(
    g: &ConstraintGraph,
    start: &Configuration,
    goal: &Configuration,
    l: usize,
) -> Result<KernelResult> {
    g.check_arithmetic()?;
    require_legal(g, start)?;
    require_legal(g, goal)?;
    let d = start.differing(goal);
    if d.len() > l {
        return Ok(KernelResult::Reject);
    }
    let dist = edge_distances(g, &d);
    let keep: Vec<bool> = dist.iter().map(|x| x.is_some_and(|x| x <= l)).collect();
    let mut k = build_kernel(g, start, &keep);
    let os: Vec<Orientation> = k.retained.iter().map(|&e| goal.get(e)).collect();
    k.goal = Some(Configuration::from_orientations(&os));
    let bound = (d.len() as u128).saturating_mul(ball_size_bound(g.max_degree(), l));
    assert!(
        k.retained.len() as u128 <= bound,
        "kernel exceeds the distance-ball bound"
    );
    Ok(KernelResult::Kernel(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepSemantics {
    Unbounded,
    Bounded,
}

/// Length-capped search on a kernel; the returned moves use original edge
/// ids.
pub fn solve_length_bounded(
    k: &Kernel,
    semantics: StepSemantics,
    l: usize,
    max_states: Option<u64>,
) -> Result<Option<MoveSequence>> {
    let limits = SolverLimits {
        max_states,
        max_len: Some(l),
    };
    let res = match (&k.goal, k.target) {
        (Some(goal), _) => match semantics {
            StepSemantics::Unbounded => search::solve_c2c(&k.graph, &k.start, goal, limits)?,
            StepSemantics::Bounded => search::solve_bounded_c2c(&k.graph, &k.start, goal, limits)?,
        },
        (None, Some(t)) => match semantics {
            StepSemantics::Unbounded => search::solve_c2e(&k.graph, &k.start, t, limits)?,
            StepSemantics::Bounded => search::solve_bounded_c2e(&k.graph, &k.start, t, limits)?,
        },
        (None, None) => {
            return Err(NclError::InvalidInstance(
                "kernel has neither goal nor target".into(),
            ))
        }
    };
    Ok(res.map(|seq| seq.into_iter().map(|e| k.retained[e.index()]).collect()))
}

/// Kernelize and solve in one go; `None` covers both rejections and failed
/// searches.
pub fn solve_c2e_kernelized(
    g: &ConstraintGraph,
    start: &Configuration,
    target: EdgeId,
    l: usize,
    semantics: StepSemantics,
    max_states: Option<u64>,
) -> Result<Option<MoveSequence>> {
    match kernelize_c2e(g, start, target, l)? {
        KernelResult::Reject => Ok(None),
        KernelResult::Kernel(k) => solve_length_bounded(&k, semantics, l, max_states),
    }
}

pub fn solve_c2c_kernelized(
    g: &ConstraintGraph,
    start: &Configuration,
    goal: &Configuration,
    l: usize,
    semantics: StepSemantics,
    max_states: Option<u64>,
) -> Result<Option<MoveSequence>> {
    match kernelize_c2c(g, start, goal, l)? {
        KernelResult::Reject => Ok(None),
        KernelResult::Kernel(k) => solve_length_bounded(&k, semantics, l, max_states),
    }
}
