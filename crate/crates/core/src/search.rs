//! Exhaustive oracle solvers: backtracking for satisfiability, breadth-first
//! search over configurations for the four reconfiguration variants.
//!
//! Bounded variants reuse the same engine. Because an edge may reverse at
//! most once, the set of reversed edges is exactly `config XOR start`, so the
//! configuration alone still identifies the search state; the bounded engine
//! merely forbids moving an edge that has already moved.

use std::collections::HashMap;

use crate::error::{NclError, Result};
use crate::graph::{require_legal, Configuration, ConstraintGraph, EdgeId, Orientation, VertexId};

pub type MoveSequence = Vec<EdgeId>;

pub const DEFAULT_MAX_STATES: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverLimits {
    /// Cap on distinct configurations visited (or search nodes for
    /// backtracking). Exceeding it is an error, never a silent "no".
    pub max_states: Option<u64>,
    /// Only sequences of at most this many moves are considered.
    pub max_len: Option<usize>,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            max_states: Some(DEFAULT_MAX_STATES),
            max_len: None,
        }
    }
}

impl SolverLimits {
    pub fn unlimited() -> Self {
        SolverLimits {
            max_states: None,
            max_len: None,
        }
    }

    pub fn with_max_len(mut self, l: usize) -> Self {
        self.max_len = Some(l);
        self
    }

    pub fn with_max_states(mut self, s: u64) -> Self {
        self.max_states = Some(s);
        self
    }
}

/// Lexicographically first legal configuration (`TowardV` before `TowardU`,
/// edge 0 most significant), found by backtracking with inflow pruning.
pub fn solve_cgs_bruteforce(
    g: &ConstraintGraph,
    limits: SolverLimits,
) -> Result<Option<Configuration>> {
    solve_cgs_with_fixed(g, &vec![None; g.edge_count()], limits)
}

/// As [`solve_cgs_bruteforce`] with some orientations prescribed.
pub fn solve_cgs_with_fixed(
    g: &ConstraintGraph,
    fixed: &[Option<Orientation>],
    limits: SolverLimits,
) -> Result<Option<Configuration>> {
    g.check_arithmetic()?;
    let m = g.edge_count();
    assert_eq!(fixed.len(), m, "fixed orientation vector has wrong length");
    let n = g.vertex_count();
    let mut last = vec![None::<usize>; n];
    let mut remaining = vec![0u64; n];
    for (i, e) in g.edges().iter().enumerate() {
        for x in [e.u, e.v] {
            last[x.index()] = Some(last[x.index()].map_or(i, |l: usize| l.max(i)));
            remaining[x.index()] += e.weight;
        }
    }
    if g.vertices().any(|v| g.min_inflow(v) > remaining[v.index()]) {
        return Ok(None);
    }
    let mut st = Backtrack {
        g,
        fixed,
        c: Configuration::uniform(m, Orientation::TowardV),
        inflow: vec![0; n],
        remaining,
        nodes: 0,
        limit: limits.max_states,
    };
    if st.go(0)? {
        Ok(Some(st.c))
    } else {
        Ok(None)
    }
}

struct Backtrack<'a> {
    g: &'a ConstraintGraph,
    fixed: &'a [Option<Orientation>],
    c: Configuration,
    inflow: Vec<u64>,
    remaining: Vec<u64>,
    nodes: u64,
    limit: Option<u64>,
}

impl Backtrack<'_> {
    fn go(&mut self, i: usize) -> Result<bool> {
        self.nodes += 1;
        if let Some(l) = self.limit {
            if self.nodes > l {
                return Err(NclError::LimitExceeded {
                    what: "search node",
                    limit: l,
                });
            }
        }
        if i == self.g.edge_count() {
            return Ok(true);
        }
        let e = EdgeId(i as u32);
        let edge = *self.g.edge(e);
        let choices: &[Orientation] = match self.fixed[i] {
            Some(Orientation::TowardU) => &[Orientation::TowardU],
            Some(Orientation::TowardV) => &[Orientation::TowardV],
            None => &[Orientation::TowardV, Orientation::TowardU],
        };
        self.remaining[edge.u.index()] -= edge.weight;
        self.remaining[edge.v.index()] -= edge.weight;
        for &o in choices {
            let h = if o == Orientation::TowardU {
                edge.u
            } else {
                edge.v
            };
            self.inflow[h.index()] += edge.weight;
            self.c.set(e, o);
            let ok = [edge.u, edge.v].iter().all(|&x| {
                self.inflow[x.index()] + self.remaining[x.index()] >= self.g.min_inflow(x)
            });
            if ok && self.go(i + 1)? {
                return Ok(true);
            }
            self.inflow[h.index()] -= edge.weight;
        }
        self.c.set(e, Orientation::TowardV);
        self.remaining[edge.u.index()] += edge.weight;
        self.remaining[edge.v.index()] += edge.weight;
        Ok(false)
    }
}

/// Which edges a search step may reverse.
#[derive(Clone, Copy)]
enum Step<'a> {
    Unbounded,
    /// Only edges still at their start orientation, optionally restricted to
    /// a mask.
    Bounded(Option<&'a [bool]>),
}

fn bfs(
    g: &ConstraintGraph,
    start: &Configuration,
    limits: SolverLimits,
    step: Step<'_>,
    is_goal: impl Fn(&Configuration) -> bool,
) -> Result<Option<MoveSequence>> {
    g.check_arithmetic()?;
    require_legal(g, start)?;
    if is_goal(start) {
        return Ok(Some(Vec::new()));
    }
    let mut states: Vec<Configuration> = vec![start.clone()];
    let mut parent: Vec<(u32, EdgeId)> = vec![(u32::MAX, EdgeId(0))];
    let mut index: HashMap<Configuration, u32> = HashMap::new();
    index.insert(start.clone(), 0);
    let mut frontier: Vec<u32> = vec![0];
    let mut depth = 0usize;
    let n = g.vertex_count();
    let mut inflow = vec![0u64; n];
    while !frontier.is_empty() {
        if limits.max_len.is_some_and(|l| depth >= l) {
            return Ok(None);
        }
        let mut next = Vec::new();
        for &s in &frontier {
            let c = states[s as usize].clone();
            for v in g.vertices() {
                inflow[v.index()] = g.inflow_unchecked(&c, v);
            }
            for e in g.edge_ids() {
                if let Step::Bounded(mask) = step {
                    if c.get(e) != start.get(e) || mask.is_some_and(|m| !m[e.index()]) {
                        continue;
                    }
                }
                let h = g.head(&c, e);
                let w = g.edge(e).weight;
                if inflow[h.index()] < g.min_inflow(h) + w {
                    continue;
                }
                let d = c.reversed(e);
                if index.contains_key(&d) {
                    continue;
                }
                let id = states.len() as u32;
                if let Some(l) = limits.max_states {
                    if states.len() as u64 >= l {
                        return Err(NclError::LimitExceeded {
                            what: "state",
                            limit: l,
                        });
                    }
                }
                let goal = is_goal(&d);
                index.insert(d.clone(), id);
                states.push(d);
                parent.push((s, e));
                if goal {
                    return Ok(Some(trace(&parent, id)));
                }
                next.push(id);
            }
        }
        frontier = next;
        depth += 1;
    }
    Ok(None)
}

fn trace(parent: &[(u32, EdgeId)], mut id: u32) -> MoveSequence {
    let mut out = Vec::new();
    while parent[id as usize].0 != u32::MAX {
        let (p, e) = parent[id as usize];
        out.push(e);
        id = p;
    }
    out.reverse();
    out
}

/// Shortest sequence after which `target` has been reversed relative to
/// `start`.
pub fn solve_c2e(
    g: &ConstraintGraph,
    start: &Configuration,
    target: EdgeId,
    limits: SolverLimits,
) -> Result<Option<MoveSequence>> {
    g.check_edge(target)?;
    g.check_config(start)?;
    let t0 = start.get(target);
    bfs(g, start, limits, Step::Unbounded, |c| c.get(target) != t0)
}

pub fn solve_c2c(
    g: &ConstraintGraph,
    start: &Configuration,
    goal: &Configuration,
    limits: SolverLimits,
) -> Result<Option<MoveSequence>> {
    g.check_config(start)?;
    g.check_config(goal)?;
    require_legal(g, goal)?;
    bfs(g, start, limits, Step::Unbounded, |c| c == goal)
}

pub fn solve_bounded_c2e(
    g: &ConstraintGraph,
    start: &Configuration,
    target: EdgeId,
    limits: SolverLimits,
) -> Result<Option<MoveSequence>> {
    g.check_edge(target)?;
    g.check_config(start)?;
    let t0 = start.get(target);
    bfs(g, start, limits, Step::Bounded(None), |c| {
        c.get(target) != t0
    })
}

pub fn solve_bounded_c2c(
    g: &ConstraintGraph,
    start: &Configuration,
    goal: &Configuration,
    limits: SolverLimits,
) -> Result<Option<MoveSequence>> {
    g.check_config(start)?;
    g.check_config(goal)?;
    require_legal(g, goal)?;
    let mut mask = vec![false; g.edge_count()];
    for e in start.differing(goal) {
        mask[e.index()] = true;
    }
    bfs(g, start, limits, Step::Bounded(Some(&mask)), |c| c == goal)
}

/// Every configuration reachable from `start`, in BFS order.
pub fn reachable_set(
    g: &ConstraintGraph,
    start: &Configuration,
    limits: SolverLimits,
) -> Result<Vec<Configuration>> {
    require_legal(g, start)?;
    let mut seen: HashMap<Configuration, ()> = HashMap::new();
    seen.insert(start.clone(), ());
    let mut order = vec![start.clone()];
    let mut i = 0;
    while i < order.len() {
        let c = order[i].clone();
        i += 1;
        for e in g.edge_ids() {
            if g.can_reverse(&c, e) {
                let d = c.reversed(e);
                if !seen.contains_key(&d) {
                    if let Some(l) = limits.max_states {
                        if order.len() as u64 >= l {
                            return Err(NclError::LimitExceeded {
                                what: "state",
                                limit: l,
                            });
                        }
                    }
                    seen.insert(d.clone(), ());
                    order.push(d);
                }
            }
        }
    }
    Ok(order)
}

/// Applies `steps` to `start`, checking legality after every step. Returns
/// the final configuration.
pub fn replay(
    g: &ConstraintGraph,
    start: &Configuration,
    steps: &[EdgeId],
) -> Result<Configuration> {
    require_legal(g, start)?;
    let mut c = start.clone();
    for &e in steps {
        g.check_edge(e)?;
        if !g.can_reverse(&c, e) {
            return Err(NclError::IllegalConfiguration(g.head(&c, e)));
        }
        c.flip(e);
    }
    Ok(c)
}

/// Whether no edge appears twice in `steps`.
pub fn is_bounded_sequence(steps: &[EdgeId]) -> bool {
    let mut seen = std::collections::HashSet::new();
    steps.iter().all(|e| seen.insert(*e))
}

/// Inflow vector of every vertex; convenience for reporting.
pub fn inflows(g: &ConstraintGraph, c: &Configuration) -> Vec<u64> {
    g.vertices()
        .map(|v: VertexId| g.inflow_unchecked(c, v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_legal;

    fn path3() -> (ConstraintGraph, Configuration) {
        // a(0) -- b(1) -- c(0), both edges weight 1, b needs 1
        let mut g = ConstraintGraph::new();
        let a = g.add_vertex(0);
        let b = g.add_vertex(1);
        let c = g.add_vertex(0);
        g.add_edge(a, b, 1).unwrap();
        g.add_edge(b, c, 1).unwrap();
        // edge 0 toward b, edge 1 toward c
        let s = Configuration::from_orientations(&[Orientation::TowardV, Orientation::TowardV]);
        (g, s)
    }

    #[test]
    fn cgs_trivia() {
        let mut g = ConstraintGraph::new();
        g.add_vertex(0);
        assert_eq!(
            solve_cgs_bruteforce(&g, SolverLimits::default()).unwrap(),
            Some(Configuration::uniform(0, Orientation::TowardV))
        );
        let mut g = ConstraintGraph::new();
        g.add_vertex(1);
        assert_eq!(
            solve_cgs_bruteforce(&g, SolverLimits::default()).unwrap(),
            None
        );
    }

    #[test]
    fn cgs_is_lexicographically_first() {
        let (g, _) = path3();
        let m = g.edge_count();
        let first = (0..1u64 << m)
            .map(|mask| {
                // edge 0 is the most significant position
                let os: Vec<_> = (0..m)
                    .map(|i| {
                        if mask >> (m - 1 - i) & 1 == 1 {
                            Orientation::TowardU
                        } else {
                            Orientation::TowardV
                        }
                    })
                    .collect();
                Configuration::from_orientations(&os)
            })
            .find(|c| is_legal(&g, c).unwrap());
        assert_eq!(
            solve_cgs_bruteforce(&g, SolverLimits::default()).unwrap(),
            first
        );
    }

    #[test]
    fn c2e_single_move() {
        let (g, s) = path3();
        assert_eq!(
            solve_c2e(&g, &s, EdgeId(1), SolverLimits::default()).unwrap(),
            Some(vec![EdgeId(1)])
        );
        // edge 0 can only move after edge 1 brings inflow to b
        assert_eq!(
            solve_c2e(&g, &s, EdgeId(0), SolverLimits::default()).unwrap(),
            Some(vec![EdgeId(1), EdgeId(0)])
        );
        assert_eq!(
            solve_c2e(&g, &s, EdgeId(0), SolverLimits::default().with_max_len(1)).unwrap(),
            None
        );
    }

    #[test]
    fn bounded_two_orders() {
        let (g, s) = path3();
        let goal = s.reversed(EdgeId(0)).reversed(EdgeId(1));
        assert_eq!(
            solve_bounded_c2c(&g, &s, &goal, SolverLimits::default()).unwrap(),
            Some(vec![EdgeId(1), EdgeId(0)])
        );
        assert_eq!(
            solve_bounded_c2c(&g, &s, &s, SolverLimits::default()).unwrap(),
            Some(vec![])
        );
    }

    #[test]
    fn limits_are_errors() {
        let mut g = ConstraintGraph::new();
        let a = g.add_vertex(0);
        let b = g.add_vertex(0);
        for _ in 0..6 {
            g.add_edge(a, b, 1).unwrap();
        }
        let s = Configuration::uniform(6, Orientation::TowardV);
        let goal = Configuration::uniform(6, Orientation::TowardU);
        let r = solve_c2c(&g, &s, &goal, SolverLimits::default().with_max_states(10));
        assert!(matches!(r, Err(NclError::LimitExceeded { .. })));
    }

    #[test]
    fn replay_checks_every_step() {
        let (g, s) = path3();
        assert!(replay(&g, &s, &[EdgeId(0)]).is_err());
        assert!(replay(&g, &s, &[EdgeId(1), EdgeId(0)]).is_ok());
    }

    #[test]
    fn illegal_start_is_an_error() {
        let (g, _) = path3();
        let bad = Configuration::from_orientations(&[Orientation::TowardU, Orientation::TowardV]);
        assert!(matches!(
            solve_c2e(&g, &bad, EdgeId(0), SolverLimits::default()),
            Err(NclError::IllegalConfiguration(_))
        ));
    }
}
