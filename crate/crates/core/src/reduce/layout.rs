//! Linear layouts: the bag ordering of reduction outputs, and exact
//! bandwidth and cutwidth for small graphs.

use crate::error::{NclError, Result};
use crate::graph::{ConstraintGraph, VertexId};

use super::ReductionOutput;

/// Largest vertex count the exact solvers accept by default.
pub const BAG_LAYOUT_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    /// Vertices left to right.
    pub order: Vec<VertexId>,
    /// Bandwidth or cutwidth of `order`, depending on the producer.
    pub value: usize,
}

impl Layout {
    /// Position of every vertex in `order`.
    pub fn positions(&self, n: usize) -> Vec<usize> {
        let mut pos = vec![0; n];
        for (i, v) in self.order.iter().enumerate() {
            pos[v.index()] = i;
        }
        pos
    }
}

/// `max |f(u) - f(v)|` over the edges.
pub fn layout_bandwidth(g: &ConstraintGraph, order: &[VertexId]) -> usize {
    let mut pos = vec![0usize; g.vertex_count()];
    for (i, v) in order.iter().enumerate() {
        pos[v.index()] = i;
    }
    g.edges()
        .iter()
        .map(|e| pos[e.u.index()].abs_diff(pos[e.v.index()]))
        .max()
        .unwrap_or(0)
}

/// Vertices sorted by drawing layer, then id; the value is the achieved
/// bandwidth (the constant `c` of the construction).
pub fn layout_from_bags(r: &ReductionOutput) -> Result<Layout> {
    let n = r.graph.vertex_count();
    if r.drawing.layer.len() != n {
        return Err(NclError::InvalidInstance(
            "drawing does not cover every vertex".into(),
        ));
    }
    let mut order: Vec<VertexId> = r.graph.vertices().collect();
    order.sort_by_key(|v| (r.drawing.layer[v.index()], v.index()));
    let value = layout_bandwidth(&r.graph, &order);
    Ok(Layout { order, value })
}

fn check_limit(g: &ConstraintGraph, limit: usize) -> Result<()> {
    if g.vertex_count() > limit {
        return Err(NclError::LimitExceeded {
            what: "layout vertex",
            limit: limit as u64,
        });
    }
    Ok(())
}

/// Minimum bandwidth by branch and bound over orderings, filled left to
/// right. A partial ordering is cut once a placed vertex with an unplaced
/// neighbour is already `best - 1` positions back.
pub fn bandwidth_exact(g: &ConstraintGraph, limit: usize) -> Result<Layout> {
    check_limit(g, limit)?;
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.u.index()].push(e.v.index());
        adj[e.v.index()].push(e.u.index());
    }
    let identity: Vec<VertexId> = g.vertices().collect();
    let mut best = Layout {
        value: layout_bandwidth(g, &identity),
        order: identity,
    };
    if n <= 1 || best.value <= 1 {
        return Ok(best);
    }
    struct Search<'a> {
        adj: &'a [Vec<usize>],
        pos: Vec<Option<usize>>,
        order: Vec<usize>,
        best: &'a mut Layout,
    }
    fn go(s: &mut Search, width: usize) {
        let n = s.adj.len();
        let k = s.order.len();
        if k == n {
            if width < s.best.value {
                s.best.value = width;
                s.best.order = s.order.iter().map(|&v| VertexId(v as u32)).collect();
            }
            return;
        }
        // every placed vertex with an unplaced neighbour reaches at least
        // position k
        for &u in &s.order {
            let p = s.pos[u].unwrap();
            if s.adj[u].iter().any(|&w| s.pos[w].is_none()) && k - p >= s.best.value {
                return;
            }
        }
        for v in 0..n {
            if s.pos[v].is_some() {
                continue;
            }
            let w = s.adj[v]
                .iter()
                .filter_map(|&u| s.pos[u])
                .map(|p| k - p)
                .max()
                .unwrap_or(0)
                .max(width);
            if w >= s.best.value {
                continue;
            }
            s.pos[v] = Some(k);
            s.order.push(v);
            go(s, w);
            s.order.pop();
            s.pos[v] = None;
        }
    }
    let mut s = Search {
        adj: &adj,
        pos: vec![None; n],
        order: Vec::new(),
        best: &mut best,
    };
    go(&mut s, 0);
    Ok(best)
}

/// Minimum cutwidth by dynamic programming over vertex subsets placed
/// first: `dp[S] = max(cut(S), min over v in S of dp[S - v])`. Parallel
/// edges count separately.
pub fn cutwidth_exact(g: &ConstraintGraph, limit: usize) -> Result<Layout> {
    check_limit(g, limit.min(24))?;
    let n = g.vertex_count();
    let full = (1usize << n) - 1;
    let ends: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| (e.u.index(), e.v.index()))
        .collect();
    let cut = |s: usize| {
        ends.iter()
            .filter(|&&(a, b)| ((s >> a) & 1) != ((s >> b) & 1))
            .count()
    };
    let mut dp = vec![usize::MAX; full + 1];
    let mut last = vec![0usize; full + 1];
    dp[0] = 0;
    for s in 1..=full {
        let c = cut(s);
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let w = dp[s & !(1 << v)].max(c);
            if w < dp[s] {
                dp[s] = w;
                last[s] = v;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        order.push(VertexId(last[s] as u32));
        s &= !(1 << last[s]);
    }
    order.reverse();
    Ok(Layout {
        order,
        value: dp[full],
    })
}

/// Cutwidth of a fixed ordering.
pub fn layout_cutwidth(g: &ConstraintGraph, order: &[VertexId]) -> usize {
    let mut pos = vec![0usize; g.vertex_count()];
    for (i, v) in order.iter().enumerate() {
        pos[v.index()] = i;
    }
    (0..order.len().saturating_sub(1))
        .map(|gap| {
            g.edges()
                .iter()
                .filter(|e| {
                    let (a, b) = (pos[e.u.index()], pos[e.v.index()]);
                    a.min(b) <= gap && gap < a.max(b)
                })
                .count()
        })
        .max()
        .unwrap_or(0)
}
