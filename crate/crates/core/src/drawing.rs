//! Layered straight-line drawings and segment-crossing detection.

use crate::graph::{ConstraintGraph, EdgeId, VertexId};

/// A position for every vertex plus the layer (bag index) it belongs to.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Drawing {
    pub layer: Vec<u32>,
    pub pos: Vec<(f64, f64)>,
}

impl Drawing {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_len(n: usize) -> Self {
        Drawing {
            layer: vec![0; n],
            pos: vec![(0.0, 0.0); n],
        }
    }

    pub fn push(&mut self, layer: u32, x: f64, y: f64) {
        self.layer.push(layer);
        self.pos.push((x, y));
    }

    pub fn len(&self) -> usize {
        self.pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> bool {
    const EPS: f64 = 1e-12;
    p.0 >= a.0.min(b.0) - EPS
        && p.0 <= a.0.max(b.0) + EPS
        && p.1 >= a.1.min(b.1) - EPS
        && p.1 <= a.1.max(b.1) + EPS
}

/// Whether segments `ab` and `cd` meet anywhere other than at a shared
/// endpoint. Collinear overlaps count as crossings.
pub fn segments_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    const EPS: f64 = 1e-12;
    let shared = [a, b].iter().filter(|p| **p == c || **p == d).count();
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if shared == 2 {
        return true;
    }
    if shared == 1 {
        // Touching at a common endpoint is fine unless the segments overlap.
        let collinear = d1.abs() < EPS && d2.abs() < EPS;
        if !collinear {
            return false;
        }
        let (p, q, r, s) = if a == c {
            (a, b, c, d)
        } else if a == d {
            (a, b, d, c)
        } else if b == c {
            (b, a, c, d)
        } else {
            (b, a, d, c)
        };
        debug_assert!(p == r);
        let dot = (q.0 - p.0) * (s.0 - r.0) + (q.1 - p.1) * (s.1 - r.1);
        return dot > 0.0;
    }
    if ((d1 > EPS && d2 < -EPS) || (d1 < -EPS && d2 > EPS))
        && ((d3 > EPS && d4 < -EPS) || (d3 < -EPS && d4 > EPS))
    {
        return true;
    }
    (d1.abs() <= EPS && on_segment(c, d, a))
        || (d2.abs() <= EPS && on_segment(c, d, b))
        || (d3.abs() <= EPS && on_segment(a, b, c))
        || (d4.abs() <= EPS && on_segment(a, b, d))
}

/// Endpoint positions and endpoint ids of one edge.
type Segment = ((f64, f64), (f64, f64), VertexId, VertexId);

/// Pairs of edges whose straight-line segments cross, plus edges that pass
/// through a vertex that is not one of their endpoints.
pub fn crossings(g: &ConstraintGraph, d: &Drawing) -> Vec<(EdgeId, EdgeId)> {
    let segs: Vec<Segment> = g
        .edges()
        .iter()
        .map(|e| (d.pos[e.u.index()], d.pos[e.v.index()], e.u, e.v))
        .collect();
    let mut order: Vec<usize> = (0..segs.len()).collect();
    let lo = |i: usize| segs[i].0 .0.min(segs[i].1 .0);
    let hi = |i: usize| segs[i].0 .0.max(segs[i].1 .0);
    order.sort_by(|&a, &b| lo(a).total_cmp(&lo(b)));
    let mut out = Vec::new();
    // sweep over x: only segments whose x-ranges overlap can cross
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if lo(j) > hi(i) + 1e-12 {
                break;
            }
            let (a, b, ..) = segs[i];
            let (c, dd, ..) = segs[j];
            if segments_cross(a, b, c, dd) {
                let (x, y) = if i < j { (i, j) } else { (j, i) };
                out.push((EdgeId(x as u32), EdgeId(y as u32)));
            }
        }
    }
    out.sort();
    out
}

/// Edges that pass through the position of a vertex they are not incident to.
pub fn vertex_collisions(g: &ConstraintGraph, d: &Drawing) -> Vec<(EdgeId, VertexId)> {
    let mut out = Vec::new();
    for e in g.edge_ids() {
        let ed = g.edge(e);
        let (a, b) = (d.pos[ed.u.index()], d.pos[ed.v.index()]);
        for v in g.vertices() {
            if v == ed.u || v == ed.v {
                continue;
            }
            let p = d.pos[v.index()];
            if orient(a, b, p).abs() < 1e-12 && on_segment(a, b, p) {
                out.push((e, v));
            }
        }
    }
    out
}
