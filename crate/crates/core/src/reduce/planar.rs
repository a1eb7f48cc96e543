//! A drawing-aware graph builder for the H-word reduction: vertices carry
//! layers, edges carry word-dependent orientation rules, and long "wires"
//! are held back so that crossings between them can be replaced by
//! crossover gadgets before they are emitted.

use crate::drawing::segments_cross;
use crate::error::{NclError, Result};
use crate::gadgets::{build_crossover, Assembly, Gadget, Placed, Placement};
use crate::graph::{EdgeId, VertexId};

use super::hword::Orient;

type P = (f64, f64);

pub(super) fn dist(a: P, b: P) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

pub(super) fn point_segment_distance(p: P, a: P, b: P) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return dist(p, a);
    }
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0);
    dist(p, (a.0 + t * dx, a.1 + t * dy))
}

/// Parameters `(t, s)` and the point where segments `ab` and `cd` cross
/// properly.
pub(super) fn intersection(a: P, b: P, c: P, d: P) -> Option<(f64, f64, P)> {
    let r = (b.0 - a.0, b.1 - a.1);
    let q = (d.0 - c.0, d.1 - c.1);
    let den = r.0 * q.1 - r.1 * q.0;
    if den.abs() < 1e-15 {
        return None;
    }
    let w = (c.0 - a.0, c.1 - a.1);
    let t = (w.0 * q.1 - w.1 * q.0) / den;
    let s = (w.0 * r.1 - w.1 * r.0) / den;
    Some((t, s, (a.0 + t * r.0, a.1 + t * r.1)))
}

fn unit(v: P) -> P {
    let l = v.0.hypot(v.1);
    (v.0 / l, v.1 / l)
}

/// Unit vector bisecting the widest angular gap between the directions
/// from `center` to `nbrs`.
pub(super) fn widest_gap(center: P, nbrs: &[P]) -> P {
    if nbrs.is_empty() {
        return (1.0, 0.0);
    }
    let mut ang: Vec<f64> = nbrs
        .iter()
        .map(|p| (p.1 - center.1).atan2(p.0 - center.0))
        .collect();
    ang.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let tau = std::f64::consts::TAU;
    let mut best = (ang[0] + tau - ang[ang.len() - 1], ang[ang.len() - 1]);
    for w in ang.windows(2) {
        if w[1] - w[0] > best.0 {
            best = (w[1] - w[0], w[0]);
        }
    }
    let mid = best.1 + best.0 / 2.0;
    (mid.cos(), mid.sin())
}

/// An edge emitted after planarization.
#[derive(Debug, Clone)]
pub(super) struct Wire {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: u64,
    pub rule: Orient,
    pub label: String,
    /// Slab the wire runs through (`None` when it cannot be crossed).
    pub slab: Option<usize>,
    /// `(row, symbol)` when this wire is the word edge of `X[row, symbol]`
    /// (its `v` end).
    pub word: Option<(usize, usize)>,
}

#[derive(Debug, Default)]
pub(super) struct Builder {
    pub asm: Assembly,
    pub layers: Vec<u32>,
    pub layer: u32,
    pub rules: Vec<Option<Orient>>,
    pub wires: Vec<Wire>,
}

impl Builder {
    pub fn vertex(&mut self, label: impl Into<String>, min: u64, pos: P) -> VertexId {
        let v = self.asm.vertex(label, min, pos);
        self.layers.push(self.layer);
        v
    }

    pub fn pos(&self, v: VertexId) -> P {
        self.asm.positions[v.index()]
    }

    pub fn edge(
        &mut self,
        u: VertexId,
        v: VertexId,
        weight: u64,
        rule: Orient,
        label: impl Into<String>,
    ) -> EdgeId {
        let e = self.asm.labeled_edge(u, v, weight, v, label);
        self.rules.push(Some(rule));
        e
    }

    /// Edge labelled by its endpoints.
    pub fn link(&mut self, u: VertexId, v: VertexId, weight: u64, rule: Orient) -> EdgeId {
        let label = format!(
            "{}-{}",
            self.asm.labels[u.index()],
            self.asm.labels[v.index()]
        );
        self.edge(u, v, weight, rule, label)
    }

    pub fn place(&mut self, g: &Gadget, prefix: &str, at: &Placement) -> Placed {
        let p = self.asm.place(g, prefix, at);
        self.layers.resize(self.asm.positions.len(), self.layer);
        self.rules.resize(self.asm.graph.edge_count(), None);
        p
    }

    pub fn wire(&mut self, w: Wire) {
        self.wires.push(w);
    }

    fn segments(&self) -> Vec<(P, P)> {
        self.asm
            .graph
            .edges()
            .iter()
            .map(|e| (self.pos(e.u), self.pos(e.v)))
            .collect()
    }

    /// Smallest distance from `p` to any vertex other than `skip_v` and to
    /// any edge or wire not incident to `skip_v`.
    pub fn clearance(&self, p: P, skip_v: VertexId) -> f64 {
        let mut r = f64::INFINITY;
        for (i, &q) in self.asm.positions.iter().enumerate() {
            if i != skip_v.index() {
                r = r.min(dist(p, q));
            }
        }
        for e in self.asm.graph.edges() {
            if e.u != skip_v && e.v != skip_v {
                r = r.min(point_segment_distance(p, self.pos(e.u), self.pos(e.v)));
            }
        }
        for w in &self.wires {
            if w.u != skip_v && w.v != skip_v {
                r = r.min(point_segment_distance(p, self.pos(w.u), self.pos(w.v)));
            }
        }
        r
    }

    /// Emits every wire as a single edge. Returns the word edges found.
    pub fn emit_wires_plain(&mut self) -> Vec<((usize, usize), EdgeId)> {
        let wires = std::mem::take(&mut self.wires);
        let mut words = Vec::new();
        for w in wires {
            let e = self.edge(w.u, w.v, w.weight, w.rule, w.label);
            if let Some(rs) = w.word {
                words.push((rs, e));
            }
        }
        words
    }

    /// Replaces every crossing between two wires by a crossover gadget and
    /// emits the wire pieces. Wires may only cross wires of the same slab;
    /// a wire crossing any other edge is a construction error. Crossovers
    /// go to layer `4 * slab + 3`.
    pub fn emit_wires_planar(
        &mut self,
        pure_and_or: bool,
    ) -> Result<Vec<((usize, usize), EdgeId)>> {
        let segs = self.segments();
        let wpos: Vec<(P, P)> = self
            .wires
            .iter()
            .map(|w| (self.pos(w.u), self.pos(w.v)))
            .collect();
        for (wi, &(a, b)) in wpos.iter().enumerate() {
            for (ei, &(c, d)) in segs.iter().enumerate() {
                if segments_cross(a, b, c, d) {
                    return Err(NclError::Gadget(format!(
                        "wire {} crosses local edge {}",
                        self.wires[wi].label, self.asm.edge_labels[ei]
                    )));
                }
            }
        }
        // (wire, other wire, parameter along wire, point)
        struct Crossing {
            w1: usize,
            w2: usize,
            t1: f64,
            t2: f64,
            at: P,
            slab: usize,
        }
        let mut cross = Vec::new();
        for i in 0..wpos.len() {
            for j in i + 1..wpos.len() {
                let ((a, b), (c, d)) = (wpos[i], wpos[j]);
                if !segments_cross(a, b, c, d) {
                    continue;
                }
                let (wi, wj) = (&self.wires[i], &self.wires[j]);
                let (Some((t1, t2, at)), Some(si), Some(sj)) =
                    (intersection(a, b, c, d), wi.slab, wj.slab)
                else {
                    return Err(NclError::Gadget(format!(
                        "wires {} and {} overlap",
                        wi.label, wj.label
                    )));
                };
                if si != sj {
                    return Err(NclError::Gadget(format!(
                        "wires {} and {} cross between slabs",
                        wi.label, wj.label
                    )));
                }
                cross.push(Crossing {
                    w1: i,
                    w2: j,
                    t1,
                    t2,
                    at,
                    slab: si,
                });
            }
        }
        cross.sort_by_key(|x| (x.slab, x.w1, x.w2));
        let gadget = build_crossover(pure_and_or);
        let inner: Vec<VertexId> = gadget.internal_vertices();
        let extent = inner
            .iter()
            .map(|v| gadget.positions[v.index()])
            .map(|p| p.0.abs().max(p.1.abs()))
            .fold(0.0, f64::max);
        // clearances are fixed before any crossover is added
        let mut scale = Vec::with_capacity(cross.len());
        for (k, c) in cross.iter().enumerate() {
            let (w1, w2) = (&self.wires[c.w1], &self.wires[c.w2]);
            let mut r = f64::INFINITY;
            for &q in &self.asm.positions {
                r = r.min(dist(c.at, q));
            }
            for &(a, b) in &segs {
                r = r.min(point_segment_distance(c.at, a, b));
            }
            for (wi, &(a, b)) in wpos.iter().enumerate() {
                if wi != c.w1 && wi != c.w2 {
                    r = r.min(point_segment_distance(c.at, a, b));
                }
            }
            for (l, o) in cross.iter().enumerate() {
                if l != k {
                    r = r.min(dist(c.at, o.at));
                }
            }
            if r.is_nan() || r <= 1e-9 {
                return Err(NclError::Gadget(format!(
                    "no room for a crossover of {} and {}",
                    w1.label, w2.label
                )));
            }
            scale.push(0.3 * r / (2.0 * extent));
        }
        // per wire: (parameter, crossover index, is first wire)
        let mut on_wire: Vec<Vec<(f64, usize, bool)>> = vec![Vec::new(); self.wires.len()];
        let mut placed = Vec::with_capacity(cross.len());
        let saved = self.layer;
        for (k, c) in cross.iter().enumerate() {
            let (w1, w2) = (&self.wires[c.w1], &self.wires[c.w2]);
            let l = scale[k];
            let e1 = unit((self.pos(w1.u).0 - c.at.0, self.pos(w1.u).1 - c.at.1));
            let e2 = unit((self.pos(w2.u).0 - c.at.0, self.pos(w2.u).1 - c.at.1));
            let frame = Placement::frame(c.at, (l * e2.0, l * e2.1), (l * e1.0, l * e1.1));
            let label = format!("xover[{}|{}].", w1.label, w2.label);
            self.layer = 4 * c.slab as u32 + 3;
            placed.push(self.place(&gadget, &label, &frame));
            on_wire[c.w1].push((c.t1, k, true));
            on_wire[c.w2].push((c.t2, k, false));
        }
        self.layer = saved;
        let wires = std::mem::take(&mut self.wires);
        let mut words = Vec::new();
        for (wi, w) in wires.into_iter().enumerate() {
            let mut stops = on_wire[wi].clone();
            stops.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut prev = w.u;
            for (piece, &(_, k, first)) in stops.iter().enumerate() {
                let (toward_u, toward_v) = if first { ("A", "B") } else { ("D", "C") };
                let p = &placed[k];
                let (pu, pv) = (p.port(toward_u).inner, p.port(toward_v).inner);
                self.edge(prev, pu, w.weight, w.rule, format!("{}/{piece}", w.label));
                prev = pv;
            }
            let e = self.edge(
                prev,
                w.v,
                w.weight,
                w.rule,
                format!("{}/{}", w.label, stops.len()),
            );
            if let Some(rs) = w.word {
                words.push((rs, e));
            }
        }
        Ok(words)
    }
}
