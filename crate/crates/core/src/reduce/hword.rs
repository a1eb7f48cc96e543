//! H-word reconfiguration to NCL on a layered planar layout.
//!
//! Row `i` holds one AND vertex `X[i,j]` per symbol `j`, with its blue edge
//! toward the row's universal part: symbol `j` is in the word at `i` when
//! that edge points away from `X[i,j]`. For every forbidden pair `(A, B)`
//! an OR vertex `D[i,A,B]` between rows `i` and `i + 1` keeps `A` at `i`
//! and `B` at `i + 1` from both being in. Each `X` reaches its OR vertices
//! through a chain of AND splitters and red-blue converters above (toward
//! row `i - 1`) and below (toward row `i + 1`).
//!
//! Vertex layers are `4i` (chains above row `i`), `4i + 1` (the row and its
//! universal part), `4i + 2` (chains below) and `4i + 3` (the OR vertices
//! and crossovers between rows `i` and `i + 1`).

use std::collections::BTreeSet;
use std::f64::consts::PI;

use crate::drawing::Drawing;
use crate::error::{NclError, Result};
use crate::gadgets::{
    build_blue_terminator, build_paired_red_terminator, complete_edges, Gadget, Placement,
};
use crate::graph::{is_legal, Configuration, EdgeId, Orientation, VertexId};
use crate::hword::{is_hword, HGoal, HRelation, HWordInstance, Word};
use crate::treewidth::TreeDecomposition;

use super::planar::{widest_gap, Builder, Wire};
use super::ReductionOutput;

const RED: u64 = 1;
const BLUE: u64 = 2;
const ROW_PITCH: f64 = 14.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HWordOptions {
    /// Only AND and OR vertices: free red edges end in paired red
    /// terminators, forced blue edges in blue terminators, and the
    /// universal part of each row is an OR chain.
    pub pure_and_or: bool,
    /// Replace wire crossings by crossover gadgets.
    pub planarize: bool,
}

/// Orientation of an edge `(u, v)` as a function of the encoded word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orient {
    /// Always toward `v` (`true`) or `u`.
    Toward(bool),
    /// Toward `v` exactly when `(w[row] == sym) == toward_v_if_in`.
    InWord {
        row: usize,
        sym: usize,
        toward_v_if_in: bool,
    },
    /// Edge between chain nodes `k` and `k + 1` of a row's OR chain: toward
    /// `v` exactly when `(w[row] <= k) == toward_v_if_le`.
    Flow {
        row: usize,
        k: usize,
        toward_v_if_le: bool,
    },
}

impl Orient {
    pub fn toward_v(&self, w: &[usize]) -> bool {
        match *self {
            Orient::Toward(b) => b,
            Orient::InWord {
                row,
                sym,
                toward_v_if_in,
            } => (w[row] == sym) == toward_v_if_in,
            Orient::Flow {
                row,
                k,
                toward_v_if_le,
            } => (w[row] <= k) == toward_v_if_le,
        }
    }

    fn word_side() -> impl Fn(usize, usize) -> Orient {
        |row, sym| Orient::InWord {
            row,
            sym,
            toward_v_if_in: false,
        }
    }
}

/// What encoding and decoding words needs to know about a reduction
/// output.
#[derive(Debug, Clone)]
pub struct HWordMap {
    pub h: HRelation,
    pub len: usize,
    /// `x[i][j]` is `X[i,j]`.
    pub x: Vec<Vec<VertexId>>,
    /// The blue edge at `X[i,j]` toward the universal part.
    pub word_edge: Vec<Vec<EdgeId>>,
    /// Orientation rule of every edge outside placed gadgets.
    pub rules: Vec<Option<Orient>>,
    /// Internal edges of each placed gadget instance.
    pub groups: Vec<Vec<EdgeId>>,
}

struct Rows {
    x: Vec<Vec<VertexId>>,
    forbidden: Vec<(usize, usize)>,
    /// `down[i][k]` / `up[i + 1][k]`: chain exits for forbidden pair `k`
    /// below row `i` and above row `i + 1`.
    down: Vec<Vec<Option<VertexId>>>,
    up: Vec<Vec<Option<VertexId>>>,
    word_edge: Vec<Vec<Option<EdgeId>>>,
}

fn column(j: usize, sigma: usize) -> f64 {
    j as f64 * (sigma as f64 + 1.5)
}

fn row_y(i: usize) -> f64 {
    -(i as f64) * ROW_PITCH
}

/// Closes a free red edge at `k` with a min-0 stub at
/// `k + 0.3 (toward - k)`; `rule` is stated for the edge `(stub, k)`.
fn red_stub(b: &mut Builder, k: VertexId, toward: (f64, f64), rule: Orient, label: &str) {
    let p = b.pos(k);
    let s = b.vertex(
        format!("{label}.stub"),
        0,
        (p.0 + 0.3 * (toward.0 - p.0), p.1 + 0.3 * (toward.1 - p.1)),
    );
    b.edge(s, k, RED, rule, format!("{label}.f"));
}

/// Closes the red edges at `p1.0` and `p2.0` with one paired red terminator
/// placed by `at`. Each rule is stated for the edge `(terminator, vertex)`.
fn red_pair(
    b: &mut Builder,
    pt: &Gadget,
    label: &str,
    at: Placement,
    p1: (VertexId, Orient),
    p2: (VertexId, Orient),
) {
    let placed = b.place(pt, &format!("{label}."), &at);
    let (y1, y2) = (placed.port("p1").inner, placed.port("p2").inner);
    b.edge(y1, p1.0, RED, p1.1, format!("{label}.p1"));
    b.edge(y2, p2.0, RED, p2.1, format!("{label}.p2"));
}

/// Chain at `X[i,j]` on one side (`d = 1` above, `-1` below), feeding the
/// OR vertices `pairs` (indices into the forbidden list). Returns the
/// vertex whose free red edge is left for the row to close (the chain
/// head, or `X` itself when the chain is empty) and the exit of each pair.
fn chain(
    b: &mut Builder,
    pt: &Gadget,
    opts: HWordOptions,
    (i, j): (usize, usize),
    x: VertexId,
    d: f64,
    pairs: &[usize],
) -> (VertexId, Vec<VertexId>) {
    let m = pairs.len();
    let side = if d > 0.0 { "up" } else { "down" };
    let rule = Orient::word_side()(i, j);
    let f_rule = Orient::Toward(true);
    let origin = b.pos(x);
    let frame = Placement::frame(origin, (1.0, 0.0), (0.0, d));
    let at = |u: f64, v: f64| frame.apply((u, v));
    let tag = |what: String| format!("{what}[{i},{j},{side}]");
    match m {
        0 => (x, Vec::new()),
        1 => {
            let c0 = b.vertex(tag("c0".into()), 2, at(0.0, 3.0));
            b.link(x, c0, RED, rule);
            (c0, vec![c0])
        }
        _ => {
            let c0 = b.vertex(tag("c0".into()), 2, at(0.0, 1.0));
            b.link(x, c0, RED, rule);
            let mut and = b.vertex(tag("and1".into()), 2, at(0.0, 2.0));
            b.link(c0, and, BLUE, rule);
            let mut exits = Vec::with_capacity(m);
            for k in 1..m {
                let a = (k - 1) as f64;
                let last = k == m - 1;
                let ka = b.vertex(tag(format!("conv{k}a")), 2, at(a, 3.0));
                b.link(and, ka, RED, rule);
                exits.push(ka);
                let kb = b.vertex(
                    tag(format!("conv{k}b")),
                    2,
                    at(a + 0.5, if last { 3.0 } else { 2.0 }),
                );
                b.link(and, kb, RED, rule);
                let y = (a + 0.15, if last { 2.75 } else { 2.4 });
                let label = tag(format!("pair{k}"));
                if opts.pure_and_or {
                    let place = Placement::new(y.0, y.1, 0.03, 0.0).then(&frame);
                    red_pair(b, pt, &label, place, (ka, f_rule), (kb, f_rule));
                } else {
                    red_stub(b, ka, at(y.0, y.1), f_rule, &format!("{label}a"));
                    red_stub(b, kb, at(y.0, y.1), f_rule, &format!("{label}b"));
                }
                if last {
                    exits.push(kb);
                } else {
                    let next = b.vertex(tag(format!("and{}", k + 1)), 2, at(a + 1.0, 2.0));
                    b.link(kb, next, BLUE, rule);
                    and = next;
                }
            }
            (c0, exits)
        }
    }
}

/// Closes the free red edges left at `X[i,j]` by its two chains.
fn close_row_reds(
    b: &mut Builder,
    pt: &Gadget,
    opts: HWordOptions,
    (i, j): (usize, usize),
    x: VertexId,
    up: VertexId,
    down: VertexId,
) {
    let p = b.pos(x);
    let rule_for = |v: VertexId| {
        // stated for (terminator, v); X's own edges follow the word
        if v == x {
            Orient::InWord {
                row: i,
                sym: j,
                toward_v_if_in: true,
            }
        } else {
            Orient::Toward(true)
        }
    };
    let label = format!("close[{i},{j}]");
    if !opts.pure_and_or {
        red_stub(
            b,
            up,
            (p.0 + 0.35, p.1 + 0.3),
            rule_for(up),
            &format!("{label}up"),
        );
        red_stub(
            b,
            down,
            (p.0 + 0.35, p.1 - 0.3),
            rule_for(down),
            &format!("{label}down"),
        );
        return;
    }
    if up == x && down == x {
        // two terminators joined through one of their free edges
        let pa = Placement::new(p.0 + 0.35, p.1 + 0.3, 0.08, PI / 2.0);
        let pb = Placement::new(p.0 + 0.35, p.1 - 0.3, 0.08, PI / 2.0);
        let ta = b.place(pt, &format!("{label}a."), &pa);
        let tb = b.place(pt, &format!("{label}b."), &pb);
        let (ya, yb) = (ta.port("p1").inner, tb.port("p1").inner);
        b.edge(ya, x, RED, rule_for(x), format!("{label}a.p2"));
        b.edge(yb, x, RED, rule_for(x), format!("{label}b.p2"));
        b.edge(ya, yb, RED, Orient::Toward(true), format!("{label}.join"));
        return;
    }
    let place = Placement::new(p.0 + 0.35, p.1, 0.1, PI / 2.0);
    red_pair(
        b,
        pt,
        &label,
        place,
        (down, rule_for(down)),
        (up, rule_for(up)),
    );
}

fn build_rows(b: &mut Builder, h: &HRelation, n: usize, opts: HWordOptions) -> Result<Rows> {
    let sigma = h.size();
    let pt = build_paired_red_terminator();
    let term = build_blue_terminator();
    let forbidden: Vec<(usize, usize)> = (0..sigma)
        .flat_map(|a| (0..sigma).map(move |c| (a, c)))
        .filter(|&(a, c)| !h.allows(a, c))
        .collect();
    let mut rows = Rows {
        x: Vec::with_capacity(n),
        forbidden: forbidden.clone(),
        down: vec![vec![None; forbidden.len()]; n],
        up: vec![vec![None; forbidden.len()]; n],
        word_edge: vec![vec![None; sigma]; n],
    };
    let tree = opts.pure_and_or || opts.planarize;
    for i in 0..n {
        let (y, base) = (row_y(i), 4 * i as u32);
        b.layer = base + 1;
        let xs: Vec<VertexId> = (0..sigma)
            .map(|j| {
                b.vertex(
                    format!("X[{i},{}]", h.alphabet[j]),
                    2,
                    (column(j, sigma), y),
                )
            })
            .collect();
        let mut heads = Vec::with_capacity(sigma);
        for (j, &x) in xs.iter().enumerate() {
            let above: Vec<usize> = if i == 0 {
                Vec::new()
            } else {
                (0..forbidden.len())
                    .filter(|&k| forbidden[k].1 == j)
                    .collect()
            };
            let below: Vec<usize> = if i + 1 == n {
                Vec::new()
            } else {
                (0..forbidden.len())
                    .filter(|&k| forbidden[k].0 == j)
                    .collect()
            };
            b.layer = base;
            let (lu, eu) = chain(b, &pt, opts, (i, j), x, 1.0, &above);
            b.layer = base + 2;
            let (ld, ed) = chain(b, &pt, opts, (i, j), x, -1.0, &below);
            for (k, e) in above.into_iter().zip(eu) {
                rows.up[i][k] = Some(e);
            }
            for (k, e) in below.into_iter().zip(ed) {
                rows.down[i][k] = Some(e);
            }
            heads.push((lu, ld));
        }
        b.layer = base + 1;
        for (j, &x) in xs.iter().enumerate() {
            close_row_reds(b, &pt, opts, (i, j), x, heads[j].0, heads[j].1);
        }
        let slab = i.checked_sub(1);
        if tree {
            let ty = y + 4.0;
            let ts: Vec<VertexId> = (0..sigma)
                .map(|j| b.vertex(format!("U[{i}].t{j}"), 2, (column(j, sigma) - 1.5, ty)))
                .collect();
            for k in 0..sigma.saturating_sub(1) {
                b.wire(Wire {
                    u: ts[k],
                    v: ts[k + 1],
                    weight: BLUE,
                    rule: Orient::Flow {
                        row: i,
                        k,
                        toward_v_if_le: true,
                    },
                    label: format!("U[{i}].chain{k}"),
                    slab,
                    word: None,
                });
            }
            for j in 0..sigma {
                b.wire(Wire {
                    u: ts[j],
                    v: xs[j],
                    weight: BLUE,
                    rule: Orient::word_side()(i, j),
                    label: format!("U[{i}].port{j}"),
                    slab,
                    word: Some((i, j)),
                });
            }
            let right = column(sigma - 1, sigma) + sigma as f64 + 4.0;
            for (end, at, dir) in [(ts[0], (-3.5, ty), 0.0), (ts[sigma - 1], (right, ty), 1.0)] {
                let inner = if opts.pure_and_or {
                    // port pointing toward the chain end
                    let angle = if dir == 0.0 { -PI / 2.0 } else { PI / 2.0 };
                    b.place(
                        &term,
                        &format!("U[{i}].end{dir}."),
                        &Placement::new(at.0, at.1, 0.3, angle),
                    )
                    .port("A")
                    .inner
                } else {
                    b.vertex(format!("U[{i}].end{dir}"), 2, at)
                };
                b.wire(Wire {
                    u: end,
                    v: inner,
                    weight: BLUE,
                    rule: Orient::Toward(true),
                    label: format!("U[{i}].end{dir}"),
                    slab,
                    word: None,
                });
            }
        } else {
            let u = b.vertex(format!("U[{i}]"), 2, (-3.0, y + 4.0));
            for (j, &x) in xs.iter().enumerate() {
                rows.word_edge[i][j] = Some(b.link(u, x, BLUE, Orient::word_side()(i, j)));
            }
        }
        rows.x.push(xs);
    }
    Ok(rows)
}

/// OR vertices between consecutive rows with their wires, then the blue
/// edge that pins each of them.
fn build_slabs(b: &mut Builder, h: &HRelation, rows: &Rows, n: usize, opts: HWordOptions) {
    let term = build_blue_terminator();
    let mut ors = Vec::new();
    for i in 0..n.saturating_sub(1) {
        b.layer = 4 * i as u32 + 3;
        let y = row_y(i) - 6.5;
        for (k, &(a, c)) in rows.forbidden.iter().enumerate() {
            let (lo, hi) = (
                rows.down[i][k].expect("exit below"),
                rows.up[i + 1][k].expect("exit above"),
            );
            let mid = (b.pos(lo).0 + b.pos(hi).0) / 2.0 + 0.173 * k as f64;
            let off = 0.29 * ((k % 3) as f64 - 1.0);
            let label = format!("D[{i},{},{}]", h.alphabet[a], h.alphabet[c]);
            let dv = b.vertex(label.clone(), 2, (mid, y + off));
            b.wire(Wire {
                u: lo,
                v: dv,
                weight: BLUE,
                rule: Orient::word_side()(i, a),
                label: format!("{label}.down"),
                slab: Some(i),
                word: None,
            });
            b.wire(Wire {
                u: hi,
                v: dv,
                weight: BLUE,
                rule: Orient::word_side()(i + 1, c),
                label: format!("{label}.up"),
                slab: Some(i),
                word: None,
            });
            ors.push((i, dv, label, [lo, hi]));
        }
    }
    for (i, dv, label, nbrs) in ors {
        b.layer = 4 * i as u32 + 3;
        let p = b.pos(dv);
        let r = b.clearance(p, dv);
        let dir = widest_gap(p, &nbrs.map(|v| b.pos(v)));
        let at = (p.0 + 0.4 * r * dir.0, p.1 + 0.4 * r * dir.1);
        let inner = if opts.pure_and_or {
            let angle = dir.0.atan2(-dir.1);
            b.place(
                &term,
                &format!("{label}.pin."),
                &Placement::new(at.0, at.1, 0.25 * r / 3.35, angle),
            )
            .port("A")
            .inner
        } else {
            b.vertex(format!("{label}.pin"), 2, at)
        };
        b.edge(
            dv,
            inner,
            BLUE,
            Orient::Toward(true),
            format!("{label}.pin"),
        );
    }
}

/// Compiles an H-word instance into a constraint graph with a layered
/// drawing, bags of bounded size and the start (and goal or target) of the
/// equivalent NCL instance.
pub fn hword_to_ncl(inst: &HWordInstance, opts: HWordOptions) -> Result<ReductionOutput> {
    inst.validate()?;
    let n = inst.start.len();
    if n == 0 {
        return Err(NclError::InvalidInstance("words must be non-empty".into()));
    }
    let h = &inst.h;
    let mut b = Builder::default();
    let rows = build_rows(&mut b, h, n, opts)?;
    build_slabs(&mut b, h, &rows, n, opts);
    let words = if opts.planarize {
        b.emit_wires_planar(opts.pure_and_or)?
    } else {
        b.emit_wires_plain()
    };
    let mut word_edge = rows.word_edge;
    for ((i, j), e) in words {
        word_edge[i][j] = Some(e);
    }
    let word_edge: Vec<Vec<EdgeId>> = word_edge
        .into_iter()
        .map(|r| r.into_iter().map(|e| e.expect("word edge")).collect())
        .collect();

    let mut target = None;
    if let HGoal::Target { position, symbol } = inst.goal {
        if inst.start[position] == symbol {
            // already satisfied: any first move works, so give the search
            // an isolated edge it can reverse
            b.layer = 0;
            let wa = b.vertex("witness.a", 0, (-6.0, 6.0));
            let wb = b.vertex("witness.b", 0, (-5.0, 6.0));
            target = Some(b.edge(wa, wb, RED, Orient::Toward(true), "witness"));
        } else {
            target = Some(word_edge[position][symbol]);
        }
    }

    let Builder {
        asm, layers, rules, ..
    } = b;
    let groups = asm.groups.iter().map(|(_, es)| es.clone()).collect();
    let map = HWordMap {
        h: h.clone(),
        len: n,
        x: rows.x,
        word_edge,
        rules,
        groups,
    };
    let drawing = Drawing {
        layer: layers.clone(),
        pos: asm.positions.clone(),
    };
    let mut out = ReductionOutput::new(
        asm.graph.clone(),
        drawing,
        asm.labels.clone(),
        asm.edge_labels.clone(),
    );
    out.hword = Some(map);
    out.start = Some(encode_with(&out, &inst.start, &asm.orientation)?);
    if let HGoal::Word(wg) = &inst.goal {
        out.goal = Some(encode_with(&out, wg, &asm.orientation)?);
    }
    out.target = target;
    let bags: Vec<Vec<VertexId>> = (0..(n - 1).max(1))
        .map(|i| {
            let (lo, hi) = (4 * i as u32, 4 * i as u32 + 6);
            (0..layers.len())
                .filter(|&v| (lo..=hi).contains(&layers[v]))
                .map(|v| VertexId(v as u32))
                .collect()
        })
        .collect();
    let tree = (1..bags.len()).map(|k| (k - 1, k)).collect();
    out.decomposition = Some(TreeDecomposition::new(bags.clone(), tree));
    out.bags = Some(bags);
    Ok(out)
}

fn map_of(out: &ReductionOutput) -> Result<&HWordMap> {
    out.hword
        .as_ref()
        .ok_or_else(|| NclError::InvalidInstance("not an H-word reduction output".into()))
}

fn encode_with(out: &ReductionOutput, w: &[usize], base: &[Orientation]) -> Result<Configuration> {
    let map = map_of(out)?;
    if w.len() != map.len || !is_hword(&map.h, w) {
        return Err(NclError::InvalidInstance(format!(
            "{} is not an H-word of length {}",
            map.h.spell(w),
            map.len
        )));
    }
    let g = &out.graph;
    let mut c = Configuration::from_orientations(base);
    for (e, rule) in map.rules.iter().enumerate() {
        if let Some(r) = rule {
            let o = if r.toward_v(w) {
                Orientation::TowardV
            } else {
                Orientation::TowardU
            };
            c.set(EdgeId(e as u32), o);
        }
    }
    for group in &map.groups {
        let touched = group.iter().any(|&e| {
            let ed = g.edge(e);
            [ed.u, ed.v]
                .iter()
                .any(|&v| g.inflow_unchecked(&c, v) < g.min_inflow(v))
        });
        if touched {
            c = complete_edges(g, &c, group)?.ok_or_else(|| {
                NclError::Gadget("a gadget has no legal state for the encoded word".into())
            })?;
        }
    }
    if !is_legal(g, &c)? {
        return Err(NclError::Gadget(format!(
            "encoding of {} is illegal",
            map.h.spell(w)
        )));
    }
    Ok(c)
}

/// Legal configuration of `out` encoding the H-word `w`: every edge
/// outside a gadget follows its rule, and each gadget takes the
/// lexicographically first legal state around it.
pub fn encode_word_config(out: &ReductionOutput, w: &[usize]) -> Result<Configuration> {
    let base = out
        .start
        .as_ref()
        .map(|c| c.orientations().collect::<Vec<_>>())
        .unwrap_or_else(|| vec![Orientation::TowardV; out.graph.edge_count()]);
    encode_with(out, w, &base)
}

/// Every H-word consistent with a legal configuration: at each position,
/// the symbols whose word edge points away from `X`.
pub fn decode_config(out: &ReductionOutput, c: &Configuration) -> Result<BTreeSet<Word>> {
    let map = map_of(out)?;
    crate::graph::require_legal(&out.graph, c)?;
    let mut choices: Vec<Vec<usize>> = Vec::with_capacity(map.len);
    for i in 0..map.len {
        let ins: Vec<usize> = (0..map.h.size())
            .filter(|&j| out.graph.head(c, map.word_edge[i][j]) != map.x[i][j])
            .collect();
        if ins.is_empty() {
            return Err(NclError::InvalidInstance(format!(
                "position {i} has no symbol in the word"
            )));
        }
        choices.push(ins);
    }
    let mut words = vec![Vec::new()];
    for ch in choices {
        words = words
            .into_iter()
            .flat_map(|w: Word| ch.iter().map(move |&s| [w.clone(), vec![s]].concat()))
            .collect();
    }
    Ok(words.into_iter().collect())
}
