//! Line-oriented text format for graphs, configurations and annotations.
//!
//! ```text
//! # comment (also allowed after a record)
//! v <id> <min_inflow>
//! e <id> <u> <v> <weight>
//! port <name> <edge_id> <weight>
//! credit <vertex> <amount>
//! target <edge_id>
//! bag <index> <vertex>...
//! layer <vertex> <layer> <x> <y>
//! backmap <v|e> <id> <label...>
//! config <name>
//! o <edge_id> <U|V>
//! ```
//!
//! Vertex and edge ids must be exactly `0..n` (in any order of appearance).
//! `o` records belong to the most recent `config` block and every block must
//! orient every edge exactly once. Unknown record tags are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::drawing::Drawing;
use crate::error::{NclError, Result};
use crate::graph::{Configuration, ConstraintGraph, EdgeId, Orientation, VertexId};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Document {
    pub graph: ConstraintGraph,
    pub configs: Vec<(String, Configuration)>,
    pub ports: Vec<(String, EdgeId, u64)>,
    pub credits: Vec<(VertexId, u64)>,
    pub target: Option<EdgeId>,
    pub bags: Vec<Vec<VertexId>>,
    pub drawing: Option<Drawing>,
    pub backmap_vertices: BTreeMap<VertexId, String>,
    pub backmap_edges: BTreeMap<EdgeId, String>,
}

impl Document {
    pub fn from_graph(graph: ConstraintGraph) -> Self {
        Document {
            graph,
            ..Default::default()
        }
    }

    pub fn with_config(mut self, name: &str, c: Configuration) -> Self {
        self.configs.push((name.to_string(), c));
        self
    }

    pub fn config(&self, name: &str) -> Option<&Configuration> {
        self.configs.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }
}

fn perr(line: usize, msg: impl Into<String>) -> NclError {
    NclError::Parse {
        line,
        msg: msg.into(),
    }
}

fn num<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| perr(line, format!("bad {what} '{tok}'")))
}

fn strip_comment(s: &str) -> &str {
    match s.find('#') {
        Some(i) => &s[..i],
        None => s,
    }
}

/// Name, declaring line and `(edge, orientation, line)` records of a
/// `config` block.
type RawConfig = (String, usize, Vec<(u32, Orientation, usize)>);

pub fn parse(text: &str) -> Result<Document> {
    let mut vertices: BTreeMap<u32, (u64, usize)> = BTreeMap::new();
    let mut edges: BTreeMap<u32, (u32, u32, u64, usize)> = BTreeMap::new();
    let mut configs: Vec<RawConfig> = Vec::new();
    let mut ports = Vec::new();
    let mut credits = Vec::new();
    let mut target = None;
    let mut bags: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut layers: BTreeMap<u32, (u32, f64, f64, usize)> = BTreeMap::new();
    let mut bm_v = BTreeMap::new();
    let mut bm_e = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        let mut it = body.split_whitespace();
        let tag = it.next().unwrap();
        match tag {
            "v" => {
                let id: u32 = num(ln, it.next(), "vertex id")?;
                let min: u64 = num(ln, it.next(), "min inflow")?;
                if vertices.insert(id, (min, ln)).is_some() {
                    return Err(perr(ln, format!("duplicate vertex {id}")));
                }
            }
            "e" => {
                let id: u32 = num(ln, it.next(), "edge id")?;
                let u: u32 = num(ln, it.next(), "endpoint")?;
                let v: u32 = num(ln, it.next(), "endpoint")?;
                let w: u64 = num(ln, it.next(), "weight")?;
                if edges.insert(id, (u, v, w, ln)).is_some() {
                    return Err(perr(ln, format!("duplicate edge {id}")));
                }
            }
            "config" => {
                let name = it.next().ok_or_else(|| perr(ln, "missing config name"))?;
                configs.push((name.to_string(), ln, Vec::new()));
            }
            "o" => {
                let e: u32 = num(ln, it.next(), "edge id")?;
                let o = match it.next() {
                    Some("U") => Orientation::TowardU,
                    Some("V") => Orientation::TowardV,
                    other => return Err(perr(ln, format!("bad orientation {other:?}"))),
                };
                let block = configs
                    .last_mut()
                    .ok_or_else(|| perr(ln, "'o' outside a config block"))?;
                block.2.push((e, o, ln));
            }
            "port" => {
                let name = it
                    .next()
                    .ok_or_else(|| perr(ln, "missing port name"))?
                    .to_string();
                let e: u32 = num(ln, it.next(), "edge id")?;
                let w: u64 = num(ln, it.next(), "port weight")?;
                ports.push((name, EdgeId(e), w));
            }
            "credit" => {
                let v: u32 = num(ln, it.next(), "vertex id")?;
                let a: u64 = num(ln, it.next(), "credit")?;
                credits.push((VertexId(v), a));
            }
            "target" => {
                let e: u32 = num(ln, it.next(), "edge id")?;
                if target.replace(EdgeId(e)).is_some() {
                    return Err(perr(ln, "duplicate target"));
                }
            }
            "bag" => {
                let i: u32 = num(ln, it.next(), "bag index")?;
                let mut vs = Vec::new();
                for t in it.by_ref() {
                    vs.push(num(ln, Some(t), "vertex id")?);
                }
                if bags.insert(i, vs).is_some() {
                    return Err(perr(ln, format!("duplicate bag {i}")));
                }
            }
            "layer" => {
                let v: u32 = num(ln, it.next(), "vertex id")?;
                let l: u32 = num(ln, it.next(), "layer")?;
                let x: f64 = num(ln, it.next(), "x")?;
                let y: f64 = num(ln, it.next(), "y")?;
                layers.insert(v, (l, x, y, ln));
            }
            "backmap" => {
                let kind = it.next().ok_or_else(|| perr(ln, "missing backmap kind"))?;
                let id: u32 = num(ln, it.next(), "id")?;
                let label = it.collect::<Vec<_>>().join(" ");
                match kind {
                    "v" => {
                        bm_v.insert(VertexId(id), label);
                    }
                    "e" => {
                        bm_e.insert(EdgeId(id), label);
                    }
                    _ => return Err(perr(ln, format!("bad backmap kind '{kind}'"))),
                }
                continue;
            }
            _ => return Err(perr(ln, format!("unknown record tag '{tag}'"))),
        }
        if let Some(extra) = it.next() {
            return Err(perr(ln, format!("unexpected token '{extra}'")));
        }
    }

    let mut g = ConstraintGraph::new();
    for (expect, (&id, &(min, ln))) in vertices.iter().enumerate() {
        if id as usize != expect {
            return Err(perr(
                ln,
                format!("vertex ids must be dense; expected {expect}, found {id}"),
            ));
        }
        g.add_vertex(min);
    }
    for (expect, (&id, &(u, v, w, ln))) in edges.iter().enumerate() {
        if id as usize != expect {
            return Err(perr(
                ln,
                format!("edge ids must be dense; expected {expect}, found {id}"),
            ));
        }
        g.add_edge(VertexId(u), VertexId(v), w)
            .map_err(|e| perr(ln, e.to_string()))?;
    }
    let m = g.edge_count();
    let mut out_configs = Vec::new();
    for (name, ln, records) in configs {
        let mut seen = vec![false; m];
        let mut c = Configuration::uniform(m, Orientation::TowardV);
        for (e, o, oln) in records {
            if e as usize >= m {
                return Err(perr(oln, format!("unknown edge {e}")));
            }
            if std::mem::replace(&mut seen[e as usize], true) {
                return Err(perr(oln, format!("edge {e} oriented twice")));
            }
            c.set(EdgeId(e), o);
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(perr(
                ln,
                format!("config '{name}' does not orient edge {missing}"),
            ));
        }
        out_configs.push((name, c));
    }
    for (name, e, _) in &ports {
        if e.index() >= m {
            return Err(perr(0, format!("port '{name}' refers to unknown edge {e}")));
        }
    }
    if let Some(t) = target {
        g.check_edge(t).map_err(|e| perr(0, e.to_string()))?;
    }
    let n = g.vertex_count();
    for &(v, _) in &credits {
        g.check_vertex(v).map_err(|e| perr(0, e.to_string()))?;
    }
    let mut out_bags = Vec::new();
    for (expect, (&i, vs)) in bags.iter().enumerate() {
        if i as usize != expect {
            return Err(perr(
                0,
                format!("bag indices must be dense; expected {expect}, found {i}"),
            ));
        }
        let mut bag = Vec::new();
        for &v in vs {
            g.check_vertex(VertexId(v))
                .map_err(|e| perr(0, e.to_string()))?;
            bag.push(VertexId(v));
        }
        out_bags.push(bag);
    }
    let drawing = if layers.is_empty() {
        None
    } else {
        if layers.len() != n || layers.keys().enumerate().any(|(i, &v)| i as u32 != v) {
            return Err(perr(
                0,
                "layer records must cover every vertex exactly once",
            ));
        }
        let mut d = Drawing::new();
        for &(l, x, y, _) in layers.values() {
            d.push(l, x, y);
        }
        Some(d)
    };
    Ok(Document {
        graph: g,
        configs: out_configs,
        ports,
        credits,
        target,
        bags: out_bags,
        drawing,
        backmap_vertices: bm_v,
        backmap_edges: bm_e,
    })
}

/// Canonical rendering; `parse(&print(d)) == d` for every document.
pub fn print(d: &Document) -> String {
    let g = &d.graph;
    let mut s = String::new();
    for v in g.vertices() {
        writeln!(s, "v {} {}", v, g.min_inflow(v)).unwrap();
    }
    for e in g.edge_ids() {
        let ed = g.edge(e);
        writeln!(s, "e {} {} {} {}", e, ed.u, ed.v, ed.weight).unwrap();
    }
    for (name, e, w) in &d.ports {
        writeln!(s, "port {name} {e} {w}").unwrap();
    }
    for (v, a) in &d.credits {
        writeln!(s, "credit {v} {a}").unwrap();
    }
    if let Some(t) = d.target {
        writeln!(s, "target {t}").unwrap();
    }
    for (i, bag) in d.bags.iter().enumerate() {
        write!(s, "bag {i}").unwrap();
        for v in bag {
            write!(s, " {v}").unwrap();
        }
        s.push('\n');
    }
    if let Some(dr) = &d.drawing {
        for (i, (&l, &(x, y))) in dr.layer.iter().zip(&dr.pos).enumerate() {
            writeln!(s, "layer {i} {l} {x:?} {y:?}").unwrap();
        }
    }
    for (v, label) in &d.backmap_vertices {
        writeln!(s, "backmap v {v} {label}").unwrap();
    }
    for (e, label) in &d.backmap_edges {
        writeln!(s, "backmap e {e} {label}").unwrap();
    }
    for (name, c) in &d.configs {
        writeln!(s, "config {name}").unwrap();
        write_orientations(&mut s, c);
    }
    s
}

fn write_orientations(s: &mut String, c: &Configuration) {
    for (i, o) in c.orientations().enumerate() {
        let t = if o == Orientation::TowardU { 'U' } else { 'V' };
        writeln!(s, "o {i} {t}").unwrap();
    }
}

pub fn print_graph(g: &ConstraintGraph) -> String {
    print(&Document::from_graph(g.clone()))
}

/// Whitespace-separated edge ids.
pub fn print_moves(steps: &[EdgeId]) -> String {
    steps
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_moves(text: &str) -> Result<Vec<EdgeId>> {
    strip_comment(text)
        .split_whitespace()
        .map(|t| {
            t.parse::<u32>()
                .map(EdgeId)
                .map_err(|_| perr(1, format!("bad edge id '{t}'")))
        })
        .collect()
}
