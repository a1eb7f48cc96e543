//! Graphviz DOT rendering of constraint graphs.
//!
//! Weight-2 (blue) edges are drawn bold, weight-1 (red) edges thin, and any
//! other weight plain with its value as a label. When a configuration is
//! given each edge points at its head; otherwise edges carry no arrowhead.
//! Drawing coordinates become pinned `pos` attributes so `neato -n` keeps
//! the layered layout.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ncl_core::drawing::Drawing;
use ncl_core::format::Document;
use ncl_core::{Configuration, ConstraintGraph, VertexId};

/// Optional decorations for [`export_dot_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct DotOptions<'a> {
    pub drawing: Option<&'a Drawing>,
    pub config: Option<&'a Configuration>,
    pub labels: Option<&'a BTreeMap<VertexId, String>>,
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for ch in s.chars() {
        match ch {
            '"' | '\\' => {
                q.push('\\');
                q.push(ch);
            }
            '\n' => q.push_str("\\n"),
            _ => q.push(ch),
        }
    }
    q.push('"');
    q
}

pub fn export_dot(g: &ConstraintGraph, drawing: Option<&Drawing>) -> String {
    export_dot_with(
        g,
        DotOptions {
            drawing,
            ..Default::default()
        },
    )
}

pub fn export_dot_with(g: &ConstraintGraph, opts: DotOptions<'_>) -> String {
    let mut s = String::from("digraph ncl {\n");
    if g.vertex_count() == 0 {
        s.push_str("}\n");
        return s;
    }
    s.push_str("  node [shape=circle, fontsize=10];\n");
    s.push_str("  edge [arrowsize=0.6];\n");
    for v in g.vertices() {
        let mut label = format!("{}", g.min_inflow(v));
        if let Some(name) = opts.labels.and_then(|m| m.get(&v)) {
            label = format!("{name}\n{label}");
        }
        write!(s, "  v{} [label={}", v, quote(&label)).unwrap();
        if let Some(d) = opts.drawing.filter(|d| d.len() == g.vertex_count()) {
            let (x, y) = d.pos[v.index()];
            write!(
                s,
                ", pos=\"{:.4},{:.4}!\", layer_index={}",
                x,
                y,
                d.layer[v.index()]
            )
            .unwrap();
        }
        s.push_str("];\n");
    }
    for e in g.edge_ids() {
        let ed = g.edge(e);
        let (tail, head, dir) = match opts.config {
            Some(c) => (g.tail(c, e), g.head(c, e), "forward"),
            None => (ed.u, ed.v, "none"),
        };
        let style = match ed.weight {
            1 => "color=red, penwidth=1".to_string(),
            2 => "color=blue, style=bold, penwidth=3".to_string(),
            w => format!("color=black, label=\"{w}\""),
        };
        writeln!(s, "  v{tail} -> v{head} [id=\"e{e}\", dir={dir}, {style}];").unwrap();
    }
    s.push_str("}\n");
    s
}

/// A document rendered with its drawing, its first configuration and its
/// vertex back-map labels.
pub fn export_document(d: &Document) -> String {
    export_dot_with(
        &d.graph,
        DotOptions {
            drawing: d.drawing.as_ref(),
            config: d.configs.first().map(|(_, c)| c),
            labels: (!d.backmap_vertices.is_empty()).then_some(&d.backmap_vertices),
        },
    )
}
