//! Gadgets: open constraint graphs with named boundary edges, their
//! exhaustively extracted port behavior, and checkable behavior specs.
//!
//! A gadget's port edge joins one internal vertex to a dedicated boundary
//! vertex of minimum inflow 0, so the outside world is modelled as able to
//! accept or supply any orientation. A port is `In` when it points into the
//! gadget.

mod assembly;
mod behavior;
mod library;

use std::collections::BTreeMap;

pub use assembly::{complete_edges, Assembly, Placed, PlacedPort, Placement};
pub use behavior::{
    gadget_behavior, gadget_behavior_enumerated, verify_behavior, Behavior, BehaviorSpec, Clause,
    PortView, StatePred, DEFAULT_GADGET_LIMIT,
};
pub use library::*;

use crate::drawing::Drawing;
use crate::error::{NclError, Result};
use crate::format::Document;
use crate::graph::{
    validate_restricted_except, Configuration, ConstraintGraph, EdgeId, VertexId, Violation,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PortDir {
    In,
    Out,
}

impl PortDir {
    pub fn flipped(self) -> Self {
        match self {
            PortDir::In => PortDir::Out,
            PortDir::Out => PortDir::In,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Port {
    pub name: String,
    pub edge: EdgeId,
    /// Endpoint inside the gadget.
    pub inner: VertexId,
    /// Dangling endpoint (minimum inflow 0, degree 1).
    pub boundary: VertexId,
    /// 1 for red, 2 for blue.
    pub weight: u64,
}

#[derive(Debug, Clone)]
pub struct Gadget {
    pub name: String,
    pub graph: ConstraintGraph,
    pub ports: Vec<Port>,
    /// The conventional drawn state where there is one, otherwise a
    /// canonical legal configuration.
    pub initial: Configuration,
    pub positions: Vec<(f64, f64)>,
    pub labels: Vec<String>,
    pub edge_labels: Vec<String>,
    /// Internal vertices allowed to violate the AND/OR restriction.
    pub exempt: Vec<VertexId>,
    /// Internal edges with conventional names (the latch's `A`).
    pub named_edges: BTreeMap<String, EdgeId>,
}

impl Gadget {
    pub fn port(&self, name: &str) -> Option<&Port> {
        self.ports.iter().find(|p| p.name == name)
    }

    pub fn port_names(&self) -> Vec<String> {
        self.ports.iter().map(|p| p.name.clone()).collect()
    }

    /// `name -> edge` map of the ports.
    pub fn port_edges(&self) -> BTreeMap<String, EdgeId> {
        self.ports
            .iter()
            .map(|p| (p.name.clone(), p.edge))
            .collect()
    }

    pub fn port_weights(&self) -> BTreeMap<String, u64> {
        self.ports
            .iter()
            .map(|p| (p.name.clone(), p.weight))
            .collect()
    }

    pub fn port_dir(&self, c: &Configuration, p: &Port) -> PortDir {
        if self.graph.head(c, p.edge) == p.inner {
            PortDir::In
        } else {
            PortDir::Out
        }
    }

    pub fn named_edge(&self, name: &str) -> Option<EdgeId> {
        self.named_edges.get(name).copied()
    }

    pub fn boundary_vertices(&self) -> Vec<VertexId> {
        self.ports.iter().map(|p| p.boundary).collect()
    }

    pub fn internal_vertices(&self) -> Vec<VertexId> {
        let b = self.boundary_vertices();
        self.graph.vertices().filter(|v| !b.contains(v)).collect()
    }

    /// Restricted-logic violations among internal vertices that are not
    /// explicitly exempt.
    pub fn restricted_violations(&self) -> Vec<Violation> {
        let mut skip = self.boundary_vertices();
        skip.extend(self.exempt.iter().copied());
        validate_restricted_except(&self.graph, &skip)
    }

    /// Same gadget with ports renamed through `map` (names not in the map
    /// are kept).
    pub fn renamed(&self, map: &BTreeMap<String, String>) -> Result<Gadget> {
        let mut g = self.clone();
        for p in &mut g.ports {
            if let Some(n) = map.get(&p.name) {
                p.name = n.clone();
            }
        }
        let mut names = g.port_names();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(NclError::Gadget(
                "port renaming produced duplicate names".into(),
            ));
        }
        Ok(g)
    }

    /// The gadget's coordinates as a single-layer drawing.
    pub fn drawing(&self) -> Drawing {
        Drawing {
            layer: vec![0; self.positions.len()],
            pos: self.positions.clone(),
        }
    }

    /// The core text format plus `port` records, the initial state as the
    /// `initial` configuration, and vertex labels as back-map records.
    pub fn to_document(&self) -> Document {
        let mut d =
            Document::from_graph(self.graph.clone()).with_config("initial", self.initial.clone());
        d.ports = self
            .ports
            .iter()
            .map(|p| (p.name.clone(), p.edge, p.weight))
            .collect();
        d.drawing = Some(self.drawing());
        d.backmap_vertices = self
            .labels
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(i, l)| (VertexId(i as u32), l.clone()))
            .collect();
        d.backmap_edges = self
            .edge_labels
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(i, l)| (EdgeId(i as u32), l.clone()))
            .collect();
        d
    }

    /// Bounding box of the drawing: `(min_x, min_y, max_x, max_y)`.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut b = (
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        );
        for &(x, y) in &self.positions {
            b = (b.0.min(x), b.1.min(y), b.2.max(x), b.3.max(y));
        }
        b
    }
}

/// Splices port `p1` of `g1` with port `p2` of `g2` into one internal edge.
/// The remaining ports keep their names, or get prefixed by the gadget
/// names (`a.`/`b.` when those coincide) if any two would collide.
pub fn attach(g1: &Gadget, p1: &str, g2: &Gadget, p2: &str) -> Result<Gadget> {
    let a = g1
        .port(p1)
        .ok_or_else(|| NclError::Gadget(format!("{} has no port {p1}", g1.name)))?;
    let b = g2
        .port(p2)
        .ok_or_else(|| NclError::Gadget(format!("{} has no port {p2}", g2.name)))?;
    if a.weight != b.weight {
        return Err(NclError::Gadget(format!(
            "cannot splice weight {} with weight {}",
            a.weight, b.weight
        )));
    }
    let rest1: Vec<&Port> = g1.ports.iter().filter(|p| p.name != p1).collect();
    let rest2: Vec<&Port> = g2.ports.iter().filter(|p| p.name != p2).collect();
    let collide = rest1.iter().any(|p| rest2.iter().any(|q| q.name == p.name));
    let (pre1, pre2) = match (collide, g1.name == g2.name) {
        (false, _) => (String::new(), String::new()),
        (true, false) => (format!("{}.", g1.name), format!("{}.", g2.name)),
        (true, true) => ("a.".to_string(), "b.".to_string()),
    };
    let mut asm = Assembly::new();
    let b1 = g1.bounds();
    let b2 = g2.bounds();
    let shift = Placement::at(b1.2 - b2.0 + 1.0, 0.0);
    let x1 = asm.place(g1, &format!("{}/", g1.name), &Placement::identity());
    let x2 = asm.place(g2, &format!("{}/", g2.name), &shift);
    asm.join(x1.port(p1), x2.port(p2))?;
    for (pre, rest, placed) in [(&pre1, &rest1, &x1), (&pre2, &rest2, &x2)] {
        for p in rest.iter() {
            let pp = placed.port(&p.name);
            asm.open_port(
                &format!("{pre}{}", p.name),
                pp.inner,
                pp.weight,
                pp.stub,
                pp.initial,
            );
        }
    }
    asm.into_gadget(&format!("{}+{}", g1.name, g2.name))
}
