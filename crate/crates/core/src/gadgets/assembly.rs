//! Building constraint graphs out of placed gadget copies, with drawing
//! coordinates carried along.

use std::collections::BTreeMap;

use crate::error::{NclError, Result};
use crate::graph::{require_legal, Configuration, ConstraintGraph, EdgeId, Orientation, VertexId};
use crate::search::{solve_cgs_bruteforce, SolverLimits};
use crate::treewidth::{dp_cgs_unary, nice_decomposition, DpLimits};

use super::{Gadget, Port, PortDir};

/// Affine map from gadget-local coordinates to the target drawing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub origin: (f64, f64),
    pub ex: (f64, f64),
    pub ey: (f64, f64),
}

impl Placement {
    pub fn identity() -> Self {
        Placement {
            origin: (0.0, 0.0),
            ex: (1.0, 0.0),
            ey: (0.0, 1.0),
        }
    }

    pub fn at(x: f64, y: f64) -> Self {
        Placement {
            origin: (x, y),
            ..Self::identity()
        }
    }

    /// Scale, then rotate counter-clockwise by `angle` radians, then move.
    pub fn new(x: f64, y: f64, scale: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Placement {
            origin: (x, y),
            ex: (scale * c, scale * s),
            ey: (-scale * s, scale * c),
        }
    }

    /// Local axes mapped to arbitrary (non-parallel) vectors.
    pub fn frame(origin: (f64, f64), ex: (f64, f64), ey: (f64, f64)) -> Self {
        Placement { origin, ex, ey }
    }

    pub fn mirrored(self) -> Self {
        Placement {
            ex: (-self.ex.0, -self.ex.1),
            ..self
        }
    }

    pub fn apply(&self, p: (f64, f64)) -> (f64, f64) {
        (
            self.origin.0 + p.0 * self.ex.0 + p.1 * self.ey.0,
            self.origin.1 + p.0 * self.ex.1 + p.1 * self.ey.1,
        )
    }

    pub fn then(&self, outer: &Placement) -> Placement {
        let o = outer.apply(self.origin);
        let lin = |v: (f64, f64)| {
            (
                v.0 * outer.ex.0 + v.1 * outer.ey.0,
                v.0 * outer.ex.1 + v.1 * outer.ey.1,
            )
        };
        Placement {
            origin: o,
            ex: lin(self.ex),
            ey: lin(self.ey),
        }
    }
}

/// Where a placed gadget's ports attach in the assembly.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacedPort {
    pub inner: VertexId,
    pub weight: u64,
    /// Direction of the port in the gadget's own initial configuration.
    pub initial: PortDir,
    /// Drawing position of the (dropped) boundary vertex.
    pub stub: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Placed {
    pub ports: BTreeMap<String, PlacedPort>,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub named_edges: BTreeMap<String, EdgeId>,
}

impl Placed {
    pub fn port(&self, name: &str) -> &PlacedPort {
        self.ports
            .get(name)
            .unwrap_or_else(|| panic!("placed gadget has no port {name}"))
    }
}

/// A graph under construction with per-vertex labels and positions, a
/// working orientation, and groups of gadget-internal edges for local
/// completion.
#[derive(Debug, Clone, Default)]
pub struct Assembly {
    pub graph: ConstraintGraph,
    pub positions: Vec<(f64, f64)>,
    pub labels: Vec<String>,
    pub edge_labels: Vec<String>,
    pub orientation: Vec<Orientation>,
    pub ports: Vec<Port>,
    pub exempt: Vec<VertexId>,
    pub named_edges: BTreeMap<String, EdgeId>,
    /// `(label, internal edges)` of each placed gadget instance.
    pub groups: Vec<(String, Vec<EdgeId>)>,
}

impl Assembly {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, label: impl Into<String>, min: u64, pos: (f64, f64)) -> VertexId {
        self.positions.push(pos);
        self.labels.push(label.into());
        self.graph.add_vertex(min)
    }

    /// Adds an edge oriented toward `head`.
    pub fn edge(&mut self, a: VertexId, b: VertexId, weight: u64, head: VertexId) -> EdgeId {
        let label = format!("{}-{}", self.labels[a.index()], self.labels[b.index()]);
        self.labeled_edge(a, b, weight, head, label)
    }

    pub fn labeled_edge(
        &mut self,
        a: VertexId,
        b: VertexId,
        weight: u64,
        head: VertexId,
        label: impl Into<String>,
    ) -> EdgeId {
        assert!(head == a || head == b, "head must be an endpoint");
        let e = self.graph.add_edge(a, b, weight).expect("assembly edge");
        self.orientation.push(if head == a {
            Orientation::TowardU
        } else {
            Orientation::TowardV
        });
        self.edge_labels.push(label.into());
        e
    }

    /// Opens a port: a fresh inflow-0 boundary vertex joined to `inner`.
    pub fn open_port(
        &mut self,
        name: &str,
        inner: VertexId,
        weight: u64,
        stub: (f64, f64),
        dir: PortDir,
    ) -> EdgeId {
        let b = self.vertex(format!("port:{name}"), 0, stub);
        let head = match dir {
            PortDir::In => inner,
            PortDir::Out => b,
        };
        let e = self.labeled_edge(inner, b, weight, head, format!("port:{name}"));
        self.ports.push(Port {
            name: name.to_string(),
            edge: e,
            inner,
            boundary: b,
            weight,
        });
        e
    }

    /// Copies the internal part of `gadget` (its boundary vertices and port
    /// edges are dropped) with labels prefixed by `prefix`.
    pub fn place(&mut self, gadget: &Gadget, prefix: &str, at: &Placement) -> Placed {
        let g = &gadget.graph;
        let boundary: Vec<bool> = {
            let mut b = vec![false; g.vertex_count()];
            for p in &gadget.ports {
                b[p.boundary.index()] = true;
            }
            b
        };
        let mut map = vec![None; g.vertex_count()];
        let mut vertices = Vec::new();
        for v in g.vertices() {
            if boundary[v.index()] {
                continue;
            }
            let nv = self.vertex(
                format!("{prefix}{}", gadget.labels[v.index()]),
                g.min_inflow(v),
                at.apply(gadget.positions[v.index()]),
            );
            if gadget.exempt.contains(&v) {
                self.exempt.push(nv);
            }
            map[v.index()] = Some(nv);
            vertices.push(nv);
        }
        let port_edges: Vec<EdgeId> = gadget.ports.iter().map(|p| p.edge).collect();
        let mut edges = Vec::new();
        let mut edge_map = BTreeMap::new();
        for e in g.edge_ids() {
            if port_edges.contains(&e) {
                continue;
            }
            let ed = g.edge(e);
            let (a, b) = (map[ed.u.index()].unwrap(), map[ed.v.index()].unwrap());
            let head = if gadget.initial.get(e) == Orientation::TowardU {
                a
            } else {
                b
            };
            let ne = self.labeled_edge(
                a,
                b,
                ed.weight,
                head,
                format!("{prefix}{}", gadget.edge_labels[e.index()]),
            );
            edge_map.insert(e, ne);
            edges.push(ne);
        }
        let mut ports = BTreeMap::new();
        for p in &gadget.ports {
            ports.insert(
                p.name.clone(),
                PlacedPort {
                    inner: map[p.inner.index()].unwrap(),
                    weight: p.weight,
                    initial: gadget.port_dir(&gadget.initial, p),
                    stub: at.apply(gadget.positions[p.boundary.index()]),
                },
            );
        }
        let named_edges = gadget
            .named_edges
            .iter()
            .map(|(k, e)| (k.clone(), edge_map[e]))
            .collect::<BTreeMap<_, _>>();
        for (k, e) in &named_edges {
            self.named_edges.insert(format!("{prefix}{k}"), *e);
        }
        self.groups.push((prefix.to_string(), edges.clone()));
        Placed {
            ports,
            vertices,
            edges,
            named_edges,
        }
    }

    /// Joins two placed ports with one edge, oriented toward the side whose
    /// gadget expects an inward port (the first one when both or neither
    /// do).
    pub fn join(&mut self, a: &PlacedPort, b: &PlacedPort) -> Result<EdgeId> {
        if a.weight != b.weight {
            return Err(NclError::Gadget(format!(
                "port weights differ: {} vs {}",
                a.weight, b.weight
            )));
        }
        let head = if a.initial == PortDir::In || b.initial != PortDir::In {
            a.inner
        } else {
            b.inner
        };
        Ok(self.edge(a.inner, b.inner, a.weight, head))
    }

    /// Joins a placed port to a plain vertex.
    pub fn join_vertex(&mut self, p: &PlacedPort, v: VertexId, head: VertexId) -> EdgeId {
        self.edge(p.inner, v, p.weight, head)
    }

    pub fn configuration(&self) -> Configuration {
        Configuration::from_orientations(&self.orientation)
    }

    /// Repairs the working orientation so it is legal: first re-solving the
    /// internal edges of each gadget instance that touches a violated
    /// vertex (all other edges held fixed), and if that is not enough, all
    /// non-port edges at once.
    pub fn complete(&mut self) -> Result<()> {
        let mut c = self.configuration();
        if crate::graph::is_legal(&self.graph, &c)? {
            return Ok(());
        }
        for gi in 0..self.groups.len() {
            let edges = &self.groups[gi].1;
            let violated = edges.iter().any(|&e| {
                let ed = self.graph.edge(e);
                [ed.u, ed.v]
                    .iter()
                    .any(|&v| self.graph.inflow_unchecked(&c, v) < self.graph.min_inflow(v))
            });
            if violated {
                if let Some(nc) = complete_edges(&self.graph, &c, edges)? {
                    c = nc;
                }
            }
        }
        if crate::graph::is_legal(&self.graph, &c)? {
            self.orientation = c.orientations().collect();
            return Ok(());
        }
        if self.solve_internal().is_err() {
            // the open ports have to change as well
            let all: Vec<EdgeId> = self.graph.edge_ids().collect();
            let nc = complete_edges(&self.graph, &c, &all)?
                .ok_or_else(|| NclError::Gadget("assembly has no legal configuration".into()))?;
            self.orientation = nc.orientations().collect();
        }
        require_legal(&self.graph, &self.configuration())
    }

    /// Replaces the working orientation of every non-port edge by the
    /// lexicographically first legal completion around the current ports.
    pub fn solve_internal(&mut self) -> Result<()> {
        let ports: Vec<EdgeId> = self.ports.iter().map(|p| p.edge).collect();
        let free: Vec<EdgeId> = self
            .graph
            .edge_ids()
            .filter(|e| !ports.contains(e))
            .collect();
        let c = complete_edges(&self.graph, &self.configuration(), &free)?.ok_or_else(|| {
            NclError::Gadget("no legal completion for the current port states".into())
        })?;
        self.orientation = c.orientations().collect();
        Ok(())
    }

    pub fn into_gadget(mut self, name: &str) -> Result<Gadget> {
        self.complete()?;
        let initial = self.configuration();
        Ok(Gadget {
            name: name.to_string(),
            graph: self.graph,
            ports: self.ports,
            initial,
            positions: self.positions,
            labels: self.labels,
            edge_labels: self.edge_labels,
            exempt: self.exempt,
            named_edges: self.named_edges,
        })
    }
}

/// Lexicographically first legal re-orientation of `free` with everything
/// else fixed at `c`, solved on the subgraph the free edges span.
pub fn complete_edges(
    g: &ConstraintGraph,
    c: &Configuration,
    free: &[EdgeId],
) -> Result<Option<Configuration>> {
    let mut local = ConstraintGraph::new();
    let mut map: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let is_free = {
        let mut f = vec![false; g.edge_count()];
        for &e in free {
            f[e.index()] = true;
        }
        f
    };
    let mut verts: Vec<VertexId> = free
        .iter()
        .flat_map(|&e| {
            let ed = g.edge(e);
            [ed.u, ed.v]
        })
        .collect();
    verts.sort();
    verts.dedup();
    for &v in &verts {
        let fixed_in: u64 = g
            .incident(v)
            .iter()
            .filter(|e| !is_free[e.index()] && g.head(c, **e) == v)
            .map(|&e| g.edge(e).weight)
            .sum();
        map.insert(
            v,
            local.add_vertex(g.min_inflow(v).saturating_sub(fixed_in)),
        );
    }
    for &e in free {
        let ed = g.edge(e);
        local.add_edge(map[&ed.u], map[&ed.v], ed.weight)?;
    }
    // backtracking gives the lexicographically first completion; large
    // groups fall back to the tree-decomposition DP
    let sol = match solve_cgs_bruteforce(&local, SolverLimits::default().with_max_states(1 << 18)) {
        Err(NclError::LimitExceeded { .. }) => {
            dp_cgs_unary(&local, &nice_decomposition(&local), DpLimits::default())?
        }
        other => other?,
    };
    let Some(sol) = sol else {
        return Ok(None);
    };
    let mut out = c.clone();
    for (i, &e) in free.iter().enumerate() {
        out.set(e, sol.get(EdgeId(i as u32)));
    }
    Ok(Some(out))
}
