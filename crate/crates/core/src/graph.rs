//! Constraint graphs, configurations and the legality semantics every solver
//! in the crate builds on.
//!
//! A constraint graph has a minimum inflow per vertex and a positive weight per
//! edge. A configuration orients every edge; it is legal when each vertex
//! receives at least its minimum inflow from the edges pointing at it.
//! Orientations are stored relative to the edge's endpoint order, so reversing
//! an edge is a single bit flip.

use std::fmt;

use crate::error::{NclError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: u64,
}

impl Edge {
    /// The endpoint other than `x`. For an edge not incident to `x` this
    /// returns `u`.
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Vertex-weighted, edge-weighted multigraph. Ids are dense and assigned in
/// insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintGraph {
    min_inflow: Vec<u64>,
    edges: Vec<Edge>,
    incident: Vec<Vec<EdgeId>>,
}

impl ConstraintGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, min_inflow: u64) -> VertexId {
        let id = VertexId(self.min_inflow.len() as u32);
        self.min_inflow.push(min_inflow);
        self.incident.push(Vec::new());
        id
    }

    /// Adds an edge `u -- v`. Parallel edges are allowed; self-loops and
    /// zero weights are rejected.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, weight: u64) -> Result<EdgeId> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(NclError::SelfLoop(u));
        }
        if weight == 0 {
            return Err(NclError::ZeroWeight);
        }
        let id = EdgeId(self.edges.len() as u32);
        self.edges.push(Edge { u, v, weight });
        self.incident[u.index()].push(id);
        self.incident[v.index()].push(id);
        Ok(id)
    }

    pub fn set_min_inflow(&mut self, v: VertexId, min_inflow: u64) -> Result<()> {
        self.check_vertex(v)?;
        self.min_inflow[v.index()] = min_inflow;
        Ok(())
    }

    pub fn set_weight(&mut self, e: EdgeId, weight: u64) -> Result<()> {
        self.check_edge(e)?;
        if weight == 0 {
            return Err(NclError::ZeroWeight);
        }
        self.edges[e.index()].weight = weight;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.min_inflow.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.min_inflow.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn min_inflow(&self, v: VertexId) -> u64 {
        self.min_inflow[v.index()]
    }

    /// Incident edges of `v`, in insertion order, with multiplicity.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incident[v.index()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident[v.index()].len()
    }

    pub fn max_degree(&self) -> usize {
        self.incident.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.index() < self.min_inflow.len()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(NclError::UnknownVertex(v))
        }
    }

    pub fn check_edge(&self, e: EdgeId) -> Result<()> {
        if e.index() < self.edges.len() {
            Ok(())
        } else {
            Err(NclError::UnknownEdge(e))
        }
    }

    pub fn check_config(&self, c: &Configuration) -> Result<()> {
        if c.len() == self.edges.len() {
            Ok(())
        } else {
            Err(NclError::DomainMismatch {
                expected: self.edges.len(),
                got: c.len(),
            })
        }
    }

    /// The vertex edge `e` points at under `c`.
    #[inline]
    pub fn head(&self, c: &Configuration, e: EdgeId) -> VertexId {
        let edge = &self.edges[e.index()];
        match c.get(e) {
            Orientation::TowardU => edge.u,
            Orientation::TowardV => edge.v,
        }
    }

    /// The vertex edge `e` points away from under `c`.
    #[inline]
    pub fn tail(&self, c: &Configuration, e: EdgeId) -> VertexId {
        let edge = &self.edges[e.index()];
        match c.get(e) {
            Orientation::TowardU => edge.v,
            Orientation::TowardV => edge.u,
        }
    }

    /// The orientation of `e` that points it into `x`.
    pub fn toward(&self, e: EdgeId, x: VertexId) -> Orientation {
        if self.edges[e.index()].u == x {
            Orientation::TowardU
        } else {
            Orientation::TowardV
        }
    }

    /// Sum of incident weights with multiplicity; the largest inflow `v` can
    /// ever receive.
    pub fn total_incident_weight(&self, v: VertexId) -> Result<u64> {
        self.incident[v.index()].iter().try_fold(0u64, |acc, &e| {
            acc.checked_add(self.edges[e.index()].weight)
                .ok_or(NclError::Overflow("incident weight"))
        })
    }

    /// Inflow of `v` without bounds or domain checks.
    #[inline]
    pub(crate) fn inflow_unchecked(&self, c: &Configuration, v: VertexId) -> u64 {
        let mut total = 0u64;
        for &e in &self.incident[v.index()] {
            if self.head(c, e) == v {
                total = total.saturating_add(self.edges[e.index()].weight);
            }
        }
        total
    }

    /// Whether reversing `e` in the legal configuration `c` keeps it legal.
    /// Only the current head of `e` loses inflow.
    #[inline]
    pub(crate) fn can_reverse(&self, c: &Configuration, e: EdgeId) -> bool {
        let h = self.head(c, e);
        let w = self.edges[e.index()].weight;
        self.inflow_unchecked(c, h) >= self.min_inflow[h.index()].saturating_add(w)
    }

    /// Rejects graphs whose weight sums do not fit in `u64`.
    pub fn check_arithmetic(&self) -> Result<()> {
        for v in self.vertices() {
            self.total_incident_weight(v)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    TowardU,
    TowardV,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::TowardU => Orientation::TowardV,
            Orientation::TowardV => Orientation::TowardU,
        }
    }
}

/// One orientation bit per edge; bit set means `TowardU`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    bits: Vec<u64>,
    len: usize,
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| {
                if self.get(EdgeId(i as u32)) == Orientation::TowardU {
                    'U'
                } else {
                    'V'
                }
            })
            .collect();
        write!(f, "Configuration({s})")
    }
}

impl Configuration {
    pub fn uniform(len: usize, o: Orientation) -> Self {
        let words = len.div_ceil(64);
        let mut c = Configuration {
            bits: vec![0; words],
            len,
        };
        if o == Orientation::TowardU {
            for i in 0..len {
                c.set(EdgeId(i as u32), Orientation::TowardU);
            }
        }
        c
    }

    pub fn from_orientations(os: &[Orientation]) -> Self {
        let mut c = Self::uniform(os.len(), Orientation::TowardV);
        for (i, &o) in os.iter().enumerate() {
            c.set(EdgeId(i as u32), o);
        }
        c
    }

    /// Builds a configuration of `len` edges where edge `i` points toward
    /// `U` iff bit `i` of `mask` is set. Only meaningful for `len <= 64`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        let mut c = Self::uniform(len, Orientation::TowardV);
        if len > 0 {
            let keep = if len >= 64 {
                u64::MAX
            } else {
                (1u64 << len) - 1
            };
            c.bits[0] = mask & keep;
        }
        c
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, e: EdgeId) -> Orientation {
        let i = e.index();
        if (self.bits[i / 64] >> (i % 64)) & 1 == 1 {
            Orientation::TowardU
        } else {
            Orientation::TowardV
        }
    }

    #[inline]
    pub fn set(&mut self, e: EdgeId, o: Orientation) {
        let i = e.index();
        let m = 1u64 << (i % 64);
        match o {
            Orientation::TowardU => self.bits[i / 64] |= m,
            Orientation::TowardV => self.bits[i / 64] &= !m,
        }
    }

    #[inline]
    pub fn flip(&mut self, e: EdgeId) {
        let i = e.index();
        self.bits[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn reversed(&self, e: EdgeId) -> Self {
        let mut c = self.clone();
        c.flip(e);
        c
    }

    pub fn orientations(&self) -> impl Iterator<Item = Orientation> + '_ {
        (0..self.len as u32).map(move |i| self.get(EdgeId(i)))
    }

    /// Edges whose orientation differs between `self` and `other`, ascending.
    pub fn differing(&self, other: &Configuration) -> Vec<EdgeId> {
        assert_eq!(self.len, other.len, "configurations of different graphs");
        let mut out = Vec::new();
        for (w, (a, b)) in self.bits.iter().zip(&other.bits).enumerate() {
            let mut x = a ^ b;
            while x != 0 {
                let t = x.trailing_zeros() as usize;
                out.push(EdgeId((w * 64 + t) as u32));
                x &= x - 1;
            }
        }
        out
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    And,
    Or,
    Other,
}

/// Total weight of edges pointing into `v`.
pub fn inflow(g: &ConstraintGraph, c: &Configuration, v: VertexId) -> Result<u64> {
    g.check_vertex(v)?;
    g.check_config(c)?;
    let mut total = 0u64;
    for &e in g.incident(v) {
        if g.head(c, e) == v {
            total = total
                .checked_add(g.edge(e).weight)
                .ok_or(NclError::Overflow("inflow"))?;
        }
    }
    Ok(total)
}

pub fn is_legal(g: &ConstraintGraph, c: &Configuration) -> Result<bool> {
    Ok(first_violation(g, c)?.is_none())
}

/// The lowest-numbered vertex below its minimum inflow, if any.
pub fn first_violation(g: &ConstraintGraph, c: &Configuration) -> Result<Option<VertexId>> {
    g.check_config(c)?;
    for v in g.vertices() {
        if inflow(g, c, v)? < g.min_inflow(v) {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

pub fn require_legal(g: &ConstraintGraph, c: &Configuration) -> Result<()> {
    match first_violation(g, c)? {
        None => Ok(()),
        Some(v) => Err(NclError::IllegalConfiguration(v)),
    }
}

pub fn classify_vertex(g: &ConstraintGraph, v: VertexId) -> Result<VertexKind> {
    g.check_vertex(v)?;
    if g.min_inflow(v) != 2 {
        return Ok(VertexKind::Other);
    }
    let mut ws: Vec<u64> = g.incident(v).iter().map(|&e| g.edge(e).weight).collect();
    ws.sort_unstable();
    Ok(match ws.as_slice() {
        [1, 1, 2] => VertexKind::And,
        [2, 2, 2] => VertexKind::Or,
        _ => VertexKind::Other,
    })
}

/// Edges whose single reversal keeps the legal configuration `c` legal.
pub fn legal_moves(g: &ConstraintGraph, c: &Configuration) -> Result<Vec<EdgeId>> {
    require_legal(g, c)?;
    Ok(g.edge_ids().filter(|&e| g.can_reverse(c, e)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Degree { vertex: VertexId, degree: usize },
    Weight { edge: EdgeId, weight: u64 },
    Kind { vertex: VertexId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Degree { vertex, degree } => {
                write!(f, "vertex {vertex} has degree {degree}")
            }
            Violation::Weight { edge, weight } => write!(f, "edge {edge} has weight {weight}"),
            Violation::Kind { vertex } => write!(f, "vertex {vertex} is neither AND nor OR"),
        }
    }
}

/// Degree, weight and vertex-type checks of restricted constraint logic.
/// Planarity is not checked here.
pub fn validate_restricted(g: &ConstraintGraph) -> Vec<Violation> {
    validate_restricted_except(g, &[])
}

/// As [`validate_restricted`], skipping the listed vertices (typically the
/// boundary vertices of an open gadget).
pub fn validate_restricted_except(g: &ConstraintGraph, skip: &[VertexId]) -> Vec<Violation> {
    let mut out = Vec::new();
    for v in g.vertices() {
        if skip.contains(&v) {
            continue;
        }
        if g.degree(v) != 3 {
            out.push(Violation::Degree {
                vertex: v,
                degree: g.degree(v),
            });
        }
        if classify_vertex(g, v).expect("vertex exists") == VertexKind::Other {
            out.push(Violation::Kind { vertex: v });
        }
    }
    for e in g.edge_ids() {
        let w = g.edge(e).weight;
        if w != 1 && w != 2 {
            out.push(Violation::Weight { edge: e, weight: w });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(min: u64, weights: &[u64]) -> (ConstraintGraph, VertexId) {
        let mut g = ConstraintGraph::new();
        let x = g.add_vertex(min);
        for &w in weights {
            let b = g.add_vertex(0);
            g.add_edge(x, b, w).unwrap();
        }
        (g, x)
    }

    fn count_legal(g: &ConstraintGraph) -> usize {
        let m = g.edge_count();
        (0..1u64 << m)
            .filter(|&mask| is_legal(g, &Configuration::from_mask(m, mask)).unwrap())
            .count()
    }

    #[test]
    fn isolated_vertex_has_zero_inflow() {
        let mut g = ConstraintGraph::new();
        let v = g.add_vertex(3);
        assert_eq!(
            inflow(&g, &Configuration::uniform(0, Orientation::TowardV), v).unwrap(),
            0
        );
    }

    #[test]
    fn and_inflow_two_light_edges() {
        let (g, x) = single(2, &[1, 1, 2]);
        // edges point toward v (the boundary side) by default; turn the light ones inward
        let mut c = Configuration::uniform(3, Orientation::TowardV);
        c.set(EdgeId(0), Orientation::TowardU);
        c.set(EdgeId(1), Orientation::TowardU);
        assert_eq!(inflow(&g, &c, x).unwrap(), 2);
        let c = Configuration::uniform(3, Orientation::TowardU);
        assert_eq!(inflow(&g, &c, x).unwrap(), 4);
    }

    #[test]
    fn or_all_inward_is_six() {
        let (g, x) = single(2, &[2, 2, 2]);
        assert_eq!(
            inflow(&g, &Configuration::uniform(3, Orientation::TowardU), x).unwrap(),
            6
        );
    }

    #[test]
    fn and_and_or_legal_counts() {
        assert_eq!(count_legal(&single(2, &[1, 1, 2]).0), 5);
        assert_eq!(count_legal(&single(2, &[2, 2, 2]).0), 7);
    }

    #[test]
    fn classification() {
        let (g, x) = single(2, &[2, 2, 2]);
        assert_eq!(classify_vertex(&g, x).unwrap(), VertexKind::Or);
        let (g, x) = single(2, &[2, 1, 1]);
        assert_eq!(classify_vertex(&g, x).unwrap(), VertexKind::And);
        let (g, x) = single(3, &[1, 1, 2]);
        assert_eq!(classify_vertex(&g, x).unwrap(), VertexKind::Other);
        assert!(classify_vertex(&g, VertexId(99)).is_err());
    }

    #[test]
    fn or_with_one_inward_edge() {
        let (g, _) = single(2, &[2, 2, 2]);
        let c = Configuration::from_orientations(&[
            Orientation::TowardU,
            Orientation::TowardV,
            Orientation::TowardV,
        ]);
        assert_eq!(legal_moves(&g, &c).unwrap(), vec![EdgeId(1), EdgeId(2)]);
    }

    #[test]
    fn zero_minimums_allow_everything() {
        let (g, _) = single(0, &[3, 1, 4]);
        let c = Configuration::uniform(3, Orientation::TowardV);
        assert_eq!(legal_moves(&g, &c).unwrap().len(), 3);
    }

    #[test]
    fn builder_rejections() {
        let mut g = ConstraintGraph::new();
        let a = g.add_vertex(0);
        assert_eq!(g.add_edge(a, a, 1), Err(NclError::SelfLoop(a)));
        let b = g.add_vertex(0);
        assert_eq!(g.add_edge(a, b, 0), Err(NclError::ZeroWeight));
        assert!(g.add_edge(a, VertexId(7), 1).is_err());
        // parallel edges are fine and count twice toward the degree
        g.add_edge(a, b, 1).unwrap();
        g.add_edge(a, b, 1).unwrap();
        assert_eq!(g.degree(a), 2);
    }

    #[test]
    fn domain_mismatch() {
        let (g, x) = single(2, &[2, 2, 2]);
        let c = Configuration::uniform(2, Orientation::TowardU);
        assert!(matches!(
            inflow(&g, &c, x),
            Err(NclError::DomainMismatch { .. })
        ));
        assert!(is_legal(&g, &c).is_err());
    }

    #[test]
    fn illegal_input_to_legal_moves() {
        let (g, _) = single(2, &[2, 2, 2]);
        let c = Configuration::uniform(3, Orientation::TowardV);
        assert!(matches!(
            legal_moves(&g, &c),
            Err(NclError::IllegalConfiguration(_))
        ));
    }

    #[test]
    fn overflow_is_reported() {
        let mut g = ConstraintGraph::new();
        let a = g.add_vertex(0);
        let b = g.add_vertex(0);
        g.add_edge(a, b, u64::MAX).unwrap();
        g.add_edge(a, b, 1).unwrap();
        let c = Configuration::uniform(2, Orientation::TowardU);
        assert_eq!(inflow(&g, &c, a), Err(NclError::Overflow("inflow")));
        assert!(g.check_arithmetic().is_err());
    }

    #[test]
    fn restricted_violations() {
        let (g, x) = single(2, &[1, 1, 2, 2]);
        let report = validate_restricted(&g);
        assert!(report.contains(&Violation::Degree {
            vertex: x,
            degree: 4
        }));
        let (g, _) = single(2, &[3, 2, 2]);
        assert!(report_has_weight(&validate_restricted(&g), EdgeId(0)));
    }

    fn report_has_weight(r: &[Violation], e: EdgeId) -> bool {
        r.iter()
            .any(|v| matches!(v, Violation::Weight { edge, .. } if *edge == e))
    }

    #[test]
    fn differing_edges() {
        let a = Configuration::uniform(130, Orientation::TowardV);
        let mut b = a.clone();
        b.flip(EdgeId(3));
        b.flip(EdgeId(129));
        assert_eq!(a.differing(&b), vec![EdgeId(3), EdgeId(129)]);
    }
}
