//! Exact reachability analysis by composing port automata.
//!
//! A region `R` of vertices is summarized by the legal orientations of the
//! edges touching it, grouped into classes: two orientations are in the
//! same class when internal moves (flips of edges with both endpoints in
//! `R`) connect them. Boundary edges are the ports. Because every single
//! edge reversal can be undone, the classes of the whole graph are exactly
//! the connected components of its configuration graph, and they can be
//! built one vertex at a time without ever enumerating the full space.

use std::collections::HashMap;

use crate::error::{NclError, Result};
use crate::graph::{Configuration, ConstraintGraph, EdgeId, Orientation, VertexId};

pub const DEFAULT_MAX_PRODUCT: usize = 1 << 23;
/// Ports are packed into one machine word.
pub const MAX_PORTS: usize = 64;
/// Two flag bits per target edge.
pub const MAX_TARGETS: usize = 32;

#[derive(Debug, Clone)]
struct Class {
    /// Orientation bits of the ports (bit i = port i is TowardU).
    pv: u64,
    /// For each target edge that is already internal: bit 2t set if the
    /// class contains a member with the target TowardV, bit 2t+1 if TowardU.
    flags: u64,
}

/// The classes of a region and the port moves between them.
#[derive(Debug, Clone)]
pub struct PortAutomaton {
    ports: Vec<EdgeId>,
    classes: Vec<Class>,
    /// Per class: sorted, deduplicated `(port index, destination class)`.
    moves: Vec<Vec<(u8, u32)>>,
    region: Vec<bool>,
    targets: Vec<EdgeId>,
    tracked: Vec<u32>,
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u32).collect())
    }
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[x as usize];
            self.0[x as usize] = self.0[p as usize];
            x = p;
        }
        x
    }
    fn union(&mut self, a: u32, b: u32) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.0[hi as usize] = lo;
        }
    }
}

impl PortAutomaton {
    /// The automaton of the empty region.
    pub fn empty(g: &ConstraintGraph, targets: &[EdgeId], tracked: usize) -> Result<Self> {
        if targets.len() > MAX_TARGETS {
            return Err(NclError::LimitExceeded {
                what: "target edge",
                limit: MAX_TARGETS as u64,
            });
        }
        for &t in targets {
            g.check_edge(t)?;
        }
        Ok(PortAutomaton {
            ports: Vec::new(),
            classes: vec![Class { pv: 0, flags: 0 }],
            moves: vec![Vec::new()],
            region: vec![false; g.vertex_count()],
            targets: targets.to_vec(),
            tracked: vec![0; tracked],
        })
    }

    pub fn ports(&self) -> &[EdgeId] {
        &self.ports
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn port_vector(&self, class: usize) -> Vec<Orientation> {
        let pv = self.classes[class].pv;
        (0..self.ports.len())
            .map(|i| {
                if pv >> i & 1 == 1 {
                    Orientation::TowardU
                } else {
                    Orientation::TowardV
                }
            })
            .collect()
    }

    /// `(port index, destination class)` pairs leaving `class`.
    pub fn moves(&self, class: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.moves[class]
            .iter()
            .map(|&(p, d)| (p as usize, d as usize))
    }

    /// Class of the `i`-th tracked configuration.
    pub fn tracked_class(&self, i: usize) -> usize {
        self.tracked[i] as usize
    }

    /// Orientations of target `t` present in `class`, once the target is
    /// internal to the region: `(TowardV seen, TowardU seen)`.
    pub fn target_orientations(&self, class: usize, t: usize) -> (bool, bool) {
        let f = self.classes[class].flags >> (2 * t);
        (f & 1 == 1, f & 2 == 2)
    }

    /// Adds vertex `v` to the region. `tracked` must list the same
    /// configurations, in the same order, at every step.
    pub fn absorb(
        &mut self,
        g: &ConstraintGraph,
        v: VertexId,
        tracked: &[Configuration],
        max_product: usize,
    ) -> Result<()> {
        g.check_vertex(v)?;
        if self.region[v.index()] {
            return Err(NclError::InvalidInstance(format!(
                "vertex {v} absorbed twice"
            )));
        }
        let port_index: HashMap<EdgeId, usize> = self
            .ports
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i))
            .collect();
        let inc = g.incident(v);
        // (edge, R port index or None, whether TowardU means into v)
        let mut shared: Vec<(EdgeId, usize, bool)> = Vec::new();
        let mut fresh: Vec<(EdgeId, bool)> = Vec::new();
        for &e in inc {
            let into_v_when_u = g.edge(e).u == v;
            match port_index.get(&e) {
                Some(&i) => shared.push((e, i, into_v_when_u)),
                None => fresh.push((e, into_v_when_u)),
            }
        }
        let min = g.min_inflow(v);
        let inflow_of = |pv: u64, x: u64| -> u64 {
            let mut s = 0;
            for &(e, i, uv) in &shared {
                if (pv >> i & 1 == 1) == uv {
                    s += g.edge(e).weight;
                }
            }
            for (j, &(e, uv)) in fresh.iter().enumerate() {
                if (x >> j & 1 == 1) == uv {
                    s += g.edge(e).weight;
                }
            }
            s
        };
        if fresh.len() > 20 {
            return Err(NclError::LimitExceeded {
                what: "vertex degree",
                limit: 20,
            });
        }
        let mut ids: HashMap<(u32, u64), u32> = HashMap::new();
        let mut members: Vec<(u32, u64)> = Vec::new();
        for (a, cls) in self.classes.iter().enumerate() {
            for x in 0..(1u64 << fresh.len()) {
                if inflow_of(cls.pv, x) >= min {
                    ids.insert((a as u32, x), members.len() as u32);
                    members.push((a as u32, x));
                    if members.len() > max_product {
                        return Err(NclError::LimitExceeded {
                            what: "product state",
                            limit: max_product as u64,
                        });
                    }
                }
            }
        }
        let shared_ports: Vec<usize> = shared.iter().map(|s| s.1).collect();
        let mut uf = UnionFind::new(members.len());
        for (p, &(a, x)) in members.iter().enumerate() {
            for &(port, dest) in &self.moves[a as usize] {
                if shared_ports.contains(&(port as usize)) {
                    if let Some(&q) = ids.get(&(dest, x)) {
                        uf.union(p as u32, q);
                    }
                }
            }
        }
        let mut class_of = vec![u32::MAX; members.len()];
        let mut count = 0u32;
        for p in 0..members.len() {
            let r = uf.find(p as u32) as usize;
            if class_of[r] == u32::MAX {
                class_of[r] = count;
                count += 1;
            }
            class_of[p] = class_of[r];
        }
        // New port list, sorted by edge id.
        let mut new_ports: Vec<(EdgeId, Source)> = Vec::new();
        for (i, &e) in self.ports.iter().enumerate() {
            if !shared_ports.contains(&i) {
                new_ports.push((e, Source::Old(i)));
            }
        }
        for (j, &(e, _)) in fresh.iter().enumerate() {
            new_ports.push((e, Source::Fresh(j)));
        }
        new_ports.sort_by_key(|p| p.0);
        if new_ports.len() > MAX_PORTS {
            return Err(NclError::LimitExceeded {
                what: "port",
                limit: MAX_PORTS as u64,
            });
        }
        let target_bits: Vec<(usize, usize)> = self
            .targets
            .iter()
            .enumerate()
            .filter_map(|(t, e)| {
                port_index
                    .get(e)
                    .filter(|i| shared_ports.contains(i))
                    .map(|&i| (t, i))
            })
            .collect();
        let mut classes = vec![Class { pv: 0, flags: 0 }; count as usize];
        let mut seen = vec![false; count as usize];
        for (p, &(a, x)) in members.iter().enumerate() {
            let c = class_of[p] as usize;
            let old = &self.classes[a as usize];
            let mut flags = old.flags;
            for &(t, i) in &target_bits {
                flags |= if old.pv >> i & 1 == 1 { 2 } else { 1 } << (2 * t);
            }
            classes[c].flags |= flags;
            if !seen[c] {
                seen[c] = true;
                let mut pv = 0u64;
                for (k, (_, src)) in new_ports.iter().enumerate() {
                    let bit = match *src {
                        Source::Old(i) => old.pv >> i & 1,
                        Source::Fresh(j) => x >> j & 1,
                    };
                    pv |= bit << k;
                }
                classes[c].pv = pv;
            }
        }
        let mut moves: Vec<Vec<(u8, u32)>> = vec![Vec::new(); count as usize];
        let old_to_new: HashMap<usize, usize> = new_ports
            .iter()
            .enumerate()
            .filter_map(|(k, (_, s))| match s {
                Source::Old(i) => Some((*i, k)),
                Source::Fresh(_) => None,
            })
            .collect();
        let fresh_to_new: Vec<usize> = (0..fresh.len())
            .map(|j| {
                new_ports
                    .iter()
                    .position(|(_, s)| *s == Source::Fresh(j))
                    .unwrap()
            })
            .collect();
        for (p, &(a, x)) in members.iter().enumerate() {
            let c = class_of[p];
            for &(port, dest) in &self.moves[a as usize] {
                if let Some(&k) = old_to_new.get(&(port as usize)) {
                    let q = ids[&(dest, x)];
                    moves[c as usize].push((k as u8, class_of[q as usize]));
                }
            }
            for (j, &k) in fresh_to_new.iter().enumerate() {
                if let Some(&q) = ids.get(&(a, x ^ (1 << j))) {
                    moves[c as usize].push((k as u8, class_of[q as usize]));
                }
            }
        }
        for m in &mut moves {
            m.sort_unstable();
            m.dedup();
        }
        for (i, cfg) in tracked.iter().enumerate() {
            let a = self.tracked[i];
            let mut x = 0u64;
            for (j, &(e, _)) in fresh.iter().enumerate() {
                if cfg.get(e) == Orientation::TowardU {
                    x |= 1 << j;
                }
            }
            let p = ids.get(&(a, x)).ok_or(NclError::IllegalConfiguration(v))?;
            self.tracked[i] = class_of[*p as usize];
        }
        self.ports = new_ports.into_iter().map(|p| p.0).collect();
        self.classes = classes;
        self.moves = moves;
        self.region[v.index()] = true;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Source {
    Old(usize),
    Fresh(usize),
}

/// Greedy vertex order keeping the number of open ports small: repeatedly
/// take the vertex that closes the most ports net of the ones it opens,
/// ties by lowest id.
pub fn greedy_order(g: &ConstraintGraph) -> Vec<VertexId> {
    let n = g.vertex_count();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    // touching[v] = number of edges from v into the processed set
    let mut touching = vec![0i64; n];
    for _ in 0..n {
        let mut best: Option<(i64, usize)> = None;
        for v in 0..n {
            if done[v] {
                continue;
            }
            let deg = g.degree(VertexId(v as u32)) as i64;
            let gain = 2 * touching[v] - deg;
            // prefer vertices adjacent to the region, so the frontier stays connected
            let key = gain * 2 + (touching[v] > 0) as i64;
            if best.is_none_or(|(k, _)| key > k) {
                best = Some((key, v));
            }
        }
        let (_, v) = best.unwrap();
        done[v] = true;
        order.push(VertexId(v as u32));
        for &e in g.incident(VertexId(v as u32)) {
            let o = g.edge(e).other(VertexId(v as u32));
            touching[o.index()] += 1;
        }
    }
    order
}

/// Components of the configuration graph, restricted to what the tracked
/// configurations and targets need.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub automaton: PortAutomaton,
}

impl Analysis {
    /// Whether tracked configurations `a` and `b` are mutually reachable.
    pub fn connected(&self, a: usize, b: usize) -> bool {
        self.automaton.tracked_class(a) == self.automaton.tracked_class(b)
    }

    /// Whether target `t` can be brought to orientation `o` from tracked
    /// configuration `a`.
    pub fn target_reachable(&self, a: usize, t: usize, o: Orientation) -> bool {
        let (v, u) = self
            .automaton
            .target_orientations(self.automaton.tracked_class(a), t);
        match o {
            Orientation::TowardV => v,
            Orientation::TowardU => u,
        }
    }

    pub fn components(&self) -> usize {
        self.automaton.class_count()
    }
}

/// Runs the composition over the whole graph in `order` (every vertex once).
pub fn analyze(
    g: &ConstraintGraph,
    order: &[VertexId],
    tracked: &[Configuration],
    targets: &[EdgeId],
    max_product: usize,
) -> Result<Analysis> {
    for c in tracked {
        g.check_config(c)?;
        crate::graph::require_legal(g, c)?;
    }
    let mut a = PortAutomaton::empty(g, targets, tracked.len())?;
    for &v in order {
        a.absorb(g, v, tracked, max_product)?;
    }
    if a.region.iter().any(|&r| !r) {
        return Err(NclError::InvalidInstance(
            "vertex order does not cover the graph".into(),
        ));
    }
    Ok(Analysis { automaton: a })
}

/// Region automaton: composition restricted to `region` (the remaining
/// edges become ports).
pub fn region_automaton(
    g: &ConstraintGraph,
    region: &[VertexId],
    tracked: &[Configuration],
    targets: &[EdgeId],
    max_product: usize,
) -> Result<PortAutomaton> {
    let mut a = PortAutomaton::empty(g, targets, tracked.len())?;
    for &v in region {
        a.absorb(g, v, tracked, max_product)?;
    }
    Ok(a)
}

/// Unbounded C2C decision by composition.
pub fn c2c_reachable(
    g: &ConstraintGraph,
    start: &Configuration,
    goal: &Configuration,
) -> Result<bool> {
    let an = analyze(
        g,
        &greedy_order(g),
        &[start.clone(), goal.clone()],
        &[],
        DEFAULT_MAX_PRODUCT,
    )?;
    Ok(an.connected(0, 1))
}

/// Unbounded C2E decision by composition.
pub fn c2e_reachable(g: &ConstraintGraph, start: &Configuration, target: EdgeId) -> Result<bool> {
    let an = analyze(
        g,
        &greedy_order(g),
        std::slice::from_ref(start),
        &[target],
        DEFAULT_MAX_PRODUCT,
    )?;
    Ok(an.target_reachable(0, 0, start.get(target).reversed()))
}
