//! Tree decompositions, nice normal form, a min-fill heuristic and the
//! dynamic programs over nice decompositions: two satisfiability variants
//! (orientation masks and saturated inflow vectors) and the bounded
//! reconfiguration DP over reversal orderings.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{NclError, Result};
use crate::graph::{require_legal, Configuration, ConstraintGraph, EdgeId, Orientation, VertexId};
use crate::search::{replay, MoveSequence};

/// Bag tree. `tree_edges` are undirected; `root` fixes the orientation used
/// when converting to nice form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<VertexId>>,
    pub tree_edges: Vec<(usize, usize)>,
    pub root: usize,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<VertexId>>, tree_edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition {
            bags,
            tree_edges,
            root: 0,
        }
    }

    /// Maximum bag size minus one; `-1` for a decomposition without vertices.
    pub fn width(&self) -> isize {
        self.bags
            .iter()
            .map(|b| b.len() as isize)
            .max()
            .unwrap_or(0)
            - 1
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree_edges {
            if a < adj.len() && b < adj.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    Introduce(VertexId),
    Forget(VertexId),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NiceTreeDecomposition {
    pub bags: Vec<Vec<VertexId>>,
    pub kind: Vec<NiceKind>,
    pub children: Vec<Vec<usize>>,
    /// `None` only for the decomposition of a graph without vertices.
    pub root: Option<usize>,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> isize {
        self.bags
            .iter()
            .map(|b| b.len() as isize)
            .max()
            .unwrap_or(0)
            - 1
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Plain decomposition with the same bags and tree.
    pub fn as_decomposition(&self) -> TreeDecomposition {
        let mut edges = Vec::new();
        for (p, cs) in self.children.iter().enumerate() {
            for &c in cs {
                edges.push((p, c));
            }
        }
        TreeDecomposition {
            bags: self.bags.clone(),
            tree_edges: edges,
            root: self.root.unwrap_or(0),
        }
    }

    /// Children before parents.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.bags.len());
        let Some(r) = self.root else { return out };
        let mut stack = vec![(r, false)];
        while let Some((t, done)) = stack.pop() {
            if done {
                out.push(t);
            } else {
                stack.push((t, true));
                for &c in self.children[t].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    fn push(&mut self, bag: Vec<VertexId>, kind: NiceKind, children: Vec<usize>) -> usize {
        self.bags.push(bag);
        self.kind.push(kind);
        self.children.push(children);
        self.bags.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdViolation {
    NotATree,
    UnknownVertex { node: usize, vertex: VertexId },
    UncoveredVertex(VertexId),
    UncoveredEdge(EdgeId),
    Disconnected(VertexId),
    NotNice { node: usize, reason: String },
}

impl std::fmt::Display for TdViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TdViolation::NotATree => write!(f, "bag graph is not a tree"),
            TdViolation::UnknownVertex { node, vertex } => {
                write!(f, "bag {node} names unknown vertex {vertex}")
            }
            TdViolation::UncoveredVertex(v) => write!(f, "vertex {v} is in no bag"),
            TdViolation::UncoveredEdge(e) => {
                write!(f, "no bag contains both endpoints of edge {e}")
            }
            TdViolation::Disconnected(v) => {
                write!(f, "bags containing vertex {v} are not connected")
            }
            TdViolation::NotNice { node, reason } => write!(f, "node {node}: {reason}"),
        }
    }
}

/// Checks the three decomposition conditions (plus well-formedness of the
/// tree itself). An empty report means the decomposition is valid.
pub fn validate_decomposition(g: &ConstraintGraph, td: &TreeDecomposition) -> Vec<TdViolation> {
    let mut out = Vec::new();
    let k = td.bags.len();
    if k == 0 {
        if g.vertex_count() > 0 {
            out.extend(g.vertices().map(TdViolation::UncoveredVertex));
        }
        return out;
    }
    let adj = td.adjacency();
    let is_tree = td.tree_edges.len() == k - 1
        && td.tree_edges.iter().all(|&(a, b)| a < k && b < k && a != b)
        && td.root < k
        && reach(&adj, 0, |_| true).len() == k;
    if !is_tree {
        out.push(TdViolation::NotATree);
        return out;
    }
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for (t, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if !g.contains_vertex(v) {
                out.push(TdViolation::UnknownVertex { node: t, vertex: v });
            } else {
                occurs[v.index()].push(t);
            }
        }
    }
    for v in g.vertices() {
        if occurs[v.index()].is_empty() {
            out.push(TdViolation::UncoveredVertex(v));
        }
    }
    for e in g.edge_ids() {
        let ed = g.edge(e);
        let covered = td
            .bags
            .iter()
            .any(|b| b.contains(&ed.u) && b.contains(&ed.v));
        if !covered {
            out.push(TdViolation::UncoveredEdge(e));
        }
    }
    for v in g.vertices() {
        let occ = &occurs[v.index()];
        if let Some(&first) = occ.first() {
            let inside: BTreeSet<usize> = occ.iter().copied().collect();
            if reach(&adj, first, |t| inside.contains(&t)).len() != inside.len() {
                out.push(TdViolation::Disconnected(v));
            }
        }
    }
    out
}

fn reach(adj: &[Vec<usize>], from: usize, allowed: impl Fn(usize) -> bool) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    seen.insert(from);
    let mut q = VecDeque::from([from]);
    while let Some(t) = q.pop_front() {
        for &s in &adj[t] {
            if allowed(s) && seen.insert(s) {
                q.push_back(s);
            }
        }
    }
    seen
}

/// Validates a nice decomposition: the plain conditions plus the node-kind
/// invariants.
pub fn validate_nice(g: &ConstraintGraph, ntd: &NiceTreeDecomposition) -> Vec<TdViolation> {
    let mut out = validate_decomposition(g, &ntd.as_decomposition());
    if ntd.bags.is_empty() {
        return out;
    }
    if ntd.kind.len() != ntd.bags.len() || ntd.children.len() != ntd.bags.len() {
        out.push(TdViolation::NotNice {
            node: 0,
            reason: "table lengths differ".into(),
        });
        return out;
    }
    for t in 0..ntd.bags.len() {
        let bag = &ntd.bags[t];
        let cs = &ntd.children[t];
        let bad = |r: &str| TdViolation::NotNice {
            node: t,
            reason: r.to_string(),
        };
        match ntd.kind[t] {
            NiceKind::Leaf => {
                if !cs.is_empty() || bag.len() != 1 {
                    out.push(bad("leaf must have one vertex and no children"));
                }
            }
            NiceKind::Introduce(v) => {
                if cs.len() != 1 {
                    out.push(bad("introduce needs exactly one child"));
                    continue;
                }
                let mut expect = ntd.bags[cs[0]].clone();
                if expect.contains(&v) {
                    out.push(bad("introduced vertex already in child"));
                }
                expect.push(v);
                expect.sort();
                if &expect != bag {
                    out.push(bad("introduce bag is not child plus vertex"));
                }
            }
            NiceKind::Forget(v) => {
                if cs.len() != 1 {
                    out.push(bad("forget needs exactly one child"));
                    continue;
                }
                let child = &ntd.bags[cs[0]];
                let expect: Vec<VertexId> = child.iter().copied().filter(|&x| x != v).collect();
                if !child.contains(&v) || &expect != bag {
                    out.push(bad("forget bag is not child minus vertex"));
                }
            }
            NiceKind::Join => {
                if cs.len() != 2 || ntd.bags[cs[0]] != *bag || ntd.bags[cs[1]] != *bag {
                    out.push(bad("join needs two children with identical bags"));
                }
            }
        }
    }
    out
}

/// Converts a valid decomposition to nice form with the same width. The root
/// keeps the original root bag; empty bags are dropped by contraction.
pub fn to_nice(g: &ConstraintGraph, td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    let report = validate_decomposition(g, td);
    if !report.is_empty() {
        return Err(NclError::InvalidDecomposition(report[0].to_string()));
    }
    let mut out = NiceTreeDecomposition::default();
    if td.bags.iter().all(|b| b.is_empty()) {
        return Ok(out);
    }
    // Contract empty bags into a non-empty neighbour-reachable structure:
    // root the tree, then skip empty nodes by re-parenting their children.
    let adj = td.adjacency();
    let root = if td.bags[td.root].is_empty() {
        (0..td.bags.len())
            .find(|&t| !td.bags[t].is_empty())
            .unwrap()
    } else {
        td.root
    };
    let mut parent = vec![usize::MAX; td.bags.len()];
    let mut order = vec![root];
    parent[root] = root;
    let mut i = 0;
    while i < order.len() {
        let t = order[i];
        i += 1;
        for &s in &adj[t] {
            if parent[s] == usize::MAX {
                parent[s] = t;
                order.push(s);
            }
        }
    }
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); td.bags.len()];
    for &t in &order[1..] {
        let mut p = parent[t];
        while td.bags[p].is_empty() {
            p = parent[p];
        }
        if !td.bags[t].is_empty() {
            kids[p].push(t);
        }
    }
    // Process bottom-up; built[t] is the nice node whose bag equals bags[t].
    let mut built = vec![usize::MAX; td.bags.len()];
    for &t in order.iter().rev() {
        if td.bags[t].is_empty() {
            continue;
        }
        let bag = &td.bags[t];
        let mut branches = Vec::new();
        for &c in &kids[t] {
            let mut cur = built[c];
            let mut cur_bag = td.bags[c].clone();
            for &v in td.bags[c].iter().filter(|v| !bag.contains(v)) {
                cur_bag.retain(|&x| x != v);
                cur = out.push(cur_bag.clone(), NiceKind::Forget(v), vec![cur]);
            }
            for &v in bag.iter().filter(|v| !td.bags[c].contains(v)) {
                cur_bag.push(v);
                cur_bag.sort();
                cur = out.push(cur_bag.clone(), NiceKind::Introduce(v), vec![cur]);
            }
            branches.push(cur);
        }
        let node = if branches.is_empty() {
            let mut cur = out.push(vec![bag[0]], NiceKind::Leaf, vec![]);
            let mut cur_bag = vec![bag[0]];
            for &v in &bag[1..] {
                cur_bag.push(v);
                cur_bag.sort();
                cur = out.push(cur_bag.clone(), NiceKind::Introduce(v), vec![cur]);
            }
            cur
        } else {
            let mut acc = branches.pop().unwrap();
            while let Some(b) = branches.pop() {
                acc = out.push(bag.clone(), NiceKind::Join, vec![b, acc]);
            }
            acc
        };
        built[t] = node;
    }
    out.root = Some(built[root]);
    Ok(out)
}

/// Greedy min-fill elimination ordering (ties broken by smallest vertex id)
/// turned into a decomposition. Parallel edges are treated as one.
pub fn heuristic_decomposition(g: &ConstraintGraph) -> TreeDecomposition {
    let n = g.vertex_count();
    if n == 0 {
        return TreeDecomposition::default();
    }
    let mut nbr: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for e in g.edges() {
        nbr[e.u.index()].insert(e.v.index());
        nbr[e.v.index()].insert(e.u.index());
    }
    let mut alive = vec![true; n];
    let mut elim_pos = vec![usize::MAX; n];
    let mut bags: Vec<Vec<VertexId>> = Vec::with_capacity(n);
    let mut owner: Vec<usize> = Vec::with_capacity(n);
    let mut later_nbrs: Vec<Vec<usize>> = Vec::with_capacity(n);
    for step in 0..n {
        let mut best = usize::MAX;
        let mut best_fill = usize::MAX;
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let ns: Vec<usize> = nbr[v].iter().copied().collect();
            let mut fill = 0;
            for (i, &a) in ns.iter().enumerate() {
                for &b in &ns[i + 1..] {
                    if !nbr[a].contains(&b) {
                        fill += 1;
                    }
                }
            }
            if fill < best_fill {
                best_fill = fill;
                best = v;
            }
        }
        let v = best;
        let ns: Vec<usize> = nbr[v].iter().copied().collect();
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                nbr[a].insert(b);
                nbr[b].insert(a);
            }
        }
        for &a in &ns {
            nbr[a].remove(&v);
        }
        alive[v] = false;
        elim_pos[v] = step;
        let mut bag: Vec<VertexId> = ns.iter().map(|&x| VertexId(x as u32)).collect();
        bag.push(VertexId(v as u32));
        bag.sort();
        bags.push(bag);
        owner.push(v);
        later_nbrs.push(ns);
    }
    // Parent of bag(v) is the bag of the earliest-eliminated later neighbour.
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, ns) in later_nbrs.iter().enumerate() {
        match ns.iter().map(|&x| elim_pos[x]).min() {
            Some(p) => edges.push((i, p)),
            None => roots.push(i),
        }
    }
    // Join the components of the forest into one tree.
    let root = *roots.last().unwrap();
    for &r in &roots[..roots.len() - 1] {
        edges.push((r, root));
    }
    TreeDecomposition {
        bags,
        tree_edges: edges,
        root,
    }
}

/// The decomposition as text: `bag`, `edge` and (for nice decompositions)
/// `kind` records.
pub fn print_decomposition(td: &TreeDecomposition) -> String {
    let mut s = String::new();
    for (i, b) in td.bags.iter().enumerate() {
        write!(s, "bag {i}").unwrap();
        for v in b {
            write!(s, " {v}").unwrap();
        }
        s.push('\n');
    }
    for &(a, b) in &td.tree_edges {
        writeln!(s, "edge {a} {b}").unwrap();
    }
    s
}

pub fn print_nice(ntd: &NiceTreeDecomposition) -> String {
    let mut s = String::new();
    // Nice decompositions are printed with the root as node 0 so that the
    // root is recoverable from the text.
    let order = ntd.post_order();
    let mut rename = vec![0usize; ntd.bags.len()];
    for (i, &t) in order.iter().rev().enumerate() {
        rename[t] = i;
    }
    for &t in order.iter().rev() {
        write!(s, "bag {}", rename[t]).unwrap();
        for v in &ntd.bags[t] {
            write!(s, " {v}").unwrap();
        }
        s.push('\n');
    }
    for &t in order.iter().rev() {
        for &c in &ntd.children[t] {
            writeln!(s, "edge {} {}", rename[t], rename[c]).unwrap();
        }
    }
    for &t in order.iter().rev() {
        let k = match ntd.kind[t] {
            NiceKind::Leaf => "leaf".to_string(),
            NiceKind::Introduce(v) => format!("intro:{v}"),
            NiceKind::Forget(v) => format!("forget:{v}"),
            NiceKind::Join => "join".to_string(),
        };
        writeln!(s, "kind {} {k}", rename[t]).unwrap();
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedDecomposition {
    Plain(TreeDecomposition),
    Nice(NiceTreeDecomposition),
}

/// Parses the decomposition format. Node ids must be dense. If every node
/// has a `kind`, the result is nice with edges read as `parent child` and
/// node 0 as the root; otherwise node 0 is the root of a plain decomposition.
pub fn parse_decomposition(text: &str) -> Result<ParsedDecomposition> {
    let perr = |line: usize, msg: String| NclError::Parse { line, msg };
    let mut bags: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut kinds: BTreeMap<usize, NiceKind> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let int = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| perr(ln, format!("bad integer '{t}'")))
        };
        match toks[0] {
            "bag" => {
                let id = int(toks
                    .get(1)
                    .ok_or_else(|| perr(ln, "missing node id".into()))?)?;
                let vs = toks[2..]
                    .iter()
                    .map(|t| int(t).map(|x| VertexId(x as u32)))
                    .collect::<Result<Vec<_>>>()?;
                if bags.insert(id, vs).is_some() {
                    return Err(perr(ln, format!("duplicate bag {id}")));
                }
            }
            "edge" => {
                if toks.len() != 3 {
                    return Err(perr(ln, "edge needs two node ids".into()));
                }
                edges.push((int(toks[1])?, int(toks[2])?));
            }
            "kind" => {
                if toks.len() != 3 {
                    return Err(perr(ln, "kind needs a node id and a kind".into()));
                }
                let id = int(toks[1])?;
                let k = match toks[2] {
                    "leaf" => NiceKind::Leaf,
                    "join" => NiceKind::Join,
                    other => {
                        if let Some(v) = other.strip_prefix("intro:") {
                            NiceKind::Introduce(VertexId(int(v)? as u32))
                        } else if let Some(v) = other.strip_prefix("forget:") {
                            NiceKind::Forget(VertexId(int(v)? as u32))
                        } else {
                            return Err(perr(ln, format!("unknown kind '{other}'")));
                        }
                    }
                };
                kinds.insert(id, k);
            }
            other => return Err(perr(ln, format!("unknown record tag '{other}'"))),
        }
    }
    if bags.keys().enumerate().any(|(i, &k)| i != k) {
        return Err(perr(0, "bag ids must be dense".into()));
    }
    let bags: Vec<Vec<VertexId>> = bags.into_values().collect();
    if kinds.is_empty() {
        return Ok(ParsedDecomposition::Plain(TreeDecomposition::new(
            bags, edges,
        )));
    }
    if kinds.len() != bags.len() {
        return Err(perr(
            0,
            "every node of a nice decomposition needs a kind".into(),
        ));
    }
    let mut children = vec![Vec::new(); bags.len()];
    for &(p, c) in &edges {
        if p >= bags.len() || c >= bags.len() {
            return Err(perr(0, format!("edge {p} {c} names an unknown node")));
        }
        children[p].push(c);
    }
    let bags = bags
        .into_iter()
        .map(|mut b| {
            b.sort();
            b
        })
        .collect();
    Ok(ParsedDecomposition::Nice(NiceTreeDecomposition {
        bags,
        kind: kinds.into_values().collect(),
        children,
        root: Some(0),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpLimits {
    /// Largest number of bag-incident edges the mask DP accepts.
    pub max_edge_bits: usize,
    /// Largest table the inflow and ordering DPs may build at one node.
    pub max_states: usize,
}

impl Default for DpLimits {
    fn default() -> Self {
        DpLimits {
            max_edge_bits: 16,
            max_states: 1 << 22,
        }
    }
}

fn check_nice(g: &ConstraintGraph, ntd: &NiceTreeDecomposition) -> Result<()> {
    let r = validate_nice(g, ntd);
    match r.first() {
        None => Ok(()),
        Some(v) => Err(NclError::InvalidDecomposition(v.to_string())),
    }
}

/// Edges incident to at least one vertex of `bag`, ascending.
fn bag_edges(g: &ConstraintGraph, bag: &[VertexId]) -> Vec<EdgeId> {
    let mut es: Vec<EdgeId> = bag
        .iter()
        .flat_map(|&v| g.incident(v).iter().copied())
        .collect();
    es.sort();
    es.dedup();
    es
}

fn position_map(es: &[EdgeId]) -> HashMap<EdgeId, usize> {
    es.iter().enumerate().map(|(i, &e)| (e, i)).collect()
}

/// Satisfiability by dynamic programming over orientation masks of the edges
/// incident to each bag. Returns a witness configuration.
pub fn dp_cgs_degree(
    g: &ConstraintGraph,
    ntd: &NiceTreeDecomposition,
    limits: DpLimits,
) -> Result<Option<Configuration>> {
    check_nice(g, ntd)?;
    g.check_arithmetic()?;
    let m = g.edge_count();
    let Some(root) = ntd.root else {
        return Ok(Some(Configuration::uniform(m, Orientation::TowardV)));
    };
    let k = ntd.bags.len();
    let es: Vec<Vec<EdgeId>> = ntd.bags.iter().map(|b| bag_edges(g, b)).collect();
    for e in &es {
        if e.len() > limits.max_edge_bits || e.len() > 63 {
            return Err(NclError::LimitExceeded {
                what: "bag edge",
                limit: limits.max_edge_bits as u64,
            });
        }
    }
    // table[t]: mask -> back pointer (child mask; for joins both children share it)
    let mut table: Vec<HashMap<u64, u64>> = vec![HashMap::new(); k];
    let vertex_ok = |v: VertexId, pos: &HashMap<EdgeId, usize>, mask: u64| -> bool {
        let mut inflow = 0u64;
        for &e in g.incident(v) {
            let bit = (mask >> pos[&e]) & 1 == 1;
            let o = if bit {
                Orientation::TowardU
            } else {
                Orientation::TowardV
            };
            let edge = g.edge(e);
            let head = if o == Orientation::TowardU {
                edge.u
            } else {
                edge.v
            };
            if head == v {
                inflow += edge.weight;
            }
        }
        inflow >= g.min_inflow(v)
    };
    for t in ntd.post_order() {
        let pos = position_map(&es[t]);
        let mut out: HashMap<u64, u64> = HashMap::new();
        match ntd.kind[t] {
            NiceKind::Leaf | NiceKind::Introduce(_) => {
                let (v, child) = match ntd.kind[t] {
                    NiceKind::Leaf => (ntd.bags[t][0], None),
                    NiceKind::Introduce(v) => (v, Some(ntd.children[t][0])),
                    _ => unreachable!(),
                };
                let child_states: Vec<(u64, Vec<(usize, usize)>)> = match child {
                    None => vec![(0, Vec::new())],
                    Some(c) => {
                        let remap: Vec<(usize, usize)> =
                            es[c].iter().enumerate().map(|(i, e)| (i, pos[e])).collect();
                        table[c].keys().map(|&mk| (mk, remap.clone())).collect()
                    }
                };
                let old: BTreeSet<EdgeId> = child
                    .map(|c| es[c].iter().copied().collect())
                    .unwrap_or_default();
                let fresh: Vec<usize> = es[t]
                    .iter()
                    .filter(|e| !old.contains(e))
                    .map(|e| pos[e])
                    .collect();
                for (cm, remap) in child_states {
                    let mut base = 0u64;
                    for &(from, to) in &remap {
                        base |= ((cm >> from) & 1) << to;
                    }
                    for sub in 0..1u64 << fresh.len() {
                        let mut mask = base;
                        for (j, &p) in fresh.iter().enumerate() {
                            mask |= ((sub >> j) & 1) << p;
                        }
                        if vertex_ok(v, &pos, mask) {
                            out.entry(mask).or_insert(cm);
                        }
                    }
                }
            }
            NiceKind::Forget(_) => {
                let c = ntd.children[t][0];
                let remap: Vec<(usize, usize)> = es[c]
                    .iter()
                    .enumerate()
                    .filter_map(|(i, e)| pos.get(e).map(|&p| (i, p)))
                    .collect();
                for &cm in table[c].keys() {
                    let mut mask = 0u64;
                    for &(from, to) in &remap {
                        mask |= ((cm >> from) & 1) << to;
                    }
                    out.entry(mask).or_insert(cm);
                }
            }
            NiceKind::Join => {
                let (a, b) = (ntd.children[t][0], ntd.children[t][1]);
                for &mk in table[a].keys() {
                    if table[b].contains_key(&mk) {
                        out.insert(mk, mk);
                    }
                }
            }
        }
        table[t] = out;
    }
    if table[root].is_empty() {
        return Ok(None);
    }
    // Deterministic choice at the root, then follow back pointers down.
    let mut c = Configuration::uniform(m, Orientation::TowardV);
    let start = *table[root].keys().min().unwrap();
    let mut stack = vec![(root, start)];
    while let Some((t, mask)) = stack.pop() {
        for (i, &e) in es[t].iter().enumerate() {
            let o = if (mask >> i) & 1 == 1 {
                Orientation::TowardU
            } else {
                Orientation::TowardV
            };
            c.set(e, o);
        }
        let back = table[t][&mask];
        for &ch in &ntd.children[t] {
            stack.push((ch, back));
        }
    }
    debug_assert!(crate::graph::is_legal(g, &c).unwrap());
    Ok(Some(c))
}

/// Satisfiability by dynamic programming over inflow vectors of bag
/// vertices, saturated at each minimum. Every edge is accounted for at the
/// forget node of whichever endpoint is forgotten first; the root's bag is
/// forgotten virtually at the end. Minimum-inflow checks happen at forgets.
pub fn dp_cgs_unary(
    g: &ConstraintGraph,
    ntd: &NiceTreeDecomposition,
    limits: DpLimits,
) -> Result<Option<Configuration>> {
    check_nice(g, ntd)?;
    g.check_arithmetic()?;
    let m = g.edge_count();
    let Some(root) = ntd.root else {
        return Ok(Some(Configuration::uniform(m, Orientation::TowardV)));
    };
    let k = ntd.bags.len();
    // Each node gets a list of layers. Layer entries: (state, back pointer).
    #[derive(Clone, Copy)]
    enum Back {
        None,
        Child(usize),
        Pair(usize, usize),
        Step(usize, EdgeId, Orientation),
    }
    type Layer = Vec<(Vec<u64>, Back)>;
    let mut layers: Vec<Vec<Layer>> = vec![Vec::new(); k];
    // The bag each state vector is indexed by, per layer.
    let mut layer_bags: Vec<Vec<Vec<VertexId>>> = vec![Vec::new(); k];
    let mut forgotten = vec![false; g.vertex_count()];
    let sat = |v: VertexId, x: u64| x.min(g.min_inflow(v));

    // Forget `v` from a layer over `bag`: account for each not-yet-counted
    // edge to a vertex still in the bag, one edge at a time, then check v.
    let forget = |v: VertexId,
                  bag: &[VertexId],
                  layer: &Layer,
                  forgotten: &[bool],
                  layers_out: &mut Vec<Layer>,
                  bags_out: &mut Vec<Vec<VertexId>>|
     -> Result<()> {
        let vi = bag.iter().position(|&x| x == v).unwrap();
        let mut cur: Layer = layer
            .iter()
            .enumerate()
            .map(|(i, (s, _))| (s.clone(), Back::Child(i)))
            .collect();
        for &e in g.incident(v) {
            let w = g.edge(e).other(v);
            if forgotten[w.index()] {
                continue;
            }
            let wi = bag
                .iter()
                .position(|&x| x == w)
                .expect("other endpoint stays in the bag");
            layers_out.push(cur);
            bags_out.push(bag.to_vec());
            let prev_idx = layers_out.len() - 1;
            let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
            let mut next: Layer = Vec::new();
            for (i, (s, _)) in layers_out[prev_idx].iter().enumerate() {
                for o in [Orientation::TowardV, Orientation::TowardU] {
                    let head = if o == Orientation::TowardU {
                        g.edge(e).u
                    } else {
                        g.edge(e).v
                    };
                    let hi = if head == v { vi } else { wi };
                    let mut s2 = s.clone();
                    s2[hi] = sat(bag[hi], s2[hi].saturating_add(g.edge(e).weight));
                    if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(s2.clone())
                    {
                        slot.insert(next.len());
                        next.push((s2, Back::Step(i, e, o)));
                    }
                }
            }
            if next.len() > limits.max_states {
                return Err(NclError::LimitExceeded {
                    what: "DP table",
                    limit: limits.max_states as u64,
                });
            }
            cur = next;
        }
        // Check v and drop its coordinate.
        layers_out.push(cur);
        bags_out.push(bag.to_vec());
        let prev_idx = layers_out.len() - 1;
        let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut next: Layer = Vec::new();
        for (i, (s, _)) in layers_out[prev_idx].iter().enumerate() {
            if s[vi] < g.min_inflow(v) {
                continue;
            }
            let mut s2 = s.clone();
            s2.remove(vi);
            if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(s2.clone()) {
                slot.insert(next.len());
                next.push((s2, Back::Child(i)));
            }
        }
        layers_out.push(next);
        let mut nb = bag.to_vec();
        nb.remove(vi);
        bags_out.push(nb);
        Ok(())
    };

    for t in ntd.post_order() {
        let mut ls: Vec<Layer> = Vec::new();
        let mut bs: Vec<Vec<VertexId>> = Vec::new();
        match ntd.kind[t] {
            NiceKind::Leaf => {
                ls.push(vec![(vec![0], Back::None)]);
                bs.push(ntd.bags[t].clone());
            }
            NiceKind::Introduce(v) => {
                let c = ntd.children[t][0];
                let cb = layer_bags[c].last().unwrap();
                let at = ntd.bags[t].iter().position(|&x| x == v).unwrap();
                debug_assert_eq!(cb.len() + 1, ntd.bags[t].len());
                let layer: Layer = layers[c]
                    .last()
                    .unwrap()
                    .iter()
                    .enumerate()
                    .map(|(i, (s, _))| {
                        let mut s2 = s.clone();
                        s2.insert(at, 0);
                        (s2, Back::Child(i))
                    })
                    .collect();
                ls.push(layer);
                bs.push(ntd.bags[t].clone());
            }
            NiceKind::Forget(v) => {
                let c = ntd.children[t][0];
                let cb = layer_bags[c].last().unwrap().clone();
                let base: Layer = layers[c].last().unwrap().clone();
                forget(v, &cb, &base, &forgotten, &mut ls, &mut bs)?;
                forgotten[v.index()] = true;
            }
            NiceKind::Join => {
                let (a, b) = (ntd.children[t][0], ntd.children[t][1]);
                let la = layers[a].last().unwrap();
                let lb = layers[b].last().unwrap();
                let bag = &ntd.bags[t];
                let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
                let mut next: Layer = Vec::new();
                for (i, (sa, _)) in la.iter().enumerate() {
                    for (j, (sb, _)) in lb.iter().enumerate() {
                        let s: Vec<u64> = sa
                            .iter()
                            .zip(sb)
                            .zip(bag)
                            .map(|((&x, &y), &v)| sat(v, x.saturating_add(y)))
                            .collect();
                        if let std::collections::hash_map::Entry::Vacant(slot) =
                            index.entry(s.clone())
                        {
                            slot.insert(next.len());
                            next.push((s, Back::Pair(i, j)));
                        }
                    }
                }
                if next.len() > limits.max_states {
                    return Err(NclError::LimitExceeded {
                        what: "DP table",
                        limit: limits.max_states as u64,
                    });
                }
                ls.push(next);
                bs.push(bag.clone());
            }
        }
        if t == root {
            // virtual forgets of the root bag, in ascending vertex order
            for &v in ntd.bags[t].clone().iter() {
                let cb = bs.last().unwrap().clone();
                let base = ls.last().unwrap().clone();
                let mut ls2 = Vec::new();
                let mut bs2 = Vec::new();
                forget(v, &cb, &base, &forgotten, &mut ls2, &mut bs2)?;
                forgotten[v.index()] = true;
                ls.extend(ls2);
                bs.extend(bs2);
            }
        }
        layers[t] = ls;
        layer_bags[t] = bs;
    }
    if layers[root].last().unwrap().is_empty() {
        return Ok(None);
    }
    // Walk back pointers. Within a node, a Child pointer of layer L>0 refers
    // to layer L-1; of layer 0 refers to the child's final layer. Step
    // pointers always refer to the previous layer of the same node.
    let mut c = Configuration::uniform(m, Orientation::TowardV);
    let mut stack: Vec<(usize, usize, usize)> = vec![(root, layers[root].len() - 1, 0)];
    while let Some((t, l, i)) = stack.pop() {
        let back = layers[t][l][i].1;
        let prev = |stack: &mut Vec<(usize, usize, usize)>, idx: usize| {
            if l > 0 {
                stack.push((t, l - 1, idx));
            } else {
                let ch = ntd.children[t][0];
                stack.push((ch, layers[ch].len() - 1, idx));
            }
        };
        match back {
            Back::None => {}
            Back::Child(j) => prev(&mut stack, j),
            Back::Step(j, e, o) => {
                c.set(e, o);
                prev(&mut stack, j);
            }
            Back::Pair(x, y) => {
                let (a, b) = (ntd.children[t][0], ntd.children[t][1]);
                stack.push((a, layers[a].len() - 1, x));
                stack.push((b, layers[b].len() - 1, y));
            }
        }
    }
    debug_assert!(crate::graph::is_legal(g, &c).unwrap());
    Ok(Some(c))
}

/// The goal of a bounded reconfiguration query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundedVariant {
    C2E(EdgeId),
    C2C(Configuration),
}

/// Bounded reconfiguration by dynamic programming over reversal orderings of
/// bag-incident edges. A vertex's legality along a sequence depends only on
/// the relative order of its own edges, which is fully visible while the
/// vertex is in the bag; it is checked when the vertex is introduced.
/// Forget projects orderings; join keeps orderings present in both children.
pub fn dp_bounded_ncl(
    g: &ConstraintGraph,
    ntd: &NiceTreeDecomposition,
    variant: &BoundedVariant,
    start: &Configuration,
    limits: DpLimits,
) -> Result<Option<MoveSequence>> {
    check_nice(g, ntd)?;
    g.check_arithmetic()?;
    require_legal(g, start)?;
    let must: Option<Vec<bool>> = match variant {
        BoundedVariant::C2E(t) => {
            g.check_edge(*t)?;
            None
        }
        BoundedVariant::C2C(goal) => {
            g.check_config(goal)?;
            require_legal(g, goal)?;
            let mut d = vec![false; g.edge_count()];
            for e in start.differing(goal) {
                d[e.index()] = true;
            }
            Some(d)
        }
    };
    let target = match variant {
        BoundedVariant::C2E(t) => Some(*t),
        _ => None,
    };
    let Some(root) = ntd.root else {
        return Ok(match variant {
            BoundedVariant::C2C(_) => Some(Vec::new()),
            BoundedVariant::C2E(_) => None,
        });
    };
    let k = ntd.bags.len();
    let es: Vec<Vec<EdgeId>> = ntd.bags.iter().map(|b| bag_edges(g, b)).collect();
    // States are sequences of global edge ids; back pointer = index into the
    // child's table (or the pair for joins, which is the same sequence).
    let mut tables: Vec<Vec<(Vec<EdgeId>, usize)>> = vec![Vec::new(); k];
    let vertex_ok = |v: VertexId, seq: &[EdgeId]| -> bool {
        let mut inflow: u64 = g.inflow_unchecked(start, v);
        let min = g.min_inflow(v);
        for &e in seq {
            let ed = g.edge(e);
            if ed.u != v && ed.v != v {
                continue;
            }
            let w = ed.weight;
            // the edge points away from its start head after reversal
            if g.head(start, e) == v {
                if inflow < min + w {
                    return false;
                }
                inflow -= w;
            } else {
                inflow += w;
            }
        }
        true
    };
    for t in ntd.post_order() {
        let mut out: Vec<(Vec<EdgeId>, usize)> = Vec::new();
        let mut index: HashMap<Vec<EdgeId>, usize> = HashMap::new();
        let mut add = |s: Vec<EdgeId>, back: usize, out: &mut Vec<(Vec<EdgeId>, usize)>| {
            if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(s.clone()) {
                slot.insert(out.len());
                out.push((s, back));
            }
        };
        match ntd.kind[t] {
            NiceKind::Leaf | NiceKind::Introduce(_) => {
                let (v, child) = match ntd.kind[t] {
                    NiceKind::Leaf => (ntd.bags[t][0], None),
                    NiceKind::Introduce(v) => (v, Some(ntd.children[t][0])),
                    _ => unreachable!(),
                };
                let old: BTreeSet<EdgeId> = child
                    .map(|c| es[c].iter().copied().collect())
                    .unwrap_or_default();
                let fresh: Vec<EdgeId> =
                    es[t].iter().copied().filter(|e| !old.contains(e)).collect();
                let base: Vec<(Vec<EdgeId>, usize)> = match child {
                    None => vec![(Vec::new(), 0)],
                    Some(c) => tables[c]
                        .iter()
                        .enumerate()
                        .map(|(i, (s, _))| (s.clone(), i))
                        .collect(),
                };
                // choose which fresh edges reverse
                let subsets: Vec<Vec<EdgeId>> = match &must {
                    Some(d) => vec![fresh.iter().copied().filter(|e| d[e.index()]).collect()],
                    None => {
                        let forced: Vec<EdgeId> = fresh
                            .iter()
                            .copied()
                            .filter(|&e| Some(e) == target)
                            .collect();
                        let free: Vec<EdgeId> = fresh
                            .iter()
                            .copied()
                            .filter(|&e| Some(e) != target)
                            .collect();
                        (0..1u64 << free.len())
                            .map(|sub| {
                                let mut s = forced.clone();
                                s.extend(
                                    free.iter()
                                        .enumerate()
                                        .filter(|(j, _)| (sub >> j) & 1 == 1)
                                        .map(|(_, &e)| e),
                                );
                                s
                            })
                            .collect()
                    }
                };
                for (seq, back) in base {
                    for sub in &subsets {
                        let mut partial = vec![seq.clone()];
                        for &e in sub {
                            let mut next = Vec::new();
                            for p in &partial {
                                for at in 0..=p.len() {
                                    let mut q = p.clone();
                                    q.insert(at, e);
                                    next.push(q);
                                }
                            }
                            partial = next;
                        }
                        for s in partial {
                            if vertex_ok(v, &s) {
                                add(s, back, &mut out);
                            }
                        }
                        if out.len() > limits.max_states {
                            return Err(NclError::LimitExceeded {
                                what: "DP table",
                                limit: limits.max_states as u64,
                            });
                        }
                    }
                }
            }
            NiceKind::Forget(_) => {
                let c = ntd.children[t][0];
                let keep: BTreeSet<EdgeId> = es[t].iter().copied().collect();
                for (i, (s, _)) in tables[c].iter().enumerate() {
                    let p: Vec<EdgeId> = s.iter().copied().filter(|e| keep.contains(e)).collect();
                    add(p, i, &mut out);
                }
            }
            NiceKind::Join => {
                let (a, b) = (ntd.children[t][0], ntd.children[t][1]);
                let in_b: HashMap<&Vec<EdgeId>, usize> = tables[b]
                    .iter()
                    .enumerate()
                    .map(|(i, (s, _))| (s, i))
                    .collect();
                for (i, (s, _)) in tables[a].iter().enumerate() {
                    if in_b.contains_key(s) {
                        add(s.clone(), i, &mut out);
                    }
                }
            }
        }
        tables[t] = out;
    }
    if tables[root].is_empty() {
        return Ok(None);
    }
    // Recover one local ordering per node, then merge them.
    let mut chosen: Vec<Option<usize>> = vec![None; k];
    let pick = (0..tables[root].len())
        .min_by(|&a, &b| tables[root][a].0.cmp(&tables[root][b].0))
        .unwrap();
    let mut stack = vec![(root, pick)];
    while let Some((t, i)) = stack.pop() {
        chosen[t] = Some(i);
        let (seq, back) = &tables[t][i];
        match ntd.kind[t] {
            NiceKind::Leaf => {}
            NiceKind::Introduce(_) | NiceKind::Forget(_) => stack.push((ntd.children[t][0], *back)),
            NiceKind::Join => {
                let (a, b) = (ntd.children[t][0], ntd.children[t][1]);
                let j = tables[b].iter().position(|(s, _)| s == seq).unwrap();
                stack.push((a, *back));
                stack.push((b, j));
            }
        }
    }
    let mut succ: BTreeMap<EdgeId, BTreeSet<EdgeId>> = BTreeMap::new();
    let mut indeg: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for t in 0..k {
        let seq = &tables[t][chosen[t].unwrap()].0;
        for &e in seq {
            indeg.entry(e).or_insert(0);
        }
        for w in seq.windows(2) {
            if succ.entry(w[0]).or_default().insert(w[1]) {
                *indeg.entry(w[1]).or_insert(0) += 1;
            }
        }
    }
    let mut ready: BTreeSet<EdgeId> = indeg
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&e, _)| e)
        .collect();
    let mut order = Vec::new();
    while let Some(&e) = ready.iter().next() {
        ready.remove(&e);
        order.push(e);
        if let Some(ss) = succ.get(&e) {
            for &s in ss {
                let d = indeg.get_mut(&s).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.insert(s);
                }
            }
        }
    }
    if order.len() != indeg.len() {
        return Err(NclError::InvalidDecomposition(
            "local reversal orders are cyclic".into(),
        ));
    }
    let end = replay(g, start, &order)?;
    if let BoundedVariant::C2C(goal) = variant {
        debug_assert_eq!(&end, goal);
    }
    Ok(Some(order))
}

/// Heuristic decomposition made nice; convenient entry point for the DPs.
pub fn nice_decomposition(g: &ConstraintGraph) -> NiceTreeDecomposition {
    to_nice(g, &heuristic_decomposition(g)).expect("heuristic decompositions are valid")
}
