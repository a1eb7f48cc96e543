//! Port behavior of a gadget and checkable behavior contracts over it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::compose::{greedy_order, region_automaton, DEFAULT_MAX_PRODUCT};
use crate::error::{NclError, Result};
use crate::graph::{is_legal, Configuration, Orientation};

use super::{Gadget, PortDir};

pub const DEFAULT_GADGET_LIMIT: usize = DEFAULT_MAX_PRODUCT;

/// Classes of legal orientations under internal moves, labelled by their
/// port states, with the single-port moves between them.
///
/// Ports are sorted by name; bit `i` of a state is set when port `i`
/// points into the gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Behavior {
    pub ports: Vec<String>,
    pub weights: Vec<u64>,
    pub states: Vec<u64>,
    pub moves: Vec<Vec<(usize, usize)>>,
    /// Class of the gadget's initial configuration.
    pub initial: usize,
}

fn state_string(state: u64, n: usize) -> String {
    (0..n)
        .map(|i| if state >> i & 1 == 1 { 'I' } else { 'O' })
        .collect()
}

impl Behavior {
    pub fn class_count(&self) -> usize {
        self.states.len()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.ports.iter().position(|p| p == name)
    }

    pub fn legal_states(&self) -> BTreeSet<u64> {
        self.states.iter().copied().collect()
    }

    /// Port-state pairs joined by one port move (internal moves
    /// quantified away).
    pub fn steps(&self) -> BTreeSet<(u64, u64)> {
        let mut out = BTreeSet::new();
        for (c, ms) in self.moves.iter().enumerate() {
            for &(_, d) in ms {
                out.insert((self.states[c], self.states[d]));
            }
        }
        out
    }

    /// Classes reachable from `from` using moves of the ports in `movable`
    /// (a bit mask over port indices).
    pub fn reachable(&self, from: usize, movable: u64) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let mut q = VecDeque::from([from]);
        seen[from] = true;
        while let Some(c) = q.pop_front() {
            for &(p, d) in &self.moves[c] {
                if movable >> p & 1 == 1 && !seen[d] {
                    seen[d] = true;
                    q.push_back(d);
                }
            }
        }
        seen
    }

    /// Deterministic text form: port list, legal states, steps.
    pub fn canonical(&self) -> String {
        let n = self.ports.len();
        let mut s = String::from("ports");
        for (p, w) in self.ports.iter().zip(&self.weights) {
            let _ = write!(s, " {p}:{w}");
        }
        s.push('\n');
        for st in self.legal_states() {
            let _ = writeln!(s, "legal {}", state_string(st, n));
        }
        for (a, b) in self.steps() {
            let _ = writeln!(s, "step {} {}", state_string(a, n), state_string(b, n));
        }
        s
    }

    /// The same behavior with ports renamed (and re-sorted).
    pub fn renamed(&self, map: &BTreeMap<String, String>) -> Behavior {
        let names: Vec<String> = self
            .ports
            .iter()
            .map(|p| map.get(p).cloned().unwrap_or_else(|| p.clone()))
            .collect();
        let mut order: Vec<usize> = (0..names.len()).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        // old index -> new index
        let mut pos = vec![0; names.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let remap = |st: u64| {
            (0..names.len())
                .filter(|&i| st >> i & 1 == 1)
                .fold(0u64, |a, i| a | 1 << pos[i])
        };
        Behavior {
            ports: order.iter().map(|&i| names[i].clone()).collect(),
            weights: order.iter().map(|&i| self.weights[i]).collect(),
            states: self.states.iter().map(|&s| remap(s)).collect(),
            moves: self
                .moves
                .iter()
                .map(|ms| ms.iter().map(|&(p, d)| (pos[p], d)).collect())
                .collect(),
            initial: self.initial,
        }
    }
}

fn sorted_ports(g: &Gadget) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..g.ports.len()).collect();
    idx.sort_by(|&a, &b| g.ports[a].name.cmp(&g.ports[b].name));
    idx
}

fn port_state(g: &Gadget, order: &[usize], c: &Configuration) -> u64 {
    order
        .iter()
        .enumerate()
        .filter(|(_, &pi)| g.port_dir(c, &g.ports[pi]) == PortDir::In)
        .fold(0u64, |a, (i, _)| a | 1 << i)
}

/// Behavior by composing the internal vertices one at a time; `limit`
/// bounds the intermediate product size.
pub fn gadget_behavior(g: &Gadget, limit: usize) -> Result<Behavior> {
    let boundary = g.boundary_vertices();
    let region: Vec<_> = greedy_order(&g.graph)
        .into_iter()
        .filter(|v| !boundary.contains(v))
        .collect();
    let a = region_automaton(
        &g.graph,
        &region,
        std::slice::from_ref(&g.initial),
        &[],
        limit,
    )?;
    let order = sorted_ports(g);
    // automaton port index -> sorted gadget port index
    let mut map = vec![usize::MAX; a.ports().len()];
    for (i, &e) in a.ports().iter().enumerate() {
        let j = order
            .iter()
            .position(|&pi| g.ports[pi].edge == e)
            .ok_or_else(|| {
                NclError::Gadget(format!(
                    "{}: edge {e} leaves the gadget but is not a port",
                    g.name
                ))
            })?;
        map[i] = j;
    }
    if a.ports().len() != g.ports.len() {
        return Err(NclError::Gadget(format!(
            "{}: some port is not attached to an internal vertex",
            g.name
        )));
    }
    let mut states = Vec::with_capacity(a.class_count());
    let mut moves = Vec::with_capacity(a.class_count());
    for c in 0..a.class_count() {
        let pv = a.port_vector(c);
        let mut st = 0u64;
        for (i, o) in pv.iter().enumerate() {
            let p = &g.ports[order[map[i]]];
            if *o == g.graph.toward(p.edge, p.inner) {
                st |= 1 << map[i];
            }
        }
        states.push(st);
        moves.push(a.moves(c).map(|(p, d)| (map[p], d)).collect());
    }
    Ok(Behavior {
        ports: order.iter().map(|&i| g.ports[i].name.clone()).collect(),
        weights: order.iter().map(|&i| g.ports[i].weight).collect(),
        states,
        moves,
        initial: a.tracked_class(0),
    })
}

/// Behavior by enumerating the whole configuration space (independent of
/// the composition engine); `max_edges` bounds the space at
/// `2^max_edges`.
pub fn gadget_behavior_enumerated(g: &Gadget, max_edges: usize) -> Result<Behavior> {
    let m = g.graph.edge_count();
    if m > max_edges.min(40) {
        return Err(NclError::LimitExceeded {
            what: "gadget edge count for enumeration",
            limit: max_edges as u64,
        });
    }
    let port_edges: Vec<_> = g.ports.iter().map(|p| p.edge).collect();
    let legal: Vec<u64> = (0..1u64 << m)
        .filter(|&mask| is_legal(&g.graph, &Configuration::from_mask(m, mask)).unwrap())
        .collect();
    let index: BTreeMap<u64, usize> = legal.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut class = vec![usize::MAX; legal.len()];
    let mut count = 0;
    for i in 0..legal.len() {
        if class[i] != usize::MAX {
            continue;
        }
        class[i] = count;
        let mut q = VecDeque::from([i]);
        while let Some(x) = q.pop_front() {
            for e in g.graph.edge_ids() {
                if port_edges.contains(&e) {
                    continue;
                }
                if let Some(&y) = index.get(&(legal[x] ^ 1 << e.index())) {
                    if class[y] == usize::MAX {
                        class[y] = count;
                        q.push_back(y);
                    }
                }
            }
        }
        count += 1;
    }
    let order = sorted_ports(g);
    let mut states = vec![0u64; count];
    let mut moves: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new(); count];
    for (i, &mask) in legal.iter().enumerate() {
        let c = Configuration::from_mask(m, mask);
        states[class[i]] = port_state(g, &order, &c);
        for (j, &pi) in order.iter().enumerate() {
            if let Some(&y) = index.get(&(mask ^ 1 << g.ports[pi].edge.index())) {
                moves[class[i]].insert((j, class[y]));
            }
        }
    }
    let init_mask = g
        .initial
        .orientations()
        .enumerate()
        .filter(|(_, o)| *o == Orientation::TowardU)
        .fold(0u64, |a, (i, _)| a | 1 << i);
    let initial = class[*index
        .get(&init_mask)
        .ok_or_else(|| NclError::Gadget("initial state is illegal".into()))?];
    Ok(Behavior {
        ports: order.iter().map(|&i| g.ports[i].name.clone()).collect(),
        weights: order.iter().map(|&i| g.ports[i].weight).collect(),
        states,
        moves: moves.into_iter().map(|s| s.into_iter().collect()).collect(),
        initial,
    })
}

/// A port state seen through port names.
pub struct PortView<'a> {
    names: &'a [String],
    state: u64,
}

impl<'a> PortView<'a> {
    pub fn new(names: &'a [String], state: u64) -> Self {
        PortView { names, state }
    }

    fn bit(&self, name: &str) -> bool {
        let i = self
            .names
            .iter()
            .position(|n| n == name)
            .unwrap_or_else(|| panic!("spec names unknown port {name}"));
        self.state >> i & 1 == 1
    }

    pub fn is_in(&self, name: &str) -> bool {
        self.bit(name)
    }

    pub fn is_out(&self, name: &str) -> bool {
        !self.bit(name)
    }

    pub fn count_in(&self) -> usize {
        self.state.count_ones() as usize
    }

    /// Exactly the listed ports point inward.
    pub fn only_in(&self, names: &[&str]) -> bool {
        self.count_in() == names.len() && names.iter().all(|n| self.bit(n))
    }
}

pub type StatePred = Box<dyn Fn(&PortView) -> bool + Send + Sync>;
pub type CustomCheck = fn(&Gadget) -> Result<Option<String>>;

pub enum Clause {
    /// A port state is legal exactly when the predicate holds.
    LegalExactly(StatePred),
    /// Every legal port state satisfies the predicate.
    Always(StatePred),
    /// Some legal port state satisfies the predicate.
    Possible(StatePred),
    /// Some class satisfies `from`, and every such class reaches a class
    /// satisfying `to` (moving only `movable` ports when given). With
    /// `from_initial`, only classes reachable from the initial one count.
    Reaches {
        from: StatePred,
        to: StatePred,
        movable: Option<Vec<String>>,
        from_initial: bool,
    },
    /// No class satisfying `from` reaches one satisfying `to`.
    NeverReaches {
        from: StatePred,
        to: StatePred,
        movable: Option<Vec<String>>,
    },
    /// A check on the gadget itself; `Some(message)` is a failure.
    Custom(CustomCheck),
}

pub struct BehaviorSpec {
    pub name: String,
    pub clauses: Vec<(String, Clause)>,
}

impl BehaviorSpec {
    pub fn new(name: impl Into<String>) -> Self {
        BehaviorSpec {
            name: name.into(),
            clauses: Vec::new(),
        }
    }

    pub fn clause(mut self, desc: impl Into<String>, c: Clause) -> Self {
        self.clauses.push((desc.into(), c));
        self
    }

    pub fn legal_exactly(
        self,
        desc: &str,
        p: impl Fn(&PortView) -> bool + Send + Sync + 'static,
    ) -> Self {
        self.clause(desc, Clause::LegalExactly(Box::new(p)))
    }

    pub fn always(self, desc: &str, p: impl Fn(&PortView) -> bool + Send + Sync + 'static) -> Self {
        self.clause(desc, Clause::Always(Box::new(p)))
    }

    pub fn possible(
        self,
        desc: &str,
        p: impl Fn(&PortView) -> bool + Send + Sync + 'static,
    ) -> Self {
        self.clause(desc, Clause::Possible(Box::new(p)))
    }

    pub fn reaches(
        self,
        desc: &str,
        from: impl Fn(&PortView) -> bool + Send + Sync + 'static,
        to: impl Fn(&PortView) -> bool + Send + Sync + 'static,
        movable: Option<&[&str]>,
    ) -> Self {
        let movable = movable.map(|m| m.iter().map(|s| s.to_string()).collect());
        self.clause(
            desc,
            Clause::Reaches {
                from: Box::new(from),
                to: Box::new(to),
                movable,
                from_initial: false,
            },
        )
    }

    /// As [`BehaviorSpec::reaches`], over the classes reachable from the
    /// initial configuration only.
    pub fn reaches_from_initial(
        self,
        desc: &str,
        from: impl Fn(&PortView) -> bool + Send + Sync + 'static,
        to: impl Fn(&PortView) -> bool + Send + Sync + 'static,
    ) -> Self {
        self.clause(
            desc,
            Clause::Reaches {
                from: Box::new(from),
                to: Box::new(to),
                movable: None,
                from_initial: true,
            },
        )
    }

    pub fn never_reaches(
        self,
        desc: &str,
        from: impl Fn(&PortView) -> bool + Send + Sync + 'static,
        to: impl Fn(&PortView) -> bool + Send + Sync + 'static,
        movable: Option<&[&str]>,
    ) -> Self {
        let movable = movable.map(|m| m.iter().map(|s| s.to_string()).collect());
        self.clause(
            desc,
            Clause::NeverReaches {
                from: Box::new(from),
                to: Box::new(to),
                movable,
            },
        )
    }

    pub fn custom(self, desc: &str, check: CustomCheck) -> Self {
        self.clause(desc, Clause::Custom(check))
    }
}

fn movable_mask(b: &Behavior, movable: &Option<Vec<String>>) -> Result<u64> {
    match movable {
        None => Ok(u64::MAX),
        Some(names) => names.iter().try_fold(0u64, |a, n| {
            b.index(n)
                .map(|i| a | 1 << i)
                .ok_or_else(|| NclError::Gadget(format!("spec names unknown port {n}")))
        }),
    }
}

/// Checks `spec` against the gadget; one message per failed clause, empty
/// when everything holds.
pub fn verify_behavior(g: &Gadget, spec: &BehaviorSpec) -> Result<Vec<String>> {
    if spec.clauses.is_empty() {
        return Ok(Vec::new());
    }
    let b = gadget_behavior(g, DEFAULT_GADGET_LIMIT)?;
    let n = b.ports.len();
    if n > 24 {
        return Err(NclError::LimitExceeded {
            what: "port count for spec checking",
            limit: 24,
        });
    }
    let legal = b.legal_states();
    let view = |s: u64| PortView::new(&b.ports, s);
    let mut report = Vec::new();
    for (desc, clause) in &spec.clauses {
        let fail: Option<String> = match clause {
            Clause::LegalExactly(p) => (0..1u64 << n)
                .find(|&s| p(&view(s)) != legal.contains(&s))
                .map(|s| {
                    format!(
                        "state {} legal = {}",
                        state_string(s, n),
                        legal.contains(&s)
                    )
                }),
            Clause::Always(p) => legal
                .iter()
                .find(|&&s| !p(&view(s)))
                .map(|&s| format!("legal state {} violates it", state_string(s, n))),
            Clause::Possible(p) => {
                if legal.iter().any(|&s| p(&view(s))) {
                    None
                } else {
                    Some("no legal state satisfies it".into())
                }
            }
            Clause::Reaches {
                from,
                to,
                movable,
                from_initial,
            } => {
                let mask = movable_mask(&b, movable)?;
                let live = if *from_initial {
                    b.reachable(b.initial, u64::MAX)
                } else {
                    vec![true; b.class_count()]
                };
                let starts: Vec<usize> = (0..b.class_count())
                    .filter(|&c| live[c] && from(&view(b.states[c])))
                    .collect();
                if starts.is_empty() {
                    Some("no class satisfies the source predicate".into())
                } else {
                    starts.into_iter().find_map(|c| {
                        let r = b.reachable(c, mask);
                        if (0..b.class_count()).any(|d| r[d] && to(&view(b.states[d]))) {
                            None
                        } else {
                            Some(format!(
                                "class {c} ({}) cannot reach the goal",
                                state_string(b.states[c], n)
                            ))
                        }
                    })
                }
            }
            Clause::NeverReaches { from, to, movable } => {
                let mask = movable_mask(&b, movable)?;
                (0..b.class_count())
                    .filter(|&c| from(&view(b.states[c])))
                    .find_map(|c| {
                        let r = b.reachable(c, mask);
                        (0..b.class_count())
                            .find(|&d| r[d] && to(&view(b.states[d])))
                            .map(|d| {
                                format!(
                                    "{} reaches {}",
                                    state_string(b.states[c], n),
                                    state_string(b.states[d], n)
                                )
                            })
                    })
            }
            Clause::Custom(check) => check(g)?,
        };
        if let Some(msg) = fail {
            report.push(format!("{}: {desc}: {msg}", spec.name));
        }
    }
    Ok(report)
}
