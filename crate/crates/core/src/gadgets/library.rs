//! The shipped gadgets with drawing coordinates, and the behavior contract
//! each one must satisfy.

use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;

use crate::error::Result;
use crate::graph::{
    classify_vertex, is_legal, legal_moves, Configuration, EdgeId, VertexId, VertexKind,
};
use crate::search::{reachable_set, SolverLimits};

use super::{Assembly, BehaviorSpec, Gadget, Placement, PortDir};

const RED: u64 = 1;
const BLUE: u64 = 2;

fn finish(a: Assembly, name: &str) -> Gadget {
    a.into_gadget(name)
        .unwrap_or_else(|e| panic!("gadget {name} is inconsistent: {e}"))
}

fn single_vertex(name: &str, ports: [(&str, u64, (f64, f64), PortDir); 3]) -> Gadget {
    let mut a = Assembly::new();
    let x = a.vertex(name, 2, (0.0, 0.0));
    for (n, w, stub, d) in ports {
        a.open_port(n, x, w, stub, d);
    }
    finish(a, name)
}

/// A single AND vertex: red ports `r1`, `r2`, blue port `b`.
pub fn build_and() -> Gadget {
    single_vertex(
        "and",
        [
            ("b", BLUE, (0.0, 1.5), PortDir::In),
            ("r1", RED, (-1.3, -0.75), PortDir::Out),
            ("r2", RED, (1.3, -0.75), PortDir::Out),
        ],
    )
}

/// A single OR vertex: blue ports `a`, `b`, `c`.
pub fn build_or() -> Gadget {
    single_vertex(
        "or",
        [
            ("a", BLUE, (0.0, 1.5), PortDir::In),
            ("b", BLUE, (-1.3, -0.75), PortDir::Out),
            ("c", BLUE, (1.3, -0.75), PortDir::Out),
        ],
    )
}

/// Five vertices shaped like an envelope; the blue port `A` is forced
/// into the gadget. Shown in its drawn state.
pub fn build_blue_terminator() -> Gadget {
    let mut a = Assembly::new();
    let va = a.vertex("A", 2, (0.0, 0.0));
    let l = a.vertex("L", 2, (-1.5, -1.5));
    let r = a.vertex("R", 2, (1.5, -1.5));
    let m = a.vertex("M", 2, (0.0, -1.5));
    let d = a.vertex("D", 2, (0.0, -3.0));
    a.open_port("A", va, BLUE, (0.0, 1.5), PortDir::In);
    a.edge(va, l, BLUE, l);
    a.edge(va, r, BLUE, r);
    a.edge(l, d, RED, l);
    a.edge(r, d, RED, r);
    a.edge(l, m, RED, m);
    a.edge(r, m, RED, m);
    a.edge(m, d, BLUE, d);
    finish(a, "blue_terminator")
}

/// Same envelope with the colors swapped; the red port `A` is free. Its
/// vertex `A` has three red edges and is exempt from the AND/OR check.
pub fn build_red_terminator() -> Gadget {
    let mut a = Assembly::new();
    let va = a.vertex("A", 2, (0.0, 0.0));
    let l = a.vertex("L", 2, (-1.5, -1.5));
    let r = a.vertex("R", 2, (1.5, -1.5));
    let m = a.vertex("M", 2, (0.0, -1.5));
    let d = a.vertex("D", 2, (0.0, -3.0));
    a.open_port("A", va, RED, (0.0, 1.5), PortDir::Out);
    a.edge(l, va, RED, va);
    a.edge(r, va, RED, va);
    a.edge(l, d, BLUE, l);
    a.edge(r, d, BLUE, r);
    a.edge(m, l, RED, m);
    a.edge(m, r, RED, m);
    a.edge(d, m, BLUE, d);
    a.exempt.push(va);
    finish(a, "red_terminator")
}

/// AND `Y` with red ports `p1`, `p2` whose blue edge is fed by a six-vertex
/// all-OR blue source (K4 minus an edge, plus one vertex). Both red ports
/// are free, and every vertex is an AND or an OR.
pub fn build_paired_red_terminator() -> Gadget {
    let mut a = Assembly::new();
    let y = a.vertex("Y", 2, (0.0, 0.0));
    let x = a.vertex("X", 2, (0.0, -1.0));
    let u = a.vertex("u", 2, (-1.0, -2.0));
    let w = a.vertex("w", 2, (1.0, -2.0));
    let t = a.vertex("t", 2, (0.0, -2.5));
    let v = a.vertex("v", 2, (0.0, -3.5));
    a.open_port("p1", y, RED, (-1.5, 0.0), PortDir::Out);
    a.open_port("p2", y, RED, (1.5, 0.0), PortDir::Out);
    a.edge(y, x, BLUE, y);
    a.edge(x, u, BLUE, x);
    a.edge(x, w, BLUE, w);
    a.edge(u, v, BLUE, u);
    a.edge(u, t, BLUE, t);
    a.edge(v, w, BLUE, w);
    a.edge(w, t, BLUE, t);
    a.edge(v, t, BLUE, v);
    finish(a, "paired_red_terminator")
}

/// AND with its third (red) edge closed by a free red terminator: ports
/// `blue` and `red`.
pub fn build_red_blue_converter() -> Gadget {
    let mut a = Assembly::new();
    let k = a.vertex("K", 2, (0.0, 0.0));
    a.open_port("blue", k, BLUE, (0.0, 1.5), PortDir::In);
    a.open_port("red", k, RED, (-1.5, 0.0), PortDir::Out);
    let term = a.place(
        &build_red_terminator(),
        "f.",
        &Placement::new(1.5, 0.0, 0.4, PI / 2.0),
    );
    let f = term.port("A").clone();
    a.join_vertex(&f, k, k);
    finish(a, "red_blue_converter")
}

/// Two converters whose free red edges meet in one paired red terminator:
/// ports `blue1`, `red1`, `blue2`, `red2`. The all-AND/OR stand-in for two
/// converters.
pub fn build_converter_pair() -> Gadget {
    let mut a = Assembly::new();
    let k1 = a.vertex("K1", 2, (-1.0, 0.0));
    let k2 = a.vertex("K2", 2, (1.0, 0.0));
    a.open_port("blue1", k1, BLUE, (-1.0, 1.5), PortDir::In);
    a.open_port("red1", k1, RED, (-2.5, 0.0), PortDir::Out);
    a.open_port("blue2", k2, BLUE, (1.0, 1.5), PortDir::In);
    a.open_port("red2", k2, RED, (2.5, 0.0), PortDir::Out);
    let pt = a.place(
        &build_paired_red_terminator(),
        "pt.",
        &Placement::new(0.0, -1.0, 0.5, 0.0),
    );
    let (p1, p2) = (pt.port("p1").clone(), pt.port("p2").clone());
    a.join_vertex(&p1, k1, k1);
    a.join_vertex(&p2, k2, k2);
    finish(a, "converter_pair")
}

/// Eight-vertex octagon with two chords; blue ports `A` (top), `B`
/// (bottom), `C` (left), `D` (right).
pub fn build_half_crossover() -> Gadget {
    let mut a = Assembly::new();
    let ac = a.vertex("AC", 2, (-1.0, 2.0));
    let va = a.vertex("A", 2, (0.0, 2.3));
    let ad = a.vertex("AD", 2, (1.0, 2.0));
    let d = a.vertex("D", 2, (2.0, 0.0));
    let bd = a.vertex("BD", 2, (1.0, -2.0));
    let b = a.vertex("B", 2, (0.0, -2.3));
    let bc = a.vertex("BC", 2, (-1.0, -2.0));
    let c = a.vertex("C", 2, (-2.0, 0.0));
    a.open_port("A", va, BLUE, (0.0, 3.5), PortDir::In);
    a.open_port("B", b, BLUE, (0.0, -3.5), PortDir::In);
    a.open_port("C", c, BLUE, (-3.5, 0.0), PortDir::Out);
    a.open_port("D", d, BLUE, (3.5, 0.0), PortDir::Out);
    a.edge(va, ad, BLUE, ad);
    a.edge(ad, d, RED, d);
    a.edge(d, bd, RED, d);
    a.edge(bd, b, BLUE, bd);
    a.edge(b, bc, BLUE, bc);
    a.edge(bc, c, RED, c);
    a.edge(c, ac, RED, c);
    a.edge(ac, va, BLUE, ac);
    a.edge(bc, ac, RED, ac);
    a.edge(bd, ad, RED, ad);
    finish(a, "half_crossover")
}

/// Local coordinates of the crossover's outer vertices.
const CROSS_XY: [(&str, (f64, f64)); 10] = [
    ("A", (0.0, 2.2)),
    ("B", (0.0, -2.2)),
    ("C", (-2.2, 0.0)),
    ("D", (2.2, 0.0)),
    ("AC", (-1.0, 1.0)),
    ("AD", (1.0, 1.0)),
    ("BD", (1.0, -1.0)),
    ("BC", (-1.0, -1.0)),
    ("L", (-0.35, 0.0)),
    ("R", (0.35, 0.0)),
];

/// Red edges of the crossover between its named vertices.
const CROSS_RED: [(&str, &str); 14] = [
    ("A", "AD"),
    ("AD", "D"),
    ("D", "BD"),
    ("BD", "B"),
    ("B", "BC"),
    ("BC", "C"),
    ("C", "AC"),
    ("AC", "A"),
    ("AC", "L"),
    ("L", "BC"),
    ("BC", "AC"),
    ("AD", "R"),
    ("R", "BD"),
    ("BD", "AD"),
];

const CROSS_DEG4: [&str; 4] = ["AC", "AD", "BD", "BC"];

/// Blue ports `A` (top), `D` (right), `B` (bottom), `C` (left): `A` and
/// `B` cannot both point out, nor can `C` and `D`. The plain variant has
/// four red degree-4 vertices (exempt from the restriction); with
/// `pure_and_or` each of them is a half-crossover whose ports go through
/// converters, and every vertex is an AND or an OR.
pub fn build_crossover(pure_and_or: bool) -> Gadget {
    let scale = if pure_and_or { 10.0 } else { 1.0 };
    let pos = |n: &str| {
        let p = CROSS_XY.iter().find(|(m, _)| *m == n).unwrap().1;
        (p.0 * scale, p.1 * scale)
    };
    let mut a = Assembly::new();
    let mut ids: Vec<(&str, VertexId)> = Vec::new();
    for (n, _) in CROSS_XY {
        if pure_and_or && CROSS_DEG4.contains(&n) {
            continue;
        }
        let v = a.vertex(n, 2, pos(n));
        ids.push((n, v));
        if CROSS_DEG4.contains(&n) {
            a.exempt.push(v);
        }
    }
    let id = |ids: &[(&str, VertexId)], n: &str| ids.iter().find(|(m, _)| *m == n).map(|x| x.1);
    let ports = [
        ("A", (0.0, 3.4)),
        ("B", (0.0, -3.4)),
        ("C", (-3.4, 0.0)),
        ("D", (3.4, 0.0)),
    ];
    for (n, stub) in ports {
        let dir = if n == "A" || n == "C" {
            PortDir::In
        } else {
            PortDir::Out
        };
        a.open_port(
            n,
            id(&ids, n).unwrap(),
            BLUE,
            (stub.0 * scale, stub.1 * scale),
            dir,
        );
    }
    let (l, r) = (id(&ids, "L").unwrap(), id(&ids, "R").unwrap());
    a.edge(l, r, BLUE, r);
    if !pure_and_or {
        for (x, y) in CROSS_RED {
            let (vx, vy) = (id(&ids, x).unwrap(), id(&ids, y).unwrap());
            a.edge(vx, vy, RED, vy);
        }
    } else {
        // Endpoint of each red edge at a replaced vertex: the converter
        // placed in front of the half-crossover port facing the neighbour.
        let mut ends: Vec<((&str, &str), VertexId)> = Vec::new();
        for &x in &CROSS_DEG4 {
            let nbrs: Vec<&str> = CROSS_RED
                .iter()
                .filter_map(|&(p, q)| {
                    if p == x {
                        Some(q)
                    } else if q == x {
                        Some(p)
                    } else {
                        None
                    }
                })
                .collect();
            let at = pos(x);
            let dirs: Vec<(f64, f64)> = nbrs
                .iter()
                .map(|n| (pos(n).0 - at.0, pos(n).1 - at.1))
                .collect();
            let conv = place_replacement(&mut a, x, at, 1.0, &dirs);
            for (n, k) in nbrs.into_iter().zip(conv) {
                ends.push(((x, n), k));
            }
        }
        for (x, y) in CROSS_RED {
            let end = |p: &str, q: &str| -> VertexId {
                ends.iter()
                    .find(|(k, _)| *k == (p, q))
                    .map(|e| e.1)
                    .or_else(|| id(&ids, p))
                    .unwrap()
            };
            let (vx, vy) = (end(x, y), end(y, x));
            a.edge(vx, vy, RED, vy);
        }
    }
    a.solve_internal().expect("crossover has a legal state");
    finish(
        a,
        if pure_and_or {
            "crossover_pure"
        } else {
            "crossover"
        },
    )
}

/// Replaces a red degree-4 vertex at `at` by a half-crossover of radius
/// about `3.5 * scale`, rotated so its ports face the neighbours in
/// directions `dirs` (counter-clockwise port order matched to neighbour
/// order). Each port gets a converter; the converters' free red edges are
/// closed pairwise by paired red terminators in two opposite quadrants.
/// Returns the converter facing each neighbour, in the order of `dirs`.
pub fn place_replacement(
    a: &mut Assembly,
    name: &str,
    at: (f64, f64),
    scale: f64,
    dirs: &[(f64, f64)],
) -> Vec<VertexId> {
    assert_eq!(dirs.len(), 4);
    // half-crossover ports in counter-clockwise order and their angles
    let hc_ports = ["D", "A", "C", "B"];
    let ang: Vec<f64> = dirs
        .iter()
        .map(|d| d.1.atan2(d.0).rem_euclid(2.0 * PI))
        .collect();
    let mut by_angle: Vec<usize> = (0..4).collect();
    by_angle.sort_by(|&i, &j| ang[i].partial_cmp(&ang[j]).unwrap());
    // pick the cyclic shift and rotation with the smallest worst deviation
    let mut best: Option<(f64, usize, f64)> = None;
    for shift in 0..4 {
        // neighbour by_angle[(k + shift) % 4] goes to port k (angle k * 90°)
        let offs: Vec<f64> = (0..4)
            .map(|k| {
                let d = ang[by_angle[(k + shift) % 4]] - k as f64 * PI / 2.0;
                d.rem_euclid(2.0 * PI)
            })
            .collect();
        // circular mean of the offsets
        let (s, c) = offs
            .iter()
            .fold((0.0, 0.0), |(s, c), o| (s + o.sin(), c + o.cos()));
        let rot = s.atan2(c);
        let worst = offs
            .iter()
            .map(|o| {
                let d = (o - rot).rem_euclid(2.0 * PI);
                d.min(2.0 * PI - d)
            })
            .fold(0.0, f64::max);
        if best.is_none_or(|b| worst < b.0 - 1e-9) {
            best = Some((worst, shift, rot));
        }
    }
    let (_, shift, rot) = best.unwrap();
    let frame = Placement::new(at.0, at.1, scale, rot);
    let hc = a.place(&build_half_crossover(), &format!("{name}."), &frame);
    let mut conv = vec![VertexId(0); 4];
    let mut by_port = Vec::new();
    for (k, p) in hc_ports.iter().enumerate() {
        let pp = hc.port(p).clone();
        let kv = a.vertex(format!("{name}.K{p}"), 2, pp.stub);
        a.edge(pp.inner, kv, BLUE, pp.inner);
        conv[by_angle[(k + shift) % 4]] = kv;
        by_port.push((kv, k));
    }
    // quadrant pairs: (D, A) and (C, B), or (A, C) and (B, D), whichever
    // keeps the terminators farther from the outgoing edges
    let quad_clear = |q: f64| -> f64 {
        (0..4)
            .map(|i| {
                let d = (ang[i] - rot - q).rem_euclid(2.0 * PI);
                d.min(2.0 * PI - d)
            })
            .fold(f64::INFINITY, f64::min)
    };
    let opt1 = quad_clear(PI / 4.0).min(quad_clear(5.0 * PI / 4.0));
    let opt2 = quad_clear(3.0 * PI / 4.0).min(quad_clear(7.0 * PI / 4.0));
    let pairs: [(usize, usize, f64); 2] = if opt1 >= opt2 {
        [(0, 1, PI / 4.0), (2, 3, 5.0 * PI / 4.0)]
    } else {
        [(1, 2, 3.0 * PI / 4.0), (3, 0, 7.0 * PI / 4.0)]
    };
    let pt_gadget = build_paired_red_terminator();
    for (qi, (i, j, q)) in pairs.into_iter().enumerate() {
        let theta = rot + q;
        let r = 3.3 * scale;
        let y = (at.0 + r * theta.cos(), at.1 + r * theta.sin());
        // the terminator's local +y axis points back at the centre
        let place = Placement::new(y.0, y.1, 0.35 * scale, theta - PI / 2.0);
        let pt = a.place(&pt_gadget, &format!("{name}.T{qi}."), &place);
        // local p1 is on the left when looking from the centre outward
        let (p1, p2) = (pt.port("p1").clone(), pt.port("p2").clone());
        let (ki, kj) = (by_port[i].0, by_port[j].0);
        // port i precedes port j counter-clockwise, so it sits to the
        // right of the outward direction
        a.join_vertex(&p2, ki, ki);
        a.join_vertex(&p1, kj, kj);
    }
    conv
}

/// OR `A` with blue port `L`; ANDs `T` and `B` joined by the red edge `A`,
/// red ports `Te` and `Be`. Shown locked (with `L` out).
pub fn build_latch() -> Gadget {
    let mut a = Assembly::new();
    let va = a.vertex("A", 2, (0.0, 0.0));
    let t = a.vertex("T", 2, (2.6, 1.5));
    let b = a.vertex("B", 2, (2.6, -1.5));
    a.open_port("L", va, BLUE, (-3.0, 0.0), PortDir::Out);
    a.open_port("Te", t, RED, (5.6, 1.5), PortDir::Out);
    a.open_port("Be", b, RED, (5.6, -1.5), PortDir::In);
    let ea = a.edge(t, b, RED, b);
    let at = a.edge(va, t, BLUE, t);
    let ab = a.edge(va, b, BLUE, va);
    a.named_edges.insert("A".into(), ea);
    a.named_edges.insert("AT".into(), at);
    a.named_edges.insert("AB".into(), ab);
    finish(a, "latch")
}

/// A caterpillar of `n + 1` OR vertices with `n + 3` blue ports `p0`, ...,
/// `p{n+2}` in left-to-right order.
pub fn build_or_tree(n: usize) -> Gadget {
    let mut a = Assembly::new();
    let ts: Vec<VertexId> = (0..=n)
        .map(|k| a.vertex(format!("t{k}"), 2, (2.0 * k as f64, 0.0)))
        .collect();
    a.open_port("p0", ts[0], BLUE, (-1.5, 0.0), PortDir::Out);
    for (k, &t) in ts.iter().enumerate() {
        let dir = if k == 0 { PortDir::In } else { PortDir::Out };
        a.open_port(&format!("p{}", k + 1), t, BLUE, (2.0 * k as f64, 1.5), dir);
    }
    a.open_port(
        &format!("p{}", n + 2),
        ts[n],
        BLUE,
        (2.0 * n as f64 + 1.5, 0.0),
        PortDir::Out,
    );
    for w in ts.windows(2) {
        a.edge(w[0], w[1], BLUE, w[1]);
    }
    finish(a, &format!("or_tree{n}"))
}

fn check_restricted(g: &Gadget) -> Result<Option<String>> {
    let v = g.restricted_violations();
    Ok(if v.is_empty() {
        None
    } else {
        Some(format!("{} violations, first: {}", v.len(), v[0]))
    })
}

fn check_single_kind(g: &Gadget, want: VertexKind) -> Result<Option<String>> {
    let inner = g.internal_vertices();
    if inner.len() != 1 {
        return Ok(Some(format!("{} internal vertices", inner.len())));
    }
    let k = classify_vertex(&g.graph, inner[0])?;
    Ok(if k == want {
        None
    } else {
        Some(format!("vertex classifies as {k:?}"))
    })
}

/// Configurations reachable from `from` without reversing any edge in
/// `pinned`.
fn closure_without(g: &Gadget, from: &Configuration, pinned: &[EdgeId]) -> Vec<Configuration> {
    let mut seen = HashSet::from([from.clone()]);
    let mut q = VecDeque::from([from.clone()]);
    let mut out = Vec::new();
    while let Some(c) = q.pop_front() {
        for e in legal_moves(&g.graph, &c).expect("closure stays legal") {
            if pinned.contains(&e) {
                continue;
            }
            let n = c.reversed(e);
            if seen.insert(n.clone()) {
                q.push_back(n);
            }
        }
        out.push(c);
    }
    out
}

/// From every configuration reachable from the initial one, the red port
/// can be reversed after some internal moves.
fn check_red_port_always_flippable(g: &Gadget) -> Result<Option<String>> {
    let port = g.ports[0].edge;
    for x in reachable_set(&g.graph, &g.initial, SolverLimits::unlimited())? {
        let ok = closure_without(g, &x, &[port]).iter().any(|y| {
            legal_moves(&g.graph, y)
                .map(|m| m.contains(&port))
                .unwrap_or(false)
        });
        if !ok {
            return Ok(Some("a reachable state can never reverse the port".into()));
        }
    }
    Ok(None)
}

fn latch_state_ok(g: &Gadget, c: &Configuration) -> bool {
    let l = g.port("L").expect("latch has L");
    g.port_dir(c, l) == PortDir::Out
}

/// With `L` pointing out, `A` is never a legal move.
fn check_latch_locked_freezes(g: &Gadget) -> Result<Option<String>> {
    let ea = g.named_edge("A").expect("latch has edge A");
    let m = g.graph.edge_count();
    for mask in 0..1u64 << m {
        let c = Configuration::from_mask(m, mask);
        if is_legal(&g.graph, &c)?
            && latch_state_ok(g, &c)
            && legal_moves(&g.graph, &c)?.contains(&ea)
        {
            return Ok(Some(format!("A movable in locked configuration {mask:#b}")));
        }
    }
    Ok(None)
}

/// Reversing `L` from the initial state lets `A` reverse with `L` held.
fn check_latch_unlocks(g: &Gadget) -> Result<Option<String>> {
    let ea = g.named_edge("A").expect("latch has edge A");
    let l = g.port("L").expect("latch has L");
    let unlocked = g.initial.reversed(l.edge);
    if !is_legal(&g.graph, &unlocked)? {
        return Ok(Some("reversing L from the initial state is illegal".into()));
    }
    let ok = closure_without(g, &unlocked, &[l.edge])
        .iter()
        .any(|c| c.get(ea) != g.initial.get(ea));
    Ok(if ok {
        None
    } else {
        Some("A cannot reverse after unlocking".into())
    })
}

/// Unlock, flip `A`, lock again: a locked state with `A` reversed is
/// reachable from the initial one (and, moves being reversible, back).
fn check_latch_cycle(g: &Gadget) -> Result<Option<String>> {
    let ea = g.named_edge("A").expect("latch has edge A");
    let reach = reachable_set(&g.graph, &g.initial, SolverLimits::unlimited())?;
    let ok = reach
        .iter()
        .any(|c| latch_state_ok(g, c) && c.get(ea) != g.initial.get(ea));
    Ok(if ok {
        None
    } else {
        Some("no locked state with A reversed is reachable".into())
    })
}

/// The drawn state: `L` out, `Te` out, `Be` in, `A` pointing at `B`.
fn check_latch_initial(g: &Gadget) -> Result<Option<String>> {
    let c = &g.initial;
    let dir = |n: &str| g.port_dir(c, g.port(n).unwrap());
    let ea = g.named_edge("A").unwrap();
    let head = g.graph.head(c, ea);
    let ok = dir("L") == PortDir::Out
        && dir("Te") == PortDir::Out
        && dir("Be") == PortDir::In
        && g.labels[head.index()].ends_with('B');
    Ok(if ok {
        None
    } else {
        Some("initial state is not the drawn locked state".into())
    })
}

pub fn and_spec() -> BehaviorSpec {
    BehaviorSpec::new("and")
        .custom("classifies as AND", |g| {
            check_single_kind(g, VertexKind::And)
        })
        .legal_exactly("blue in, or both reds in", |s| {
            s.is_in("b") || (s.is_in("r1") && s.is_in("r2"))
        })
        .reaches(
            "blue inflow can be traded for both reds",
            |s| s.only_in(&["b"]),
            |s| s.only_in(&["r1", "r2"]),
            None,
        )
}

pub fn or_spec() -> BehaviorSpec {
    BehaviorSpec::new("or")
        .custom("classifies as OR", |g| check_single_kind(g, VertexKind::Or))
        .legal_exactly("all but all-outward", |s| s.count_in() >= 1)
}

pub fn blue_terminator_spec() -> BehaviorSpec {
    BehaviorSpec::new("blue_terminator")
        .custom("internal vertices all AND/OR", check_restricted)
        .possible("A inward reachable", |s| s.is_in("A"))
        .always("A outward never legal", |s| s.is_in("A"))
}

pub fn red_terminator_spec() -> BehaviorSpec {
    BehaviorSpec::new("red_terminator")
        .custom("restricted apart from vertex A", check_restricted)
        .possible("A in", |s| s.is_in("A"))
        .possible("A out", |s| s.is_out("A"))
        .reaches_from_initial("in reaches out", |s| s.is_in("A"), |s| s.is_out("A"))
        .reaches_from_initial("out reaches in", |s| s.is_out("A"), |s| s.is_in("A"))
        .custom(
            "A reversible from every reachable state after internal moves",
            check_red_port_always_flippable,
        )
}

pub fn paired_red_terminator_spec() -> BehaviorSpec {
    let mut spec = BehaviorSpec::new("paired_red_terminator")
        .custom("internal vertices all AND/OR", check_restricted)
        .legal_exactly("every port state legal", |_| true);
    for (i1, i2) in [(false, false), (false, true), (true, false), (true, true)] {
        spec = spec.reaches(
            &format!(
                "every state reaches p1={} p2={}",
                dir_word(i1),
                dir_word(i2)
            ),
            |_| true,
            move |s| s.is_in("p1") == i1 && s.is_in("p2") == i2,
            None,
        );
    }
    spec
}

fn dir_word(inward: bool) -> &'static str {
    if inward {
        "in"
    } else {
        "out"
    }
}

pub fn converter_spec() -> BehaviorSpec {
    BehaviorSpec::new("red_blue_converter")
        .legal_exactly("blue out implies red in", |s| {
            s.is_in("blue") || s.is_in("red")
        })
        .possible("blue in and red out legal", |s| {
            s.is_in("blue") && s.is_out("red")
        })
        .reaches_from_initial(
            "blue in/red out reaches blue out/red in",
            |s| s.only_in(&["blue"]),
            |s| s.only_in(&["red"]),
        )
        .reaches_from_initial(
            "blue out/red in reaches blue in/red out",
            |s| s.only_in(&["red"]),
            |s| s.only_in(&["blue"]),
        )
        .never_reaches(
            "red cannot turn out while blue stays out",
            |s| s.only_in(&["red"]),
            |s| s.is_out("red"),
            Some(&["red"]),
        )
}

pub fn converter_pair_spec() -> BehaviorSpec {
    BehaviorSpec::new("converter_pair")
        .custom("internal vertices all AND/OR", check_restricted)
        .legal_exactly("each blue out implies its red in", |s| {
            (s.is_in("blue1") || s.is_in("red1")) && (s.is_in("blue2") || s.is_in("red2"))
        })
        .reaches(
            "first converter switches sides",
            |s| s.is_in("blue1") && s.is_out("red1"),
            |s| s.is_out("blue1") && s.is_in("red1"),
            Some(&["blue1", "red1"]),
        )
        .reaches(
            "second converter switches sides",
            |s| s.is_in("blue2") && s.is_out("red2"),
            |s| s.is_out("blue2") && s.is_in("red2"),
            Some(&["blue2", "red2"]),
        )
}

/// The half-crossover has no standard contract of its own; these facts were
/// extracted by enumeration and are pinned here.
pub fn half_crossover_spec() -> BehaviorSpec {
    BehaviorSpec::new("half_crossover")
        .custom("internal vertices all AND/OR", check_restricted)
        .legal_exactly("at most two ports out", |s| s.count_in() >= 2)
        .reaches(
            "A,B in reaches C,D in",
            |s| s.only_in(&["A", "B"]),
            |s| s.only_in(&["C", "D"]),
            None,
        )
        .reaches(
            "A,C in reaches B,D in",
            |s| s.only_in(&["A", "C"]),
            |s| s.only_in(&["B", "D"]),
            None,
        )
        .reaches(
            "A,D in reaches B,C in",
            |s| s.only_in(&["A", "D"]),
            |s| s.only_in(&["B", "C"]),
            None,
        )
}

fn crossover_spec_named(name: &str, restricted: bool) -> BehaviorSpec {
    let mut spec = BehaviorSpec::new(name)
        .legal_exactly("A out only if B in, C out only if D in", |s| {
            !(s.is_out("A") && s.is_out("B")) && !(s.is_out("C") && s.is_out("D"))
        })
        .reaches(
            "A and B exchange with C, D fixed (C in, D out)",
            |s| s.is_out("A") && s.is_in("B") && s.is_in("C") && s.is_out("D"),
            |s| s.is_in("A") && s.is_out("B"),
            Some(&["A", "B"]),
        )
        .reaches(
            "C and D exchange with A, B fixed (A in, B out)",
            |s| s.is_out("C") && s.is_in("D") && s.is_in("A") && s.is_out("B"),
            |s| s.is_in("C") && s.is_out("D"),
            Some(&["C", "D"]),
        );
    if restricted {
        spec = spec.custom("internal vertices all AND/OR", check_restricted);
    } else {
        spec = spec.custom("only the four degree-4 vertices are exempt", |g| {
            Ok(if g.exempt.len() == 4 {
                check_restricted(g)?
            } else {
                Some(format!("{} exempt", g.exempt.len()))
            })
        });
    }
    spec
}

pub fn crossover_spec(pure_and_or: bool) -> BehaviorSpec {
    if pure_and_or {
        crossover_spec_named("crossover_pure", true)
    } else {
        crossover_spec_named("crossover", false)
    }
}

pub fn latch_spec() -> BehaviorSpec {
    BehaviorSpec::new("latch")
        .custom("internal vertices all AND/OR", check_restricted)
        .custom(
            "initial state is the drawn locked state",
            check_latch_initial,
        )
        .custom("locked: A never a legal move", check_latch_locked_freezes)
        .custom("after reversing L, A can reverse", check_latch_unlocks)
        .custom(
            "unlock, flip A, lock is a reachable cycle",
            check_latch_cycle,
        )
}

pub fn or_tree_spec(n: usize) -> BehaviorSpec {
    let k = n + 3;
    let mut spec = BehaviorSpec::new(format!("or_tree{n}"))
        .custom("internal vertices all AND/OR", check_restricted)
        .legal_exactly("at least one port inward", |s| s.count_in() >= 1);
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let (pi, pj) = (format!("p{i}"), format!("p{j}"));
                spec = spec.reaches(
                    &format!("only p{i} in reaches only p{j} in"),
                    move |s| s.only_in(&[&pi]),
                    move |s| s.only_in(&[&pj]),
                    None,
                );
            }
        }
    }
    spec
}

/// Every shipped gadget with the behavior contract it must satisfy.
pub fn shipped_gadgets() -> Vec<(Gadget, BehaviorSpec)> {
    let mut out = vec![
        (build_and(), and_spec()),
        (build_or(), or_spec()),
        (build_blue_terminator(), blue_terminator_spec()),
        (build_red_terminator(), red_terminator_spec()),
        (build_paired_red_terminator(), paired_red_terminator_spec()),
        (build_red_blue_converter(), converter_spec()),
        (build_converter_pair(), converter_pair_spec()),
        (build_half_crossover(), half_crossover_spec()),
        (build_crossover(false), crossover_spec(false)),
        (build_crossover(true), crossover_spec(true)),
        (build_latch(), latch_spec()),
    ];
    for n in 0..=3 {
        out.push((build_or_tree(n), or_tree_spec(n)));
    }
    out
}
