//! k-Clique to length-parameterized NCL.

use crate::drawing::Drawing;
use crate::error::{NclError, Result};
use crate::gadgets::{build_latch, Assembly, Placement};
use crate::graph::{EdgeId, Orientation, VertexId};

use super::ReductionOutput;

/// Simple undirected graph on vertices `0..n` and a clique size `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueInstance {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub k: usize,
}

impl CliqueInstance {
    pub fn new(n: usize, edges: Vec<(usize, usize)>, k: usize) -> Result<Self> {
        let c = CliqueInstance { n, edges, k };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > self.n {
            return Err(NclError::InvalidInstance(format!(
                "k = {} must be in 1..={}",
                self.k, self.n
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b) in &self.edges {
            if a >= self.n || b >= self.n {
                return Err(NclError::InvalidInstance(format!(
                    "edge ({a}, {b}) out of range"
                )));
            }
            if a == b {
                return Err(NclError::InvalidInstance(format!("self-loop at {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(NclError::InvalidInstance(format!(
                    "duplicate edge ({a}, {b})"
                )));
            }
        }
        Ok(())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Whether `k` pairwise adjacent vertices exist (exhaustive).
    pub fn has_clique(&self) -> bool {
        let mut adj = vec![vec![false; self.n]; self.n];
        for &(a, b) in &self.edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        fn extend(adj: &[Vec<bool>], chosen: &mut Vec<usize>, next: usize, k: usize) -> bool {
            if chosen.len() == k {
                return true;
            }
            for v in next..adj.len() {
                if chosen.iter().all(|&c| adj[c][v]) {
                    chosen.push(v);
                    if extend(adj, chosen, v + 1, k) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
        extend(&adj, &mut Vec::new(), 0, self.k)
    }

    /// `k + k(k-1) + k(k-1)/2 + 1`: the reversals of a clique's `U` edges,
    /// split edges and `V` edges, then the target.
    pub fn length_bound(&self) -> usize {
        let k = self.k;
        k + k * (k - 1) + k * (k - 1) / 2 + 1
    }
}

/// Reads `n <count>`, `edge <a> <b>` and `k <size>` records. Without an `n`
/// record the vertex count is one more than the largest endpoint.
pub fn parse_clique(text: &str) -> Result<CliqueInstance> {
    let (mut n, mut k, mut edges) = (None, None, Vec::new());
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let toks: Vec<&str> = content.split_whitespace().collect();
        let Some(&tag) = toks.first() else { continue };
        let nums = toks[1..]
            .iter()
            .map(|t| {
                t.parse::<usize>().map_err(|_| NclError::Parse {
                    line,
                    msg: format!("bad number '{t}'"),
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        let arity = |want: usize| {
            if nums.len() == want {
                Ok(())
            } else {
                Err(NclError::Parse {
                    line,
                    msg: format!("{tag} takes {want} number(s)"),
                })
            }
        };
        match tag {
            "n" => {
                arity(1)?;
                n = Some(nums[0]);
            }
            "k" => {
                arity(1)?;
                k = Some(nums[0]);
            }
            "edge" => {
                arity(2)?;
                edges.push((nums[0], nums[1]));
            }
            other => {
                return Err(NclError::Parse {
                    line,
                    msg: format!("unknown record {other}"),
                })
            }
        }
    }
    let k = k.ok_or(NclError::Parse {
        line: 0,
        msg: "missing k".into(),
    })?;
    let n = n.unwrap_or_else(|| edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0));
    CliqueInstance::new(n, edges, k)
}

pub fn print_clique(c: &CliqueInstance) -> String {
    let mut s = format!("n {}\n", c.n);
    for &(a, b) in &c.edges {
        s.push_str(&format!("edge {a} {b}\n"));
    }
    s.push_str(&format!("k {}\n", c.k));
    s
}

struct Built {
    asm: Assembly,
    v_vertex: VertexId,
    target_weight: u64,
}

/// Everything except `W` and the target edge.
fn build(c: &CliqueInstance) -> Result<Built> {
    c.validate()?;
    let deg = c.degrees();
    let w = c.max_degree().max(1) as u64;
    let (n, k) = (c.n as u64, c.k as u64);
    let mut a = Assembly::new();
    let radius = (c.n as f64).max(2.0);
    let vs: Vec<VertexId> = (0..c.n)
        .map(|i| {
            let t = i as f64 / c.n as f64 * std::f64::consts::TAU;
            a.vertex(
                format!("v{i}"),
                deg[i] as u64,
                (radius * t.cos(), radius * t.sin()),
            )
        })
        .collect();
    let mids: Vec<VertexId> = c
        .edges
        .iter()
        .map(|&(i, j)| {
            let (p, q) = (a.positions[vs[i].index()], a.positions[vs[j].index()]);
            a.vertex(
                format!("v({i},{j})"),
                2,
                ((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0),
            )
        })
        .collect();
    let u = a.vertex("U", w * (n - k), (-3.0 * radius, 0.0));
    let kk = k * (k - 1);
    let v_vertex = a.vertex("V", kk, (3.0 * radius, 0.0));
    for (e, &(i, j)) in c.edges.iter().enumerate() {
        a.edge(vs[i], mids[e], 1, vs[i]);
        a.edge(mids[e], vs[j], 1, vs[j]);
    }
    for &v in &vs {
        a.edge(u, v, w, u);
    }
    for &m in &mids {
        a.edge(m, v_vertex, 2, m);
    }
    Ok(Built {
        asm: a,
        v_vertex,
        target_weight: kk.max(2),
    })
}

fn finish(a: Assembly) -> ReductionOutput {
    let mut d = Drawing::with_len(a.positions.len());
    d.pos = a.positions.clone();
    let mut out = ReductionOutput::new(a.graph.clone(), d, a.labels.clone(), a.edge_labels.clone());
    out.start = Some(a.configuration());
    out
}

/// Vertices `v_i` (inflow = degree), `v_(i,j)` (inflow 2), `U`, `V`, `W`,
/// with the target `(V, W)`. `U` demands `Δ(n - k)` so that at most `k` of
/// its weight-`Δ` edges can turn away from it; the target weight is
/// `k(k-1)`, raised to 2 when that is smaller.
pub fn clique_to_c2e(c: &CliqueInstance) -> Result<ReductionOutput> {
    let Built {
        mut asm,
        v_vertex,
        target_weight,
    } = build(c)?;
    let p = asm.positions[v_vertex.index()];
    let w = asm.vertex("W", 0, (p.0 + 3.0, p.1));
    let target = asm.edge(v_vertex, w, target_weight, v_vertex);
    let mut out = finish(asm);
    out.target = Some(target);
    out.length_bound = Some(c.length_bound());
    Ok(out)
}

/// As [`clique_to_c2e`] with `W` replaced by a latch whose lock port is the
/// former target edge. The goal flips the latch and leaves every other edge
/// in its start orientation.
pub fn clique_to_c2c(c: &CliqueInstance) -> Result<ReductionOutput> {
    let Built {
        mut asm,
        v_vertex,
        target_weight,
    } = build(c)?;
    let p = asm.positions[v_vertex.index()];
    let latch = build_latch();
    let placed = asm.place(&latch, "latch.", &Placement::new(p.0 + 4.0, p.1, 0.5, 0.0));
    let lock = placed.port("L").clone();
    asm.edge(v_vertex, lock.inner, target_weight, v_vertex);
    for name in ["Te", "Be"] {
        let port = placed.port(name).clone();
        let stub = asm.vertex(format!("latch.{name}-stub"), 0, port.stub);
        let head = if port.initial == crate::gadgets::PortDir::In {
            port.inner
        } else {
            stub
        };
        asm.edge(port.inner, stub, port.weight, head);
    }
    let edge_of =
        |asm: &Assembly, name: &str| -> EdgeId { asm.named_edges[&format!("latch.{name}")] };
    let (ea, at, ab) = (edge_of(&asm, "A"), edge_of(&asm, "AT"), edge_of(&asm, "AB"));
    let te = EdgeId((asm.graph.edge_count() - 2) as u32);
    let mut out = finish(asm);
    let start = out.start.clone().expect("start set");
    let mut goal = start.clone();
    let toward = |g: &crate::graph::ConstraintGraph,
                  e: EdgeId,
                  label: &str,
                  origin: &[String]|
     -> Orientation {
        let ed = g.edge(e);
        if origin[ed.u.index()] == label {
            Orientation::TowardU
        } else {
            Orientation::TowardV
        }
    };
    let g = &out.graph;
    goal.set(ea, toward(g, ea, "latch.T", &out.vertex_origin));
    goal.set(at, toward(g, at, "latch.A", &out.vertex_origin));
    goal.set(ab, toward(g, ab, "latch.B", &out.vertex_origin));
    goal.set(te, toward(g, te, "latch.T", &out.vertex_origin));
    crate::graph::require_legal(g, &goal)?;
    out.goal = Some(goal);
    Ok(out)
}
