//! Partition to constraint graph satisfiability and to bounded NCL.

use crate::drawing::Drawing;
use crate::error::{NclError, Result};
use crate::graph::{Configuration, ConstraintGraph, EdgeId, Orientation, VertexId};
use crate::treewidth::TreeDecomposition;

use super::ReductionOutput;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInstance {
    pub xs: Vec<u64>,
}

impl PartitionInstance {
    pub fn new(xs: Vec<u64>) -> Result<Self> {
        let p = PartitionInstance { xs };
        p.half()?;
        Ok(p)
    }

    /// `N`, half the total.
    pub fn half(&self) -> Result<u64> {
        if self.xs.is_empty() {
            return Err(NclError::InvalidInstance(
                "partition instance is empty".into(),
            ));
        }
        if self.xs.contains(&0) {
            return Err(NclError::InvalidInstance(
                "partition values must be positive".into(),
            ));
        }
        let mut sum: u64 = 0;
        for &x in &self.xs {
            sum = sum
                .checked_add(x)
                .ok_or(NclError::Overflow("partition sum"))?;
        }
        if sum % 2 == 1 {
            return Err(NclError::InvalidInstance(format!("sum {sum} is odd")));
        }
        Ok(sum / 2)
    }

    /// Whether some subset sums to `N`, by subset-sum dynamic programming.
    pub fn has_partition(&self) -> Result<bool> {
        let n = self.half()? as usize;
        let mut reach = vec![false; n + 1];
        reach[0] = true;
        for &x in &self.xs {
            let x = x as usize;
            for s in (x..=n).rev() {
                if reach[s - x] {
                    reach[s] = true;
                }
            }
        }
        Ok(reach[n])
    }
}

/// Reads `x <value>...` records (several records concatenate). `#` starts
/// a comment.
pub fn parse_partition(text: &str) -> Result<PartitionInstance> {
    let mut xs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut toks = content.split_whitespace();
        match toks.next() {
            None => continue,
            Some("x") => {
                for t in toks {
                    xs.push(t.parse().map_err(|_| NclError::Parse {
                        line: i + 1,
                        msg: format!("bad value '{t}'"),
                    })?);
                }
            }
            Some(other) => {
                return Err(NclError::Parse {
                    line: i + 1,
                    msg: format!("unknown record {other}"),
                })
            }
        }
    }
    PartitionInstance::new(xs)
}

pub fn print_partition(p: &PartitionInstance) -> String {
    let xs: Vec<String> = p.xs.iter().map(|x| x.to_string()).collect();
    format!("x {}\n", xs.join(" "))
}

/// Which question the bounded reduction asks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionGoal {
    C2E,
    C2C,
}

struct Parts {
    g: ConstraintGraph,
    u: VertexId,
    w: VertexId,
    vs: Vec<VertexId>,
    uv: Vec<EdgeId>,
    wv: Vec<EdgeId>,
    vlabels: Vec<String>,
    elabels: Vec<String>,
}

fn base(p: &PartitionInstance) -> Result<Parts> {
    let n = p.half()?;
    let mut g = ConstraintGraph::new();
    let u = g.add_vertex(n);
    let w = g.add_vertex(n);
    let mut vlabels = vec!["U".to_string(), "W".to_string()];
    let mut elabels = Vec::new();
    let mut vs = Vec::new();
    for (i, &x) in p.xs.iter().enumerate() {
        vs.push(g.add_vertex(x));
        vlabels.push(format!("v{}", i + 1));
    }
    let (mut uv, mut wv) = (Vec::new(), Vec::new());
    for (i, &x) in p.xs.iter().enumerate() {
        uv.push(g.add_edge(u, vs[i], x)?);
        elabels.push(format!("U-v{}", i + 1));
        wv.push(g.add_edge(w, vs[i], x)?);
        elabels.push(format!("W-v{}", i + 1));
    }
    g.check_arithmetic()?;
    Ok(Parts {
        g,
        u,
        w,
        vs,
        uv,
        wv,
        vlabels,
        elabels,
    })
}

fn drawing(parts: &Parts) -> Drawing {
    let mut d = Drawing::with_len(parts.g.vertex_count());
    let k = parts.vs.len() as f64;
    d.pos[parts.u.index()] = ((k - 1.0) / 2.0, 2.0);
    d.pos[parts.w.index()] = ((k - 1.0) / 2.0, -2.0);
    for (i, v) in parts.vs.iter().enumerate() {
        d.pos[v.index()] = (i as f64, 0.0);
    }
    d
}

/// Path of bags `{U, W, v_i}`: the star on `U` plus `W` in every bag.
fn decomposition(parts: &Parts) -> TreeDecomposition {
    let bags: Vec<Vec<VertexId>> = parts
        .vs
        .iter()
        .map(|&v| vec![parts.u, parts.w, v])
        .collect();
    let tree = (1..bags.len()).map(|i| (i - 1, i)).collect();
    TreeDecomposition::new(bags, tree)
}

/// `U`, `W` with minimum inflow `N`, `v_i` with `x_i`, and edges `(U, v_i)`,
/// `(W, v_i)` of weight `x_i`. Satisfiable iff the values split evenly.
pub fn partition_to_cgs(p: &PartitionInstance) -> Result<ReductionOutput> {
    let parts = base(p)?;
    let d = drawing(&parts);
    let mut out = ReductionOutput::new(
        parts.g.clone(),
        d,
        parts.vlabels.clone(),
        parts.elabels.clone(),
    );
    let td = decomposition(&parts);
    out.bags = Some(td.bags.clone());
    out.decomposition = Some(td);
    Ok(out)
}

/// The satisfiability graph plus the edge `(U, W)` of weight `N`, started
/// with `(U, W)` toward `W`, `(U, v_i)` toward `U` and `(W, v_i)` toward
/// `v_i`. C2E targets `(U, W)`; C2C asks for every edge reversed.
pub fn partition_to_bounded_ncl(
    p: &PartitionInstance,
    variant: PartitionGoal,
) -> Result<ReductionOutput> {
    let mut parts = base(p)?;
    let n = p.half()?;
    let uw = parts.g.add_edge(parts.u, parts.w, n)?;
    parts.elabels.push("U-W".into());
    parts.g.check_arithmetic()?;
    let mut start = Configuration::uniform(parts.g.edge_count(), Orientation::TowardV);
    start.set(uw, Orientation::TowardV);
    for i in 0..parts.vs.len() {
        start.set(parts.uv[i], Orientation::TowardU);
        start.set(parts.wv[i], Orientation::TowardV);
    }
    let d = drawing(&parts);
    let td = decomposition(&parts);
    let mut out = ReductionOutput::new(
        parts.g.clone(),
        d,
        parts.vlabels.clone(),
        parts.elabels.clone(),
    );
    match variant {
        PartitionGoal::C2E => out.target = Some(uw),
        PartitionGoal::C2C => {
            let mut goal = start.clone();
            for e in parts.g.edge_ids() {
                goal.flip(e);
            }
            out.goal = Some(goal);
        }
    }
    out.start = Some(start);
    out.bags = Some(td.bags.clone());
    out.decomposition = Some(td);
    Ok(out)
}
