//! Compilers for the hardness reductions (Partition to CGS and bounded NCL,
//! k-Clique to length-bounded NCL, H-word reconfiguration to NCL) and the
//! linear-layout machinery used to bound the bandwidth of their outputs.

mod clique;
mod hword;
mod layout;
mod partition;
mod planar;

pub use clique::{clique_to_c2c, clique_to_c2e, parse_clique, print_clique, CliqueInstance};
pub use hword::{decode_config, encode_word_config, hword_to_ncl, HWordMap, HWordOptions, Orient};
pub use layout::{
    bandwidth_exact, cutwidth_exact, layout_bandwidth, layout_cutwidth, layout_from_bags, Layout,
    BAG_LAYOUT_LIMIT,
};
pub use partition::{
    parse_partition, partition_to_bounded_ncl, partition_to_cgs, print_partition, PartitionGoal,
    PartitionInstance,
};

use crate::drawing::Drawing;
use crate::format::Document;
use crate::graph::{Configuration, ConstraintGraph, EdgeId, VertexId};
use crate::treewidth::TreeDecomposition;

#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub graph: ConstraintGraph,
    /// Legal start configuration. `None` only for the satisfiability
    /// reduction, which asks for any legal configuration.
    pub start: Option<Configuration>,
    pub goal: Option<Configuration>,
    pub target: Option<EdgeId>,
    /// Layer (bag-ordered) and coordinates of every vertex.
    pub drawing: Drawing,
    /// Provenance label of every vertex.
    pub vertex_origin: Vec<String>,
    /// Provenance label of every edge.
    pub edge_origin: Vec<String>,
    /// Ordered bags `B_1..B_{n-1}` where the construction defines them.
    pub bags: Option<Vec<Vec<VertexId>>>,
    pub decomposition: Option<TreeDecomposition>,
    /// Solution length that suffices whenever the instance is solvable.
    pub length_bound: Option<usize>,
    /// Word encoding data of H-word reductions.
    pub hword: Option<HWordMap>,
}

impl ReductionOutput {
    fn new(
        graph: ConstraintGraph,
        drawing: Drawing,
        vertex_origin: Vec<String>,
        edge_origin: Vec<String>,
    ) -> Self {
        ReductionOutput {
            graph,
            start: None,
            goal: None,
            target: None,
            drawing,
            vertex_origin,
            edge_origin,
            bags: None,
            decomposition: None,
            length_bound: None,
            hword: None,
        }
    }

    /// The output as a text-format document: `start`/`goal` configs, the
    /// target, bags, layers and back-map records.
    pub fn to_document(&self) -> Document {
        let mut d = Document::from_graph(self.graph.clone());
        if let Some(s) = &self.start {
            d.configs.push(("start".into(), s.clone()));
        }
        if let Some(g) = &self.goal {
            d.configs.push(("goal".into(), g.clone()));
        }
        d.target = self.target;
        d.bags = self.bags.clone().unwrap_or_default();
        d.drawing = Some(self.drawing.clone());
        d.backmap_vertices = self
            .vertex_origin
            .iter()
            .enumerate()
            .map(|(i, s)| (VertexId(i as u32), s.clone()))
            .collect();
        d.backmap_edges = self
            .edge_origin
            .iter()
            .enumerate()
            .map(|(i, s)| (EdgeId(i as u32), s.clone()))
            .collect();
        d
    }
}
