//! Constraint graphs and nondeterministic constraint logic.
//!
//! The crate provides the graph model and its legality semantics, exact
//! oracle solvers, tree-decomposition dynamic programs, solution-length
//! parameterized solvers and kernels, a gadget library with exhaustive
//! behavior checking, H-word reconfiguration, and compilers for the classic
//! hardness reductions (Partition, k-Clique and H-word reconfiguration).

pub mod compose;
pub mod drawing;
pub mod error;
pub mod format;
pub mod fpt;
pub mod gadgets;
pub mod graph;
pub mod hword;
pub mod random;
pub mod reduce;
pub mod search;
pub mod treewidth;
pub mod verify;

pub use error::{NclError, Result};
pub use graph::{
    classify_vertex, inflow, is_legal, legal_moves, validate_restricted, Configuration,
    ConstraintGraph, Edge, EdgeId, Orientation, VertexId, VertexKind, Violation,
};
pub use search::{MoveSequence, SolverLimits};
