//! Implicit hitting set solvers and feedback vertex set algorithms for
//! random graphs.

pub mod experiment;
pub mod format;
pub mod fvs_random;
pub mod generic;
pub mod graph;
pub mod hitting_set;
pub mod models;
pub mod oracle;
pub mod planted;
pub mod report;

pub use graph::{Digraph, Graph, GraphError, VertexSet};
pub use hitting_set::{HittingSet, SubsetFamily};
pub use oracle::{Oracle, OracleVerdict};
