//! Polarity graphs of finite projective planes, dense subgraphs anchored on
//! ovals, and certified C4-free graphs obtained by deleting those subgraphs.

pub mod c4;
pub mod cli;
pub mod dense;
pub mod field;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod plane;
pub mod polarity_graph;
pub mod subfield;
pub mod turan;

pub use field::{Field, FieldElement};
pub use graph::Graph;
pub use plane::{Oval, Plane, Polarity};
pub use polarity_graph::PolarityGraph;
