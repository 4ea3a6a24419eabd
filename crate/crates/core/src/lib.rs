pub mod bench;
pub mod decomposition;
pub mod gen;
pub mod graph;
pub mod identifiability;
pub mod oracle;
pub mod placement;
pub mod suite;

pub use graph::{Graph, GraphError, Link, LinkId, LinkKind, NodeIx, Placement};
