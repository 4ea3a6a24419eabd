//! Block and triconnected decompositions.

mod blocks;
mod tricomp;

pub(crate) use blocks::all_blocks;
pub use blocks::{biconnected_components, locate_agents, BicompInfo, BlockDecomposition};
pub use tricomp::{
    merge_triangles, spqr_components, triconnected_components, CompLink, Tricomp, TricompKind,
    TriconnectedDecomposition,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("graph has {0} connected components; decompose each one separately")]
    Disconnected(usize),
}
