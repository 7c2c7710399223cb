//! Partial cubes and hypercellular graphs.

pub mod analysis;
pub mod cells;
pub mod error;
pub mod genlib;
pub mod graph;
pub mod iso;
pub mod limits;
pub mod median;
pub mod minors;
pub mod pcube;
pub mod structure;
pub mod vset;

pub use error::{Error, Result};
pub use graph::{Graph, Metric};
pub use pcube::{recognize_partial_cube, ClassId, PartialCube, Rejection, Sign, SignVector, SignedSet, SubCube};
pub use vset::VertexSet;
