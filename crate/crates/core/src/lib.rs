//! Combinatorial and numerical tools for Speiser graphs, line complexes and
//! the recurrence/transience of planar triangulations.

pub mod error;
pub mod fatness;
pub mod graph;
pub mod lattice;
pub mod packing;
pub mod refinement;
pub mod speiser;
pub mod theorem1;
pub mod trend;
pub mod vel;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{GraphBuilder, RotationGraph, Tag};
