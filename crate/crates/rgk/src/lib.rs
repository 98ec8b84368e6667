//! Ribbon graphs, their gradings, and the quiver and coherent-sheaf
//! computations attached to them.

pub mod catalog;
pub mod cpm;
pub mod cyclic;
pub mod generate;
pub mod grading;
pub mod graph;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod mirror;
pub mod quiver;
pub mod ribbon;
pub mod verify;
