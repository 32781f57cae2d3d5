//! Finite quotients of the lattice graph `L^d`, local-structure checks, and
//! constructive covering maps `L^d -> G`.

pub mod error;
pub mod graph;
pub mod lattice;
pub mod local;
pub mod surface;
pub mod cayley;
pub mod cover;
pub mod families;

pub use error::{Error, Result};
pub use graph::Graph;
