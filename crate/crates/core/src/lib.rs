//! Data-center siting with collocated generation.
//!
//! Each candidate county gets its own mixed 0-1 capacity-expansion and
//! dispatch model over 96 representative hours. The cheapest feasible
//! counties are then selected. Everything runs on the built-in simplex and
//! branch-and-bound solver in [`solver`].

pub mod analysis;
pub mod cli;
pub mod domain;
pub mod error;
pub mod ingest;
pub mod model;
pub mod scenario;
pub mod siting;
pub mod solver;
pub mod synthetic;

pub use error::{Error, Result};
