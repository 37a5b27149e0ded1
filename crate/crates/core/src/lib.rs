//! Recognition of collaborative academic teams in co-authorship networks.
//!
//! The crate models a publication corpus as an undirected collaboration
//! graph, clusters scholars with a density-peak procedure over bounded
//! shortest-path distances, prunes each cluster to its familiar core using
//! triangle-based familiarity, and scores the recognized teams (compactness,
//! separability, citations). A threshold-based baseline recognizer and a
//! motif-significance test for triangles are included for comparison
//! studies, and the `moto` binary chains the stages into reproducible,
//! manifest-stamped runs.

pub mod cli;
pub mod config;
pub mod corpus;
pub mod density;
pub mod distance;
pub mod error;
pub mod evaluation;
pub mod graph;
mod ioutil;
pub mod motif;
pub mod synthetic;
pub mod team;
pub mod trac;

pub use error::{Error, Result};
