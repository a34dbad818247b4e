//! Subgraph isomorphism for planar graphs in time single-exponential in the
//! pattern size and linear in the host size.
//!
//! The host graph is cut into overlapping bands of BFS layers, each band gets
//! a sphere-cut decomposition of width linear in the pattern order, and a
//! dynamic program routes the decomposition nooses through the embedded
//! pattern. Decide, count and list modes share one table pipeline. A
//! brute-force oracle (see [`oracle`]) backs every correctness test.

pub mod driver;
pub mod embed;
pub mod embedded_dp;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod noose;
pub mod oracle;
pub mod pattern_embed;
pub mod plane_graph;
pub mod report;
pub mod sphere_cut;

pub use error::{Error, Result};
pub use graph::AbstractGraph;
pub use plane_graph::{PlaneGraph, RadialGraph};
