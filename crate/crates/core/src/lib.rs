//! Customizable contraction hierarchies.
//!
//! The pipeline has three phases:
//!
//! 1. A metric-independent contraction order ([`ordering`]), usually a nested
//!    dissection order, and the upward-directed hierarchy it induces
//!    ([`construction`]).
//! 2. Customization ([`customization`]): input weights are lifted onto every
//!    hierarchy arc so that shortest up-down paths exist. Optionally the metric
//!    is made perfect and superfluous arcs are pruned.
//! 3. Queries ([`query`]): bidirectional Dijkstra, stall-on-demand and the
//!    elimination-tree walk, plus path unpacking into input arcs.
//!
//! Triangle enumeration ([`triangles`]) is the workhorse shared by
//! customization and unpacking.

pub mod cli;
pub mod construction;
pub mod customization;
pub mod error;
pub mod generate;
pub mod graph_io;
pub mod heap;
pub mod ordering;
pub mod query;
pub mod triangles;

pub use construction::{contract_all, contract_all_naive, ChTopology};
pub use customization::{Metric, MetricState, SearchGraphs};
pub use error::{Error, Result};
pub use graph_io::{Coordinates, InputGraph, UndirectedGraph};
pub use ordering::{EliminationTree, Order};

/// Arc weight. All weights lie in `[1, INF]`.
pub type Weight = u32;

/// Infinity for 31-bit weights: the sum of two weights never wraps in 32 bits.
pub const INF: Weight = (1 << 31) - 1;

/// Sentinel for "no vertex" / "no arc".
pub const INVALID: u32 = u32::MAX;
