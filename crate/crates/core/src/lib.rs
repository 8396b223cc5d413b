//! Ultrasuccinct storage of preferential-attachment graphs.
//!
//! The crate covers the whole pipeline:
//!
//! - [`graph`]: labelled PA multigraphs, M-out-regular DAGs and their undirected form.
//! - [`generate`]: the Barabási–Albert process and exact instance log-probabilities.
//! - [`entropy`]: zeroth-order empirical entropy and the space bounds derived from it.
//! - [`succinct`]: compressed bitvectors, wavelet trees and balanced-parentheses trees.
//! - [`construct`]: peeling, in-degree ranking, parent-tree extraction and the
//!   least-frequent-character reduction of the adjacency string.
//! - [`compressed`]: the query structure and its `.upag` binary format.
//! - [`oracle`]: brute-force references used to cross-check everything above.
//! - [`edgelist`]: the text edge-list interchange format.

pub mod compressed;
pub mod construct;
pub mod edgelist;
pub mod entropy;
mod error;
pub mod generate;
pub mod graph;
pub mod numeric;
pub mod oracle;
pub mod succinct;

pub use compressed::{CompressedGraph, Layout, SpaceReport};
pub use construct::{build, peel, sigma_rank, BuildOutput, SigmaRank, TieBreak};
pub use entropy::{degree_entropy, h0, BoundsReport, EntropyReport};
pub use error::{Error, Result};
pub use generate::{generate, log_prob, GenConfig, LogProb};
pub use graph::{Dag, PaGraph, UndirectedMultigraph, Vertex};
