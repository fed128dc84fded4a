//! Exact combinatorics of colored tensor models.
//!
//! * [`colored_graph`]: bipartite D-colored graphs, canonical keys, symmetry
//!   factors, enumeration.
//! * [`tensor_eval`]: explicit trace invariants and brute-force Gaussian
//!   moments, used as ground truth by the symbolic layers.
//! * [`wick_series`]: moments as polynomials in `N`, the partition series and
//!   its logarithm.
//! * [`contraction`]: vertex-pair contraction, gluing and edge cuts.
//! * [`schwinger_dyson`]: constraint operators on coupling series and their
//!   Lie algebra.
//! * [`hopf`]: the Hopf algebra of marked graphs.
//! * [`flow`]: the effective action in a Gaussian background and its flow.

pub mod cli;
pub mod colored_graph;
pub mod contraction;
pub mod error;
pub mod flow;
pub mod hopf;
pub mod json;
pub mod poly;
pub mod schwinger_dyson;
pub mod tensor_eval;
pub mod wick_series;

pub use colored_graph::{ColoredGraph, GraphKey, MarkedGraph, MarkedKey, Vertex};
pub use error::{Error, Result};
pub use poly::{Poly, Rational};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
