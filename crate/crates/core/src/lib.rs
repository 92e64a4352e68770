//! Percolation in hierarchical random graphs: sampling truncations of the
//! graph, tracking the cascade of giant components level by level, and
//! checking Monte Carlo estimates against the analytic predictions.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod components;
pub mod error;
pub mod graphgen;
pub mod hiergroup;
pub mod rng;
pub mod montecarlo;
pub mod rule;
pub mod scalar;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
pub use hiergroup::{BallId, HierAddress, Hierarchy, VertexId};
pub use graphgen::{sample_graph, GraphConfig, SampledGraph};
pub use rule::CRule;
pub use scalar::Real;

/// Double-precision theory profile.
pub type TheoryProfile64 = theory::TheoryProfile<f64>;
/// Single-precision theory profile.
pub type TheoryProfile32 = theory::TheoryProfile<f32>;
/// Double-precision positivity-lemma report.
pub type Lemma21Report64 = theory::Lemma21Report<f64>;
