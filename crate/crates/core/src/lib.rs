//! Lower-bound constructions for p-centered colorings, with verifiers,
//! exact solvers and bound calculators for checking them at small scale.
//!
//! * [`graph`]: immutable graphs, subdivision, components.
//! * [`generators`]: the recursive family `G_{p,t}`, G(n, q), test shapes.
//! * [`centered`]: plain and split-palette centeredness, witnesses, threats.
//! * [`solver`]: exact and greedy χ_p, plus chromatic/star-chromatic oracles.
//! * [`expansion`]: shallow-minor density ∇_r.
//! * [`random_lb`]: the random-graph construction and its Janson-bound arithmetic.

pub mod centered;
pub mod error;
pub mod expansion;
pub mod generators;
pub mod graph;
pub mod limits;
pub mod random_lb;
pub mod solver;
pub mod subsets;
pub mod treedepth;

pub use error::{Error, Result};
pub use graph::{connected_components, subdivide, Graph, VertexKind, VertexSet};
pub use limits::OracleLimits;
pub use treedepth::treedepth_exact;

/// Exact edge density of a shallow minor.
pub type Density = num_rational::Ratio<u64>;

pub type JansonReportF64 = random_lb::JansonReport<f64>;
pub type JansonReportF32 = random_lb::JansonReport<f32>;
