//! Walk and non-backtracking walk counts on graphs and bi-regular trees,
//! the resolvent identities linking them, and the co-growth maps between
//! their exponential growth rates.

// Preconditions are written `!(x > y)` so that NaN inputs fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball;
pub mod error;
pub mod function;
pub mod graph;
pub mod growth;
pub mod hashimoto;
pub mod identities;
pub mod io;
pub mod scaled;
pub mod spectral;
pub mod walks;
pub mod weight;

pub use ball::{universal_cover_ball, CoverBall, TreeBall};
pub use error::{Error, Result};
pub use function::{FunctionSpec, RadialProfile, VertexFunction};
pub use graph::{Graph, Side};
pub use growth::{estimate_growth_rate, GrowthEstimate, Method};
pub use identities::IdentityReport;
pub use walks::{CountOptions, CountSeries, SeriesKind};
pub use weight::Weight;
