//! Walk and non-backtracking walk counts paired against weight functions.

pub mod engine;
pub mod enumerate;
pub mod radial;
pub mod series;

pub use engine::{nbw_counts, walk_counts, CountOptions};
pub use radial::{radial_nbw_counts, radial_walk_counts};
pub use series::{CountEntry, CountSeries, NormProfile, SeriesKind};
