//! Counting and sampling machinery for `t`-stable sets of dense random graphs.
//!
//! A set of vertices is `t`-stable when it induces a subgraph of maximum degree
//! at most `t`. The modules cover exact and saddle-point counts of bounded
//! degree sequences, first-moment bounds, the closed-form concentration window
//! for the `t`-stability number of `G(n, p)`, and an experimental wing that
//! samples graphs and measures the quantities directly.
//!
//! Numeric code is generic over [`scalar::Real`]; the aliases below fix it to
//! `f64` (and `f32` where useful).

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0)` deliberately rejects NaN

pub mod error;
pub mod exact_counts;
pub mod formulas;
pub mod graph_lab;
pub mod moments;
pub mod poly_saddle;
pub mod scalar;

pub use error::{Error, Result};
pub use exact_counts::BigCount;
pub use graph_lab::{Graph, TrialRecord};
pub use poly_saddle::TruncExpPoly;

pub type Params = moments::Params<f64>;
pub type Params32 = moments::Params<f32>;
pub type SaddleData = poly_saddle::SaddleData<f64>;
pub type SaddleApprox = poly_saddle::SaddleApprox<f64>;
pub type MomentProfile = moments::MomentProfile<f64>;
pub type LogBound = moments::LogBound<f64>;
pub type StabilityWindow = formulas::StabilityWindow<f64>;
