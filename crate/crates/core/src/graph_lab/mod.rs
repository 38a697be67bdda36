//! Random graphs, exact and greedy `t`-stable sets, the peeling colouring and
//! Monte Carlo experiments.

pub mod colouring;
pub mod experiment;
pub mod graph;
pub mod rng;
pub mod search;

pub use colouring::{peel_colouring, Colouring, PEEL_RESTARTS};
pub use experiment::{
    run_concentration_experiment, summarize, ExperimentConfig, ExperimentSummary, TrialRecord,
};
pub use graph::{sample_gnp, Graph};
pub use search::{
    brute_alpha_t, exact_alpha_t, greedy_alpha_t, greedy_alpha_t_by_index, AlphaSearch,
};
