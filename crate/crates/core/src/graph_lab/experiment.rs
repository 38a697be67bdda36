use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::formulas::{stability_window, StabilityWindow};
use crate::graph_lab::colouring::{peel_colouring, PEEL_RESTARTS};
use crate::graph_lab::graph::sample_gnp;
use crate::graph_lab::rng::trial_seed;
use crate::graph_lab::search::{exact_alpha_t, greedy_alpha_t, greedy_alpha_t_by_index};
use crate::moments::Params;

/// One sampled graph and what was measured on it.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub seed: u64,
    pub n: usize,
    pub t: usize,
    pub p: f64,
    /// `None` when the search budget ran out.
    pub alpha_exact: Option<usize>,
    /// Best of the greedy restarts and any partial search result.
    pub alpha_heuristic: usize,
    pub window: StabilityWindow<f64>,
    pub chi_greedy: Option<usize>,
    pub elapsed_ms: f64,
}

impl TrialRecord {
    pub fn in_window(&self) -> Option<bool> {
        self.alpha_exact.map(|a| self.window.contains(a as i64))
    }
}

/// Experiment settings beyond the model parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub trials: usize,
    pub epsilon: f64,
    pub master_seed: u64,
    /// Per-trial search budget; `None` for no limit.
    pub budget_ms: Option<u64>,
    /// Worker threads; `0` uses every logical core.
    pub jobs: usize,
    /// Also run the peeling colouring on each graph.
    pub colour: bool,
}

/// Distribution of the exact values over the trials that finished.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSummary {
    pub trials: usize,
    pub timeouts: usize,
    pub histogram: BTreeMap<usize, usize>,
    /// `max − min + 1` of the observed exact values; `0` when none finished.
    pub support_width: usize,
    /// Most frequent exact value, smallest on ties.
    pub mode: Option<usize>,
    /// Share of finished trials whose value lies in the predicted window.
    pub fraction_in_window: Option<f64>,
}

fn run_trial(params: &Params<f64>, cfg: &ExperimentConfig, index: usize) -> Result<TrialRecord> {
    let start = Instant::now();
    let seed = trial_seed(cfg.master_seed, index as u64);
    let t = params.t();
    let g = sample_gnp(cfg.n, params.p(), seed)?;
    let search = exact_alpha_t(&g, t, cfg.budget_ms);
    let greedy_best = (1..PEEL_RESTARTS as u64)
        .map(|r| greedy_alpha_t(&g, t, seed.wrapping_add(r)).len())
        .chain(std::iter::once(greedy_alpha_t_by_index(&g, t).len()))
        .max()
        .unwrap_or(0);
    let alpha_heuristic = match search.exact() {
        Some(_) => greedy_best,
        None => greedy_best.max(search.lower_bound()),
    };
    let window = stability_window(params, cfg.n as u64, cfg.epsilon)?;
    let chi_greedy = if cfg.colour && cfg.n >= 3 {
        Some(peel_colouring(&g, params, cfg.epsilon, seed)?.colours())
    } else {
        None
    };
    Ok(TrialRecord {
        seed,
        n: cfg.n,
        t,
        p: params.p(),
        alpha_exact: search.exact(),
        alpha_heuristic,
        window,
        chi_greedy,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Samples `trials` graphs and measures `α_t` on each.
///
/// Trial `i` uses seed `trial_seed(master_seed, i)`; records come back in
/// trial order whatever the number of workers.
pub fn run_concentration_experiment(
    params: &Params<f64>,
    cfg: &ExperimentConfig,
) -> Result<Vec<TrialRecord>> {
    if cfg.trials == 0 {
        return domain("trials must be at least 1");
    }
    stability_window(params, cfg.n as u64, cfg.epsilon)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| run_trial(params, cfg, i))
            .collect()
    })
}

pub fn summarize(records: &[TrialRecord]) -> ExperimentSummary {
    let mut histogram = BTreeMap::new();
    let mut hits = 0;
    for r in records {
        if let Some(a) = r.alpha_exact {
            *histogram.entry(a).or_insert(0) += 1;
            if r.window.contains(a as i64) {
                hits += 1;
            }
        }
    }
    let finished: usize = histogram.values().sum();
    let support_width = match (histogram.keys().next(), histogram.keys().next_back()) {
        (Some(lo), Some(hi)) => hi - lo + 1,
        _ => 0,
    };
    let mode = histogram
        .iter()
        .max_by_key(|(v, c)| (**c, std::cmp::Reverse(**v)))
        .map(|(v, _)| *v);
    ExperimentSummary {
        trials: records.len(),
        timeouts: records.len() - finished,
        histogram,
        support_width,
        mode,
        fraction_in_window: (finished > 0).then(|| hits as f64 / finished as f64),
    }
}
