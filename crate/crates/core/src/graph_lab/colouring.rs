use crate::error::{domain, Result};
use crate::formulas::alpha_hat;
use crate::graph_lab::graph::Graph;
use crate::graph_lab::rng::{stream_rng, trial_seed, PEEL_STREAM};
use crate::graph_lab::search::{greedy_alpha_t_by_index, greedy_by_rank};
use crate::moments::Params;
use rand::seq::SliceRandom;

/// Greedy restarts per peeling round.
pub const PEEL_RESTARTS: usize = 50;

/// Colour classes from [`peel_colouring`] plus how the rounds went.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colouring {
    pub classes: Vec<Vec<usize>>,
    /// Rounds that removed a set.
    pub peel_rounds: usize,
    /// Rounds where no restart reached the target size.
    pub target_misses: usize,
    /// Rounds where the target size was undefined or below one, so the best
    /// greedy set was taken.
    pub unguided_rounds: usize,
    /// `⌊n/ln³ n⌋`.
    pub threshold: usize,
}

impl Colouring {
    pub fn colours(&self) -> usize {
        self.classes.len()
    }
}

/// Peeling colouring: while at least `⌊n/ln³ n⌋` vertices remain, remove a
/// `t`-stable set of size `α̂_{t,p}(|V'|)`, then give each leftover vertex its
/// own colour.
///
/// Each round tries up to [`PEEL_RESTARTS`] greedy runs on the remaining
/// graph (the first by vertex index, the rest in random orders drawn from
/// `seed`) and stops at the first that reaches the target; when none does, the
/// largest set found is removed and the miss is counted.
pub fn peel_colouring(g: &Graph, params: &Params<f64>, epsilon: f64, seed: u64) -> Result<Colouring> {
    let n = g.n();
    if n < 3 {
        return domain(format!("peeling needs at least 3 vertices, got {n}"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return domain(format!("epsilon must lie in (0, 1), got {epsilon}"));
    }
    let t = params.t();
    let threshold = (n as f64 / (n as f64).ln().powi(3)).floor() as usize;
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut out = Colouring {
        classes: Vec::new(),
        peel_rounds: 0,
        target_misses: 0,
        unguided_rounds: 0,
        threshold,
    };
    while !remaining.is_empty() && remaining.len() >= threshold {
        let target = alpha_hat(params, remaining.len() as u64, epsilon)
            .ok()
            .filter(|&a| a >= 1)
            .map(|a| a as usize);
        let sub = g.induced(&remaining);
        let round_seed = trial_seed(seed, out.peel_rounds as u64);
        let mut rng = stream_rng(round_seed, PEEL_STREAM);
        let mut order: Vec<usize> = (0..sub.n()).collect();
        let mut best = greedy_alpha_t_by_index(&sub, t);
        for _ in 1..PEEL_RESTARTS {
            if target.is_some_and(|a| best.len() >= a) {
                break;
            }
            order.shuffle(&mut rng);
            let mut rank = vec![0; sub.n()];
            for (i, &v) in order.iter().enumerate() {
                rank[v] = i;
            }
            let found = greedy_by_rank(&sub, t, &rank);
            if found.len() > best.len() {
                best = found;
            }
        }
        match target {
            Some(a) if best.len() >= a => best.truncate(a),
            Some(_) => out.target_misses += 1,
            None => out.unguided_rounds += 1,
        }
        let mut class: Vec<usize> = best.iter().map(|&i| remaining[i]).collect();
        class.sort_unstable();
        remaining.retain(|v| class.binary_search(v).is_err());
        out.classes.push(class);
        out.peel_rounds += 1;
    }
    out.classes.extend(remaining.into_iter().map(|v| vec![v]));
    Ok(out)
}
