//! Maximum and greedy `t`-stable sets.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;

use crate::graph_lab::graph::{
    and_count, bit, clear_bit, first_member, members, popcount, set_bit, Graph,
};
use crate::graph_lab::rng::{stream_rng, GREEDY_STREAM};

/// Result of [`exact_alpha_t`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaSearch {
    /// Search completed; `witness` is a maximum `t`-stable set.
    Found { size: usize, witness: Vec<usize> },
    /// Budget ran out; `best` is the largest `t`-stable set seen so far.
    Timeout { best_lower: usize, best: Vec<usize> },
}

impl AlphaSearch {
    pub fn exact(&self) -> Option<usize> {
        match self {
            AlphaSearch::Found { size, .. } => Some(*size),
            AlphaSearch::Timeout { .. } => None,
        }
    }

    pub fn lower_bound(&self) -> usize {
        match self {
            AlphaSearch::Found { size, .. } => *size,
            AlphaSearch::Timeout { best_lower, .. } => *best_lower,
        }
    }
}

struct Search<'a> {
    g: &'a Graph,
    t: usize,
    words: usize,
    current: Vec<usize>,
    deg_in_s: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Search<'_> {
    /// Upper bound on how many candidates can join: greedily cover `p` by
    /// cliques, each of which meets a `t`-stable set in at most `t+1` vertices.
    fn clique_cover_bound(&self, p: &[u64], stop_above: usize) -> usize {
        let mut left = p.to_vec();
        let mut cand = vec![0u64; self.words];
        let mut bound = 0;
        while let Some(v) = first_member(&left) {
            clear_bit(&mut left, v);
            let mut size = 1;
            for (c, (l, r)) in cand.iter_mut().zip(left.iter().zip(self.g.row(v))) {
                *c = l & r;
            }
            while let Some(u) = first_member(&cand) {
                clear_bit(&mut left, u);
                size += 1;
                for (c, r) in cand.iter_mut().zip(self.g.row(u)) {
                    *c &= r;
                }
            }
            bound += size.min(self.t + 1);
            if bound > stop_above {
                return bound;
            }
        }
        bound
    }

    fn expand(&mut self, p: &[u64]) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return;
        }
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        let size = popcount(p);
        if size == 0 || self.current.len() + size <= self.best.len() {
            return;
        }
        let slack = self.best.len() - self.current.len();
        if self.clique_cover_bound(p, slack) <= slack {
            return;
        }
        let v = members(p)
            .max_by_key(|&v| (and_count(self.g.row(v), p), std::cmp::Reverse(v)))
            .expect("p is non-empty");

        // include v
        let mut next = p.to_vec();
        clear_bit(&mut next, v);
        self.current.push(v);
        for u in self.g.neighbours(v) {
            self.deg_in_s[u] += 1;
        }
        let row_v = self.g.row(v);
        if self.deg_in_s[v] >= self.t {
            for (x, r) in next.iter_mut().zip(row_v) {
                *x &= !r;
            }
        }
        for (i, x) in next.iter_mut().enumerate() {
            let mut w = *x & row_v[i];
            while w != 0 {
                let u = i * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                if self.deg_in_s[u] > self.t {
                    *x &= !(1 << (u % 64));
                }
            }
        }
        for &w in &self.current[..self.current.len() - 1] {
            if bit(row_v, w) && self.deg_in_s[w] == self.t {
                for (x, r) in next.iter_mut().zip(self.g.row(w)) {
                    *x &= !r;
                }
            }
        }
        self.expand(&next);
        self.current.pop();
        for u in self.g.neighbours(v) {
            self.deg_in_s[u] -= 1;
        }

        // exclude v
        let mut rest = p.to_vec();
        clear_bit(&mut rest, v);
        self.expand(&rest);
    }
}

/// Maximum `t`-stable set by branch and bound.
///
/// Branches on the candidate with most candidate neighbours, taking it first.
/// Candidates are kept feasible: none has more than `t` neighbours in the
/// current set or a neighbour there that is already at degree `t`. Subtrees
/// are cut when the current size plus the candidate count, or plus a clique
/// cover bound, cannot beat the best set so far. `budget_ms = None` runs to
/// completion.
pub fn exact_alpha_t(g: &Graph, t: usize, budget_ms: Option<u64>) -> AlphaSearch {
    let start = Instant::now();
    let n = g.n();
    let mut all = vec![0u64; n.div_ceil(64)];
    for v in 0..n {
        set_bit(&mut all, v);
    }
    let mut search = Search {
        g,
        t,
        words: all.len(),
        current: Vec::new(),
        deg_in_s: vec![0; n],
        best: greedy_alpha_t_by_index(g, t),
        nodes: 0,
        deadline: budget_ms.map(|ms| start + Duration::from_millis(ms)),
        timed_out: false,
    };
    search.expand(&all);
    let mut best = search.best;
    best.sort_unstable();
    log::debug!(
        "branch and bound on n = {n}, t = {t}: {} nodes, {:?}",
        search.nodes,
        start.elapsed()
    );
    if search.timed_out {
        AlphaSearch::Timeout {
            best_lower: best.len(),
            best,
        }
    } else {
        AlphaSearch::Found {
            size: best.len(),
            witness: best,
        }
    }
}

/// Greedy maximal `t`-stable set: repeatedly add a feasible vertex with fewest
/// neighbours in the set, ties going to the lowest `rank`.
pub fn greedy_by_rank(g: &Graph, t: usize, rank: &[usize]) -> Vec<usize> {
    let n = g.n();
    let mut in_set = vec![false; n];
    let mut blocked = vec![false; n];
    let mut deg_in_s = vec![0usize; n];
    let mut set = Vec::new();
    loop {
        let pick = (0..n)
            .filter(|&v| !in_set[v] && !blocked[v])
            .min_by_key(|&v| (deg_in_s[v], rank[v]));
        let Some(v) = pick else { break };
        in_set[v] = true;
        set.push(v);
        for u in g.neighbours(v) {
            deg_in_s[u] += 1;
            if deg_in_s[u] > t {
                blocked[u] = true;
            }
        }
        for w in std::iter::once(v).chain(g.neighbours(v).filter(|&w| in_set[w])) {
            if deg_in_s[w] == t {
                for u in g.neighbours(w) {
                    blocked[u] = true;
                }
            }
        }
    }
    set
}

/// [`greedy_by_rank`] with ties broken by smallest vertex index.
pub fn greedy_alpha_t_by_index(g: &Graph, t: usize) -> Vec<usize> {
    let rank: Vec<usize> = (0..g.n()).collect();
    greedy_by_rank(g, t, &rank)
}

/// [`greedy_by_rank`] with ties broken by a random vertex order drawn from
/// `seed`.
pub fn greedy_alpha_t(g: &Graph, t: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(&mut stream_rng(seed, GREEDY_STREAM));
    let mut rank = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    greedy_by_rank(g, t, &rank)
}

/// Size of a maximum `t`-stable set by trying every subset; `n ≤ 20`.
pub fn brute_alpha_t(g: &Graph, t: usize) -> usize {
    let n = g.n();
    assert!(n <= 20, "brute force limited to 20 vertices");
    let rows: Vec<u32> = (0..n)
        .map(|v| g.neighbours(v).fold(0u32, |m, u| m | 1 << u))
        .collect();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let ok = (0..n)
            .filter(|v| mask >> v & 1 == 1)
            .all(|v| (rows[v] & mask).count_ones() as usize <= t);
        if ok {
            best = size;
        }
    }
    best
}

/// Whether no vertex outside `set` can be added while staying `t`-stable.
pub fn is_maximal_t_stable(g: &Graph, set: &[usize], t: usize) -> bool {
    let mut extended = set.to_vec();
    (0..g.n()).filter(|v| !set.contains(v)).all(|v| {
        extended.push(v);
        let ok = !g.is_t_stable(&extended, t);
        extended.pop();
        ok
    })
}
