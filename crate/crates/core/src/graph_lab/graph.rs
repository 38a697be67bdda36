use rand::RngCore;

use crate::error::{domain, Result};
use crate::graph_lab::rng::{stream_rng, GNP_STREAM};

/// Simple undirected graph on `0..n` stored as adjacency bitsets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

pub(crate) fn bit(set: &[u64], v: usize) -> bool {
    set[v / 64] >> (v % 64) & 1 == 1
}

pub(crate) fn set_bit(set: &mut [u64], v: usize) {
    set[v / 64] |= 1 << (v % 64);
}

pub(crate) fn clear_bit(set: &mut [u64], v: usize) {
    set[v / 64] &= !(1 << (v % 64));
}

pub(crate) fn popcount(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

pub(crate) fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

pub(crate) fn first_member(set: &[u64]) -> Option<usize> {
    set.iter()
        .position(|&w| w != 0)
        .map(|i| i * 64 + set[i].trailing_zeros() as usize)
}

/// Iterates the members of a bitset in increasing order.
pub(crate) fn members(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

impl Graph {
    /// Edgeless graph.
    pub fn new(n: usize) -> Self {
        let words = words_for(n);
        Self {
            n,
            words,
            adj: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::new(n);
        if n >= 3 {
            for u in 0..n {
                g.add_edge(u, (u + 1) % n);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds `uv`; loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "vertex out of range");
        if u == v {
            return;
        }
        let w = self.words;
        set_bit(&mut self.adj[u * w..(u + 1) * w], v);
        set_bit(&mut self.adj[v * w..(v + 1) * w], u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        bit(self.row(u), v)
    }

    /// Neighbourhood of `v` as a bitset of `⌈n/64⌉` words.
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: usize) -> usize {
        popcount(self.row(v))
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        members(self.row(v))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbours(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Subgraph induced on `vertices`, relabelled `0..vertices.len()` in order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Maximum degree of the subgraph induced on `set`; zero for empty sets.
    pub fn induced_max_degree(&self, set: &[usize]) -> usize {
        let mut mask = vec![0u64; self.words];
        for &v in set {
            set_bit(&mut mask, v);
        }
        set.iter()
            .map(|&v| and_count(self.row(v), &mask))
            .max()
            .unwrap_or(0)
    }

    /// Whether `set` has distinct vertices and induces maximum degree at most `t`.
    pub fn is_t_stable(&self, set: &[usize], t: usize) -> bool {
        let mut seen = vec![0u64; self.words];
        for &v in set {
            if v >= self.n || bit(&seen, v) {
                return false;
            }
            set_bit(&mut seen, v);
        }
        self.induced_max_degree(set) <= t
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Samples `G(n, p)`.
///
/// Pairs `(u, v)`, `u < v`, are visited in lexicographic order and pair `uv`
/// is an edge when the next `u64` of ChaCha8 (seeded with `seed`, stream
/// [`GNP_STREAM`]) is below `⌊p·2⁶⁴⌋`. `p = 1` always gives `K_n`. The mapping
/// from `(n, p, seed)` to graphs is stable across platforms and releases.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("edge probability must lie in [0, 1], got {p}"));
    }
    if p == 1.0 {
        return Ok(Graph::complete(n));
    }
    let threshold = (p * 2f64.powi(64)) as u64;
    let mut rng = stream_rng(seed, GNP_STREAM);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.next_u64() < threshold {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}
