//! Random graphs, planted models, and the combinatorial recovery algorithms.
//!
//! The Erdős–Rényi model includes each of the `C(n,2)` possible edges
//! independently with probability `p`. Planted models embed a ground-truth
//! structure to be recovered: a clique of size `k` on top of `G(n, 1/2)`, or
//! a balanced bisection with intra-cluster density `p` and inter-cluster
//! density `q ≤ p`. Generated graphs remember their planted structure.
//!
//! Adjacency lives in a dense bitset (one row of `n` bits per vertex), so
//! pair queries are O(1) and common-neighbor counts are word-parallel AND +
//! popcount — counting common neighbors is the bottleneck of the bisection
//! recovery algorithm.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::record::ExperimentRecord;
use crate::rng::Rng;

/// Planted ground truth carried by a generated graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Planted {
    /// Vertices of the planted clique, ascending.
    Clique(Vec<usize>),
    /// The two sides of the planted bisection, each ascending.
    Bisection(Vec<usize>, Vec<usize>),
}

/// An undirected simple graph over vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
    planted: Option<Planted>,
}

impl Graph {
    /// The empty graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        Graph {
            n,
            words_per_row,
            bits: vec![0; words_per_row * n],
            planted: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn planted(&self) -> Option<&Planted> {
        self.planted.as_ref()
    }

    /// Inserts the undirected edge `{u, v}`; self-loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "vertex out of range");
        if u == v {
            return;
        }
        self.bits[u * self.words_per_row + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words_per_row + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words_per_row + v / 64] >> (v % 64) & 1 == 1
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words_per_row..(u + 1) * self.words_per_row]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        let total: usize = (0..self.n).map(|u| self.degree(u)).sum();
        total / 2
    }

    /// `|N(u) ∩ N(v)|`. Neither endpoint counts itself (no self-loops).
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Neighbors of `u`, ascending.
    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.has_edge(u, v)).collect()
    }

    /// Writes the edge-list text format: a `n m` header line, then one
    /// `u v` line per edge with `u < v`, ascending.
    pub fn write_edge_list(&self, sink: &mut dyn Write) -> Result<()> {
        writeln!(sink, "{} {}", self.n, self.edge_count())?;
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.has_edge(u, v) {
                    writeln!(sink, "{u} {v}")?;
                }
            }
        }
        Ok(())
    }

    /// Parses the edge-list text format (planted structure is not part of
    /// the format).
    pub fn read_edge_list(source: &mut dyn BufRead) -> Result<Graph> {
        let mut lines = source.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge list".into()))??;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("bad vertex count".into()))?;
        let m: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("bad edge count".into()))?;
        let mut g = Graph::empty(n);
        let mut read = 0usize;
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let u: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?;
            let v: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?;
            if u >= n || v >= n || u == v {
                return Err(Error::Parse(format!("invalid edge {u} {v}")));
            }
            g.add_edge(u, v);
            read += 1;
        }
        if read != m {
            return Err(Error::Parse(format!("header says {m} edges, found {read}")));
        }
        Ok(g)
    }
}

/// Erdős–Rényi `G(n, p)`: each unordered pair independently with
/// probability `p`.
pub fn gen_er(n: usize, p: f64, rng: &mut Rng) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.chance(p) {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// Planted bisection: a uniformly random balanced partition `(S, T)`;
/// same-side pairs get an edge with probability `p`, cross pairs with
/// probability `q ≤ p`. The partition is stored as ground truth.
pub fn gen_planted_bisection(n: usize, p: f64, q: f64, rng: &mut Rng) -> Result<Graph> {
    if !n.is_multiple_of(2) {
        return Err(Error::OddVertexCount(n));
    }
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) || q > p {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= q <= p <= 1, got p={p} q={q}"
        )));
    }
    let perm = rng.permutation(n);
    let mut side = vec![false; n];
    for &v in &perm[..n / 2] {
        side[v] = true;
    }
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            let prob = if side[u] == side[v] { p } else { q };
            if rng.chance(prob) {
                g.add_edge(u, v);
            }
        }
    }
    let s: Vec<usize> = (0..n).filter(|&v| side[v]).collect();
    let t: Vec<usize> = (0..n).filter(|&v| !side[v]).collect();
    g.planted = Some(Planted::Bisection(s, t));
    Ok(g)
}

/// Planted clique: `G(n, 1/2)` plus all edges inside a random `k`-subset
/// `Q`, stored as ground truth.
pub fn gen_planted_clique(n: usize, k: usize, rng: &mut Rng) -> Result<Graph> {
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!(
            "clique size {k} outside 1..={n}"
        )));
    }
    let mut g = gen_er(n, 0.5, rng)?;
    let mut q = rng.permutation(n);
    q.truncate(k);
    q.sort_unstable();
    for i in 0..k {
        for j in (i + 1)..k {
            g.add_edge(q[i], q[j]);
        }
    }
    g.planted = Some(Planted::Clique(q));
    Ok(g)
}

/// The `k` vertices of largest degree, ties broken by lowest index;
/// returned ascending. In the `k = Ω(√(n log n))` regime this is exactly
/// the planted clique with high probability.
pub fn top_k_degrees(g: &Graph, k: usize) -> Result<Vec<usize>> {
    if k < 1 || k > g.n() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} outside 1..={}",
            g.n()
        )));
    }
    let degrees: Vec<usize> = (0..g.n()).map(|u| g.degree(u)).collect();
    let mut verts: Vec<usize> = (0..g.n()).collect();
    verts.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]).then(a.cmp(&b)));
    let mut chosen = verts[..k].to_vec();
    chosen.sort_unstable();
    Ok(chosen)
}

/// Greedy clique: scan vertices in a random order, adding each vertex
/// adjacent to everything chosen so far. On `G(n, 1/2)` the result has
/// size about `log₂ n`. Returned ascending.
pub fn greedy_clique(g: &Graph, rng: &mut Rng) -> Vec<usize> {
    let order = rng.permutation(g.n());
    let mut clique: Vec<usize> = Vec::new();
    for v in order {
        if clique.iter().all(|&u| g.has_edge(u, v)) {
            clique.push(v);
        }
    }
    clique.sort_unstable();
    clique
}

/// Common-neighbor bisection recovery: with `v = 0` as the pivot, `A` is
/// the `n/2` vertices with the fewest common neighbors with `v` (ties by
/// index) and `B` is the rest, including `v`. Same-side pairs share more
/// common neighbors than cross pairs whenever `p > q`, so for a large
/// enough density gap `(A, B)` recovers the planted bisection exactly.
pub fn common_neighbor_bisection(g: &Graph) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = g.n();
    if !n.is_multiple_of(2) {
        return Err(Error::OddVertexCount(n));
    }
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "need at least 4 vertices, got {n}"
        )));
    }
    let pivot = 0usize;
    let mut others: Vec<usize> = (1..n).collect();
    let counts: Vec<usize> = (0..n).map(|u| g.common_neighbors(pivot, u)).collect();
    others.sort_by(|&a, &b| counts[a].cmp(&counts[b]).then(a.cmp(&b)));
    let mut a = others[..n / 2].to_vec();
    a.sort_unstable();
    let mut b: Vec<usize> = others[n / 2..].to_vec();
    b.push(pivot);
    b.sort_unstable();
    Ok((a, b))
}

/// Number of edges crossing the bisection `(a, b)`.
pub fn bisection_cut(g: &Graph, a: &[usize], b: &[usize]) -> Result<usize> {
    let n = g.n();
    if a.len() != n / 2 || b.len() != n - n / 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidBisection);
    }
    let mut seen = vec![false; n];
    for &v in a.iter().chain(b) {
        if v >= n || seen[v] {
            return Err(Error::InvalidBisection);
        }
        seen[v] = true;
    }
    // Mask of side b, then one word-parallel row scan per vertex of a.
    let words = n.div_ceil(64);
    let mut mask = vec![0u64; words];
    for &v in b {
        mask[v / 64] |= 1 << (v % 64);
    }
    let mut cut = 0usize;
    for &u in a {
        cut += g
            .row(u)
            .iter()
            .zip(&mask)
            .map(|(r, m)| (r & m).count_ones() as usize)
            .sum::<usize>();
    }
    Ok(cut)
}

/// A uniformly random balanced bisection of `0..n`.
pub fn random_bisection(n: usize, rng: &mut Rng) -> (Vec<usize>, Vec<usize>) {
    let perm = rng.permutation(n);
    let mut a = perm[..n / 2].to_vec();
    let mut b = perm[n / 2..].to_vec();
    a.sort_unstable();
    b.sort_unstable();
    (a, b)
}

/// Expected number of `k`-cliques in `G(n, 1/2)`: `C(n,k) · 2^{-C(k,2)}`,
/// evaluated in log space. The value crosses below 1 near `k = 2·log₂ n`,
/// which is why the maximum clique hovers there.
pub fn expected_k_cliques(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    if k == 0 {
        return 1.0;
    }
    let mut log_binom = 0.0f64;
    for i in 1..=k {
        log_binom += ((n - k + i) as f64).ln() - (i as f64).ln();
    }
    let log_pairs = (k * (k - 1) / 2) as f64 * std::f64::consts::LN_2;
    (log_binom - log_pairs).exp()
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

/// Samples random bisections of one `G(n, p)` graph per trial and records
/// the min and max cut against the all-bisections mean `p·(n/2)²`.
pub fn er_bisection_experiment(
    n: usize,
    p: f64,
    samples: u64,
    trials: u64,
    master_seed: u64,
    threads: usize,
) -> Result<Vec<ExperimentRecord>> {
    if !n.is_multiple_of(2) {
        return Err(Error::OddVertexCount(n));
    }
    let expected = p * (n as f64 / 2.0) * (n as f64 / 2.0);
    crate::harness::map_trials(trials, threads, |trial| {
        let sub = Rng::subseed(master_seed, trial);
        let mut rng = Rng::new(sub);
        let g = gen_er(n, p, &mut rng)?;
        let mut min_cut = usize::MAX;
        let mut max_cut = 0usize;
        let mut sum = 0f64;
        for _ in 0..samples {
            let (a, b) = random_bisection(n, &mut rng);
            let cut = bisection_cut(&g, &a, &b)?;
            min_cut = min_cut.min(cut);
            max_cut = max_cut.max(cut);
            sum += cut as f64;
        }
        Ok(ExperimentRecord::new("graphs-er-bisection", sub)
            .with_param("n", n as f64)
            .with_param("p", p)
            .with_param("samples", samples as f64)
            .with_param("trial", trial as f64)
            .with_stat("min_cut", min_cut as f64)
            .with_stat("max_cut", max_cut as f64)
            .with_stat("mean_cut", sum / samples as f64)
            .with_stat("expected_cut", expected))
    })
}

/// Planted-bisection recovery rate of [`common_neighbor_bisection`] over
/// seeded trials (success = exact recovery up to side labels). One
/// aggregated record.
pub fn planted_bisection_experiment(
    n: usize,
    p: f64,
    q: f64,
    trials: u64,
    master_seed: u64,
    threads: usize,
) -> Result<ExperimentRecord> {
    let outcomes = crate::harness::map_trials(trials, threads, |trial| {
        let mut rng = Rng::substream(master_seed, trial);
        let g = gen_planted_bisection(n, p, q, &mut rng)?;
        let (a, b) = common_neighbor_bisection(&g)?;
        let Some(Planted::Bisection(s, t)) = g.planted() else {
            unreachable!("generator stores ground truth");
        };
        Ok(u64::from((a == *s && b == *t) || (a == *t && b == *s)))
    })?;
    let successes: u64 = outcomes.iter().sum();
    Ok(ExperimentRecord::new("graphs-planted-bisection", master_seed)
        .with_param("n", n as f64)
        .with_param("p", p)
        .with_param("q", q)
        .with_param("trials", trials as f64)
        .with_stat("success_rate", successes as f64 / trials as f64))
}

/// Top-k-degrees recovery rate on planted cliques (success = exact set
/// equality with the planted clique). One aggregated record.
pub fn planted_clique_experiment(
    n: usize,
    k: usize,
    trials: u64,
    master_seed: u64,
    threads: usize,
) -> Result<ExperimentRecord> {
    let outcomes = crate::harness::map_trials(trials, threads, |trial| {
        let mut rng = Rng::substream(master_seed, trial);
        let g = gen_planted_clique(n, k, &mut rng)?;
        let recovered = top_k_degrees(&g, k)?;
        let Some(Planted::Clique(q)) = g.planted() else {
            unreachable!("generator stores ground truth");
        };
        Ok(u64::from(recovered == *q))
    })?;
    let successes: u64 = outcomes.iter().sum();
    Ok(ExperimentRecord::new("graphs-planted-clique", master_seed)
        .with_param("n", n as f64)
        .with_param("k", k as f64)
        .with_param("trials", trials as f64)
        .with_stat("success_rate", successes as f64 / trials as f64))
}

/// Greedy clique size on `G(n, 1/2)` versus `log₂ n` (success = within ±3).
/// One aggregated record.
pub fn greedy_clique_experiment(
    n: usize,
    trials: u64,
    master_seed: u64,
    threads: usize,
) -> Result<ExperimentRecord> {
    let log2n = (n as f64).log2();
    let sizes = crate::harness::map_trials(trials, threads, |trial| {
        let mut rng = Rng::substream(master_seed, trial);
        let g = gen_er(n, 0.5, &mut rng)?;
        Ok(greedy_clique(&g, &mut rng).len() as u64)
    })?;
    let size_sum: u64 = sizes.iter().sum();
    let successes = sizes
        .iter()
        .filter(|&&s| (s as f64 - log2n).abs() <= 3.0)
        .count();
    Ok(ExperimentRecord::new("graphs-greedy-clique", master_seed)
        .with_param("n", n as f64)
        .with_param("trials", trials as f64)
        .with_stat("mean_size", size_sum as f64 / trials as f64)
        .with_stat("log2_n", log2n)
        .with_stat("success_rate", successes as f64 / trials as f64))
}
