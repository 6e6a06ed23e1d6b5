//! Bipartite qudit/constraint interaction graphs and their small-set
//! expansion.
//!
//! Left vertices are qudits, right vertices are constraints. An edge joins a
//! constraint to every qudit it acts on non-trivially.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, Ordering};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("constraint {constraint} lists qudit {qudit} more than once")]
    MultiEdge { constraint: usize, qudit: usize },
    #[error("vertex {index} out of range on the {side:?} side (size {size})")]
    OutOfRange { index: usize, side: Side, size: usize },
    #[error("iteration count must be at least 1")]
    ZeroIteration,
    #[error("expansion is undefined for the empty set")]
    EmptySet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Qudits.
    Left,
    /// Constraints.
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteGraph {
    n: usize,
    m: usize,
    /// Qudit -> sorted constraints.
    left: Vec<Vec<usize>>,
    /// Constraint -> sorted qudits.
    right: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Builds the graph from each constraint's qudit list.
    pub fn from_constraints(n: usize, constraints: &[Vec<usize>]) -> Result<Self, GraphError> {
        let m = constraints.len();
        let mut left = vec![Vec::new(); n];
        let mut right = Vec::with_capacity(m);
        for (c, qudits) in constraints.iter().enumerate() {
            let mut sorted = qudits.clone();
            sorted.sort_unstable();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    return Err(GraphError::MultiEdge {
                        constraint: c,
                        qudit: w[0],
                    });
                }
            }
            for &q in &sorted {
                if q >= n {
                    return Err(GraphError::OutOfRange {
                        index: q,
                        side: Side::Left,
                        size: n,
                    });
                }
                left[q].push(c);
            }
            right.push(sorted);
        }
        Ok(BipartiteGraph { n, m, left, right })
    }

    pub fn num_left(&self) -> usize {
        self.n
    }

    pub fn num_right(&self) -> usize {
        self.m
    }

    pub fn constraints_of(&self, qudit: usize) -> &[usize] {
        &self.left[qudit]
    }

    pub fn qudits_of(&self, constraint: usize) -> &[usize] {
        &self.right[constraint]
    }

    pub fn left_degree(&self, qudit: usize) -> usize {
        self.left[qudit].len()
    }

    pub fn right_degree(&self, constraint: usize) -> usize {
        self.right[constraint].len()
    }

    pub fn max_left_degree(&self) -> usize {
        self.left.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_right_degree(&self) -> usize {
        self.right.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(D_L)` when every qudit has the same degree.
    pub fn regular_left_degree(&self) -> Option<usize> {
        uniform(self.left.iter().map(Vec::len))
    }

    /// `Some(k)` when every constraint has the same degree.
    pub fn regular_right_degree(&self) -> Option<usize> {
        uniform(self.right.iter().map(Vec::len))
    }

    pub fn edge_count(&self) -> usize {
        self.right.iter().map(Vec::len).sum()
    }

    fn adjacency(&self, side: Side) -> &[Vec<usize>] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    fn size(&self, side: Side) -> usize {
        match side {
            Side::Left => self.n,
            Side::Right => self.m,
        }
    }

    /// Neighbour set `Γ(S)` of a set on `side`, sorted.
    pub fn gamma(&self, set: &[usize], side: Side) -> Result<Vec<usize>, GraphError> {
        let adj = self.adjacency(side);
        let size = self.size(side);
        let mut mark = vec![false; self.size(side.other())];
        let mut out = Vec::new();
        for &v in set {
            if v >= size {
                return Err(GraphError::OutOfRange { index: v, side, size });
            }
            for &w in &adj[v] {
                if !mark[w] {
                    mark[w] = true;
                    out.push(w);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// `Γ^{(i)}(S)`: applies `Γ` `i` times, alternating sides. Returns the
    /// final set and the side it lives on.
    pub fn gamma_iter(&self, set: &[usize], side: Side, i: usize) -> Result<(Vec<usize>, Side), GraphError> {
        if i == 0 {
            return Err(GraphError::ZeroIteration);
        }
        let mut cur = set.to_vec();
        let mut s = side;
        for _ in 0..i {
            cur = self.gamma(&cur, s)?;
            s = s.other();
        }
        Ok((cur, s))
    }

    /// Qudit neighbourhood `𝒩(q) = Γ^{(2)}(q)`, which contains `q` itself
    /// whenever `q` has a constraint.
    pub fn qudit_neighborhood(&self, q: usize) -> Vec<usize> {
        self.gamma_iter(&[q], Side::Left, 2).expect("valid qudit").0
    }

    /// Exact expansion statistics of a qudit set.
    pub fn expansion_stats(&self, set: &[usize]) -> Result<ExpansionStats, GraphError> {
        if set.is_empty() {
            return Err(GraphError::EmptySet);
        }
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut counts = vec![0u32; self.m];
        let mut degree_sum = 0usize;
        for &q in &sorted {
            if q >= self.n {
                return Err(GraphError::OutOfRange {
                    index: q,
                    side: Side::Left,
                    size: self.n,
                });
            }
            degree_sum += self.left[q].len();
            for &c in &self.left[q] {
                counts[c] += 1;
            }
        }
        let neighbors = counts.iter().filter(|&&c| c > 0).count();
        let unique = counts.iter().filter(|&&c| c == 1).count();
        Ok(ExpansionStats::new(sorted, degree_sum, neighbors, unique))
    }

    /// Qudits sharing at least one constraint with `q` (excluding `q`).
    pub fn qudit_adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|q| {
                let mut nb: Vec<usize> = self.qudit_neighborhood(q).into_iter().filter(|&r| r != q).collect();
                nb.dedup();
                nb
            })
            .collect()
    }

    /// JSON adjacency export.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": "qltc.graph/1",
            "n": self.n,
            "m": self.m,
            "constraints": self.right,
        })
    }

    /// Graphviz DOT export. Qudits are `q<i>`, constraints `c<j>`.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph interaction {\n");
        for q in 0..self.n {
            let _ = writeln!(s, "  q{q} [shape=circle];");
        }
        for c in 0..self.m {
            let _ = writeln!(s, "  c{c} [shape=box];");
        }
        for (c, qs) in self.right.iter().enumerate() {
            for q in qs {
                let _ = writeln!(s, "  c{c} -- q{q};");
            }
        }
        s.push_str("}\n");
        s
    }
}

fn uniform(mut it: impl Iterator<Item = usize>) -> Option<usize> {
    let first = it.next()?;
    it.all(|v| v == first).then_some(first)
}

/// Expansion of a qudit set `S`.
///
/// `ε(S) = 1 - |Γ(S)| / Σ_{q∈S} deg(q)`, which is `1 - |Γ(S)|/(|S| D_L)` on
/// left-regular graphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionStats {
    pub set: Vec<usize>,
    pub degree_sum: usize,
    pub neighbors: usize,
    pub unique_neighbors: usize,
    pub multi_neighbors: usize,
    pub expansion_error: f64,
}

impl ExpansionStats {
    fn new(set: Vec<usize>, degree_sum: usize, neighbors: usize, unique: usize) -> Self {
        let expansion_error = if degree_sum == 0 {
            0.0
        } else {
            1.0 - neighbors as f64 / degree_sum as f64
        };
        ExpansionStats {
            set,
            degree_sum,
            neighbors,
            unique_neighbors: unique,
            multi_neighbors: neighbors - unique,
            expansion_error,
        }
    }

    /// `ε(S)` as the exact fraction `(degree_sum - |Γ(S)|) / degree_sum`.
    pub fn error_fraction(&self) -> (usize, usize) {
        (self.degree_sum - self.neighbors, self.degree_sum)
    }

    /// `ε(a) < ε(b)` compared exactly.
    fn less_than(&self, other: &ExpansionStats) -> bool {
        let (an, ad) = self.error_fraction();
        let (bn, bd) = other.error_fraction();
        (an as u128) * (bd as u128) < (bn as u128) * (ad as u128)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum ExpansionMode {
    /// Every qudit set of size at most the cap. Disconnected sets are
    /// averages of their components, so only sets that are connected in the
    /// qudit adjacency graph are scanned; the maximum is exact.
    Exhaustive,
    /// Uniformly random sets; the result is a lower bound on `ε*`.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionEstimate {
    /// Largest expansion error found.
    pub epsilon: f64,
    pub worst: Option<ExpansionStats>,
    pub size_cap: usize,
    /// `true` when `epsilon` is the exact `ε*`, `false` for a sampled lower bound.
    pub exact: bool,
    pub sets_examined: u64,
    pub warning: Option<String>,
}

/// Connected-set enumeration is refused above this estimated count and the
/// scan falls back to sampling.
pub const EXHAUSTIVE_SET_LIMIT: u128 = 200_000_000;
const FALLBACK_SAMPLES: usize = 100_000;

/// Small-set expansion error `ε* = max_{|S| ≤ size_cap} ε(S)`.
pub fn small_set_expansion_error(graph: &BipartiteGraph, size_cap: usize, mode: ExpansionMode) -> ExpansionEstimate {
    if size_cap == 0 || graph.num_left() == 0 {
        return ExpansionEstimate {
            epsilon: 0.0,
            worst: None,
            size_cap,
            exact: true,
            sets_examined: 0,
            warning: None,
        };
    }
    match mode {
        ExpansionMode::Exhaustive => {
            let adjacency = graph.qudit_adjacency();
            let max_deg = adjacency.iter().map(Vec::len).max().unwrap_or(0) as u128;
            let mut estimate = graph.num_left() as u128;
            for _ in 1..size_cap {
                estimate = estimate.saturating_mul(max_deg.max(1));
            }
            if estimate > EXHAUSTIVE_SET_LIMIT {
                let mut est = sampled_expansion(graph, size_cap, FALLBACK_SAMPLES, 0);
                est.warning = Some(format!(
                    "exhaustive scan would visit up to {estimate} sets; fell back to {FALLBACK_SAMPLES} samples"
                ));
                return est;
            }
            exhaustive_expansion(graph, &adjacency, size_cap)
        }
        ExpansionMode::Sampled { samples, seed } => sampled_expansion(graph, size_cap, samples, seed),
    }
}

fn exhaustive_expansion(graph: &BipartiteGraph, adjacency: &[Vec<usize>], size_cap: usize) -> ExpansionEstimate {
    let results: Vec<(Option<ExpansionStats>, u64)> = (0..graph.num_left())
        .into_par_iter()
        .map(|root| {
            let mut scan = ConnectedScan::new(graph, adjacency, size_cap, root);
            scan.run();
            (scan.best, scan.examined)
        })
        .collect();
    let mut best: Option<ExpansionStats> = None;
    let mut examined = 0;
    for (b, e) in results {
        examined += e;
        if let Some(b) = b {
            if best.as_ref().is_none_or(|cur| cur.less_than(&b)) {
                best = Some(b);
            }
        }
    }
    ExpansionEstimate {
        epsilon: best.as_ref().map_or(0.0, |b| b.expansion_error),
        worst: best,
        size_cap,
        exact: true,
        sets_examined: examined,
        warning: None,
    }
}

/// ESU-style enumeration of connected qudit sets whose smallest element is
/// `root`; each connected set is visited exactly once.
struct ConnectedScan<'a> {
    graph: &'a BipartiteGraph,
    adjacency: &'a [Vec<usize>],
    cap: usize,
    root: usize,
    members: Vec<usize>,
    in_set: Vec<bool>,
    /// Vertices in `members ∪ N(members)`.
    touched: Vec<u32>,
    counts: Vec<u32>,
    neighbors: usize,
    unique: usize,
    degree_sum: usize,
    best: Option<ExpansionStats>,
    examined: u64,
}

impl<'a> ConnectedScan<'a> {
    fn new(graph: &'a BipartiteGraph, adjacency: &'a [Vec<usize>], cap: usize, root: usize) -> Self {
        ConnectedScan {
            graph,
            adjacency,
            cap,
            root,
            members: Vec::new(),
            in_set: vec![false; graph.num_left()],
            touched: vec![0; graph.num_left()],
            counts: vec![0; graph.num_right()],
            neighbors: 0,
            unique: 0,
            degree_sum: 0,
            best: None,
            examined: 0,
        }
    }

    fn push(&mut self, q: usize) {
        self.members.push(q);
        self.in_set[q] = true;
        self.degree_sum += self.graph.left[q].len();
        for &c in &self.graph.left[q] {
            self.counts[c] += 1;
            match self.counts[c] {
                1 => {
                    self.neighbors += 1;
                    self.unique += 1;
                }
                2 => self.unique -= 1,
                _ => {}
            }
        }
        self.touched[q] += 1;
        for &r in &self.adjacency[q] {
            self.touched[r] += 1;
        }
    }

    fn pop(&mut self) {
        let q = self.members.pop().expect("non-empty");
        self.in_set[q] = false;
        self.degree_sum -= self.graph.left[q].len();
        for &c in &self.graph.left[q] {
            match self.counts[c] {
                1 => {
                    self.neighbors -= 1;
                    self.unique -= 1;
                }
                2 => self.unique += 1,
                _ => {}
            }
            self.counts[c] -= 1;
        }
        self.touched[q] -= 1;
        for &r in &self.adjacency[q] {
            self.touched[r] -= 1;
        }
    }

    fn record(&mut self) {
        self.examined += 1;
        let candidate_better = match &self.best {
            None => true,
            Some(b) => {
                let (bn, bd) = b.error_fraction();
                let an = self.degree_sum - self.neighbors;
                (an as u128) * (bd as u128) > (bn as u128) * (self.degree_sum as u128)
            }
        };
        if candidate_better {
            let mut set = self.members.clone();
            set.sort_unstable();
            self.best = Some(ExpansionStats::new(set, self.degree_sum, self.neighbors, self.unique));
        }
    }

    fn run(&mut self) {
        let root = self.root;
        self.push(root);
        self.record();
        let ext: Vec<usize> = self.adjacency[root].iter().copied().filter(|&u| u > root).collect();
        self.extend(ext);
        self.pop();
    }

    fn extend(&mut self, mut ext: Vec<usize>) {
        if self.members.len() == self.cap {
            return;
        }
        while let Some(w) = ext.pop() {
            // Exclusive neighbours of w: not in the set and not adjacent to it.
            let mut next = ext.clone();
            for &u in &self.adjacency[w] {
                if u > self.root && self.touched[u] == 0 && !next.contains(&u) {
                    next.push(u);
                }
            }
            self.push(w);
            self.record();
            self.extend(next);
            self.pop();
        }
    }
}

fn sampled_expansion(graph: &BipartiteGraph, size_cap: usize, samples: usize, seed: u64) -> ExpansionEstimate {
    let n = graph.num_left();
    let cap = size_cap.min(n);
    let chunk = 1024usize;
    let chunks = samples.div_ceil(chunk);
    let best = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(ci as u64);
            let mut local: Option<ExpansionStats> = None;
            let count = chunk.min(samples - ci * chunk);
            for _ in 0..count {
                let size = rng.random_range(1..=cap);
                let set = rand::seq::index::sample(&mut rng, n, size).into_vec();
                let stats = graph.expansion_stats(&set).expect("valid set");
                if local.as_ref().is_none_or(|b| b.less_than(&stats)) {
                    local = Some(stats);
                }
            }
            local
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .fold(None::<ExpansionStats>, |acc, s| match acc {
            Some(a) if !a.less_than(&s) => Some(a),
            _ => Some(s),
        });
    ExpansionEstimate {
        epsilon: best.as_ref().map_or(0.0, |b| b.expansion_error),
        worst: best,
        size_cap,
        exact: false,
        sets_examined: samples as u64,
        warning: None,
    }
}

/// Qudit of `S` with the fewest constraints that see at least two members of
/// `S`, together with that count.
pub fn least_shared_member(graph: &BipartiteGraph, set: &[usize]) -> Option<(usize, usize)> {
    let mut counts = vec![0u32; graph.num_right()];
    for &q in set {
        for &c in graph.constraints_of(q) {
            counts[c] += 1;
        }
    }
    set.iter()
        .map(|&q| (q, graph.constraints_of(q).iter().filter(|&&c| counts[c] >= 2).count()))
        .min_by_key(|&(q, shared)| (shared, q))
}

/// `η(k, D_L) = k^{-(2k+1)} D_L^{-(2k-1)}`, the guaranteed density of a
/// greedy k-independent set.
pub fn independent_set_density(k: usize, left_degree: usize) -> f64 {
    let k = k as f64;
    let dl = left_degree as f64;
    k.powf(-(2.0 * k + 1.0)) * dl.powf(-(2.0 * k - 1.0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependentSet {
    pub t: usize,
    pub constraints: Vec<usize>,
    pub requested: usize,
    pub seed: u64,
}

impl IndependentSet {
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn shortfall(&self) -> bool {
        self.constraints.len() < self.requested
    }
}

/// Greedily collects constraints whose `Γ^{(2t+1)}` neighbourhoods are
/// pairwise disjoint, visiting constraints in a seeded random order.
pub fn greedy_t_independent(graph: &BipartiteGraph, t: usize, target_size: usize, seed: u64) -> IndependentSet {
    let mut order: Vec<usize> = (0..graph.num_right()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut blocked = vec![false; graph.num_left()];
    let mut chosen = Vec::new();
    for u in order {
        if chosen.len() >= target_size {
            break;
        }
        let (ball, _) = graph.gamma_iter(&[u], Side::Right, 2 * t + 1).expect("valid constraint");
        if ball.iter().any(|&q| blocked[q]) {
            continue;
        }
        for q in ball {
            blocked[q] = true;
        }
        chosen.push(u);
    }
    IndependentSet {
        t,
        constraints: chosen,
        requested: target_size,
        seed,
    }
}

/// Checks pairwise disjointness of the `Γ^{(2t+1)}` neighbourhoods directly.
pub fn verify_t_independent(graph: &BipartiteGraph, constraints: &[usize], t: usize) -> bool {
    let mut balls = Vec::with_capacity(constraints.len());
    for &u in constraints {
        if u >= graph.num_right() {
            return false;
        }
        let (ball, _) = graph.gamma_iter(&[u], Side::Right, 2 * t + 1).expect("valid constraint");
        balls.push(ball.into_iter().collect::<BTreeSet<_>>());
    }
    for i in 0..balls.len() {
        for j in i + 1..balls.len() {
            if !balls[i].is_disjoint(&balls[j]) || constraints[i] == constraints[j] {
                return false;
            }
        }
    }
    true
}

/// Draws a random connected qudit set of the given size by growing from a
/// random qudit. Returns fewer elements when the component is smaller.
pub fn random_connected_set<R: Rng>(graph: &BipartiteGraph, adjacency: &[Vec<usize>], size: usize, rng: &mut R) -> Vec<usize> {
    let start = rng.random_range(0..graph.num_left());
    let mut set = vec![start];
    let in_set = AtomicBoolSet::new(graph.num_left());
    in_set.insert(start);
    while set.len() < size {
        let mut frontier: Vec<usize> = set
            .iter()
            .flat_map(|&q| adjacency[q].iter().copied())
            .filter(|&r| !in_set.contains(r))
            .collect();
        frontier.sort_unstable();
        frontier.dedup();
        if frontier.is_empty() {
            break;
        }
        let pick = frontier[rng.random_range(0..frontier.len())];
        in_set.insert(pick);
        set.push(pick);
    }
    set.sort_unstable();
    set
}

struct AtomicBoolSet(Vec<AtomicBool>);

impl AtomicBoolSet {
    fn new(n: usize) -> Self {
        AtomicBoolSet((0..n).map(|_| AtomicBool::new(false)).collect())
    }
    fn insert(&self, i: usize) {
        self.0[i].store(true, Ordering::Relaxed);
    }
    fn contains(&self, i: usize) -> bool {
        self.0[i].load(Ordering::Relaxed)
    }
}
