//! Builders for concrete code families.
//!
//! Toric lattice convention: vertex `(r, c)` sits at row `r`, column `c`
//! of an `L × L` periodic grid. Edge `h(r, c) = r·L + c` joins `(r, c)` to
//! `(r, c+1)`; edge `v(r, c) = L² + r·L + c` joins `(r, c)` to `(r+1, c)`.
//! Plaquette `(r, c)` has corners `(r, c)` and `(r+1, c+1)`. Generators are
//! listed vertices first, then plaquettes, both row-major.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{BuildOptions, CodeError, StabilizerCode};
use crate::field;
use crate::graph::{BipartiteGraph, ExpansionStats, GraphError};
use crate::pauli::{next_combination, PauliOp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZooError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("lattice size must be at least 2, got {0}")]
    LatticeTooSmall(usize),
    #[error("qudit dimension {0} is not prime")]
    NotPrime(u32),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("X row {x_row} and Z row {z_row} are not orthogonal")]
    NotOrthogonal { x_row: usize, z_row: usize },
    #[error("matrix shapes do not agree: {0}")]
    Shape(String),
    #[error("degree sequence infeasible: {0}")]
    InfeasibleDegrees(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown code source {0:?}")]
    UnknownSource(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// Horizontal edge index.
pub fn h_edge(l: usize, r: usize, c: usize) -> usize {
    (r % l) * l + (c % l)
}

/// Vertical edge index.
pub fn v_edge(l: usize, r: usize, c: usize) -> usize {
    l * l + (r % l) * l + (c % l)
}

fn dec(i: usize, l: usize) -> usize {
    (i + l - 1) % l
}

/// Kitaev's toric code on an `L × L` torus with qubits on edges.
pub fn toric_code(l: usize) -> Result<StabilizerCode, ZooError> {
    qudit_toric_code(l, 2)
}

/// The toric code over `Z_d`: vertex checks are `X` on outgoing edges and
/// `X⁻¹` on incoming ones, plaquette checks are `Z` on the top and right
/// edges and `Z⁻¹` on the bottom and left edges.
pub fn qudit_toric_code(l: usize, d: u32) -> Result<StabilizerCode, ZooError> {
    if l < 2 {
        return Err(ZooError::LatticeTooSmall(l));
    }
    if !field::is_prime(d) {
        return Err(ZooError::NotPrime(d));
    }
    let n = 2 * l * l;
    let minus = d - 1;
    let mut gens = Vec::with_capacity(n);
    for r in 0..l {
        for c in 0..l {
            let mut x = vec![0; n];
            x[h_edge(l, r, c)] = 1;
            x[v_edge(l, r, c)] = 1;
            x[h_edge(l, r, dec(c, l))] = minus;
            x[v_edge(l, dec(r, l), c)] = minus;
            gens.push(PauliOp::new(d, x, vec![0; n], 0).map_err(CodeError::from)?);
        }
    }
    for r in 0..l {
        for c in 0..l {
            let mut z = vec![0; n];
            z[h_edge(l, r, c)] = 1;
            z[v_edge(l, r, c + 1)] = 1;
            z[h_edge(l, r + 1, c)] = minus;
            z[v_edge(l, r, c)] = minus;
            gens.push(PauliOp::new(d, vec![0; n], z, 0).map_err(CodeError::from)?);
        }
    }
    let name = if d == 2 { format!("toric:{l}") } else { format!("toric:{l}:{d}") };
    let mut code = StabilizerCode::new(gens)?.with_name(&name);
    code.set_meta("lattice_size", serde_json::json!(l));
    Ok(code)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    Right,
    Left,
    Down,
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lattice {
    /// Walk along edges between vertices; the string is Z-type and is
    /// detected by vertex checks.
    Primal,
    /// Walk between plaquettes across edges; the string is X-type and is
    /// detected by plaquette checks.
    Dual,
}

/// A walk on the primal or dual lattice, given by a start site and moves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePath {
    pub lattice: Lattice,
    pub start: (usize, usize),
    pub moves: Vec<Move>,
}

impl LatticePath {
    pub fn new(lattice: Lattice, start: (usize, usize), moves: Vec<Move>) -> Self {
        LatticePath { lattice, start, moves }
    }

    /// Parses moves from letters `R`, `L`, `D`, `U`.
    pub fn parse(lattice: Lattice, start: (usize, usize), moves: &str) -> Result<Self, ZooError> {
        let moves = moves
            .chars()
            .map(|ch| match ch {
                'R' => Ok(Move::Right),
                'L' => Ok(Move::Left),
                'D' => Ok(Move::Down),
                'U' => Ok(Move::Up),
                other => Err(ZooError::InvalidPath(format!("unknown move {other:?}"))),
            })
            .collect::<Result<_, _>>()?;
        Ok(LatticePath::new(lattice, start, moves))
    }

    /// Net number of times the walk wraps around the torus horizontally and
    /// vertically. Only meaningful for closed walks.
    pub fn winding(&self, l: usize) -> (i64, i64) {
        let (mut dc, mut dr) = (0i64, 0i64);
        for m in &self.moves {
            match m {
                Move::Right => dc += 1,
                Move::Left => dc -= 1,
                Move::Down => dr += 1,
                Move::Up => dr -= 1,
            }
        }
        (dc.div_euclid(l as i64), dr.div_euclid(l as i64))
    }

    pub fn is_closed(&self, l: usize) -> bool {
        let (mut r, mut c) = self.start;
        for m in &self.moves {
            (r, c) = step(l, (r, c), *m);
        }
        (r % l, c % l) == (self.start.0 % l, self.start.1 % l)
    }

    /// Closed, and homologically trivial over `Z_d`.
    pub fn is_contractible(&self, l: usize, d: u32) -> bool {
        let (wx, wy) = self.winding(l);
        self.is_closed(l) && wx.rem_euclid(d as i64) == 0 && wy.rem_euclid(d as i64) == 0
    }
}

fn step(l: usize, (r, c): (usize, usize), m: Move) -> (usize, usize) {
    match m {
        Move::Right => (r, (c + 1) % l),
        Move::Left => (r, dec(c, l)),
        Move::Down => ((r + 1) % l, c),
        Move::Up => (dec(r, l), c),
    }
}

/// String operator along `path` on the `L × L` toric code over `Z_d`.
///
/// Each edge gets the power with which the check at the site being left acts
/// on it, so the interior of the walk commutes with every check and an open
/// walk violates exactly its two endpoint checks.
pub fn string_error(l: usize, d: u32, path: &LatticePath) -> Result<PauliOp, ZooError> {
    if l < 2 {
        return Err(ZooError::LatticeTooSmall(l));
    }
    if path.start.0 >= l || path.start.1 >= l {
        return Err(ZooError::InvalidPath(format!("start {:?} outside the {l}×{l} lattice", path.start)));
    }
    if path.moves.is_empty() {
        return Err(ZooError::InvalidPath("empty walk".into()));
    }
    let n = 2 * l * l;
    let minus = d - 1;
    let mut powers = vec![0u32; n];
    let mut used = BTreeSet::new();
    let mut site = path.start;
    for &m in &path.moves {
        let (r, c) = site;
        // (edge, power of the departing site's check on it)
        let (edge, power) = match (path.lattice, m) {
            (Lattice::Primal, Move::Right) => (h_edge(l, r, c), 1),
            (Lattice::Primal, Move::Left) => (h_edge(l, r, dec(c, l)), minus),
            (Lattice::Primal, Move::Down) => (v_edge(l, r, c), 1),
            (Lattice::Primal, Move::Up) => (v_edge(l, dec(r, l), c), minus),
            (Lattice::Dual, Move::Right) => (v_edge(l, r, c + 1), 1),
            (Lattice::Dual, Move::Left) => (v_edge(l, r, c), minus),
            (Lattice::Dual, Move::Down) => (h_edge(l, r + 1, c), minus),
            (Lattice::Dual, Move::Up) => (h_edge(l, r, c), 1),
        };
        if !used.insert(edge) {
            return Err(ZooError::InvalidPath(format!("edge {edge} used twice")));
        }
        powers[edge] = power;
        site = step(l, site, m);
    }
    let zero = vec![0u32; n];
    let op = match path.lattice {
        Lattice::Primal => PauliOp::new(d, zero, powers, 0),
        Lattice::Dual => PauliOp::new(d, powers, zero, 0),
    };
    Ok(op.map_err(CodeError::from)?)
}

/// Dense matrix over `F_d`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<u32>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![0; cols]; rows],
        }
    }

    pub fn from_rows(data: Vec<Vec<u32>>) -> Result<Self, ZooError> {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        if data.iter().any(|r| r.len() != cols) {
            return Err(ZooError::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// `rows × rows` circulant with first row `taps` (position → value).
    pub fn circulant(size: usize, taps: &[(usize, u32)], d: u32) -> Self {
        let mut m = Matrix::zeros(size, size);
        for i in 0..size {
            for &(off, v) in taps {
                let j = (i + off) % size;
                m.data[i][j] = field::add(m.data[i][j], v % d, d);
            }
        }
        m
    }

    /// Parity checks of the length-`size` cycle: row `i` is `e_i - e_{i+1}`.
    pub fn ring(size: usize, d: u32) -> Self {
        Matrix::circulant(size, &[(0, 1), (1, d - 1)], d)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                t.data[j][i] = v;
            }
        }
        t
    }

    pub fn row_support(&self, i: usize) -> Vec<usize> {
        (0..self.cols).filter(|&j| self.data[i][j] != 0).collect()
    }

    pub fn reduce(&mut self, d: u32) {
        for row in &mut self.data {
            for v in row.iter_mut() {
                *v %= d;
            }
        }
    }
}

/// CSS code with X-type checks from the rows of `hx` and Z-type checks from
/// the rows of `hz`. Requires `hx · hzᵀ = 0 (mod d)`.
pub fn css_code(hx: &Matrix, hz: &Matrix, d: u32, options: BuildOptions) -> Result<StabilizerCode, ZooError> {
    if !field::is_prime(d) {
        return Err(ZooError::NotPrime(d));
    }
    if hx.cols != hz.cols {
        return Err(ZooError::Shape(format!("Hx has {} columns, Hz has {}", hx.cols, hz.cols)));
    }
    for (i, rx) in hx.data.iter().enumerate() {
        for (j, rz) in hz.data.iter().enumerate() {
            let dot = rx
                .iter()
                .zip(rz)
                .fold(0u32, |acc, (&a, &b)| field::add(acc, field::mul(a % d, b % d, d), d));
            if dot != 0 {
                return Err(ZooError::NotOrthogonal { x_row: i, z_row: j });
            }
        }
    }
    let n = hx.cols;
    let mut gens = Vec::with_capacity(hx.rows + hz.rows);
    for row in &hx.data {
        let x = row.iter().map(|v| v % d).collect();
        gens.push(PauliOp::new(d, x, vec![0; n], 0).map_err(CodeError::from)?);
    }
    for row in &hz.data {
        let z = row.iter().map(|v| v % d).collect();
        gens.push(PauliOp::new(d, vec![0; n], z, 0).map_err(CodeError::from)?);
    }
    Ok(StabilizerCode::with_options(gens, options)?)
}

/// Hypergraph product of two classical parity-check matrices:
/// `Hx = [H1 ⊗ I | I ⊗ H2ᵀ]`, `Hz = [-I ⊗ H2 | H1ᵀ ⊗ I]`.
pub fn hypergraph_product_matrices(h1: &Matrix, h2: &Matrix, d: u32) -> (Matrix, Matrix) {
    let (m1, n1) = (h1.rows, h1.cols);
    let (m2, n2) = (h2.rows, h2.cols);
    let n = n1 * n2 + m1 * m2;
    let left = |a: usize, b: usize| a * n2 + b;
    let right = |i: usize, j: usize| n1 * n2 + i * m2 + j;
    let mut hx = Matrix::zeros(m1 * n2, n);
    for i in 0..m1 {
        for b in 0..n2 {
            let row = &mut hx.data[i * n2 + b];
            for a in 0..n1 {
                row[left(a, b)] = h1.data[i][a] % d;
            }
            for j in 0..m2 {
                row[right(i, j)] = h2.data[j][b] % d;
            }
        }
    }
    let mut hz = Matrix::zeros(n1 * m2, n);
    for a in 0..n1 {
        for j in 0..m2 {
            let row = &mut hz.data[a * m2 + j];
            for b in 0..n2 {
                row[left(a, b)] = field::neg(h2.data[j][b] % d, d);
            }
            for i in 0..m1 {
                row[right(i, j)] = h1.data[i][a] % d;
            }
        }
    }
    (hx, hz)
}

pub fn css_hypergraph_product(h1: &Matrix, h2: &Matrix, d: u32, options: BuildOptions) -> Result<StabilizerCode, ZooError> {
    let (hx, hz) = hypergraph_product_matrices(h1, h2, d);
    css_code(&hx, &hz, d, options)
}

/// Parity checks of the [7,4] Hamming code; column `j` is `j + 1` in binary.
pub fn hamming7() -> Matrix {
    let data = (0..3)
        .map(|bit| (1..=7u32).map(|j| (j >> (2 - bit)) & 1).collect())
        .collect();
    Matrix::from_rows(data).expect("rectangular")
}

/// The [[7,1,3]] Steane code. Its left degree is irregular, which is
/// reported as a warning.
pub fn steane_code() -> Result<StabilizerCode, ZooError> {
    let h = hamming7();
    Ok(css_code(&h, &h, 2, BuildOptions::default())?.with_name("steane"))
}

/// The [[5,1,3]] code generated by cyclic shifts of `XZZXI`.
pub fn five_qubit_code() -> Result<StabilizerCode, ZooError> {
    let gens = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
        .iter()
        .map(|s| PauliOp::from_qubit_str(s).expect("valid letters"))
        .collect();
    Ok(StabilizerCode::new(gens)?.with_name("five"))
}

/// A classical parity code: one parity check per right vertex acting on its
/// neighbours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalParityCode {
    graph: BipartiteGraph,
    d: u32,
    parity_check: Matrix,
}

pub fn classical_expander_code(graph: BipartiteGraph) -> ClassicalParityCode {
    let mut h = Matrix::zeros(graph.num_right(), graph.num_left());
    for c in 0..graph.num_right() {
        for &b in graph.qudits_of(c) {
            h.data[c][b] = 1;
        }
    }
    ClassicalParityCode {
        graph,
        d: 2,
        parity_check: h,
    }
}

impl ClassicalParityCode {
    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn parity_check(&self) -> &Matrix {
        &self.parity_check
    }

    pub fn n(&self) -> usize {
        self.graph.num_left()
    }

    pub fn m(&self) -> usize {
        self.graph.num_right()
    }

    /// Checks with odd parity on the word supported on `bits`.
    pub fn violated_checks(&self, bits: &[usize]) -> usize {
        let mut parity = vec![0u32; self.m()];
        for &b in bits {
            for &c in self.graph.constraints_of(b) {
                parity[c] = field::add(parity[c], self.parity_check.data[c][b], self.d);
            }
        }
        parity.iter().filter(|&&p| p != 0).count()
    }

    /// The same count through the Pauli view: X errors on `bits` against one
    /// Z-type operator per check.
    pub fn violated_checks_as_paulis(&self, bits: &[usize]) -> usize {
        let n = self.n();
        let mut x = vec![0u32; n];
        for &b in bits {
            x[b] = 1;
        }
        let error = PauliOp::new(2, x, vec![0; n], 0).expect("binary");
        (0..self.m())
            .filter(|&c| {
                let z = self.parity_check.data[c].clone();
                let check = PauliOp::new(2, vec![0; n], z, 0).expect("binary");
                check.symplectic_product(&error).expect("same shape") != 0
            })
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalSetOutcome {
    pub stats: ExpansionStats,
    pub violated: usize,
    pub relative_soundness: f64,
    pub unique_bound_holds: bool,
    pub expansion_bound_holds: bool,
    pub soundness_bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalSoundnessReport {
    pub weight_cap: usize,
    pub exhaustive: bool,
    pub sets_examined: u64,
    /// Minimum relative soundness per set size `1..=weight_cap`.
    pub min_r_by_size: Vec<Option<f64>>,
    pub failures: Vec<ClassicalSetOutcome>,
    pub all_hold: bool,
}

/// Above this many sets the classical scan samples instead.
pub const CLASSICAL_SCAN_LIMIT: u128 = 50_000_000;

/// Scans bit sets of size at most `weight_cap` and checks, for each with
/// `ε(S) < 1/2`, that violated checks `≥ |Γ₁(S)| ≥ (1 - 2ε)|S| D_L`, hence
/// `r ≥ 1 - 3ε(S)`.
pub fn classical_soundness_check(code: &ClassicalParityCode, weight_cap: usize, seed: u64) -> ClassicalSoundnessReport {
    let n = code.n();
    let cap = weight_cap.min(n);
    let total: u128 = (1..=cap).map(|w| crate::pauli::binomial(n, w)).sum();
    let exhaustive = total <= CLASSICAL_SCAN_LIMIT;
    let mut min_r: Vec<Option<f64>> = vec![None; cap];
    let mut failures = Vec::new();
    let mut examined = 0u64;
    let mut visit = |set: &[usize]| {
        examined += 1;
        let outcome = classical_outcome(code, set);
        let slot = &mut min_r[set.len() - 1];
        if slot.is_none_or(|r| outcome.relative_soundness < r) {
            *slot = Some(outcome.relative_soundness);
        }
        if !(outcome.unique_bound_holds && outcome.expansion_bound_holds && outcome.soundness_bound_holds) {
            failures.push(outcome);
        }
    };
    if exhaustive {
        for w in 1..=cap {
            let mut combo: Vec<usize> = (0..w).collect();
            loop {
                visit(&combo);
                if !next_combination(&mut combo, n) {
                    break;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1_000_000 {
            let w = rng.random_range(1..=cap);
            let mut set = rand::seq::index::sample(&mut rng, n, w).into_vec();
            set.sort_unstable();
            visit(&set);
        }
    }
    let all_hold = failures.is_empty();
    ClassicalSoundnessReport {
        weight_cap: cap,
        exhaustive,
        sets_examined: examined,
        min_r_by_size: min_r,
        failures,
        all_hold,
    }
}

fn classical_outcome(code: &ClassicalParityCode, set: &[usize]) -> ClassicalSetOutcome {
    let stats = code.graph.expansion_stats(set).expect("valid set");
    let violated = code.violated_checks(set);
    let k = code.graph.max_right_degree() as f64;
    let delta = set.len() as f64 / code.n() as f64;
    let big_r = violated as f64 / code.m() as f64;
    let r = big_r / (k * delta).min(1.0);
    let eps = stats.expansion_error;
    let small = eps < 0.5;
    let unique_bound_holds = !small || violated >= stats.unique_neighbors;
    // |Γ₁| ≥ (1 - 2ε) Σ deg, in exact integers: |Γ₁| ≥ 2|Γ| - Σ deg.
    let expansion_bound_holds =
        !small || stats.unique_neighbors as i64 >= 2 * stats.neighbors as i64 - stats.degree_sum as i64;
    let soundness_bound_holds = !small || r >= 1.0 - 3.0 * eps - 1e-12;
    ClassicalSetOutcome {
        stats,
        violated,
        relative_soundness: r,
        unique_bound_holds,
        expansion_bound_holds,
        soundness_bound_holds,
    }
}

/// Random `(D_L, k)`-biregular bipartite graph from the configuration model,
/// with repeated edges removed by random edge swaps.
pub fn random_regular_bipartite(n: usize, m: usize, left_degree: usize, k: usize, seed: u64) -> Result<BipartiteGraph, ZooError> {
    if n * left_degree != m * k {
        return Err(ZooError::InfeasibleDegrees(format!(
            "n·D_L = {} but m·k = {}",
            n * left_degree,
            m * k
        )));
    }
    if left_degree > m || k > n {
        return Err(ZooError::InfeasibleDegrees(format!(
            "D_L={left_degree} with m={m}, k={k} with n={n} forces repeated edges"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|q| std::iter::repeat_n(q, left_degree)).collect();
    for _attempt in 0..100 {
        stubs.shuffle(&mut rng);
        // Constraint c owns stubs[c*k .. (c+1)*k].
        if repair_multi_edges(&mut stubs, k, &mut rng) {
            let constraints: Vec<Vec<usize>> = stubs.chunks(k).map(|c| c.to_vec()).collect();
            return Ok(BipartiteGraph::from_constraints(n, &constraints)?);
        }
    }
    Err(ZooError::InfeasibleDegrees("could not remove repeated edges".into()))
}

fn repair_multi_edges(stubs: &mut [usize], k: usize, rng: &mut ChaCha8Rng) -> bool {
    let total = stubs.len();
    let contains = |stubs: &[usize], c: usize, q: usize, skip: usize| {
        (c * k..(c + 1) * k).any(|p| p != skip && stubs[p] == q)
    };
    for _ in 0..100 * total.max(1) {
        let bad = (0..total).find(|&p| contains(stubs, p / k, stubs[p], p));
        let Some(p) = bad else {
            return true;
        };
        let o = rng.random_range(0..total);
        let (cp, co) = (p / k, o / k);
        if cp == co {
            continue;
        }
        let (qp, qo) = (stubs[p], stubs[o]);
        if !contains(stubs, cp, qo, p) && !contains(stubs, co, qp, o) {
            stubs.swap(p, o);
        }
    }
    false
}

/// Parses the sparse row format:
///
/// ```text
/// # comment
/// <rows> <cols>
/// 0 3 5        one line per row: column indices, value 1
/// 1:2 4        or column:value pairs
/// ```
pub fn parse_sparse_matrix(text: &str, d: u32) -> Result<Matrix, ZooError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(ZooError::Parse {
        line: 0,
        message: "missing header".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| ZooError::Parse {
            line: hline,
            message: format!("header: {e}"),
        })?;
    let [rows, cols] = dims[..] else {
        return Err(ZooError::Parse {
            line: hline,
            message: "header must be `<rows> <cols>`".into(),
        });
    };
    let mut m = Matrix::zeros(rows, cols);
    let mut row = 0;
    for (line, content) in lines {
        if row == rows {
            return Err(ZooError::Parse {
                line,
                message: format!("more than {rows} rows"),
            });
        }
        for tok in content.split_whitespace() {
            let (c, v) = match tok.split_once(':') {
                Some((c, v)) => (c, v),
                None => (tok, "1"),
            };
            let parse_err = |what: &str| ZooError::Parse {
                line,
                message: format!("bad {what} in {tok:?}"),
            };
            let c: usize = c.parse().map_err(|_| parse_err("column"))?;
            let v: i64 = v.parse().map_err(|_| parse_err("value"))?;
            if c >= cols {
                return Err(ZooError::Parse {
                    line,
                    message: format!("column {c} out of range (cols = {cols})"),
                });
            }
            m.data[row][c] = field::reduce_signed(v, d);
        }
        row += 1;
    }
    if row != rows {
        return Err(ZooError::Parse {
            line: hline,
            message: format!("header declares {rows} rows, found {row}"),
        });
    }
    Ok(m)
}

pub fn write_sparse_matrix(m: &Matrix) -> String {
    let mut s = format!("{} {}\n", m.rows, m.cols);
    for row in &m.data {
        let toks: Vec<String> = row
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(j, &v)| if v == 1 { j.to_string() } else { format!("{j}:{v}") })
            .collect();
        s.push_str(&toks.join(" "));
        s.push('\n');
    }
    s
}

fn read_file(path: &str) -> Result<String, ZooError> {
    std::fs::read_to_string(path).map_err(|e| ZooError::Io {
        path: path.to_string(),
        message: e.to_string(),
    })
}

/// `ring<N>` for the cycle parity checks, otherwise a sparse-format file.
fn load_matrix(token: &str, d: u32) -> Result<Matrix, ZooError> {
    if let Some(size) = token.strip_prefix("ring").and_then(|s| s.parse::<usize>().ok()) {
        if size < 2 {
            return Err(ZooError::Shape("ring size must be at least 2".into()));
        }
        return Ok(Matrix::ring(size, d));
    }
    parse_sparse_matrix(&read_file(token)?, d)
}

/// Splits `a,b[:d]` into its matrix tokens and dimension.
fn split_pair(spec: &str) -> Result<(String, String, u32), ZooError> {
    let (body, d) = match spec.rsplit_once(':') {
        Some((body, d)) if d.parse::<u32>().is_ok() => (body, d.parse().expect("checked")),
        _ => (spec, 2),
    };
    if !field::is_prime(d) {
        return Err(ZooError::NotPrime(d));
    }
    let (a, b) = body
        .split_once(',')
        .ok_or_else(|| ZooError::UnknownSource(format!("{spec} (expected two comma-separated matrices)")))?;
    Ok((a.to_string(), b.to_string(), d))
}

#[derive(Debug, Clone)]
pub enum CodeSource {
    Quantum(StabilizerCode),
    Classical(ClassicalParityCode),
}

impl fmt::Display for CodeSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeSource::Quantum(c) => write!(f, "{}", c.name().unwrap_or("code")),
            CodeSource::Classical(c) => write!(f, "classical n={} m={}", c.n(), c.m()),
        }
    }
}

/// Resolves a preset name or file:
///
/// * `toric:L` or `toric:L:d`
/// * `steane`, `five`
/// * `hgp:A,B[:d]` where `A`, `B` are `ring<N>` or sparse-format files
/// * `css:Hx,Hz[:d]`
/// * `classical:FILE` or `classical:random:n,m,DL,k,seed`
/// * anything else is read as a JSON code file
pub fn load_source(spec: &str, options: BuildOptions) -> Result<CodeSource, ZooError> {
    let named = |code: StabilizerCode| {
        let mut code = if options == BuildOptions::default() {
            code
        } else {
            let name = code.name().map(str::to_string);
            let rebuilt = StabilizerCode::with_options(code.generators().to_vec(), options)?;
            match name {
                Some(name) => rebuilt.with_name(&name),
                None => rebuilt,
            }
        };
        if code.name().is_none() {
            code.set_meta("name", serde_json::json!(spec));
        }
        Ok(CodeSource::Quantum(code))
    };
    if let Some(rest) = spec.strip_prefix("toric:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let bad = || ZooError::UnknownSource(spec.to_string());
        let l: usize = parts[0].parse().map_err(|_| bad())?;
        let d: u32 = match parts.get(1) {
            Some(d) => d.parse().map_err(|_| bad())?,
            None => 2,
        };
        if parts.len() > 2 {
            return Err(bad());
        }
        return named(qudit_toric_code(l, d)?);
    }
    match spec {
        "steane" => return named(steane_code()?),
        "five" => return named(five_qubit_code()?),
        _ => {}
    }
    if let Some(rest) = spec.strip_prefix("hgp:") {
        let (a, b, d) = split_pair(rest)?;
        let h1 = load_matrix(&a, d)?;
        let h2 = load_matrix(&b, d)?;
        return named(css_hypergraph_product(&h1, &h2, d, options)?.with_name(spec));
    }
    if let Some(rest) = spec.strip_prefix("css:") {
        let (a, b, d) = split_pair(rest)?;
        let hx = load_matrix(&a, d)?;
        let hz = load_matrix(&b, d)?;
        return named(css_code(&hx, &hz, d, options)?.with_name(spec));
    }
    if let Some(rest) = spec.strip_prefix("classical:") {
        if let Some(params) = rest.strip_prefix("random:") {
            let nums: Vec<u64> = params
                .split(',')
                .map(|t| t.parse::<u64>())
                .collect::<Result<_, _>>()
                .map_err(|_| ZooError::UnknownSource(spec.to_string()))?;
            let [n, m, dl, k, seed] = nums[..] else {
                return Err(ZooError::UnknownSource(spec.to_string()));
            };
            let g = random_regular_bipartite(n as usize, m as usize, dl as usize, k as usize, seed)?;
            return Ok(CodeSource::Classical(classical_expander_code(g)));
        }
        let h = parse_sparse_matrix(&read_file(rest)?, 2)?;
        let constraints: Vec<Vec<usize>> = (0..h.rows).map(|i| h.row_support(i)).collect();
        let g = BipartiteGraph::from_constraints(h.cols, &constraints)?;
        return Ok(CodeSource::Classical(classical_expander_code(g)));
    }
    if Path::new(spec).exists() {
        let text = read_file(spec)?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| ZooError::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        return Ok(CodeSource::Quantum(StabilizerCode::from_json(&value, options)?));
    }
    Err(ZooError::UnknownSource(spec.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toric_shapes() {
        for l in 2..=5 {
            let code = toric_code(l).unwrap();
            assert_eq!(code.n(), 2 * l * l);
            assert_eq!(code.m(), 2 * l * l);
            assert_eq!(code.k(), 4);
            assert_eq!(code.left_degree(), 4);
            assert!(code.is_degree_regular());
            assert_eq!(code.rank(), 2 * l * l - 2);
        }
        assert!(toric_code(1).is_err());
    }

    #[test]
    fn qudit_toric_is_valid() {
        for d in [3, 5] {
            let code = qudit_toric_code(3, d).unwrap();
            assert_eq!(code.rank(), 16);
            assert_eq!(code.logical_qudits(), 2);
        }
        assert!(qudit_toric_code(3, 4).is_err());
    }

    #[test]
    fn open_strings_violate_two_checks() {
        let code = qudit_toric_code(4, 3).unwrap();
        for lattice in [Lattice::Primal, Lattice::Dual] {
            let p = LatticePath::parse(lattice, (1, 1), "RRDL").unwrap();
            let e = string_error(4, 3, &p).unwrap();
            assert_eq!(code.penalty(&e).unwrap(), 2, "{lattice:?}");
        }
    }

    #[test]
    fn loops_on_small_lattice() {
        let code = toric_code(2).unwrap();
        let plaquette = LatticePath::parse(Lattice::Primal, (0, 0), "RDLU").unwrap();
        let e = string_error(2, 2, &plaquette).unwrap();
        assert!(plaquette.is_contractible(2, 2));
        assert_eq!(code.penalty(&e).unwrap(), 0);
        assert!(code.span_contains(&e));
        let wrap = LatticePath::parse(Lattice::Primal, (0, 0), "RR").unwrap();
        assert!(wrap.is_closed(2) && !wrap.is_contractible(2, 2));
        let e = string_error(2, 2, &wrap).unwrap();
        assert_eq!(code.penalty(&e).unwrap(), 0);
        assert!(!code.span_contains(&e));
        let reused = LatticePath::parse(Lattice::Primal, (0, 0), "RL").unwrap();
        assert!(string_error(2, 2, &reused).is_err());
    }

    #[test]
    fn steane_code_shape() {
        let code = steane_code().unwrap();
        assert_eq!((code.n(), code.m(), code.k()), (7, 6, 4));
        assert_eq!(code.logical_qudits(), 1);
        assert!(!code.is_degree_regular());
        assert!(!code.warnings().is_empty());
    }

    #[test]
    fn css_rejects_non_orthogonal() {
        let hx = Matrix::from_rows(vec![vec![1, 1, 0]]).unwrap();
        let hz = Matrix::from_rows(vec![vec![1, 1, 1], vec![1, 0, 0]]).unwrap();
        assert_eq!(
            css_code(&hx, &hz, 2, BuildOptions::default()).unwrap_err(),
            ZooError::NotOrthogonal { x_row: 0, z_row: 1 }
        );
    }

    #[test]
    fn ring_product_matches_toric_parameters() {
        for d in [2, 3] {
            let h = Matrix::ring(4, d);
            let (hx, hz) = hypergraph_product_matrices(&h, &h, d);
            for rx in &hx.data {
                for rz in &hz.data {
                    let dot = rx.iter().zip(rz).map(|(a, b)| a * b).sum::<u32>() % d;
                    assert_eq!(dot, 0);
                }
            }
            let code = css_hypergraph_product(&h, &h, d, BuildOptions::default()).unwrap();
            assert_eq!((code.n(), code.k(), code.left_degree()), (32, 4, 4));
            assert_eq!(code.logical_qudits(), 2);
        }
    }

    #[test]
    fn random_graphs_are_regular_and_seeded() {
        let g = random_regular_bipartite(24, 18, 3, 4, 9).unwrap();
        assert_eq!(g.regular_left_degree(), Some(3));
        assert_eq!(g.regular_right_degree(), Some(4));
        assert_eq!(g, random_regular_bipartite(24, 18, 3, 4, 9).unwrap());
        assert!(random_regular_bipartite(24, 18, 3, 5, 9).is_err());
    }

    #[test]
    fn sparse_format_round_trip() {
        let text = "# Hamming\n3 7\n3 4 5 6\n1 2 5 6\n0 2 4 6\n";
        let m = parse_sparse_matrix(text, 2).unwrap();
        assert_eq!(m, hamming7());
        assert_eq!(parse_sparse_matrix(&write_sparse_matrix(&m), 2).unwrap(), m);
        let err = parse_sparse_matrix("2 3\n0 9\n1\n", 2).unwrap_err();
        assert!(matches!(err, ZooError::Parse { line: 2, .. }));
        let err = parse_sparse_matrix("2 3\n0\n", 2).unwrap_err();
        assert!(matches!(err, ZooError::Parse { .. }));
        let signed = parse_sparse_matrix("1 2\n0:1 1:-1\n", 3).unwrap();
        assert_eq!(signed.data[0], vec![1, 2]);
    }

    #[test]
    fn classical_single_bit_and_pauli_view() {
        let g = random_regular_bipartite(24, 18, 3, 4, 1).unwrap();
        let code = classical_expander_code(g);
        for b in 0..code.n() {
            assert_eq!(code.violated_checks(&[b]), 3);
        }
        for set in [vec![0, 1], vec![2, 7, 9], vec![4, 5, 6, 11]] {
            assert_eq!(code.violated_checks(&set), code.violated_checks_as_paulis(&set));
        }
        let report = classical_soundness_check(&code, 2, 0);
        assert!(report.exhaustive && report.all_hold);
        assert_eq!(report.sets_examined, 24 + 276);
    }

    #[test]
    fn presets_resolve() {
        let opts = BuildOptions::default();
        assert!(matches!(load_source("toric:3", opts).unwrap(), CodeSource::Quantum(c) if c.n() == 18));
        assert!(matches!(load_source("toric:3:3", opts).unwrap(), CodeSource::Quantum(c) if c.d() == 3));
        assert!(matches!(load_source("hgp:ring5,ring5:3", opts).unwrap(), CodeSource::Quantum(c) if c.n() == 50));
        assert!(matches!(load_source("classical:random:24,18,3,4,2", opts).unwrap(), CodeSource::Classical(_)));
        assert!(load_source("nonsense", opts).is_err());
        assert!(load_source("toric:x", opts).is_err());
    }
}
