//! Stabilizer codes as validated generating sets.
//!
//! For qubits a stored word `(-1)^φ ⊗ X^x Z^z` is read as the Hermitian
//! operator `i^y (-1)^φ ⊗ X^x Z^z`, where `y` counts the sites with
//! `x = z = 1`. Under that reading the letter `Y` of [`PauliOp::from_qubit_str`]
//! is the usual Pauli `Y`, every generator squares to `I`, and group phases
//! are tracked in `Z_4`. For odd `d` every word already has order `d` and
//! group phases are the stored `Z_d` exponents.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{self, RowSpace};
use crate::graph::{BipartiteGraph, GraphError};
use crate::pauli::{PauliError, PauliOp, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("a code needs at least one generator")]
    Empty,
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("generators {g} and {h} do not commute")]
    NonAbelian { g: usize, h: usize },
    #[error("generator product with multiplicities {coefficients:?} equals w^{phase}·I, so the code space is empty")]
    PhaseObstruction { coefficients: Vec<u32>, phase: u32 },
    #[error("generator {generator} has weight {weight}, expected {expected}")]
    NonUniformLocality {
        generator: usize,
        weight: usize,
        expected: usize,
    },
    #[error("qudit {qudit} lies in {degree} generators, expected {expected}")]
    IrregularDegree {
        qudit: usize,
        degree: usize,
        expected: usize,
    },
    #[error("qudit {0} is trivial: no two generators have non-commuting restrictions on it")]
    TrivialQudit(usize),
    #[error("generator {0} is a scalar")]
    ScalarGenerator(usize),
    #[error("malformed code file: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Turn an irregular left degree into an error instead of a warning.
    pub strict_degree: bool,
    /// Accept generators of differing weight; `k` is then the maximum weight.
    pub allow_nonuniform_locality: bool,
}

/// Syndrome of an error: entry `g` is `⟨generator_g, E⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Syndrome {
    pub d: u32,
    pub values: Vec<u32>,
}

impl Syndrome {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Number of violated generators.
    pub fn weight(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }

    pub fn violated(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i] != 0).collect()
    }

    pub fn add(&self, other: &Syndrome) -> Syndrome {
        Syndrome {
            d: self.d,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| field::add(a, b, self.d))
                .collect(),
        }
    }
}

/// Result of a stabilizer-group membership query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "membership", content = "coefficients", rename_all = "snake_case")]
pub enum Membership {
    /// `E = Π g_i^{c_i}` exactly.
    Member(Vec<u32>),
    /// `E` equals `Π g_i^{c_i}` only up to a non-trivial scalar.
    PhaseMismatch(Vec<u32>),
    NotInSpan,
}

impl Membership {
    /// Membership ignoring scalars.
    pub fn in_span(&self) -> bool {
        !matches!(self, Membership::NotInSpan)
    }
}

/// Split of a CSS code's generators by type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssSplit {
    pub x_generators: Vec<usize>,
    pub z_generators: Vec<usize>,
}

/// Restriction of one generator to one qudit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct LocalCheck {
    pub generator: u32,
    pub symbol: Symbol,
}

#[derive(Debug, Clone)]
pub struct StabilizerCode {
    n: usize,
    d: u32,
    generators: Vec<PauliOp>,
    k: usize,
    uniform_locality: bool,
    left_degree: usize,
    regular_degree: bool,
    row_space: RowSpace,
    graph: BipartiteGraph,
    css: Option<CssSplit>,
    /// Qudit -> restrictions of the generators acting on it.
    local: Vec<Vec<LocalCheck>>,
    warnings: Vec<String>,
    meta: serde_json::Map<String, serde_json::Value>,
}

impl StabilizerCode {
    pub fn new(generators: Vec<PauliOp>) -> Result<Self, CodeError> {
        Self::with_options(generators, BuildOptions::default())
    }

    /// Validates the generating set and caches the derived structure.
    pub fn with_options(generators: Vec<PauliOp>, options: BuildOptions) -> Result<Self, CodeError> {
        let first = generators.first().ok_or(CodeError::Empty)?;
        let n = first.n();
        let d = first.d();
        for g in &generators {
            if g.d() != d {
                return Err(PauliError::DimensionMismatch { left: d, right: g.d() }.into());
            }
            if g.n() != n {
                return Err(PauliError::SizeMismatch { left: n, right: g.n() }.into());
            }
        }
        if let Some(i) = generators.iter().position(PauliOp::is_scalar) {
            return Err(CodeError::ScalarGenerator(i));
        }

        let m = generators.len();
        let constraints: Vec<Vec<usize>> = generators.iter().map(PauliOp::support).collect();
        let graph = BipartiteGraph::from_constraints(n, &constraints)?;
        let mut local = vec![Vec::new(); n];
        for (gi, g) in generators.iter().enumerate() {
            for &q in &constraints[gi] {
                local[q].push(LocalCheck {
                    generator: gi as u32,
                    symbol: g.symbol(q),
                });
            }
        }

        // Commutation only needs to be checked on shared qudits.
        let mut acc = vec![0u32; m];
        let mut seen = vec![false; m];
        for gi in 0..m {
            let mut touched = Vec::new();
            for &q in &constraints[gi] {
                let s = generators[gi].symbol(q);
                for lc in &local[q] {
                    let h = lc.generator as usize;
                    if h > gi {
                        if !seen[h] {
                            seen[h] = true;
                            touched.push(h);
                        }
                        acc[h] = field::add(acc[h], s.commutator(lc.symbol, d), d);
                    }
                }
            }
            touched.sort_unstable();
            let bad = touched.iter().copied().find(|&h| acc[h] != 0);
            for &h in &touched {
                acc[h] = 0;
                seen[h] = false;
            }
            if let Some(h) = bad {
                return Err(CodeError::NonAbelian { g: gi, h });
            }
        }

        let rows: Vec<Vec<u32>> = generators.iter().map(PauliOp::symplectic_vector).collect();
        let row_space = RowSpace::new(&rows, d);
        for dep in row_space.dependencies() {
            let phase = group_phase(&generators, dep, n, d);
            if phase != 0 {
                return Err(CodeError::PhaseObstruction {
                    coefficients: dep.clone(),
                    phase: if d == 2 { phase / 2 } else { phase },
                });
            }
        }

        let weights: Vec<usize> = constraints.iter().map(Vec::len).collect();
        let k = *weights.iter().max().expect("non-empty");
        let uniform_locality = weights.iter().all(|&w| w == k);
        if !uniform_locality && !options.allow_nonuniform_locality {
            let generator = weights.iter().position(|&w| w != weights[0]).expect("non-uniform");
            return Err(CodeError::NonUniformLocality {
                generator,
                weight: weights[generator],
                expected: weights[0],
            });
        }

        for (q, checks) in local.iter().enumerate() {
            let nontrivial = checks
                .iter()
                .enumerate()
                .any(|(i, a)| checks[i + 1..].iter().any(|b| a.symbol.commutator(b.symbol, d) != 0));
            if !nontrivial {
                return Err(CodeError::TrivialQudit(q));
            }
        }

        let mut warnings = Vec::new();
        let left_degree = graph.max_left_degree();
        let regular_degree = graph.regular_left_degree().is_some();
        if !regular_degree {
            let (qudit, degree) = (0..n)
                .map(|q| (q, graph.left_degree(q)))
                .find(|&(_, deg)| deg != graph.left_degree(0))
                .expect("irregular");
            let err = CodeError::IrregularDegree {
                qudit,
                degree,
                expected: graph.left_degree(0),
            };
            if options.strict_degree {
                return Err(err);
            }
            warnings.push(format!("{err}; D_L reported as the maximum degree {left_degree}"));
        }
        if !uniform_locality {
            warnings.push(format!("non-uniform locality; k reported as the maximum weight {k}"));
        }

        let css = css_split(&generators);

        Ok(StabilizerCode {
            n,
            d,
            generators,
            k,
            uniform_locality,
            left_degree,
            regular_degree,
            row_space,
            graph,
            css,
            local,
            warnings,
            meta: serde_json::Map::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Number of generators.
    pub fn m(&self) -> usize {
        self.generators.len()
    }

    /// Locality: the generator weight.
    pub fn k(&self) -> usize {
        self.k
    }

    /// `D_L`, the number of generators acting on each qudit (the maximum
    /// when the degree is irregular).
    pub fn left_degree(&self) -> usize {
        self.left_degree
    }

    pub fn is_degree_regular(&self) -> bool {
        self.regular_degree
    }

    pub fn is_locality_uniform(&self) -> bool {
        self.uniform_locality
    }

    pub fn rank(&self) -> usize {
        self.row_space.rank()
    }

    /// Number of encoded qudits, `n - rank`.
    pub fn logical_qudits(&self) -> usize {
        self.n - self.rank()
    }

    pub fn generators(&self) -> &[PauliOp] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &PauliOp {
        &self.generators[i]
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn css(&self) -> Option<&CssSplit> {
        self.css.as_ref()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn meta(&self) -> &serde_json::Map<String, serde_json::Value> {
        &self.meta
    }

    pub fn set_meta(&mut self, key: &str, value: serde_json::Value) {
        self.meta.insert(key.to_string(), value);
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.set_meta("name", serde_json::Value::String(name.to_string()));
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.meta.get("name").and_then(|v| v.as_str())
    }

    pub fn symplectic_matrix(&self) -> Vec<Vec<u32>> {
        self.generators.iter().map(PauliOp::symplectic_vector).collect()
    }

    pub fn row_space(&self) -> &RowSpace {
        &self.row_space
    }

    pub(crate) fn local_checks(&self, q: usize) -> &[LocalCheck] {
        &self.local[q]
    }

    fn check_shape(&self, e: &PauliOp) -> Result<(), CodeError> {
        if e.d() != self.d {
            return Err(PauliError::DimensionMismatch { left: self.d, right: e.d() }.into());
        }
        if e.n() != self.n {
            return Err(PauliError::SizeMismatch { left: self.n, right: e.n() }.into());
        }
        Ok(())
    }

    pub fn syndrome(&self, e: &PauliOp) -> Result<Syndrome, CodeError> {
        self.check_shape(e)?;
        let mut values = vec![0u32; self.m()];
        for q in e.support() {
            let s = e.symbol(q);
            for lc in &self.local[q] {
                let g = lc.generator as usize;
                values[g] = field::add(values[g], lc.symbol.commutator(s, self.d), self.d);
            }
        }
        Ok(Syndrome { d: self.d, values })
    }

    /// Number of generators that do not commute with `e`.
    pub fn penalty(&self, e: &PauliOp) -> Result<usize, CodeError> {
        Ok(self.syndrome(e)?.weight())
    }

    /// Violation fraction `penalty / m`.
    pub fn violation_fraction(&self, e: &PauliOp) -> Result<f64, CodeError> {
        Ok(self.penalty(e)? as f64 / self.m() as f64)
    }

    /// Solves `c · M = symplectic(e)` and compares the phase of `Π g_i^{c_i}`
    /// with that of `e`.
    pub fn group_contains(&self, e: &PauliOp) -> Result<Membership, CodeError> {
        self.check_shape(e)?;
        let Some(c) = self.row_space.solve(&e.symplectic_vector()) else {
            return Ok(Membership::NotInSpan);
        };
        let product = group_phase(&self.generators, &c, self.n, self.d);
        if product == scalar_class(e) {
            Ok(Membership::Member(c))
        } else {
            Ok(Membership::PhaseMismatch(c))
        }
    }

    /// Membership of the symplectic vector alone.
    pub fn span_contains(&self, e: &PauliOp) -> bool {
        self.row_space.contains(&e.symplectic_vector())
    }

    /// `true` when `e` commutes with every generator.
    pub fn in_centralizer(&self, e: &PauliOp) -> Result<bool, CodeError> {
        Ok(self.syndrome(e)?.is_zero())
    }

    /// Product `Π g_i^{c_i}` of generators, multiplied in index order.
    pub fn group_element(&self, coefficients: &[u32]) -> PauliOp {
        let mut acc = PauliOp::identity(self.n, self.d);
        for (g, &c) in self.generators.iter().zip(coefficients) {
            if c % self.d != 0 {
                acc = acc.multiply(&g.pow(c % self.d)).expect("same shape");
            }
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": CODE_SCHEMA,
            "d": self.d,
            "n": self.n,
            "k": self.k,
            "generators": self.generators,
            "meta": self.meta,
        })
    }

    pub fn from_json(value: &serde_json::Value, options: BuildOptions) -> Result<Self, CodeError> {
        let file: CodeFile = serde_json::from_value(value.clone()).map_err(|e| CodeError::Format(e.to_string()))?;
        if let Some(schema) = &file.schema {
            if schema != CODE_SCHEMA {
                return Err(CodeError::Format(format!("unsupported schema {schema:?}")));
            }
        }
        let mut code = StabilizerCode::with_options(file.generators, options)?;
        if code.d != file.d || code.n != file.n {
            return Err(CodeError::Format(format!(
                "header says d={}, n={} but generators have d={}, n={}",
                file.d, file.n, code.d, code.n
            )));
        }
        if let Some(k) = file.k {
            if k != code.k {
                return Err(CodeError::Format(format!("header says k={k} but generators have k={}", code.k)));
            }
        }
        code.meta = file.meta;
        Ok(code)
    }
}

pub const CODE_SCHEMA: &str = "qltc.code/1";

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeFile {
    #[serde(default)]
    schema: Option<String>,
    d: u32,
    n: usize,
    #[serde(default)]
    k: Option<usize>,
    generators: Vec<PauliOp>,
    #[serde(default)]
    meta: serde_json::Map<String, serde_json::Value>,
}

/// Scalar class of a word: its `Z_4` power of `i` for qubits (Hermitian
/// reading), its `Z_d` phase otherwise.
pub(crate) fn scalar_class(e: &PauliOp) -> u32 {
    if e.d() == 2 {
        (2 * e.phase() + y_count(e)) % 4
    } else {
        e.phase()
    }
}

fn y_count(e: &PauliOp) -> u32 {
    e.x().iter().zip(e.z()).filter(|(&a, &b)| a == 1 && b == 1).count() as u32 % 4
}

/// Scalar class of `Π g_i^{c_i}` in the same convention as [`scalar_class`].
fn group_phase(generators: &[PauliOp], c: &[u32], n: usize, d: u32) -> u32 {
    let mut acc = PauliOp::identity(n, d);
    let mut y_total = 0u32;
    for (g, &ci) in generators.iter().zip(c) {
        let ci = ci % d;
        if ci != 0 {
            acc = acc.multiply(&g.pow(ci)).expect("same shape");
            y_total += y_count(g) * ci;
        }
    }
    if d == 2 {
        (2 * acc.phase() + y_total) % 4
    } else {
        acc.phase()
    }
}

fn css_split(generators: &[PauliOp]) -> Option<CssSplit> {
    let mut x_generators = Vec::new();
    let mut z_generators = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        if g.z().iter().all(|&v| v == 0) {
            x_generators.push(i);
        } else if g.x().iter().all(|&v| v == 0) {
            z_generators.push(i);
        } else {
            return None;
        }
    }
    Some(CssSplit {
        x_generators,
        z_generators,
    })
}
