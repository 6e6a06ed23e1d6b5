//! Dense matrix oracle for small codes.
//!
//! Operators are materialised as `d^n × d^n` complex matrices with qudit 0
//! as the most significant digit of the basis index. Nothing here reuses the
//! symplectic machinery beyond reading the `x`, `z` and phase data of each
//! operator, so agreement between the two is a genuine cross-check.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::StabilizerCode;
use crate::pauli::{enumerate_by_weight, PauliOp, Symbol};
use crate::search::Budget;

pub type C64 = Complex<f64>;

/// Largest Hilbert-space dimension the oracle will materialise.
pub const DIMENSION_CAP: usize = 1024;
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DenseError {
    #[error("Hilbert space dimension {d}^{n} exceeds the dense cap of {cap}")]
    TooLarge { n: usize, d: u32, cap: usize },
    #[error("state has norm {0}, expected 1")]
    NotNormalized(f64),
    #[error("state has length {actual}, expected {expected}")]
    StateLength { expected: usize, actual: usize },
    #[error("operators act on different spaces")]
    Mismatch,
}

pub fn dimension(n: usize, d: u32) -> Result<usize, DenseError> {
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim.saturating_mul(d as usize);
        if dim > DIMENSION_CAP {
            return Err(DenseError::TooLarge { n, d, cap: DIMENSION_CAP });
        }
    }
    Ok(dim)
}

fn root_of_unity(d: u32, k: u64) -> C64 {
    let angle = 2.0 * std::f64::consts::PI * (k % d as u64) as f64 / d as f64;
    Complex::from_polar(1.0, angle)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub n: usize,
    pub d: u32,
    pub matrix: DMatrix<C64>,
}

impl DenseOperator {
    pub fn identity(n: usize, d: u32) -> Result<Self, DenseError> {
        let dim = dimension(n, d)?;
        Ok(DenseOperator {
            n,
            d,
            matrix: DMatrix::identity(dim, dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn mul(&self, other: &DenseOperator) -> Result<DenseOperator, DenseError> {
        if self.n != other.n || self.d != other.d {
            return Err(DenseError::Mismatch);
        }
        Ok(DenseOperator {
            n: self.n,
            d: self.d,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn scale(&self, c: C64) -> DenseOperator {
        DenseOperator {
            n: self.n,
            d: self.d,
            matrix: &self.matrix * c,
        }
    }

    /// Frobenius distance.
    pub fn distance(&self, other: &DenseOperator) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    pub fn unitarity_residual(&self) -> f64 {
        let dim = self.dim();
        (self.matrix.adjoint() * &self.matrix - DMatrix::<C64>::identity(dim, dim)).norm()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm()
    }

    pub fn projector_residual(&self) -> f64 {
        (&self.matrix * &self.matrix - &self.matrix).norm().max(self.hermiticity_residual())
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_residual() <= TOLERANCE
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual() <= TOLERANCE
    }

    pub fn is_projector(&self) -> bool {
        self.projector_residual() <= TOLERANCE
    }
}

/// The literal operator `ω^phase ⊗ X^{x_i} Z^{z_i}`:
/// `|j⟩ ↦ ω^{phase + Σ z_i j_i} |j + x⟩`.
pub fn densify(p: &PauliOp) -> Result<DenseOperator, DenseError> {
    let (n, d) = (p.n(), p.d());
    let dim = dimension(n, d)?;
    let mut matrix = DMatrix::<C64>::zeros(dim, dim);
    let mut digits = vec![0u32; n];
    for col in 0..dim {
        let mut rest = col;
        for i in (0..n).rev() {
            digits[i] = (rest % d as usize) as u32;
            rest /= d as usize;
        }
        let mut exponent = p.phase() as u64;
        let mut row = 0usize;
        for i in 0..n {
            exponent += (p.z()[i] * digits[i]) as u64;
            row = row * d as usize + ((digits[i] + p.x()[i]) % d) as usize;
        }
        matrix[(row, col)] = root_of_unity(d, exponent);
    }
    Ok(DenseOperator { n, d, matrix })
}

/// The operator a generator stands for. For qubits a stored word
/// `(-1)^φ w` is read as `i^y (-1)^φ w` with `y` the number of sites
/// carrying both `X` and `Z`, so the letter `Y` is the Hermitian Pauli `Y`.
/// For odd `d` this is [`densify`].
pub fn densify_observable(p: &PauliOp) -> Result<DenseOperator, DenseError> {
    let op = densify(p)?;
    if p.d() != 2 {
        return Ok(op);
    }
    let y = (0..p.n()).filter(|&i| p.x()[i] == 1 && p.z()[i] == 1).count();
    let i_pow = [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0), Complex::new(-1.0, 0.0), Complex::new(0.0, -1.0)];
    Ok(op.scale(i_pow[y % 4]))
}

/// `Π_g = I - (1/d) Σ_{j<d} g^j`: the projector off the `+1` eigenspace.
pub fn generator_projector(g: &PauliOp) -> Result<DenseOperator, DenseError> {
    let op = densify_observable(g)?;
    let dim = op.dim();
    let mut power = DMatrix::<C64>::identity(dim, dim);
    let mut average = DMatrix::<C64>::zeros(dim, dim);
    for _ in 0..g.d() {
        average += &power;
        power = &op.matrix * power;
    }
    let matrix = DMatrix::<C64>::identity(dim, dim) - average / Complex::new(g.d() as f64, 0.0);
    Ok(DenseOperator { n: g.n(), d: g.d(), matrix })
}

/// The projectors `Π_g`, their sum `H`, and an orthonormal basis of the
/// joint `+1` eigenspace.
#[derive(Debug, Clone)]
pub struct DenseCode {
    pub n: usize,
    pub d: u32,
    pub projectors: Vec<DenseOperator>,
    pub hamiltonian: DMatrix<C64>,
    /// Columns are an orthonormal basis of the code space.
    pub basis: DMatrix<C64>,
    pub eigenvalues: Vec<f64>,
}

impl DenseCode {
    pub fn new(code: &StabilizerCode) -> Result<Self, DenseError> {
        Self::from_generators(code.n(), code.d(), code.generators())
    }

    /// No validation: generators that fail to commute give a Hamiltonian
    /// without a zero eigenspace.
    pub fn from_generators(n: usize, d: u32, generators: &[PauliOp]) -> Result<Self, DenseError> {
        let dim = dimension(n, d)?;
        let projectors = generators
            .iter()
            .map(generator_projector)
            .collect::<Result<Vec<_>, _>>()?;
        let mut hamiltonian = DMatrix::<C64>::zeros(dim, dim);
        for p in &projectors {
            hamiltonian += &p.matrix;
        }
        let eig = SymmetricEigen::new(hamiltonian.clone());
        let keep: Vec<usize> = (0..dim).filter(|&i| eig.eigenvalues[i].abs() < TOLERANCE).collect();
        let mut basis = DMatrix::<C64>::zeros(dim, keep.len());
        for (j, &i) in keep.iter().enumerate() {
            basis.set_column(j, &eig.eigenvectors.column(i));
        }
        let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        eigenvalues.sort_by(f64::total_cmp);
        Ok(DenseCode {
            n,
            d,
            projectors,
            hamiltonian,
            basis,
            eigenvalues,
        })
    }

    pub fn code_dimension(&self) -> usize {
        self.basis.ncols()
    }

    pub fn codespace_projector(&self) -> DMatrix<C64> {
        &self.basis * self.basis.adjoint()
    }

    /// `(1/m) ⟨ψ|H|ψ⟩`.
    pub fn mean_energy(&self, state: &DVector<C64>) -> Result<f64, DenseError> {
        if state.len() != self.hamiltonian.nrows() {
            return Err(DenseError::StateLength {
                expected: self.hamiltonian.nrows(),
                actual: state.len(),
            });
        }
        let norm = state.norm();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(DenseError::NotNormalized(norm));
        }
        let e = state.adjoint() * &self.hamiltonian * state;
        Ok(e[(0, 0)].re / self.projectors.len() as f64)
    }

    /// Squared norm of the projection of `state` onto the code space.
    pub fn code_overlap(&self, state: &DVector<C64>) -> f64 {
        (self.basis.adjoint() * state).norm_squared()
    }
}

/// Orthonormal code-space basis.
pub fn codespace_basis(code: &StabilizerCode) -> Result<DMatrix<C64>, DenseError> {
    Ok(DenseCode::new(code)?.basis)
}

pub fn mean_energy(state: &DVector<C64>, code: &StabilizerCode) -> Result<f64, DenseError> {
    DenseCode::new(code)?.mean_energy(state)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectabilityViolation {
    pub error: PauliOp,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectabilityReport {
    pub rho: usize,
    pub checked: usize,
    pub max_residual: f64,
    /// `|γ_E| = 1` exactly when `E` lies in the span of the generators.
    pub membership_agreement: bool,
    pub violations: Vec<DetectabilityViolation>,
    pub passes: bool,
}

/// Checks `Π_C E Π_C = γ_E Π_C` for every Pauli with `wt(E) ≤ rho - 1`.
pub fn verify_detectability(code: &StabilizerCode, rho: usize) -> Result<DetectabilityReport, DenseError> {
    let dense = DenseCode::new(code)?;
    Ok(detectability(code, &dense, rho))
}

fn detectability(code: &StabilizerCode, dense: &DenseCode, rho: usize) -> DetectabilityReport {
    let b = &dense.basis;
    let dk = b.ncols();
    let mut report = DetectabilityReport {
        rho,
        checked: 0,
        max_residual: 0.0,
        membership_agreement: true,
        violations: Vec::new(),
        passes: true,
    };
    if rho == 0 || dk == 0 {
        return report;
    }
    for e in enumerate_by_weight(code.n(), code.d(), rho - 1) {
        let m = b.adjoint() * densify(&e).expect("within cap").matrix * b;
        let gamma = m.trace() / Complex::new(dk as f64, 0.0);
        let residual = (&m - DMatrix::<C64>::identity(dk, dk) * gamma).norm();
        report.checked += 1;
        report.max_residual = report.max_residual.max(residual);
        let unit = (gamma.norm() - 1.0).abs() < 1e-6;
        let zero = gamma.norm() < 1e-6;
        let member = code.span_contains(&e);
        if !(unit && member || zero && !member) {
            report.membership_agreement = false;
        }
        if residual > TOLERANCE && report.violations.len() < 16 {
            report.violations.push(DetectabilityViolation { error: e, residual });
        }
    }
    report.passes = report.max_residual <= TOLERANCE && report.membership_agreement;
    report
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub samples: usize,
    pub seed: u64,
    /// `max |⟨Eη|H|Eη⟩/m - penalty(E)/m|`.
    pub energy_residual: f64,
    /// Largest energy difference between two displaced codewords.
    pub codeword_independence_residual: f64,
    pub displacement_checked: usize,
    pub displacement_agreements: usize,
    pub displacement_cap: usize,
    pub mixture_samples: usize,
    pub mixture_residual: f64,
    pub passes: bool,
}

fn random_pauli(n: usize, d: u32, rng: &mut ChaCha8Rng) -> PauliOp {
    let w = rng.random_range(1..=n);
    let mut qudits: Vec<usize> = (0..n).collect();
    for i in 0..w {
        let j = rng.random_range(i..n);
        qudits.swap(i, j);
    }
    let symbols = Symbol::non_identity(d);
    let sites: Vec<(usize, Symbol)> = qudits[..w]
        .iter()
        .map(|&q| (q, symbols[rng.random_range(0..symbols.len())]))
        .collect();
    PauliOp::from_sites(n, d, &sites).expect("in range")
}

fn random_codeword(basis: &DMatrix<C64>, rng: &mut ChaCha8Rng) -> DVector<C64> {
    let coeffs = DVector::<C64>::from_fn(basis.ncols(), |_, _| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let v = basis * coeffs;
    let norm = v.norm();
    v / Complex::new(norm, 0.0)
}

/// Smallest `w ≤ cap` such that some Pauli of weight `w` moves `state`
/// onto the code space with non-zero overlap.
fn displacement_distance(dense: &DenseCode, state: &DVector<C64>, cap: usize) -> Option<usize> {
    if dense.code_overlap(state) > TOLERANCE {
        return Some(0);
    }
    let n = dense.n;
    for e in enumerate_by_weight(n, dense.d, cap) {
        let moved = densify(&e).expect("within cap").matrix * state;
        if dense.code_overlap(&moved) > TOLERANCE {
            return Some(e.weight());
        }
    }
    None
}

/// Energy of displaced codewords against penalties, distance from the code
/// against weight modulo the centralizer, and energy of superpositions of
/// displaced codewords against the weighted penalty average.
pub fn verify_sltc_qltc_equivalence(code: &StabilizerCode, samples: usize, seed: u64) -> Result<EquivalenceReport, DenseError> {
    let dense = DenseCode::new(code)?;
    Ok(equivalence(code, &dense, samples, seed))
}

fn equivalence(code: &StabilizerCode, dense: &DenseCode, samples: usize, seed: u64) -> EquivalenceReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, d, m) = (code.n(), code.d(), code.m() as f64);
    let cap = 3.min(n);
    let mut report = EquivalenceReport {
        samples,
        seed,
        energy_residual: 0.0,
        codeword_independence_residual: 0.0,
        displacement_checked: 0,
        displacement_agreements: 0,
        displacement_cap: cap,
        mixture_samples: samples,
        mixture_residual: 0.0,
        passes: true,
    };
    if dense.code_dimension() == 0 {
        report.passes = false;
        return report;
    }
    let eta = dense.basis.column(0).into_owned();
    for _ in 0..samples {
        let e = random_pauli(n, d, &mut rng);
        let op = densify(&e).expect("within cap").matrix;
        let expected = code.penalty(&e).expect("shape") as f64 / m;
        let displaced = &op * &eta;
        let energy = dense.mean_energy(&displaced).expect("unitary image");
        report.energy_residual = report.energy_residual.max((energy - expected).abs());
        let other = &op * random_codeword(&dense.basis, &mut rng);
        let energy2 = dense.mean_energy(&other).expect("unitary image");
        report.codeword_independence_residual = report.codeword_independence_residual.max((energy - energy2).abs());

        let cz = code.wt_mod_centralizer(&e, Budget::default()).expect("shape");
        if let Some(w) = cz.bound.value().filter(|&w| w <= cap) {
            report.displacement_checked += 1;
            let found = displacement_distance(dense, &displaced, cap);
            if found == Some(w) {
                report.displacement_agreements += 1;
            }
        }

        let f = random_pauli(n, d, &mut rng);
        let a = rng.random_range(0.05..0.95f64);
        let phase = Complex::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        let second = densify(&f).expect("within cap").matrix * random_codeword(&dense.basis, &mut rng);
        let mixed = &displaced * Complex::new(a.sqrt(), 0.0) + second * (phase * (1.0 - a).sqrt());
        let sf = code.syndrome(&f).expect("shape");
        let se = code.syndrome(&e).expect("shape");
        let norm = mixed.norm();
        if norm < 1e-6 {
            continue;
        }
        let mixed = mixed / Complex::new(norm, 0.0);
        let pf = sf.weight() as f64 / m;
        let target = if se == sf {
            expected
        } else {
            a * expected + (1.0 - a) * pf
        };
        let got = dense.mean_energy(&mixed).expect("normalized");
        report.mixture_residual = report.mixture_residual.max((got - target).abs());
    }
    report.passes = report.energy_residual <= TOLERANCE
        && report.codeword_independence_residual <= TOLERANCE
        && report.mixture_residual <= TOLERANCE
        && report.displacement_agreements == report.displacement_checked;
    report
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseReport {
    pub n: usize,
    pub d: u32,
    pub hilbert_dimension: usize,
    pub code_dimension: usize,
    pub expected_code_dimension: usize,
    pub max_projector_residual: f64,
    pub min_eigenvalue: f64,
    pub detectability: DetectabilityReport,
    pub equivalence: EquivalenceReport,
    pub passes: bool,
}

/// Every dense check, with detectability at `rho`.
pub fn verify_code(code: &StabilizerCode, rho: usize, samples: usize, seed: u64) -> Result<DenseReport, DenseError> {
    let dense = DenseCode::new(code)?;
    let expected = (code.d() as usize).pow((code.n() - code.rank()) as u32);
    let max_projector_residual = dense.projectors.iter().map(|p| p.projector_residual()).fold(0.0, f64::max);
    let detect = detectability(code, &dense, rho);
    let equiv = equivalence(code, &dense, samples, seed);
    let min_eigenvalue = dense.eigenvalues.first().copied().unwrap_or(0.0);
    let passes = dense.code_dimension() == expected
        && max_projector_residual <= TOLERANCE
        && min_eigenvalue > -TOLERANCE
        && detect.passes
        && equiv.passes;
    Ok(DenseReport {
        n: code.n(),
        d: code.d(),
        hilbert_dimension: dense.hamiltonian.nrows(),
        code_dimension: dense.code_dimension(),
        expected_code_dimension: expected,
        max_projector_residual,
        min_eigenvalue,
        detectability: detect,
        equivalence: equiv,
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn c(re: f64, im: f64) -> C64 {
        Complex::new(re, im)
    }

    #[test]
    fn single_qudit_matrices() {
        let x = densify(&PauliOp::from_qubit_str("X").unwrap()).unwrap();
        assert_eq!(x.matrix, DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]));
        let z3 = densify(&PauliOp::new(3, vec![0], vec![1], 0).unwrap()).unwrap();
        let w = root_of_unity(3, 1);
        let expected = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1., 0.), w, w * w]));
        assert!(z3.distance(&DenseOperator { n: 1, d: 3, matrix: expected }) < 1e-12);
        let y = densify_observable(&PauliOp::from_qubit_str("Y").unwrap()).unwrap();
        assert!(y.is_hermitian() && y.is_unitary());
    }

    #[test]
    fn xz_squared_is_minus_identity() {
        let x = PauliOp::from_qubit_str("X").unwrap();
        let z = PauliOp::from_qubit_str("Z").unwrap();
        let xz = x.multiply(&z).unwrap();
        let sq = xz.multiply(&xz).unwrap();
        assert_eq!(sq.phase(), 1);
        let dense = densify(&xz).unwrap().mul(&densify(&xz).unwrap()).unwrap();
        let minus = DenseOperator::identity(1, 2).unwrap().scale(c(-1., 0.));
        assert!(dense.distance(&minus) < 1e-12);
    }

    #[test]
    fn cap_refuses_large_spaces() {
        let code = zoo::toric_code(4).unwrap();
        assert!(matches!(DenseCode::new(&code), Err(DenseError::TooLarge { .. })));
    }

    #[test]
    fn single_z_code_uniform_superposition() {
        let dense = DenseCode::from_generators(1, 2, &[PauliOp::from_qubit_str("Z").unwrap()]).unwrap();
        assert_eq!(dense.code_dimension(), 1);
        let plus = DVector::from_vec(vec![c(1. / 2f64.sqrt(), 0.), c(1. / 2f64.sqrt(), 0.)]);
        assert!((dense.mean_energy(&plus).unwrap() - 0.5).abs() < 1e-12);
        let unnormalized = DVector::from_vec(vec![c(1., 0.), c(1., 0.)]);
        assert!(matches!(dense.mean_energy(&unnormalized), Err(DenseError::NotNormalized(_))));
    }

    #[test]
    fn steane_dense_checks() {
        let code = zoo::steane_code().unwrap();
        let report = verify_code(&code, 3, 20, 1).unwrap();
        assert_eq!(report.code_dimension, 2);
        assert!(report.passes, "{report:?}");
        assert!(report.equivalence.displacement_checked > 0);
    }

    #[test]
    fn generator_energy_is_zero() {
        let code = zoo::five_qubit_code().unwrap();
        let dense = DenseCode::new(&code).unwrap();
        let eta = dense.basis.column(0).into_owned();
        let g = densify(code.generator(1)).unwrap().matrix * eta;
        assert!(dense.mean_energy(&g).unwrap().abs() < 1e-12);
    }
}
