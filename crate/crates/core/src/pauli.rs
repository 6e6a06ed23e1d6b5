//! The generalized n-qudit Pauli group over a prime dimension `d`, in
//! symplectic form with an explicit phase exponent.
//!
//! An operator is stored as `ω^phase · ⊗_i X^{x_i} Z^{z_i}` with
//! `ω = e^{2πi/d}`, `X|j⟩ = |j+1⟩` and `Z|j⟩ = ω^j |j⟩`. On every site the
//! X-part is written to the left of the Z-part. From `Z X = ω X Z` the
//! product rule is
//!
//! ```text
//! (ω^a X^x Z^z)(ω^b X^x' Z^z') = ω^{a + b + Σ z_i x'_i} X^{x+x'} Z^{z+z'}
//! ```
//!
//! For qubits, `Y` is represented by the word `XZ` (which equals `-iY`); the
//! factor `i` is never materialised. Weight, commutation and stabilizer
//! membership do not depend on that choice.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliError {
    #[error("qudit dimension {0} is not prime")]
    NotPrime(u32),
    #[error("x and z parts have different lengths ({x} vs {z})")]
    LengthMismatch { x: usize, z: usize },
    #[error("entry {value} out of range for dimension {d}")]
    EntryOutOfRange { value: u32, d: u32 },
    #[error("operator size mismatch: {left} vs {right} qudits")]
    SizeMismatch { left: usize, right: usize },
    #[error("dimension mismatch: d={left} vs d={right}")]
    DimensionMismatch { left: u32, right: u32 },
    #[error("qudit index {index} out of range for {n} qudits")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("declared n={declared} but vectors have length {actual}")]
    DeclaredSize { declared: usize, actual: usize },
    #[error("unknown Pauli letter {0:?}")]
    BadLetter(char),
}

/// A single-site Pauli `X^x Z^z` without phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol {
    pub x: u32,
    pub z: u32,
}

impl Symbol {
    pub const IDENTITY: Symbol = Symbol { x: 0, z: 0 };

    pub fn new(x: u32, z: u32) -> Self {
        Symbol { x, z }
    }

    pub fn is_identity(self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Symplectic product of two single-site symbols.
    pub fn commutator(self, other: Symbol, d: u32) -> u32 {
        field::sub(field::mul(self.x, other.z, d), field::mul(self.z, other.x, d), d)
    }

    /// All `d² - 1` non-identity symbols, ordered lexicographically by `(x, z)`.
    pub fn non_identity(d: u32) -> Vec<Symbol> {
        (1..d * d).map(|s| Symbol::new(s / d, s % d)).collect()
    }

    /// Index in `1..d²` used by [`Symbol::non_identity`].
    pub fn index(self, d: u32) -> u32 {
        self.x * d + self.z
    }
}

#[derive(Serialize, Deserialize)]
struct PauliRepr {
    d: u32,
    n: usize,
    x: Vec<u32>,
    z: Vec<u32>,
    phase: u32,
}

/// An element of the n-qudit Pauli group `Π_d^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PauliRepr", into = "PauliRepr")]
pub struct PauliOp {
    d: u32,
    x: Vec<u32>,
    z: Vec<u32>,
    phase: u32,
}

impl TryFrom<PauliRepr> for PauliOp {
    type Error = PauliError;

    fn try_from(r: PauliRepr) -> Result<Self, Self::Error> {
        if let Some(actual) = [r.x.len(), r.z.len()].into_iter().find(|&l| l != r.n) {
            return Err(PauliError::DeclaredSize { declared: r.n, actual });
        }
        PauliOp::new(r.d, r.x, r.z, r.phase)
    }
}

impl From<PauliOp> for PauliRepr {
    fn from(p: PauliOp) -> Self {
        PauliRepr {
            d: p.d,
            n: p.x.len(),
            x: p.x,
            z: p.z,
            phase: p.phase,
        }
    }
}

impl PauliOp {
    pub fn new(d: u32, x: Vec<u32>, z: Vec<u32>, phase: u32) -> Result<Self, PauliError> {
        if !field::is_prime(d) {
            return Err(PauliError::NotPrime(d));
        }
        if x.len() != z.len() {
            return Err(PauliError::LengthMismatch { x: x.len(), z: z.len() });
        }
        if let Some(&value) = x.iter().chain(&z).chain(std::iter::once(&phase)).find(|&&v| v >= d) {
            return Err(PauliError::EntryOutOfRange { value, d });
        }
        Ok(PauliOp { d, x, z, phase })
    }

    pub fn identity(n: usize, d: u32) -> Self {
        assert!(field::is_prime(d), "qudit dimension must be prime");
        PauliOp {
            d,
            x: vec![0; n],
            z: vec![0; n],
            phase: 0,
        }
    }

    /// Builds a phase-0 operator from `(qudit, symbol)` pairs. Later pairs on
    /// the same qudit overwrite earlier ones.
    pub fn from_sites(n: usize, d: u32, sites: &[(usize, Symbol)]) -> Result<Self, PauliError> {
        let mut p = PauliOp::identity(n, d);
        for &(q, s) in sites {
            if q >= n {
                return Err(PauliError::IndexOutOfRange { index: q, n });
            }
            if s.x >= d || s.z >= d {
                return Err(PauliError::EntryOutOfRange { value: s.x.max(s.z), d });
            }
            p.x[q] = s.x;
            p.z[q] = s.z;
        }
        Ok(p)
    }

    /// Parses a qubit string such as `"XZIY"`. `Y` is stored as the word `XZ`.
    pub fn from_qubit_str(s: &str) -> Result<Self, PauliError> {
        let mut x = Vec::new();
        let mut z = Vec::new();
        for c in s.chars() {
            let (a, b) = match c {
                'I' | '_' => (0, 0),
                'X' => (1, 0),
                'Z' => (0, 1),
                'Y' => (1, 1),
                other => return Err(PauliError::BadLetter(other)),
            };
            x.push(a);
            z.push(b);
        }
        PauliOp::new(2, x, z, 0)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn x(&self) -> &[u32] {
        &self.x
    }

    pub fn z(&self) -> &[u32] {
        &self.z
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u32) -> Self {
        self.phase = phase % self.d;
        self
    }

    pub fn symbol(&self, q: usize) -> Symbol {
        Symbol::new(self.x[q], self.z[q])
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(a, b)| **a != 0 || **b != 0).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.x[i] != 0 || self.z[i] != 0).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.weight() == 0
    }

    /// True when the operator is a scalar multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.weight() == 0
    }

    /// Concatenated `(x | z)` vector of length `2n`.
    pub fn symplectic_vector(&self) -> Vec<u32> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.z);
        v
    }

    fn check_compatible(&self, other: &PauliOp) -> Result<(), PauliError> {
        if self.d != other.d {
            return Err(PauliError::DimensionMismatch {
                left: self.d,
                right: other.d,
            });
        }
        if self.n() != other.n() {
            return Err(PauliError::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// Operator product `self · other`.
    pub fn multiply(&self, other: &PauliOp) -> Result<PauliOp, PauliError> {
        self.check_compatible(other)?;
        let d = self.d;
        let mut phase = field::add(self.phase, other.phase, d);
        let mut x = Vec::with_capacity(self.n());
        let mut z = Vec::with_capacity(self.n());
        for i in 0..self.n() {
            phase = field::add(phase, field::mul(self.z[i], other.x[i], d), d);
            x.push(field::add(self.x[i], other.x[i], d));
            z.push(field::add(self.z[i], other.z[i], d));
        }
        Ok(PauliOp { d, x, z, phase })
    }

    /// Symplectic product `Σ_i (a.x_i b.z_i - a.z_i b.x_i) mod d`.
    ///
    /// Zero exactly when the operators commute. With the phase convention of
    /// this module, `a·b = ω^{-s} b·a` for `s = a.symplectic_product(b)`.
    pub fn symplectic_product(&self, other: &PauliOp) -> Result<u32, PauliError> {
        self.check_compatible(other)?;
        Ok(self.symplectic_product_unchecked(other))
    }

    pub(crate) fn symplectic_product_unchecked(&self, other: &PauliOp) -> u32 {
        let d = self.d;
        let mut s = 0u32;
        for i in 0..self.n() {
            s = field::add(s, field::mul(self.x[i], other.z[i], d), d);
            s = field::sub(s, field::mul(self.z[i], other.x[i], d), d);
        }
        s
    }

    pub fn commutes_with(&self, other: &PauliOp) -> Result<bool, PauliError> {
        Ok(self.symplectic_product(other)? == 0)
    }

    pub fn inverse(&self) -> PauliOp {
        let d = self.d;
        let mut phase = field::neg(self.phase, d);
        for i in 0..self.n() {
            phase = field::add(phase, field::mul(self.x[i], self.z[i], d), d);
        }
        PauliOp {
            d,
            x: self.x.iter().map(|&v| field::neg(v, d)).collect(),
            z: self.z.iter().map(|&v| field::neg(v, d)).collect(),
            phase,
        }
    }

    pub fn pow(&self, k: u32) -> PauliOp {
        let mut acc = PauliOp::identity(self.n(), self.d);
        for _ in 0..k {
            acc = acc.multiply(self).expect("same shape");
        }
        acc
    }

    /// Zeroes every site outside `sites`. The phase is carried over whole.
    pub fn restrict(&self, sites: &[usize]) -> Result<PauliOp, PauliError> {
        let n = self.n();
        let mut keep = vec![false; n];
        for &q in sites {
            if q >= n {
                return Err(PauliError::IndexOutOfRange { index: q, n });
            }
            keep[q] = true;
        }
        let mut out = self.clone();
        for q in 0..n {
            if !keep[q] {
                out.x[q] = 0;
                out.z[q] = 0;
            }
        }
        Ok(out)
    }

    /// Single-site restriction `E|_q` as a symbol.
    pub fn restrict_site(&self, q: usize) -> Symbol {
        self.symbol(q)
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase != 0 {
            write!(f, "w^{}·", self.phase)?;
        }
        if self.d == 2 {
            for i in 0..self.n() {
                let c = match (self.x[i], self.z[i]) {
                    (0, 0) => 'I',
                    (1, 0) => 'X',
                    (0, 1) => 'Z',
                    _ => 'Y',
                };
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self
                .support()
                .iter()
                .map(|&q| format!("X{}Z{}@{}", self.x[q], self.z[q], q))
                .collect();
            if parts.is_empty() {
                write!(f, "I")
            } else {
                write!(f, "{}", parts.join(" "))
            }
        }
    }
}

/// Binomial coefficient as `u128`; saturates instead of overflowing.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Number of phase-0 Paulis of weight exactly `w`: `C(n, w) (d² - 1)^w`.
pub fn count_at_weight(n: usize, d: u32, w: usize) -> u128 {
    let per_site = (d as u128) * (d as u128) - 1;
    let mut acc = binomial(n, w);
    for _ in 0..w {
        acc = acc.saturating_mul(per_site);
    }
    acc
}

/// Streams every phase-0 Pauli of weight `1..=w_max` exactly once, ordered by
/// weight, then support (lexicographic), then per-site symbol.
pub fn enumerate_by_weight(n: usize, d: u32, w_max: usize) -> WeightEnumerator {
    assert!(w_max <= n, "w_max must not exceed n");
    WeightEnumerator::new(n, d, w_max)
}

#[derive(Debug, Clone)]
pub struct WeightEnumerator {
    n: usize,
    d: u32,
    w_max: usize,
    weight: usize,
    support: Vec<usize>,
    symbols: Vec<u32>,
    started: bool,
    done: bool,
}

/// Returned by [`CappedEnumerator`] when the candidate cap is reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("candidate budget of {cap} exhausted")]
pub struct BudgetExceeded {
    pub cap: u64,
}

impl WeightEnumerator {
    fn new(n: usize, d: u32, w_max: usize) -> Self {
        WeightEnumerator {
            n,
            d,
            w_max,
            weight: 1,
            support: vec![0],
            symbols: vec![1],
            started: false,
            done: w_max == 0 || n == 0,
        }
    }

    /// Wraps the stream so that it yields at most `cap` operators, then a
    /// single [`BudgetExceeded`] if more remained.
    pub fn capped(self, cap: u64) -> CappedEnumerator {
        CappedEnumerator {
            inner: self,
            cap,
            yielded: 0,
            signalled: false,
        }
    }

    fn current(&self) -> PauliOp {
        let mut p = PauliOp::identity(self.n, self.d);
        for (&q, &s) in self.support.iter().zip(&self.symbols) {
            p.x[q] = s / self.d;
            p.z[q] = s % self.d;
        }
        p
    }

    fn advance(&mut self) {
        let top = self.d * self.d;
        for i in (0..self.weight).rev() {
            if self.symbols[i] + 1 < top {
                self.symbols[i] += 1;
                for s in &mut self.symbols[i + 1..] {
                    *s = 1;
                }
                return;
            }
        }
        for s in &mut self.symbols {
            *s = 1;
        }
        if next_combination(&mut self.support, self.n) {
            return;
        }
        self.weight += 1;
        if self.weight > self.w_max {
            self.done = true;
            return;
        }
        self.support = (0..self.weight).collect();
        self.symbols = vec![1; self.weight];
    }
}

/// Advances `combo` (strictly increasing indices in `0..n`) to the next
/// combination in lexicographic order. Returns `false` when exhausted.
pub(crate) fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl Iterator for WeightEnumerator {
    type Item = PauliOp;

    fn next(&mut self) -> Option<PauliOp> {
        if self.done {
            return None;
        }
        if self.started {
            self.advance();
            if self.done {
                return None;
            }
        }
        self.started = true;
        Some(self.current())
    }
}

#[derive(Debug, Clone)]
pub struct CappedEnumerator {
    inner: WeightEnumerator,
    cap: u64,
    yielded: u64,
    signalled: bool,
}

impl Iterator for CappedEnumerator {
    type Item = Result<PauliOp, BudgetExceeded>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.signalled {
            return None;
        }
        if self.yielded == self.cap {
            return match self.inner.next() {
                Some(_) => {
                    self.signalled = true;
                    Some(Err(BudgetExceeded { cap: self.cap }))
                }
                None => None,
            };
        }
        let item = self.inner.next()?;
        self.yielded += 1;
        Some(Ok(item))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> PauliOp {
        PauliOp::from_qubit_str(s).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let p = q("XYZI").with_phase(1);
        let id = PauliOp::identity(4, 2);
        assert_eq!(id.multiply(&p).unwrap(), p);
        assert_eq!(p.multiply(&id).unwrap(), p);
    }

    #[test]
    fn xz_squared_is_minus_identity() {
        let xz = q("X").multiply(&q("Z")).unwrap();
        let sq = xz.multiply(&xz).unwrap();
        assert!(sq.is_scalar());
        assert_eq!(sq.phase(), 1);
    }

    #[test]
    fn qutrit_x_cubed_is_identity() {
        let x = PauliOp::new(3, vec![1], vec![0], 0).unwrap();
        let cube = x.multiply(&x).unwrap().multiply(&x).unwrap();
        assert!(cube.is_identity());
    }

    #[test]
    fn symplectic_examples() {
        assert_eq!(q("X").symplectic_product(&q("Z")).unwrap(), 1);
        let p = q("XYZ");
        assert_eq!(p.symplectic_product(&p).unwrap(), 0);
        assert_eq!(q("XII").symplectic_product(&q("IZZ")).unwrap(), 0);
        assert!(q("XX").commutes_with(&q("ZZ")).unwrap());
    }

    #[test]
    fn restrict_examples() {
        let p = q("XZ");
        assert_eq!(p.restrict(&[0]).unwrap(), q("XI"));
        assert!(p.restrict(&[]).unwrap().is_identity());
        let phased = q("IXZ").with_phase(1);
        assert_eq!(phased.restrict(&phased.support()).unwrap(), phased);
        assert!(matches!(p.restrict(&[5]), Err(PauliError::IndexOutOfRange { .. })));
    }

    #[test]
    fn mismatches_are_rejected() {
        assert!(matches!(q("X").multiply(&q("XX")), Err(PauliError::SizeMismatch { .. })));
        let qutrit = PauliOp::identity(1, 3);
        assert!(matches!(
            q("X").symplectic_product(&qutrit),
            Err(PauliError::DimensionMismatch { .. })
        ));
        assert_eq!(PauliOp::new(4, vec![0], vec![0], 0), Err(PauliError::NotPrime(4)));
        assert!(PauliOp::new(3, vec![3], vec![0], 0).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let p = PauliOp::new(5, vec![1, 3, 0], vec![2, 4, 1], 3).unwrap();
        assert!(p.multiply(&p.inverse()).unwrap().is_identity());
        assert!(p.inverse().multiply(&p).unwrap().is_identity());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_by_weight(2, 2, 1).count(), 6);
        assert_eq!(enumerate_by_weight(3, 3, 1).count(), 24);
        assert_eq!(enumerate_by_weight(4, 2, 0).count(), 0);
        let n = 4;
        let all: Vec<PauliOp> = enumerate_by_weight(n, 2, 3).collect();
        let expected: u128 = (1..=3).map(|w| count_at_weight(n, 2, w)).sum();
        assert_eq!(all.len() as u128, expected);
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.windows(2).all(|w| w[0].weight() <= w[1].weight()));
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let first: Vec<String> = enumerate_by_weight(2, 2, 2).take(7).map(|p| p.to_string()).collect();
        assert_eq!(first, vec!["ZI", "XI", "YI", "IZ", "IX", "IY", "ZZ"]);
    }

    #[test]
    fn capped_enumeration_signals() {
        let items: Vec<_> = enumerate_by_weight(3, 2, 1).capped(4).collect();
        assert_eq!(items.len(), 5);
        assert_eq!(items[4], Err(BudgetExceeded { cap: 4 }));
        let exact: Vec<_> = enumerate_by_weight(3, 2, 1).capped(9).collect();
        assert!(exact.iter().all(|r| r.is_ok()));
        assert_eq!(exact.len(), 9);
    }

    #[test]
    fn json_shape() {
        let p = PauliOp::new(3, vec![1, 0], vec![2, 1], 2).unwrap();
        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(json, serde_json::json!({"d": 3, "n": 2, "x": [1, 0], "z": [2, 1], "phase": 2}));
        let back: PauliOp = serde_json::from_value(json).unwrap();
        assert_eq!(back, p);
        let bad = serde_json::json!({"d": 3, "n": 2, "x": [1, 0], "z": [5, 1], "phase": 0});
        assert!(serde_json::from_value::<PauliOp>(bad).is_err());
    }
}
