//! Minimum-weight searches: weight modulo the centralizer and the stabilizer
//! group, code distance, and succinctness.
//!
//! Two engines are used. The plain engine walks supports in lexicographic
//! order. The guided engine always branches on the qudits of the lowest
//! violated generator, so its cost depends on the locality rather than on
//! `n`. Both run level by level in weight. A level is started only if its
//! estimated candidate count still fits into the budget, which keeps every
//! answer independent of the number of worker threads.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{CodeError, StabilizerCode};
use crate::field;
use crate::pauli::{binomial, PauliOp, Symbol};

/// Cap on the number of candidates a search may examine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_candidates: u64,
}

impl Budget {
    pub const fn new(max_candidates: u64) -> Self {
        Budget { max_candidates }
    }

    pub const fn unlimited() -> Self {
        Budget {
            max_candidates: u64::MAX,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(100_000_000)
    }
}

/// A weight that is either known exactly or bracketed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "exactness", rename_all = "snake_case")]
pub enum WeightBound {
    Exact { value: usize },
    /// `lower ≤ w ≤ upper`; `upper` is absent when no candidate was found.
    Interval { lower: usize, upper: Option<usize> },
}

impl WeightBound {
    pub fn exactness(&self) -> Exactness {
        if self.is_exact() {
            Exactness::Exact
        } else {
            Exactness::Interval
        }
    }

    pub fn exact(value: usize) -> Self {
        WeightBound::Exact { value }
    }

    /// Collapses to `Exact` when the bounds meet.
    pub fn interval(lower: usize, upper: Option<usize>) -> Self {
        match upper {
            Some(u) if u <= lower => WeightBound::Exact { value: u },
            _ => WeightBound::Interval { lower, upper },
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, WeightBound::Exact { .. })
    }

    pub fn value(&self) -> Option<usize> {
        match *self {
            WeightBound::Exact { value } => Some(value),
            WeightBound::Interval { .. } => None,
        }
    }

    pub fn lower(&self) -> usize {
        match *self {
            WeightBound::Exact { value } => value,
            WeightBound::Interval { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> Option<usize> {
        match *self {
            WeightBound::Exact { value } => Some(value),
            WeightBound::Interval { upper, .. } => upper,
        }
    }

    /// Bound on `min(a, b)`.
    pub fn min(self, other: WeightBound) -> WeightBound {
        let lower = self.lower().min(other.lower());
        let upper = match (self.upper(), other.upper()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        WeightBound::interval(lower, upper)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSearch {
    pub bound: WeightBound,
    /// A minimum-weight (or best found) representative.
    pub witness: Option<PauliOp>,
    /// Estimated candidates charged against the budget.
    pub candidates: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMethod {
    /// X-type and Z-type logicals searched separately.
    CssSplit,
    Generic,
}

/// How a reported number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    Interval,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub bound: WeightBound,
    pub witness: Option<PauliOp>,
    pub candidates: u64,
    pub method: DistanceMethod,
    pub logical_qudits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "succinct", rename_all = "snake_case")]
pub enum Succinctness {
    Succinct,
    /// A non-identity group element of weight below `k`.
    NotSuccinct { witness: PauliOp },
    /// Every weight below `searched_below` was ruled out before the budget ran out.
    Unknown { searched_below: usize },
}

type Sites = Vec<(usize, Symbol)>;

fn sites_to_pauli(n: usize, d: u32, sites: &[(usize, Symbol)]) -> PauliOp {
    PauliOp::from_sites(n, d, sites).expect("sites in range")
}

/// Residual syndrome `target - syndrome(partial)` with a bitset of its
/// non-zero entries.
#[derive(Clone)]
struct State {
    d: u32,
    residual: Vec<u32>,
    nz: Vec<u64>,
    nnz: usize,
    sites: Sites,
}

impl State {
    fn new(target: &[u32], d: u32) -> Self {
        let mut st = State {
            d,
            residual: vec![0; target.len()],
            nz: vec![0; target.len().div_ceil(64)],
            nnz: 0,
            sites: Vec::new(),
        };
        for (g, &v) in target.iter().enumerate() {
            st.set(g, v);
        }
        st
    }

    #[inline]
    fn set(&mut self, g: usize, v: u32) {
        let was = self.residual[g] != 0;
        self.residual[g] = v;
        let now = v != 0;
        if was != now {
            self.nz[g / 64] ^= 1 << (g % 64);
            if now {
                self.nnz += 1;
            } else {
                self.nnz -= 1;
            }
        }
    }

    fn push(&mut self, code: &StabilizerCode, q: usize, s: Symbol) {
        for lc in code.local_checks(q) {
            let c = lc.symbol.commutator(s, self.d);
            if c != 0 {
                let g = lc.generator as usize;
                self.set(g, field::sub(self.residual[g], c, self.d));
            }
        }
        self.sites.push((q, s));
    }

    fn pop(&mut self, code: &StabilizerCode) {
        let (q, s) = self.sites.pop().expect("non-empty");
        for lc in code.local_checks(q) {
            let c = lc.symbol.commutator(s, self.d);
            if c != 0 {
                let g = lc.generator as usize;
                self.set(g, field::add(self.residual[g], c, self.d));
            }
        }
    }

    fn lowest_violated(&self) -> Option<usize> {
        self.nz
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn uses(&self, q: usize) -> bool {
        self.sites.iter().any(|&(p, _)| p == q)
    }
}

/// Runs `f(i)` for `i in 0..count` in parallel and returns the hit with the
/// smallest index. Branches above the best index so far are abandoned.
fn first_hit<T: Send>(count: usize, f: impl Fn(usize, &AtomicUsize) -> Option<T> + Sync) -> Option<T> {
    let earliest = AtomicUsize::new(usize::MAX);
    let results: Vec<Option<T>> = (0..count)
        .into_par_iter()
        .map(|i| {
            if earliest.load(Ordering::Relaxed) < i {
                return None;
            }
            let hit = f(i, &earliest);
            if hit.is_some() {
                earliest.fetch_min(i, Ordering::Relaxed);
            }
            hit
        })
        .collect();
    results.into_iter().flatten().next()
}

struct Guided<'a, A> {
    code: &'a StabilizerCode,
    alphabet: &'a [Symbol],
    max_degree: usize,
    /// Only qudits above this index may be added.
    floor: Option<usize>,
    accept: &'a A,
    branch: usize,
    earliest: &'a AtomicUsize,
}

impl<A: Fn(&State) -> bool + Sync> Guided<'_, A> {
    fn cancelled(&self) -> bool {
        self.earliest.load(Ordering::Relaxed) < self.branch
    }

    fn dfs(&self, st: &mut State, left: usize) -> Option<Sites> {
        if st.nnz == 0 {
            return (self.accept)(st).then(|| st.sites.clone());
        }
        if left == 0 || st.nnz > left * self.max_degree || self.cancelled() {
            return None;
        }
        let g = st.lowest_violated().expect("non-zero residual");
        for &q in self.code.graph().qudits_of(g) {
            if self.floor.is_some_and(|f| q <= f) || st.uses(q) {
                continue;
            }
            for &s in self.alphabet {
                st.push(self.code, q, s);
                let hit = self.dfs(st, left - 1);
                st.pop(self.code);
                if hit.is_some() {
                    return hit;
                }
            }
        }
        None
    }
}

struct Plain<'a, A> {
    code: &'a StabilizerCode,
    alphabet: &'a [Symbol],
    max_degree: usize,
    accept: &'a A,
    branch: usize,
    earliest: &'a AtomicUsize,
}

impl<A: Fn(&State) -> bool + Sync> Plain<'_, A> {
    fn dfs(&self, st: &mut State, left: usize, next: usize) -> Option<Sites> {
        if left == 0 {
            return (st.nnz == 0 && (self.accept)(st)).then(|| st.sites.clone());
        }
        if st.nnz > left * self.max_degree || self.earliest.load(Ordering::Relaxed) < self.branch {
            return None;
        }
        let n = self.code.n();
        for q in next..=n - left {
            for &s in self.alphabet {
                st.push(self.code, q, s);
                let hit = self.dfs(st, left - 1, q + 1);
                st.pop(self.code);
                if hit.is_some() {
                    return hit;
                }
            }
        }
        None
    }
}

fn full_alphabet(d: u32) -> Vec<Symbol> {
    Symbol::non_identity(d)
}

fn x_alphabet(d: u32) -> Vec<Symbol> {
    (1..d).map(|a| Symbol::new(a, 0)).collect()
}

fn z_alphabet(d: u32) -> Vec<Symbol> {
    (1..d).map(|b| Symbol::new(0, b)).collect()
}

fn pow_saturating(base: u128, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// Budget bookkeeping across weight levels.
struct Meter {
    cap: u64,
    spent: u64,
}

impl Meter {
    fn new(budget: Budget) -> Self {
        Meter {
            cap: budget.max_candidates,
            spent: 0,
        }
    }

    /// Charges a level; `false` when it does not fit.
    fn charge(&mut self, estimate: u128) -> bool {
        let total = (self.spent as u128).saturating_add(estimate);
        if total > self.cap as u128 {
            return false;
        }
        self.spent = total as u64;
        true
    }
}

impl StabilizerCode {
    fn max_generator_weight(&self) -> usize {
        self.graph().max_right_degree()
    }

    /// Minimum weight of a Pauli with the given syndrome, by guided search up
    /// to `max_weight`. Returns the witness and the weight levels ruled out.
    fn min_with_syndrome(
        &self,
        target: &[u32],
        alphabet: &[Symbol],
        max_weight: usize,
        meter: &mut Meter,
    ) -> (Option<Sites>, usize) {
        let base = State::new(target, self.d());
        if base.nnz == 0 {
            return (Some(Vec::new()), 0);
        }
        let g0 = base.lowest_violated().expect("non-zero");
        let branches: Vec<(usize, Symbol)> = self
            .graph()
            .qudits_of(g0)
            .iter()
            .flat_map(|&q| alphabet.iter().map(move |&s| (q, s)))
            .collect();
        let fanout = (self.max_generator_weight() * alphabet.len()) as u128;
        let accept = |_: &State| true;
        for w in 1..=max_weight {
            if !meter.charge(pow_saturating(fanout, w)) {
                return (None, w - 1);
            }
            let hit = first_hit(branches.len(), |i, earliest| {
                let (q, s) = branches[i];
                let mut st = base.clone();
                st.push(self, q, s);
                let engine = Guided {
                    code: self,
                    alphabet,
                    max_degree: self.left_degree(),
                    floor: None,
                    accept: &accept,
                    branch: i,
                    earliest,
                };
                engine.dfs(&mut st, w - 1)
            });
            if hit.is_some() {
                return (hit, w - 1);
            }
        }
        (None, max_weight)
    }

    /// Minimum weight of a Pauli with the same syndrome as `e`, i.e. the
    /// weight of `e` modulo the centralizer.
    pub fn wt_mod_centralizer(&self, e: &PauliOp, budget: Budget) -> Result<WeightSearch, CodeError> {
        let syndrome = self.syndrome(e)?;
        if syndrome.is_zero() {
            return Ok(WeightSearch {
                bound: WeightBound::exact(0),
                witness: Some(PauliOp::identity(self.n(), self.d())),
                candidates: 0,
            });
        }
        let mut meter = Meter::new(budget);
        let alphabet = full_alphabet(self.d());
        let wt = e.weight();
        let (hit, ruled_out) = self.min_with_syndrome(&syndrome.values, &alphabet, wt.saturating_sub(1), &mut meter);
        Ok(match hit {
            Some(sites) => WeightSearch {
                bound: WeightBound::exact(sites.len()),
                witness: Some(sites_to_pauli(self.n(), self.d(), &sites)),
                candidates: meter.spent,
            },
            None => WeightSearch {
                bound: WeightBound::interval(ruled_out + 1, Some(wt)),
                witness: Some(e.clone().with_phase(0)),
                candidates: meter.spent,
            },
        })
    }

    /// Minimum weight of `e·a` over group elements `a`, ignoring scalars.
    pub fn wt_mod_group(&self, e: &PauliOp, budget: Budget) -> Result<WeightSearch, CodeError> {
        let syndrome = self.syndrome(e)?;
        if self.span_contains(e) {
            return Ok(WeightSearch {
                bound: WeightBound::exact(0),
                witness: Some(PauliOp::identity(self.n(), self.d())),
                candidates: 0,
            });
        }
        let wt = e.weight();
        let mut meter = Meter::new(budget);
        // The centralizer coset bound is a lower bound, and often tight.
        let floor = if syndrome.is_zero() {
            1
        } else {
            let cz = self.wt_mod_centralizer(e, budget)?;
            meter.spent = cz.candidates;
            if cz.bound.value() == Some(wt) {
                return Ok(WeightSearch {
                    bound: WeightBound::exact(wt),
                    witness: Some(e.clone()),
                    candidates: meter.spent,
                });
            }
            cz.bound.lower().max(1)
        };

        let e_vec = e.symplectic_vector();
        let d = self.d();
        let n = self.n();
        let accept = |st: &State| {
            let mut v = sites_to_pauli(n, d, &st.sites).symplectic_vector();
            for (a, &b) in v.iter_mut().zip(&e_vec) {
                *a = field::sub(*a, b, d);
            }
            self.row_space().contains(&v)
        };
        let alphabet = full_alphabet(d);
        let base = State::new(&syndrome.values, d);
        let per_site = alphabet.len() as u128;
        for w in floor..wt {
            if !meter.charge(binomial(n, w).saturating_mul(pow_saturating(per_site, w))) {
                return Ok(WeightSearch {
                    bound: WeightBound::interval(w, Some(wt)),
                    witness: Some(e.clone()),
                    candidates: meter.spent,
                });
            }
            let hit = first_hit(n.saturating_sub(w - 1), |q0, earliest| {
                let engine = Plain {
                    code: self,
                    alphabet: &alphabet,
                    max_degree: self.left_degree(),
                    accept: &accept,
                    branch: q0,
                    earliest,
                };
                let mut st = base.clone();
                for &s in engine.alphabet {
                    st.push(self, q0, s);
                    let hit = engine.dfs(&mut st, w - 1, q0 + 1);
                    st.pop(self);
                    if hit.is_some() {
                        return hit;
                    }
                }
                None
            });
            if let Some(sites) = hit {
                return Ok(WeightSearch {
                    bound: WeightBound::exact(w),
                    witness: Some(sites_to_pauli(n, d, &sites)),
                    candidates: meter.spent,
                });
            }
        }
        Ok(WeightSearch {
            bound: WeightBound::exact(wt),
            witness: Some(e.clone()),
            candidates: meter.spent,
        })
    }

    /// Guided search for zero-syndrome words rooted at their smallest qudit.
    /// `accept` decides whether a zero-syndrome word is a hit; rejected words
    /// are not extended. Levels `1..=max_weight` are tried in order.
    fn rooted_search<A: Fn(&State) -> bool + Sync>(
        &self,
        alphabet: &[Symbol],
        max_weight: usize,
        accept: &A,
        meter: &mut Meter,
    ) -> (Option<Sites>, usize) {
        let n = self.n();
        let roots: Vec<(usize, Symbol)> = (0..n).flat_map(|q| alphabet.iter().map(move |&s| (q, s))).collect();
        let fanout = (self.max_generator_weight() * alphabet.len()) as u128;
        let zero = vec![0u32; self.m()];
        let base = State::new(&zero, self.d());
        for w in 1..=max_weight.min(n) {
            let estimate = (roots.len() as u128).saturating_mul(pow_saturating(fanout, w - 1));
            if !meter.charge(estimate) {
                return (None, w - 1);
            }
            let hit = first_hit(roots.len(), |i, earliest| {
                let (q, s) = roots[i];
                let mut st = base.clone();
                st.push(self, q, s);
                let engine = Guided {
                    code: self,
                    alphabet,
                    max_degree: self.left_degree(),
                    floor: Some(q),
                    accept,
                    branch: i,
                    earliest,
                };
                engine.dfs(&mut st, w - 1)
            });
            if hit.is_some() {
                return (hit, w - 1);
            }
        }
        (None, max_weight.min(n))
    }

    fn min_logical(&self, alphabet: &[Symbol], meter: &mut Meter) -> (WeightBound, Option<PauliOp>) {
        let (n, d) = (self.n(), self.d());
        let accept = |st: &State| !self.span_contains(&sites_to_pauli(n, d, &st.sites));
        let (hit, ruled_out) = self.rooted_search(alphabet, n, &accept, meter);
        match hit {
            Some(sites) => (WeightBound::exact(sites.len()), Some(sites_to_pauli(n, d, &sites))),
            None if ruled_out == n => (WeightBound::interval(n + 1, None), None),
            None => (WeightBound::interval(ruled_out + 1, None), None),
        }
    }

    /// Minimum weight of a centralizer element outside the stabilizer group.
    ///
    /// Uses the CSS split when the code is CSS. A code encoding no qudits has
    /// no logical operators and reports the interval `[n + 1, ∞)`.
    pub fn code_distance(&self, budget: Budget) -> DistanceReport {
        if self.css().is_some() {
            self.code_distance_css(budget)
        } else {
            self.code_distance_generic(budget)
        }
    }

    /// Distance over the full single-qudit alphabet.
    pub fn code_distance_generic(&self, budget: Budget) -> DistanceReport {
        let mut meter = Meter::new(budget);
        let (bound, witness) = if self.logical_qudits() == 0 {
            (WeightBound::interval(self.n() + 1, None), None)
        } else {
            self.min_logical(&full_alphabet(self.d()), &mut meter)
        };
        DistanceReport {
            bound,
            witness,
            candidates: meter.spent,
            method: DistanceMethod::Generic,
            logical_qudits: self.logical_qudits(),
        }
    }

    /// Distance as the smaller of the X-type and Z-type logical weights.
    /// Only meaningful for CSS codes.
    pub fn code_distance_css(&self, budget: Budget) -> DistanceReport {
        let logical_qudits = self.logical_qudits();
        if logical_qudits == 0 {
            return DistanceReport {
                bound: WeightBound::interval(self.n() + 1, None),
                witness: None,
                candidates: 0,
                method: DistanceMethod::CssSplit,
                logical_qudits,
            };
        }
        let half = Budget::new(budget.max_candidates / 2);
        let mut mx = Meter::new(half);
        let (bx, wx) = self.min_logical(&x_alphabet(self.d()), &mut mx);
        let mut mz = Meter::new(half);
        let (bz, wz) = self.min_logical(&z_alphabet(self.d()), &mut mz);
        let bound = bx.min(bz);
        let witness = match (bx.upper(), bz.upper()) {
            (Some(a), Some(b)) if b < a => wz,
            (Some(_), _) => wx,
            (None, _) => wz,
        };
        DistanceReport {
            bound,
            witness,
            candidates: mx.spent + mz.spent,
            method: DistanceMethod::CssSplit,
            logical_qudits,
        }
    }

    /// Whether the stabilizer group has no non-identity element of weight
    /// below `k`.
    pub fn is_succinct(&self, budget: Budget) -> Succinctness {
        let (n, d) = (self.n(), self.d());
        let k = self.k();
        if k <= 1 {
            return Succinctness::Succinct;
        }
        let mut meter = Meter::new(budget);
        // The lightest non-identity centralizer element is found first. If it
        // is in the group we are done; if only logicals appear at that weight
        // the guided search cannot continue past them.
        let any = |_: &State| true;
        let alphabet = full_alphabet(d);
        let (hit, ruled_out) = self.rooted_search(&alphabet, k - 1, &any, &mut meter);
        let Some(sites) = hit else {
            return if ruled_out >= k - 1 {
                Succinctness::Succinct
            } else {
                Succinctness::Unknown {
                    searched_below: ruled_out + 1,
                }
            };
        };
        let w0 = sites.len();
        let in_group = |st: &State| self.span_contains(&sites_to_pauli(n, d, &st.sites));
        let zero = vec![0u32; self.m()];
        let base = State::new(&zero, d);
        let per_site = alphabet.len() as u128;
        for w in w0..k {
            if !meter.charge(binomial(n, w).saturating_mul(pow_saturating(per_site, w))) {
                return Succinctness::Unknown { searched_below: w };
            }
            let hit = first_hit(n.saturating_sub(w - 1), |q0, earliest| {
                let engine = Plain {
                    code: self,
                    alphabet: &alphabet,
                    max_degree: self.left_degree(),
                    accept: &in_group,
                    branch: q0,
                    earliest,
                };
                let mut st = base.clone();
                for &s in engine.alphabet {
                    st.push(self, q0, s);
                    let hit = engine.dfs(&mut st, w - 1, q0 + 1);
                    st.pop(self);
                    if hit.is_some() {
                        return hit;
                    }
                }
                None
            });
            if let Some(sites) = hit {
                return Succinctness::NotSuccinct {
                    witness: sites_to_pauli(n, d, &sites),
                };
            }
        }
        Succinctness::Succinct
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::enumerate_by_weight;

    fn q(s: &str) -> PauliOp {
        PauliOp::from_qubit_str(s).unwrap()
    }

    /// [[5,1,3]] code: cyclic shifts of XZZXI.
    fn five_qubit() -> StabilizerCode {
        let gens = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"].iter().map(|s| q(s)).collect();
        StabilizerCode::new(gens).unwrap()
    }

    fn oracle_centralizer(code: &StabilizerCode, e: &PauliOp) -> usize {
        let target = code.syndrome(e).unwrap();
        if target.is_zero() {
            return 0;
        }
        enumerate_by_weight(code.n(), code.d(), code.n())
            .find(|f| code.syndrome(f).unwrap() == target)
            .unwrap()
            .weight()
    }

    fn oracle_distance(code: &StabilizerCode) -> usize {
        enumerate_by_weight(code.n(), code.d(), code.n())
            .find(|f| code.syndrome(f).unwrap().is_zero() && !code.span_contains(f))
            .unwrap()
            .weight()
    }

    #[test]
    fn weight_bound_helpers() {
        assert_eq!(WeightBound::interval(3, Some(3)), WeightBound::exact(3));
        let a = WeightBound::interval(2, Some(5));
        let b = WeightBound::exact(3);
        assert_eq!(a.min(b), WeightBound::interval(2, Some(3)));
        assert_eq!(WeightBound::interval(4, None).min(b), WeightBound::exact(3));
        let json = serde_json::to_value(a).unwrap();
        assert_eq!(json["exactness"], "interval");
    }

    #[test]
    fn five_qubit_code_distance() {
        let code = five_qubit();
        assert!(code.css().is_none());
        let report = code.code_distance(Budget::default());
        assert_eq!(report.bound, WeightBound::exact(3));
        assert_eq!(report.bound.value(), Some(oracle_distance(&code)));
        let w = report.witness.unwrap();
        assert!(code.syndrome(&w).unwrap().is_zero());
        assert!(!code.span_contains(&w));
    }

    #[test]
    fn centralizer_weight_matches_oracle() {
        let code = five_qubit();
        for e in enumerate_by_weight(5, 2, 3) {
            let got = code.wt_mod_centralizer(&e, Budget::default()).unwrap();
            assert_eq!(got.bound.value(), Some(oracle_centralizer(&code, &e)), "{e}");
            let witness = got.witness.unwrap();
            assert_eq!(code.syndrome(&witness).unwrap(), code.syndrome(&e).unwrap());
        }
    }

    #[test]
    fn group_weight_on_repetition_toy() {
        // Two-qubit code stabilized by ZZ: logical X̄ = XX, Z̄ = ZI.
        let code = StabilizerCode::with_options(
            vec![q("ZZ"), q("XX")],
            crate::code::BuildOptions::default(),
        )
        .unwrap();
        assert_eq!(code.logical_qudits(), 0);
        assert_eq!(code.code_distance(Budget::default()).bound, WeightBound::interval(3, None));
        assert_eq!(code.wt_mod_group(&q("YY"), Budget::default()).unwrap().bound, WeightBound::exact(0));
        assert_eq!(code.wt_mod_group(&q("XI"), Budget::default()).unwrap().bound, WeightBound::exact(1));
        assert_eq!(code.wt_mod_group(&q("XY"), Budget::default()).unwrap().bound, WeightBound::exact(1));
    }

    #[test]
    fn three_qubit_repetition_code() {
        let code = StabilizerCode::with_options(
            vec![q("ZZI"), q("IZZ")],
            crate::code::BuildOptions {
                allow_nonuniform_locality: false,
                strict_degree: false,
            },
        );
        // Qudits 0 and 2 see only Z restrictions, hence trivial.
        assert!(code.is_err());
    }

    #[test]
    fn budget_produces_interval() {
        let code = five_qubit();
        let e = q("XXXII");
        let exact = code.wt_mod_centralizer(&e, Budget::default()).unwrap();
        let tiny = code.wt_mod_centralizer(&e, Budget::new(1)).unwrap();
        assert!(!tiny.bound.is_exact());
        assert!(tiny.bound.lower() <= exact.bound.lower());
        assert_eq!(tiny.bound.upper(), Some(3));
        let dist = code.code_distance(Budget::new(10));
        assert!(dist.bound.lower() <= 3 && !dist.bound.is_exact());
    }

    #[test]
    fn succinct_five_qubit() {
        let code = five_qubit();
        // Every non-identity stabilizer of the [[5,1,3]] code has weight 4.
        assert_eq!(code.is_succinct(Budget::default()), Succinctness::Succinct);
    }

    #[test]
    fn redundant_product_breaks_succinctness() {
        // The first two X checks overlap on three qubits; their product has weight 2.
        let gens = ["XXIIXX", "XXXIXI", "XXIXXI", "IIZZZZ", "IZZZIZ", "ZIZZIZ"];
        let code = StabilizerCode::new(gens.iter().map(|s| q(s)).collect()).unwrap();
        match code.is_succinct(Budget::default()) {
            Succinctness::NotSuccinct { witness } => {
                assert!(witness.weight() < code.k());
                assert!(code.span_contains(&witness));
            }
            other => panic!("expected a light group element, got {other:?}"),
        }
    }
}
