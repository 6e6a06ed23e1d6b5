//! Adversarial errors with small penalty relative to their weight, the
//! soundness evaluator `r(δ)`, and an exhaustive soundness oracle.
//!
//! For an error `E` with weight `w` modulo the centralizer,
//! `δ = w/n`, `R = penalty/m` and `r = R / min{kδ, 1}`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::code::{CodeError, StabilizerCode};
use crate::graph::{self, ExpansionMode, Side};
use crate::pauli::{count_at_weight, enumerate_by_weight, PauliOp, Symbol};
use crate::search::{Budget, Exactness, WeightBound};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AttackError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("the operator commutes with every generator; it is a stabilizer or a logical, not an error")]
    NotAnError,
    #[error("δ·n = {0:.3} selects no qudit")]
    DeltaTooSmall(f64),
    #[error("no {t}-independent constraint set could be formed")]
    NoIndependentSet { t: usize },
    #[error("constraint set is not {t}-independent")]
    NotIndependent { t: usize },
    #[error("requested {requested} qudits but only {available} are available")]
    TooManyQudits { requested: usize, available: usize },
    #[error("soundness profile would enumerate {estimate} operators (limit {limit})")]
    Infeasible { estimate: u128, limit: u128 },
    #[error("at least one trial is required")]
    NoTrials,
}

/// `t(d) = 1/(d² - 1)`.
pub fn single_error_soundness(d: u32) -> f64 {
    1.0 / ((d * d - 1) as f64)
}

/// `α(d) = 1 - t(d)`.
pub fn alphabet_bound(d: u32) -> f64 {
    1.0 - single_error_soundness(d)
}

/// `γ_gap(k) = min{10⁻³, 0.01/k}`.
pub fn gamma_gap(k: usize) -> f64 {
    (1e-3f64).min(0.01 / k as f64)
}

/// The weight-concentration constant `y(k)`, defined for `k ≥ 4`.
pub fn y_constant(k: usize) -> Option<f64> {
    match k {
        0..=3 => None,
        4 => Some(0.9985),
        5 => Some(0.9992),
        6..=11 => Some(0.9999),
        _ => {
            let kh = (k / 2 + 1) as f64;
            let kf = k as f64;
            Some(1.0 - 2f64.powf((1.0 - kh) * kf.log2() + kf - 2.3 * kh + 4.54))
        }
    }
}

/// `Θ(δ) = min{kδ, 1}`.
pub fn theta(k: usize, delta: f64) -> f64 {
    (k as f64 * delta).min(1.0)
}

/// Relative soundness, exact or bracketed when the coset weight is.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RValue {
    /// From the smallest admissible `δ`: the largest `r` consistent with the search.
    pub pessimistic: f64,
    pub optimistic: f64,
    pub exactness: Exactness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    /// `None` when it could not be decided.
    pub holds: Option<bool>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub label: String,
    pub value: f64,
    /// Compares the pessimistic end of `r`.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Construction {
    pub constraints: Vec<usize>,
    pub qudits: Vec<usize>,
    pub seed: Option<u64>,
    pub requested: Option<usize>,
    pub shortfall: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub attack: String,
    pub error: PauliOp,
    pub weight: usize,
    pub wt_mod_group: WeightBound,
    pub wt_mod_centralizer: WeightBound,
    pub penalty: usize,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub left_degree: usize,
    /// `δ` at the lower end of the coset weight.
    pub delta: f64,
    pub delta_upper: Option<f64>,
    /// `weight / n`, for diagnostics.
    pub raw_delta: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub r: RValue,
    pub construction: Construction,
    pub preconditions: Vec<Condition>,
    pub bound: Option<BoundCheck>,
    pub notes: Vec<String>,
}

impl AttackReport {
    pub fn with_bound(mut self, label: &str, value: f64) -> Self {
        self.bound = Some(BoundCheck {
            label: label.to_string(),
            value,
            holds: self.r.pessimistic <= value + 1e-12,
        });
        self
    }

    pub fn preconditions_hold(&self) -> bool {
        self.preconditions.iter().all(|c| c.holds == Some(true))
    }

    /// `delta,R,r,bound,bound_holds`
    pub fn csv_row(&self) -> String {
        let (bound, holds) = match &self.bound {
            Some(b) => (format!("{}", b.value), b.holds.to_string()),
            None => (String::new(), String::new()),
        };
        format!("{},{},{},{},{}", self.delta, self.big_r, self.r.pessimistic, bound, holds)
    }
}

pub const CSV_HEADER: &str = "delta,R,r,bound,bound_holds";

/// Code-level measurements shared by the attacks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackContext {
    pub budget: Budget,
    /// `ε*` over qudit sets of size at most `k`, and whether it is exact.
    pub epsilon_star: Option<(f64, bool)>,
    pub distance: Option<WeightBound>,
}

impl AttackContext {
    pub fn new(budget: Budget) -> Self {
        AttackContext {
            budget,
            epsilon_star: None,
            distance: None,
        }
    }

    /// Measures `ε*(size ≤ k)` exhaustively and the distance within `budget`.
    pub fn measure(code: &StabilizerCode, budget: Budget) -> Self {
        let est = graph::small_set_expansion_error(code.graph(), code.k(), ExpansionMode::Exhaustive);
        let dist = code.code_distance(budget);
        AttackContext {
            budget,
            epsilon_star: Some((est.epsilon, est.exact)),
            distance: Some(dist.bound),
        }
    }

    fn delta_conditions(&self, code: &StabilizerCode, delta: f64) -> Vec<Condition> {
        let k = code.k() as f64;
        let dl = code.left_degree() as f64;
        let cap = 1.0 / (k.powi(3) * dl);
        let mut out = vec![Condition {
            name: "delta <= 1/(k^3 D_L)".into(),
            holds: Some(delta <= cap),
            detail: format!("delta = {delta:.6}, 1/(k^3 D_L) = {cap:.6}"),
        }];
        let n = code.n() as f64;
        let (holds, detail) = match self.distance {
            None => (None, "distance not measured".to_string()),
            Some(b) => {
                let lo = b.lower() as f64 / (2.0 * n);
                if delta < lo {
                    (Some(true), format!("delta < dist_lower/2n = {lo:.6}"))
                } else if b.upper().is_some_and(|u| delta >= u as f64 / (2.0 * n)) {
                    (Some(false), format!("delta >= dist/2n = {:.6}", b.upper().unwrap() as f64 / (2.0 * n)))
                } else {
                    (None, format!("distance only bracketed: {b:?}"))
                }
            }
        };
        out.push(Condition {
            name: "delta < dist/2n".into(),
            holds,
            detail,
        });
        out
    }
}

/// Penalty, coset weights and `(δ, R, r)` for an explicit error.
pub fn evaluate_r(code: &StabilizerCode, e: &PauliOp, budget: Budget) -> Result<AttackReport, AttackError> {
    let syndrome = code.syndrome(e)?;
    if syndrome.is_zero() {
        return Err(AttackError::NotAnError);
    }
    let penalty = syndrome.weight();
    let cz = code.wt_mod_centralizer(e, budget)?;
    let cg = code.wt_mod_group(e, budget)?;
    let n = code.n() as f64;
    let m = code.m() as f64;
    let k = code.k();
    let big_r = penalty as f64 / m;
    let lo = cz.bound.lower() as f64 / n;
    let hi = cz.bound.upper().map(|u| u as f64 / n);
    let r_pess = big_r / theta(k, lo);
    let r_opt = hi.map_or(r_pess, |h| big_r / theta(k, h));
    Ok(AttackReport {
        attack: "evaluate".into(),
        error: e.clone(),
        weight: e.weight(),
        wt_mod_group: cg.bound,
        wt_mod_centralizer: cz.bound,
        penalty,
        n: code.n(),
        m: code.m(),
        k,
        left_degree: code.left_degree(),
        delta: lo,
        delta_upper: hi,
        raw_delta: e.weight() as f64 / n,
        big_r,
        r: RValue {
            pessimistic: r_pess,
            optimistic: r_opt,
            exactness: cz.bound.exactness(),
        },
        construction: Construction::default(),
        preconditions: Vec::new(),
        bound: None,
        notes: Vec::new(),
    })
}

fn independent_set(code: &StabilizerCode, t: usize, size: usize, seed: u64) -> Result<graph::IndependentSet, AttackError> {
    let set = graph::greedy_t_independent(code.graph(), t, size, seed);
    if set.is_empty() {
        return Err(AttackError::NoIndependentSet { t });
    }
    if !graph::verify_t_independent(code.graph(), &set.constraints, t) {
        return Err(AttackError::NotIndependent { t });
    }
    Ok(set)
}

fn target_size(code: &StabilizerCode, delta: f64) -> Result<usize, AttackError> {
    let size = (delta * code.n() as f64 - 1e-9).ceil();
    if size < 1.0 {
        return Err(AttackError::DeltaTooSmall(delta * code.n() as f64));
    }
    Ok(size as usize)
}

/// `α_i(u)`: generators acting on `i` that meet `u` in another qudit too.
/// `u` itself is counted.
pub fn alpha_count(code: &StabilizerCode, u: usize, i: usize) -> usize {
    let support = code.graph().qudits_of(u);
    code.graph()
        .constraints_of(i)
        .iter()
        .filter(|&&g| code.graph().qudits_of(g).iter().any(|&q| q != i && support.binary_search(&q).is_ok()))
        .count()
}

fn assemble(code: &StabilizerCode, sites: &[(usize, Symbol)]) -> PauliOp {
    PauliOp::from_sites(code.n(), code.d(), sites).expect("sites in range")
}

/// The error `⊗_{u∈U} u|_{q(u)}` over a greedy 1-independent set `U` with
/// `|U| = ⌈δn⌉`, where `q(u)` minimises `α_i(u)`.
pub fn expander_attack(code: &StabilizerCode, delta: f64, seed: u64, ctx: &AttackContext) -> Result<AttackReport, AttackError> {
    let size = target_size(code, delta)?;
    let set = independent_set(code, 1, size, seed)?;
    let mut sites = Vec::new();
    let mut penalty_cap = 0;
    for &u in &set.constraints {
        let (q, a) = code
            .graph()
            .qudits_of(u)
            .iter()
            .map(|&i| (i, alpha_count(code, u, i)))
            .min_by_key(|&(i, a)| (a, i))
            .expect("generator has support");
        penalty_cap += a - 1;
        sites.push((q, code.generator(u).symbol(q)));
    }
    let e = assemble(code, &sites);
    let mut report = evaluate_r(code, &e, ctx.budget)?;
    report.attack = "expander".into();
    report.construction = Construction {
        constraints: set.constraints.clone(),
        qudits: sites.iter().map(|s| s.0).collect(),
        seed: Some(seed),
        requested: Some(size),
        shortfall: set.shortfall(),
    };
    if set.shortfall() {
        report
            .notes
            .push(format!("greedy 1-independent set has {} of {size} requested constraints", set.len()));
    }
    report.notes.push(format!("penalty {} <= multi-intersection count {penalty_cap}", report.penalty));
    report.preconditions = ctx.delta_conditions(code, report.delta);
    if let Some((eps, exact)) = ctx.epsilon_star {
        report.preconditions.push(Condition {
            name: "eps* < 1/2".into(),
            holds: Some(eps < 0.5),
            detail: format!("eps*(size <= k) = {eps:.6} ({})", if exact { "exact" } else { "sampled" }),
        });
        report = report.with_bound("2*eps*", 2.0 * eps);
    }
    Ok(report)
}

/// Per-qudit majority restriction `MAJ(q)` with its commuting share.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorityChoice {
    pub qudit: usize,
    pub symbol: Symbol,
    pub degree: usize,
    pub non_commuting: usize,
}

/// Most frequent generator restriction on `q`; ties go to the lowest
/// symbol index.
pub fn majority_restriction(code: &StabilizerCode, q: usize) -> MajorityChoice {
    let d = code.d();
    let mut counts: HashMap<Symbol, usize> = HashMap::new();
    let checks = code.local_checks(q);
    for lc in checks {
        *counts.entry(lc.symbol).or_default() += 1;
    }
    let (&symbol, _) = counts
        .iter()
        .max_by_key(|(s, &c)| (c, std::cmp::Reverse(s.index(d))))
        .expect("qudit has generators");
    let non_commuting = checks.iter().filter(|lc| lc.symbol.commutator(symbol, d) != 0).count();
    MajorityChoice {
        qudit: q,
        symbol,
        degree: checks.len(),
        non_commuting,
    }
}

/// The error `⊗_{u∈U} MAJ(q(u))` with `q(u)` the lowest-index qudit of `u`.
pub fn alphabet_attack(code: &StabilizerCode, delta: f64, seed: u64, ctx: &AttackContext) -> Result<AttackReport, AttackError> {
    let size = target_size(code, delta)?;
    let set = independent_set(code, 1, size, seed)?;
    let alpha = alphabet_bound(code.d());
    let mut sites = Vec::new();
    let mut worst_fraction: f64 = 0.0;
    for &u in &set.constraints {
        let q = code.graph().qudits_of(u)[0];
        let maj = majority_restriction(code, q);
        worst_fraction = worst_fraction.max(maj.non_commuting as f64 / maj.degree as f64);
        sites.push((q, maj.symbol));
    }
    let e = assemble(code, &sites);
    let mut report = evaluate_r(code, &e, ctx.budget)?;
    report.attack = "alphabet".into();
    report.construction = Construction {
        constraints: set.constraints.clone(),
        qudits: sites.iter().map(|s| s.0).collect(),
        seed: Some(seed),
        requested: Some(size),
        shortfall: set.shortfall(),
    };
    report.preconditions = ctx.delta_conditions(code, report.delta);
    report.preconditions.truncate(1);
    report.notes.push(format!(
        "largest per-qudit non-commuting fraction {worst_fraction:.6} <= alpha(d) = {alpha:.6}: {}",
        worst_fraction <= alpha + 1e-12
    ));
    Ok(report.with_bound("alpha(d)", alpha))
}

/// Refinement over a given 1-independent set `U`: the qudits of `S = Γ(U)`
/// are split into `k` classes by their position inside their generator, the
/// class with the most unique-neighbour edges is kept, and its `⌈δ'n⌉`
/// qudits with the most unique-neighbour edges carry the restriction of
/// their generator.
pub fn refined_expander_attack(
    code: &StabilizerCode,
    u: &[usize],
    delta_prime: f64,
    ctx: &AttackContext,
) -> Result<AttackReport, AttackError> {
    if u.is_empty() || !graph::verify_t_independent(code.graph(), u, 1) {
        return Err(AttackError::NotIndependent { t: 1 });
    }
    let size = target_size(code, delta_prime)?;
    if size > u.len() {
        return Err(AttackError::TooManyQudits {
            requested: size,
            available: u.len(),
        });
    }
    let g = code.graph();
    let s = g.gamma(u, Side::Right).map_err(CodeError::from)?;
    let mut counts = vec![0u32; g.num_right()];
    for &q in &s {
        for &c in g.constraints_of(q) {
            counts[c] += 1;
        }
    }
    let unique_edges = |q: usize| g.constraints_of(q).iter().filter(|&&c| counts[c] == 1).count();
    let k = code.k();
    let classes: Vec<Vec<(usize, usize)>> = (0..k)
        .map(|i| {
            u.iter()
                .filter_map(|&c| g.qudits_of(c).get(i).map(|&q| (q, c)))
                .collect()
        })
        .collect();
    let score = |class: &Vec<(usize, usize)>| class.iter().map(|&(q, _)| unique_edges(q)).sum::<usize>();
    let best = (0..k).max_by_key(|&i| (score(&classes[i]), std::cmp::Reverse(i))).expect("k >= 1");
    let mut chosen = classes[best].clone();
    chosen.sort_by_key(|&(q, _)| (std::cmp::Reverse(unique_edges(q)), q));
    chosen.truncate(size);
    chosen.sort_unstable();
    let sites: Vec<(usize, Symbol)> = chosen.iter().map(|&(q, c)| (q, code.generator(c).symbol(q))).collect();
    let e = assemble(code, &sites);
    let eps_s = g.expansion_stats(&s).map_err(CodeError::from)?.expansion_error;
    let mut report = evaluate_r(code, &e, ctx.budget)?;
    report.attack = "refined_expander".into();
    report.construction = Construction {
        constraints: u.to_vec(),
        qudits: chosen.iter().map(|&(q, _)| q).collect(),
        seed: None,
        requested: Some(size),
        shortfall: false,
    };
    report.notes.push(format!("class {best} of {k} selected, eps(Gamma(U)) = {eps_s:.6}"));
    report.preconditions = ctx.delta_conditions(code, report.delta);
    Ok(report.with_bound("2*eps(Gamma(U))", 2.0 * eps_s))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquaredTest {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    pub significance: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IslandTrialStats {
    pub trials: usize,
    pub seed: u64,
    pub p: f64,
    pub islands: Vec<usize>,
    pub s_size: usize,
    /// `ε(Γ(U))`, measured.
    pub epsilon_prime: f64,
    pub meets_expansion_hypothesis: bool,
    /// Islands with `i` non-identity sites, summed over trials.
    pub histogram: Vec<u64>,
    /// `Binomial(k, p)` mass.
    pub binomial: Vec<f64>,
    pub chi_squared: ChiSquaredTest,
    pub empirical_rate: f64,
    pub rate_sigma: f64,
    pub mean_penalty: f64,
    pub penalty_sem: f64,
    /// `p·α·|S|·D_L·(1 - p·α·ε')`.
    pub penalty_bound: f64,
    pub penalty_bound_holds: bool,
    pub mean_weight: f64,
    /// Trials whose group weight is certainly below `|S|·p·y(k)`.
    pub weight_shortfall_fraction: Option<f64>,
    pub exact_group_weight_fraction: f64,
    pub best: Option<AttackReport>,
}

struct Trial {
    weight: usize,
    penalty: usize,
    histogram: Vec<u64>,
    wt_group: Option<WeightBound>,
    r_pessimistic: Option<f64>,
    error: PauliOp,
}

/// Random errors on `S = Γ(U)` for a greedy `k`-independent `U`: each qudit
/// of `S` independently carries a uniformly random non-identity symbol with
/// probability `p = 1/(10k)`. Trial `i` draws from stream `i` of a ChaCha8
/// generator seeded with `seed`.
pub fn island_attack(
    code: &StabilizerCode,
    trials: usize,
    seed: u64,
    trial_budget: Budget,
) -> Result<IslandTrialStats, AttackError> {
    if trials == 0 {
        return Err(AttackError::NoTrials);
    }
    let k = code.k();
    let set = independent_set(code, k, usize::MAX, seed)?;
    let g = code.graph();
    let s = g.gamma(&set.constraints, Side::Right).map_err(CodeError::from)?;
    let p = 1.0 / (10.0 * k as f64);
    let symbols = Symbol::non_identity(code.d());
    let n = code.n();
    let (m, dl) = (code.m() as f64, code.left_degree() as f64);
    let run = |trial: usize| -> Trial {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let mut sites = Vec::new();
        for &q in &s {
            if rng.random_bool(p) {
                sites.push((q, symbols[rng.random_range(0..symbols.len())]));
            }
        }
        let err = PauliOp::from_sites(n, code.d(), &sites).expect("in range");
        let mut histogram = vec![0u64; k + 1];
        for &u in &set.constraints {
            let hits = g.qudits_of(u).iter().filter(|q| sites.iter().any(|(p, _)| p == *q)).count();
            histogram[hits] += 1;
        }
        let penalty = code.penalty(&err).expect("shape");
        let (wt_group, r_pessimistic) = if penalty == 0 {
            (None, None)
        } else {
            let cz = code.wt_mod_centralizer(&err, trial_budget).expect("shape");
            let cg = code.wt_mod_group(&err, trial_budget).expect("shape");
            let delta = cz.bound.lower() as f64 / n as f64;
            (Some(cg.bound), Some(penalty as f64 / m / theta(k, delta)))
        };
        Trial {
            weight: sites.len(),
            penalty,
            histogram,
            wt_group,
            r_pessimistic,
            error: err,
        }
    };
    let results: Vec<Trial> = (0..trials).into_par_iter().map(run).collect();

    let mut histogram = vec![0u64; k + 1];
    for t in &results {
        for (h, &c) in histogram.iter_mut().zip(&t.histogram) {
            *h += c;
        }
    }
    let binomial: Vec<f64> = (0..=k)
        .map(|i| crate::pauli::binomial(k, i) as f64 * p.powi(i as i32) * (1.0 - p).powi((k - i) as i32))
        .collect();
    let chi_squared = chi_squared_three_bins(&histogram, &binomial, 0.01);

    let tf = trials as f64;
    let total_weight: usize = results.iter().map(|t| t.weight).sum();
    let empirical_rate = total_weight as f64 / (tf * s.len() as f64);
    let rate_sigma = (p * (1.0 - p) / (tf * s.len() as f64)).sqrt();
    let penalties: Vec<f64> = results.iter().map(|t| t.penalty as f64).collect();
    let mean_penalty = penalties.iter().sum::<f64>() / tf;
    let var = if trials > 1 {
        penalties.iter().map(|x| (x - mean_penalty).powi(2)).sum::<f64>() / (tf - 1.0)
    } else {
        0.0
    };
    let penalty_sem = (var / tf).sqrt();
    let eps_prime = g.expansion_stats(&s).map_err(CodeError::from)?.expansion_error;
    let alpha = alphabet_bound(code.d());
    let penalty_bound = p * alpha * s.len() as f64 * dl * (1.0 - p * alpha * eps_prime);
    let mean_weight = total_weight as f64 / tf;

    let threshold = y_constant(k).map(|y| s.len() as f64 * p * y);
    let weight_shortfall_fraction = threshold.map(|th| {
        results
            .iter()
            .filter(|t| match t.wt_group {
                Some(b) => b.upper().is_some_and(|u| (u as f64) < th),
                None => (t.weight as f64) < th,
            })
            .count() as f64
            / tf
    });
    let exact_group_weight_fraction =
        results.iter().filter(|t| t.wt_group.is_none_or(|b| b.is_exact())).count() as f64 / tf;

    let best_index = results
        .iter()
        .enumerate()
        .filter_map(|(i, t)| t.r_pessimistic.map(|r| (i, r)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i);
    let best = match best_index {
        Some(i) => {
            let mut rep = evaluate_r(code, &results[i].error, trial_budget)?;
            rep.attack = "island".into();
            rep.construction = Construction {
                constraints: set.constraints.clone(),
                qudits: results[i].error.support(),
                seed: Some(seed),
                requested: None,
                shortfall: false,
            };
            rep.notes.push(format!("trial {i} of {trials}"));
            Some(rep)
        }
        None => None,
    };

    Ok(IslandTrialStats {
        trials,
        seed,
        p,
        islands: set.constraints.clone(),
        s_size: s.len(),
        epsilon_prime: eps_prime,
        meets_expansion_hypothesis: eps_prime >= 0.32,
        histogram,
        binomial,
        chi_squared,
        empirical_rate,
        rate_sigma,
        mean_penalty,
        penalty_sem,
        penalty_bound,
        penalty_bound_holds: mean_penalty <= penalty_bound + 3.0 * penalty_sem,
        mean_weight,
        weight_shortfall_fraction,
        exact_group_weight_fraction,
        best,
    })
}

/// Pearson test with categories `0`, `1` and `≥ 2`.
pub fn chi_squared_three_bins(observed: &[u64], mass: &[f64], significance: f64) -> ChiSquaredTest {
    let total: u64 = observed.iter().sum();
    let obs = [
        observed.first().copied().unwrap_or(0) as f64,
        observed.get(1).copied().unwrap_or(0) as f64,
        observed.iter().skip(2).sum::<u64>() as f64,
    ];
    let p0 = mass.first().copied().unwrap_or(0.0);
    let p1 = mass.get(1).copied().unwrap_or(0.0);
    let probs = [p0, p1, (1.0 - p0 - p1).max(0.0)];
    let mut statistic = 0.0;
    let mut bins = 0;
    for (o, pr) in obs.iter().zip(probs) {
        let e = pr * total as f64;
        if e > 0.0 {
            statistic += (o - e).powi(2) / e;
            bins += 1;
        }
    }
    let dof = bins.max(2) - 1;
    let dist = ChiSquared::new(dof as f64).expect("positive dof");
    let p_value = 1.0 - dist.cdf(statistic);
    ChiSquaredTest {
        statistic,
        degrees_of_freedom: dof,
        p_value,
        significance,
        passes: p_value >= significance,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapVerdict {
    Holds,
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapCheck {
    pub threshold: f64,
    pub best_r: Option<f64>,
    pub best_attack: Option<String>,
    pub conditions: Vec<Condition>,
    pub verdict: GapVerdict,
}

/// Compares the best attack against `α(d)(1 - γ_gap(k))`. The comparison is
/// only conclusive when every hypothesis is verified on the instance.
pub fn soundness_gap_check(code: &StabilizerCode, reports: &[&AttackReport], conditions: Vec<Condition>) -> GapCheck {
    let threshold = alphabet_bound(code.d()) * (1.0 - gamma_gap(code.k()));
    let best = reports
        .iter()
        .min_by(|a, b| a.r.pessimistic.total_cmp(&b.r.pessimistic));
    let verdict = match best {
        _ if conditions.iter().any(|c| c.holds != Some(true)) => GapVerdict::Inconclusive,
        None => GapVerdict::Inconclusive,
        Some(b) if b.r.pessimistic <= threshold => GapVerdict::Holds,
        Some(_) => GapVerdict::Violated,
    };
    GapCheck {
        threshold,
        best_r: best.map(|b| b.r.pessimistic),
        best_attack: best.map(|b| b.attack.clone()),
        conditions,
        verdict,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    /// Coset weight modulo the centralizer.
    pub weight: usize,
    pub delta: f64,
    pub min_penalty: usize,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub r: f64,
    /// A minimiser.
    pub witness: PauliOp,
    pub syndrome_classes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoundnessProfile {
    pub weight_cap: usize,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub rows: Vec<ProfileRow>,
    pub enumerated: u64,
}

impl SoundnessProfile {
    pub fn row(&self, weight: usize) -> Option<&ProfileRow> {
        self.rows.iter().find(|r| r.weight == weight)
    }

    /// Whether `R` is non-decreasing in `δ` over the computed rows.
    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].big_r <= w[1].big_r)
    }
}

pub const PROFILE_LIMIT: u128 = 30_000_000;

/// Exact minimum penalty for every coset weight up to `weight_cap`.
///
/// Penalties depend only on the syndrome, and a syndrome class has coset
/// weight `w` exactly when its lightest member has weight `w`. Enumerating
/// all operators by increasing weight therefore assigns every class its
/// coset weight the first time it is seen.
pub fn soundness_profile(code: &StabilizerCode, weight_cap: usize) -> Result<SoundnessProfile, AttackError> {
    let n = code.n();
    let cap = weight_cap.min(n);
    let estimate: u128 = (1..=cap).map(|w| count_at_weight(n, code.d(), w)).sum();
    if estimate > PROFILE_LIMIT {
        return Err(AttackError::Infeasible {
            estimate,
            limit: PROFILE_LIMIT,
        });
    }
    let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
    seen.insert(vec![0; code.m()], ());
    let mut rows = Vec::new();
    let mut level: Option<(usize, usize, PauliOp, usize)> = None;
    let mut enumerated = 0u64;
    let flush = |level: &mut Option<(usize, usize, PauliOp, usize)>, rows: &mut Vec<ProfileRow>| {
        if let Some((w, pen, wit, classes)) = level.take() {
            let delta = w as f64 / n as f64;
            let big_r = pen as f64 / code.m() as f64;
            rows.push(ProfileRow {
                weight: w,
                delta,
                min_penalty: pen,
                big_r,
                r: big_r / theta(code.k(), delta),
                witness: wit,
                syndrome_classes: classes,
            });
        }
    };
    let mut current_w = 0;
    for e in enumerate_by_weight(n, code.d(), cap) {
        enumerated += 1;
        let w = e.weight();
        if w != current_w {
            flush(&mut level, &mut rows);
            current_w = w;
        }
        let s = code.syndrome(&e)?;
        if seen.contains_key(&s.values) {
            continue;
        }
        let pen = s.weight();
        seen.insert(s.values, ());
        match &mut level {
            Some((_, best, wit, classes)) => {
                *classes += 1;
                if pen < *best {
                    *best = pen;
                    *wit = e;
                }
            }
            None => level = Some((w, pen, e, 1)),
        }
    }
    flush(&mut level, &mut rows);
    Ok(SoundnessProfile {
        weight_cap: cap,
        n,
        m: code.m(),
        k: code.k(),
        rows,
        enumerated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn constants() {
        assert!((alphabet_bound(2) - 2.0 / 3.0).abs() < 1e-15);
        assert!((alphabet_bound(3) - 7.0 / 8.0).abs() < 1e-15);
        assert!((single_error_soundness(5) - 1.0 / 24.0).abs() < 1e-15);
        assert_eq!(gamma_gap(4), 1e-3);
        assert_eq!(gamma_gap(20), 5e-4);
        assert_eq!(y_constant(4), Some(0.9985));
        assert_eq!(y_constant(7), Some(0.9999));
        assert_eq!(y_constant(3), None);
        let y12 = y_constant(12).unwrap();
        assert!(y12 > 0.99 && y12 < 1.0);
    }

    #[test]
    fn single_qubit_error_on_toric() {
        let code = zoo::toric_code(4).unwrap();
        let e = PauliOp::from_sites(32, 2, &[(5, Symbol::new(1, 0))]).unwrap();
        let rep = evaluate_r(&code, &e, Budget::default()).unwrap();
        assert_eq!(rep.penalty, 2);
        assert_eq!(rep.wt_mod_centralizer, WeightBound::exact(1));
        assert!((rep.delta - 1.0 / 32.0).abs() < 1e-15);
        assert_eq!(rep.r.exactness, Exactness::Exact);
        let g = code.generator(0).clone();
        assert_eq!(evaluate_r(&code, &g, Budget::default()).unwrap_err(), AttackError::NotAnError);
    }

    #[test]
    fn expander_attack_single_constraint() {
        let code = zoo::toric_code(4).unwrap();
        let ctx = AttackContext::new(Budget::default());
        let rep = expander_attack(&code, 1.0 / 32.0, 0, &ctx).unwrap();
        assert_eq!(rep.weight, 1);
        assert_eq!(rep.wt_mod_centralizer, WeightBound::exact(1));
        assert!(expander_attack(&code, 0.0, 0, &ctx).is_err());
    }

    #[test]
    fn majority_on_toric_edge() {
        let code = zoo::toric_code(3).unwrap();
        let maj = majority_restriction(&code, 0);
        // Two X restrictions and two Z restrictions: the tie goes to Z (index 1).
        assert_eq!(maj.symbol, Symbol::new(0, 1));
        assert_eq!(maj.non_commuting, 2);
    }

    #[test]
    fn profile_for_smallest_toric() {
        let code = zoo::toric_code(2).unwrap();
        let prof = soundness_profile(&code, 2).unwrap();
        assert_eq!(prof.row(1).unwrap().min_penalty, 2);
        assert!(prof.rows.iter().all(|r| r.min_penalty > 0));
    }

    #[test]
    fn chi_squared_accepts_exact_counts() {
        let mass = [0.8, 0.15, 0.05];
        let t = chi_squared_three_bins(&[800, 150, 50], &mass, 0.01);
        assert!(t.statistic.abs() < 1e-12 && t.passes);
        let t = chi_squared_three_bins(&[500, 300, 200], &mass, 0.01);
        assert!(!t.passes);
    }
}
