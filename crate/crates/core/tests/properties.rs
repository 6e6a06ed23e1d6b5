use nalgebra::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qltc::dense::{densify, DenseOperator};
use qltc::graph::{self, ExpansionMode, Side};
use qltc::pauli::Symbol;
use qltc::zoo;
use qltc::{Budget, PauliOp, StabilizerCode};

fn pauli(n: usize, d: u32) -> impl Strategy<Value = PauliOp> {
    (
        prop::collection::vec(0..d, n),
        prop::collection::vec(0..d, n),
        0..(if d == 2 { 2 } else { d }),
    )
        .prop_map(move |(x, z, p)| PauliOp::new(d, x, z, p).unwrap())
}

fn sized_pauli(d: u32) -> impl Strategy<Value = (PauliOp, PauliOp, PauliOp)> {
    (1usize..6).prop_flat_map(move |n| (pauli(n, d), pauli(n, d), pauli(n, d)))
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5, 7])
}

fn omega(d: u32, k: u32) -> Complex<f64> {
    Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / d as f64)
}

fn small_codes() -> Vec<StabilizerCode> {
    vec![
        zoo::five_qubit_code().unwrap(),
        zoo::steane_code().unwrap(),
        zoo::toric_code(3).unwrap(),
        zoo::qudit_toric_code(2, 3).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 128,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn multiplication_is_associative((a, b, c) in prime().prop_flat_map(sized_pauli)) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn commutation_phase_matches_symplectic_product((a, b, _) in prime().prop_flat_map(sized_pauli)) {
        let d = a.d();
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        let s = a.symplectic_product(&b).unwrap();
        // a·b = ω^{-⟨a,b⟩} b·a
        prop_assert_eq!((ab.phase() + s) % d, ba.phase());
        prop_assert_eq!(ab.x(), ba.x());
        prop_assert_eq!(ab.z(), ba.z());
        prop_assert_eq!(a.commutes_with(&b).unwrap(), s == 0);
    }

    #[test]
    fn symplectic_product_is_bilinear_and_alternating((a, b, c) in prime().prop_flat_map(sized_pauli)) {
        let d = a.d();
        let bc = b.multiply(&c).unwrap();
        let lhs = a.symplectic_product(&bc).unwrap();
        let rhs = (a.symplectic_product(&b).unwrap() + a.symplectic_product(&c).unwrap()) % d;
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.symplectic_product(&a).unwrap(), 0);
        prop_assert_eq!((a.symplectic_product(&b).unwrap() + b.symplectic_product(&a).unwrap()) % d, 0);
    }

    #[test]
    fn pow_and_inverse_agree((a, _, _) in prime().prop_flat_map(sized_pauli)) {
        let d = a.d();
        prop_assert!(a.multiply(&a.inverse()).unwrap().is_identity());
        if d > 2 {
            prop_assert!(a.pow(d).is_identity());
        }
        prop_assert_eq!(a.pow(2), a.multiply(&a).unwrap());
    }

    #[test]
    fn dense_form_is_a_homomorphism(
        (a, b) in prop::sample::select(vec![2u32, 3]).prop_flat_map(|d| (1usize..=3).prop_flat_map(move |n| (pauli(n, d), pauli(n, d))))
    ) {
        let da = densify(&a).unwrap();
        let db = densify(&b).unwrap();
        let prod = densify(&a.multiply(&b).unwrap()).unwrap();
        prop_assert!(da.mul(&db).unwrap().distance(&prod) < 1e-12);
        prop_assert!(da.is_unitary());
        let s = a.symplectic_product(&b).unwrap();
        let d = a.d();
        let lhs = da.mul(&db).unwrap();
        let rhs: DenseOperator = db.mul(&da).unwrap().scale(omega(d, (d - s) % d));
        prop_assert!(lhs.distance(&rhs) < 1e-12);
    }

    #[test]
    fn syndrome_is_a_homomorphism((idx, e, f) in code_and_pair()) {
        let code = &small_codes()[idx];
        let sum = code.syndrome(&e).unwrap().add(&code.syndrome(&f).unwrap());
        prop_assert_eq!(code.syndrome(&e.multiply(&f).unwrap()).unwrap(), sum);
        let same = code.syndrome(&e).unwrap() == code.syndrome(&f).unwrap();
        prop_assert_eq!(same, code.in_centralizer(&e.inverse().multiply(&f).unwrap()).unwrap());
    }

    #[test]
    fn coset_weights_are_ordered((idx, e, _) in code_and_pair()) {
        let code = &small_codes()[idx];
        let cz = code.wt_mod_centralizer(&e, Budget::unlimited()).unwrap().bound.value().unwrap();
        let cg = code.wt_mod_group(&e, Budget::unlimited()).unwrap().bound.value().unwrap();
        prop_assert!(cz <= cg && cg <= e.weight());
        let dist = code.code_distance(Budget::unlimited()).bound.value().unwrap();
        if 2 * e.weight() < dist {
            prop_assert_eq!(cz, cg);
        }
    }

    #[test]
    fn expansion_facts_on_random_graphs(shape in 0usize..4, seed in any::<u64>(), size in 1usize..6) {
        let (n, m, dl, k) = [(12, 8, 2, 3), (24, 18, 3, 4), (20, 10, 2, 4), (30, 15, 3, 6)][shape];
        let g = zoo::random_regular_bipartite(n, m, dl, k, seed).unwrap();
        prop_assert_eq!(g.edge_count(), n * dl);
        prop_assert_eq!(g.regular_left_degree(), Some(dl));
        prop_assert_eq!(g.regular_right_degree(), Some(k));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = graph::random_connected_set(&g, &g.qudit_adjacency(), size, &mut rng);
        let st = g.expansion_stats(&set).unwrap();
        if st.expansion_error < 0.5 {
            prop_assert!(st.multi_neighbors as f64 <= 2.0 * st.expansion_error * st.neighbors as f64 + 1e-12);
            let (_, shared) = graph::least_shared_member(&g, &set).unwrap();
            prop_assert!(shared as f64 <= 2.0 * st.expansion_error * dl as f64 + 1e-12);
        }
    }

    #[test]
    fn greedy_independent_sets_meet_density(shape in 0usize..3, seed in any::<u64>(), t in 1usize..4) {
        let (n, m, dl, k) = [(60, 40, 2, 3), (80, 40, 2, 4), (90, 60, 2, 3)][shape];
        let g = zoo::random_regular_bipartite(n, m, dl, k, seed).unwrap();
        let set = graph::greedy_t_independent(&g, t, usize::MAX, seed);
        prop_assert!(!set.is_empty());
        prop_assert!(graph::verify_t_independent(&g, &set.constraints, t));
        if t == k {
            prop_assert!(set.len() as f64 >= graph::independent_set_density(k, dl) * n as f64);
        }
        if t == 1 {
            let all: Vec<usize> = (0..g.num_right()).collect();
            prop_assert!(!graph::verify_t_independent(&g, &all, 1));
        }
    }
}

/// `(n, d)` of each entry of [`small_codes`].
const SHAPES: [(usize, u32); 4] = [(5, 2), (7, 2), (18, 2), (8, 3)];

fn code_and_pair() -> impl Strategy<Value = (usize, PauliOp, PauliOp)> {
    (0..SHAPES.len()).prop_flat_map(|i| {
        let (n, d) = SHAPES[i];
        (Just(i), pauli(n, d), pauli(n, d))
    })
}

#[test]
fn shapes_match_codes() {
    let shapes: Vec<(usize, u32)> = small_codes().iter().map(|c| (c.n(), c.d())).collect();
    assert_eq!(shapes, SHAPES);
}

#[test]
fn every_generator_has_a_non_commuting_partner_on_each_qudit() {
    for code in small_codes() {
        for g in code.generators() {
            for q in g.support() {
                let a = g.symbol(q);
                let partner = code.generators().iter().any(|h| h.symbol(q).commutator(a, code.d()) != 0);
                assert!(partner, "qudit {q} of {g}");
            }
        }
    }
}

#[test]
fn toric_pair_expansion_matches_pair_scan() {
    for l in [3, 4, 5] {
        let code = zoo::toric_code(l).unwrap();
        let g = code.graph();
        let mut worst = 0.0f64;
        for a in 0..code.n() {
            for b in a + 1..code.n() {
                let nb = g.gamma(&[a, b], Side::Right).unwrap().len() as f64;
                worst = worst.max(1.0 - nb / 8.0);
            }
        }
        let est = graph::small_set_expansion_error(g, 2, ExpansionMode::Exhaustive);
        assert!(est.exact);
        assert_eq!(est.epsilon, worst);
        assert_eq!(est.epsilon, 0.25);
    }
}

#[test]
fn single_qudit_sets_never_lose_neighbours() {
    let code = zoo::toric_code(4).unwrap();
    let est = graph::small_set_expansion_error(code.graph(), 1, ExpansionMode::Exhaustive);
    assert_eq!(est.epsilon, 0.0);
}

#[test]
fn qudit_restrictions_cover_the_alphabet() {
    let code = zoo::qudit_toric_code(3, 5).unwrap();
    for q in 0..code.n() {
        let syms: Vec<Symbol> = code.generators().iter().map(|g| g.symbol(q)).filter(|s| !s.is_identity()).collect();
        assert_eq!(syms.len(), code.graph().left_degree(q));
    }
}

#[test]
fn soundness_profiles_are_monotone() {
    for code in small_codes() {
        let cap = code.n().min(4);
        let profile = qltc::adversary::soundness_profile(&code, cap).unwrap();
        assert!(profile.is_monotone(), "{:?}", code.name());
        assert!(profile.rows.iter().all(|r| r.min_penalty > 0));
        assert_eq!(profile.rows[0].weight, 1);
    }
}
