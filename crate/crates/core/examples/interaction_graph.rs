//! The qudit/generator interaction graph: neighbourhoods, small-set
//! expansion and t-independent generator sets.
//!
//! ```bash
//! cargo run --example interaction_graph
//! ```

use qltc::graph::{self, ExpansionMode};
use qltc::{zoo, Side};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let code = zoo::toric_code(6)?;
    let g = code.graph();
    println!("toric 6x6: {} qudits, {} generators, {} edges", g.num_left(), g.num_right(), g.edge_count());
    println!("Gamma({{0}}) = {:?}", g.gamma(&[0], Side::Right)?);
    let (two_hop, side) = g.gamma_iter(&[0], Side::Right, 2)?;
    println!("Gamma^2({{0}}) has {} {side:?} vertices", two_hop.len());

    for cap in 1..=4 {
        let est = graph::small_set_expansion_error(g, cap, ExpansionMode::Exhaustive);
        println!("eps*(|S| <= {cap}) = {:.4} over {} connected sets", est.epsilon, est.sets_examined);
    }
    let sampled = graph::small_set_expansion_error(g, 6, ExpansionMode::Sampled { samples: 20_000, seed: 3 });
    println!("sampled lower bound for |S| <= 6: {:.4}", sampled.epsilon);

    for t in 1..=2 {
        let set = graph::greedy_t_independent(g, t, usize::MAX, 0);
        println!(
            "greedy {t}-independent set: {} generators, verified {}",
            set.len(),
            graph::verify_t_independent(g, &set.constraints, t)
        );
    }

    let random = zoo::random_regular_bipartite(40, 20, 3, 6, 9)?;
    let est = graph::small_set_expansion_error(&random, 3, ExpansionMode::Exhaustive);
    println!("random (3,6)-regular graph on 40 bits: eps*(|S| <= 3) = {:.4}", est.epsilon);
    println!("{}", &random.to_dot()[..60]);
    Ok(())
}
