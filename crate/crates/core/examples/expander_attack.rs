//! Restrictions of well-separated generators form an error whose relative
//! soundness is at most twice the small-set expansion error.
//!
//! ```bash
//! cargo run --release --example expander_attack
//! ```

use qltc::adversary::{self, AttackContext};
use qltc::graph::{self, ExpansionMode};
use qltc::{zoo, Budget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let code = zoo::toric_code(20)?;
    let ctx = AttackContext::measure(&code, Budget::new(20_000_000));
    let (eps, _) = ctx.epsilon_star.unwrap();
    println!("toric 20x20: eps* = {eps:.4}, distance {:?}", ctx.distance.unwrap());

    println!("{}", adversary::CSV_HEADER);
    for u in 1..=3 {
        let rep = adversary::expander_attack(&code, u as f64 / code.n() as f64, 1, &ctx)?;
        println!("{}", rep.csv_row());
        for c in &rep.preconditions {
            println!("  {}: {:?} ({})", c.name, c.holds, c.detail);
        }
    }

    // The refined attack picks the best position class inside a larger set.
    let set = graph::greedy_t_independent(code.graph(), 1, 6, 1);
    let rep = adversary::refined_expander_attack(&code, &set.constraints, 3.0 / code.n() as f64, &ctx)?;
    println!("refined: r = {:.4}, bound {:?}", rep.r.pessimistic, rep.bound);

    let est = graph::small_set_expansion_error(code.graph(), code.k(), ExpansionMode::Exhaustive);
    println!("worst set: {:?}", est.worst.map(|w| w.set));
    Ok(())
}
