//! Exact minimum penalty for each coset weight, by exhaustive enumeration.
//!
//! ```bash
//! cargo run --example soundness_profile
//! ```

use qltc::adversary::{self, AttackContext};
use qltc::{zoo, Budget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let code = zoo::steane_code()?;
    let profile = adversary::soundness_profile(&code, code.n())?;
    println!("weight,delta,R,r,witness");
    for row in &profile.rows {
        println!("{},{:.4},{:.4},{:.4},{}", row.weight, row.delta, row.big_r, row.r, row.witness);
    }
    println!("monotone: {}", profile.is_monotone());

    let ctx = AttackContext::measure(&code, Budget::default());
    let rep = adversary::expander_attack(&code, 1.0 / 7.0, 0, &ctx)?;
    let oracle = profile.row(1).unwrap();
    println!("expander attack r = {:.4} against oracle minimum {:.4}", rep.r.pessimistic, oracle.r);
    Ok(())
}
