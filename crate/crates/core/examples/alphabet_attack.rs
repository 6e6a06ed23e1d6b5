//! The majority-restriction attack and the alphabet bound 1 - 1/(d^2 - 1).
//!
//! ```bash
//! cargo run --release --example alphabet_attack
//! ```

use qltc::adversary::{self, AttackContext};
use qltc::{zoo, Budget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = AttackContext::new(Budget::new(5_000_000));
    for d in [2, 3, 5] {
        let code = zoo::qudit_toric_code(16, d)?;
        let maj = adversary::majority_restriction(&code, 0);
        println!(
            "d={d}: MAJ(0) = {:?}, {} of {} restrictions do not commute with it",
            maj.symbol, maj.non_commuting, maj.degree
        );
        let rep = adversary::alphabet_attack(&code, 2.0 / code.n() as f64, 0, &ctx)?;
        println!("  r = {:.4} <= alpha = {:.4}: {}", rep.r.pessimistic, adversary::alphabet_bound(d), rep.bound.unwrap().holds);
    }
    Ok(())
}
