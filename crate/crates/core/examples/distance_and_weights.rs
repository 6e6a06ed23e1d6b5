//! Code distance, weights modulo the group and the centralizer, and
//! succinctness.
//!
//! ```bash
//! cargo run --example distance_and_weights
//! ```

use qltc::zoo;
use qltc::{Budget, PauliOp, Succinctness};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for l in 2..=4 {
        let code = zoo::toric_code(l)?;
        let rep = code.code_distance(Budget::default());
        println!("toric {l}x{l}: distance {:?} via {:?} ({} candidates)", rep.bound, rep.method, rep.candidates);
    }
    let steane = zoo::steane_code()?;
    println!("steane: distance {:?}", steane.code_distance(Budget::default()).bound);

    let five = zoo::five_qubit_code()?;
    let e = PauliOp::from_qubit_str("XXZII")?;
    let cz = five.wt_mod_centralizer(&e, Budget::default())?;
    let cg = five.wt_mod_group(&e, Budget::default())?;
    println!("{e}: weight {}, mod centralizer {:?}, mod group {:?}", e.weight(), cz.bound, cg.bound);
    if let Some(w) = cz.witness {
        println!("  lightest equivalent error: {w}");
    }

    // A tight budget turns exact answers into certified intervals.
    let toric = zoo::toric_code(4)?;
    let tight = toric.code_distance(Budget::new(50));
    println!("toric 4x4 with a 50-candidate budget: {:?}", tight.bound);

    match toric.is_succinct(Budget::default()) {
        Succinctness::Succinct => println!("toric 4x4 is succinct"),
        other => println!("toric 4x4: {other:?}"),
    }
    Ok(())
}
