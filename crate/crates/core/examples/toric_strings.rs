//! Open strings violate two checks, contractible loops are stabilizers,
//! and non-contractible loops are logical operators.
//!
//! ```bash
//! cargo run --example toric_strings
//! ```

use qltc::zoo::{self, Lattice, LatticePath};
use qltc::Membership;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let l = 4;
    let code = zoo::toric_code(l)?;
    let paths = [
        (Lattice::Primal, (0, 0), "RRD"),
        (Lattice::Dual, (1, 1), "DL"),
        (Lattice::Primal, (2, 1), "RDLU"),
        (Lattice::Dual, (0, 0), "RRDDLLUU"),
        (Lattice::Primal, (3, 0), "RRRR"),
        (Lattice::Dual, (0, 2), "DDDD"),
    ];
    for (lattice, start, moves) in paths {
        let path = LatticePath::parse(lattice, start, moves)?;
        let e = zoo::string_error(l, 2, &path)?;
        let kind = if !path.is_closed(l) {
            format!("open, penalty {}", code.penalty(&e)?)
        } else if matches!(code.group_contains(&e)?, Membership::Member { .. }) {
            "contractible loop, in the stabilizer group".to_string()
        } else {
            format!("non-contractible loop, logical: {}", code.in_centralizer(&e)?)
        };
        println!("{:<6} {moves:<9} from {start:?}: {kind}", format!("{lattice:?}"));
    }
    Ok(())
}
