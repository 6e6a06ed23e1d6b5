//! Multiplying Paulis, checking commutation, and the phase convention.
//!
//! ```bash
//! cargo run --example pauli_algebra
//! ```

use qltc::pauli::{count_at_weight, enumerate_by_weight};
use qltc::{PauliOp, Symbol};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = PauliOp::from_qubit_str("XIZ")?;
    let z = PauliOp::from_qubit_str("ZZI")?;
    let xz = x.multiply(&z)?;
    println!("{x} * {z} = {xz}");
    println!("<{x}, {z}> = {}, commute: {}", x.symplectic_product(&z)?, x.commutes_with(&z)?);

    // Qutrit shift and clock on two sites.
    let a = PauliOp::new(3, vec![1, 0], vec![0, 2], 0)?;
    let b = PauliOp::from_sites(2, 3, &[(0, Symbol::new(0, 1)), (1, Symbol::new(1, 1))])?;
    let ab = a.multiply(&b)?;
    let ba = b.multiply(&a)?;
    println!("qutrit: a*b has phase {}, b*a has phase {}", ab.phase(), ba.phase());
    println!("a^3 is identity: {}", a.pow(3).is_identity());
    println!("restriction of b to qudit 1: {:?}", b.restrict_site(1));

    let n = 4;
    let total: usize = enumerate_by_weight(n, 2, 2).count();
    let expected: u128 = (1..=2).map(|w| count_at_weight(n, 2, w)).sum();
    println!("{total} non-identity qubit Paulis of weight <= 2 on {n} qubits (formula: {expected})");
    Ok(())
}
