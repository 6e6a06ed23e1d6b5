//! Dense Hilbert-space checks on small codes.
//!
//! ```bash
//! cargo run --release --example dense_verification
//! ```

use qltc::dense::{self, DenseCode};
use qltc::{zoo, PauliOp};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let steane = zoo::steane_code()?;
    let dense_code = DenseCode::new(&steane)?;
    println!("steane code space: dimension {}", dense_code.code_dimension());

    let eta = dense_code.basis.column(0).into_owned();
    let e = PauliOp::from_qubit_str("XIIIIIZ")?;
    let displaced = dense::densify(&e)?.matrix * eta;
    println!(
        "energy of E|eta> = {:.6}, penalty/m = {:.6}",
        dense_code.mean_energy(&displaced)?,
        steane.penalty(&e)? as f64 / steane.m() as f64
    );

    for (name, code, rho) in [("steane", steane.clone(), 3), ("toric 2x2", zoo::toric_code(2)?, 2)] {
        let rep = dense::verify_code(&code, rho, 50, 1)?;
        println!(
            "{name}: dim {} (expected {}), {} detectability checks, residuals {:.1e} / {:.1e}, passes {}",
            rep.code_dimension,
            rep.expected_code_dimension,
            rep.detectability.checked,
            rep.detectability.max_residual,
            rep.equivalence.energy_residual,
            rep.passes
        );
    }

    match DenseCode::new(&zoo::toric_code(4)?) {
        Err(e) => println!("toric 4x4: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
