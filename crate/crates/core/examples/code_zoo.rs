//! Building codes from presets, parity-check matrices and files.
//!
//! ```bash
//! cargo run --example code_zoo
//! ```

use qltc::zoo::{self, CodeSource, Matrix};
use qltc::{BuildOptions, StabilizerCode};

fn describe(name: &str, code: &StabilizerCode) {
    println!(
        "{name:<22} n={:<4} m={:<4} k={} D_L={} rank={} logical={} warnings={}",
        code.n(),
        code.m(),
        code.k(),
        code.left_degree(),
        code.rank(),
        code.logical_qudits(),
        code.warnings().len()
    );
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    describe("toric 4x4", &zoo::toric_code(4)?);
    describe("toric 3x3 over Z_5", &zoo::qudit_toric_code(3, 5)?);
    describe("steane", &zoo::steane_code()?);
    describe("five-qubit", &zoo::five_qubit_code()?);

    let ring = Matrix::ring(6, 3);
    let hgp = zoo::css_hypergraph_product(&ring, &ring, 3, BuildOptions::default())?;
    describe("hgp ring6 x ring6, d=3", &hgp);

    let h = zoo::hamming7();
    let css = zoo::css_code(&h, &h, 2, BuildOptions::default())?;
    describe("css(hamming, hamming)", &css);

    // JSON round trip.
    let json = zoo::toric_code(3)?.to_json();
    let back = StabilizerCode::from_json(&json, BuildOptions::default())?;
    describe("toric 3x3 from json", &back);

    if let CodeSource::Classical(c) = zoo::load_source("classical:random:30,20,2,3,1", BuildOptions::default())? {
        println!("classical expander code: {} bits, {} checks", c.n(), c.m());
        print!("{}", zoo::write_sparse_matrix(c.parity_check()).lines().take(3).collect::<Vec<_>>().join("\n"));
        println!("\n...");
    }
    Ok(())
}
