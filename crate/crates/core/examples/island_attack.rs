//! Monte Carlo errors on isolated islands of a hypergraph-product code.
//!
//! ```bash
//! cargo run --release --example island_attack
//! ```

use qltc::adversary;
use qltc::zoo::{self, Matrix};
use qltc::{BuildOptions, Budget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = Matrix::ring(12, 2);
    let code = zoo::css_hypergraph_product(&ring, &ring, 2, BuildOptions::default())?;
    let stats = adversary::island_attack(&code, 10_000, 7, Budget::new(100_000))?;
    println!("{} islands, |S| = {}, eps(S) = {:.4}", stats.islands.len(), stats.s_size, stats.epsilon_prime);
    println!("histogram {:?}", stats.histogram);
    println!("binomial  {:?}", stats.binomial.iter().map(|p| format!("{p:.4}")).collect::<Vec<_>>());
    println!("chi^2 = {:.3}, p = {:.3}", stats.chi_squared.statistic, stats.chi_squared.p_value);
    println!(
        "per-qudit rate {:.5} (p = {:.5}, sigma = {:.5})",
        stats.empirical_rate, stats.p, stats.rate_sigma
    );
    println!(
        "mean penalty {:.4} +- {:.4}, bound {:.4}",
        stats.mean_penalty, stats.penalty_sem, stats.penalty_bound
    );
    if let Some(best) = stats.best {
        println!("best trial: {}", best.csv_row());
    }
    let gap = adversary::gamma_gap(code.k());
    println!("gamma_gap(k = {}) = {gap}", code.k());
    Ok(())
}
