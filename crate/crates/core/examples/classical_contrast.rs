//! Classical expander codes are sound: every small bit set violates at
//! least a (1 - 3 eps) fraction of its checks.
//!
//! ```bash
//! cargo run --release --example classical_contrast
//! ```

use qltc::zoo;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for seed in 0..3 {
        let g = zoo::random_regular_bipartite(48, 36, 3, 4, seed)?;
        let code = zoo::classical_expander_code(g);
        let rep = zoo::classical_soundness_check(&code, 3, seed);
        let mins: Vec<String> = rep
            .min_r_by_size
            .iter()
            .map(|r| r.map_or("-".into(), |r| format!("{r:.3}")))
            .collect();
        println!(
            "seed {seed}: {} sets, min r by size {:?}, all bounds hold: {}",
            rep.sets_examined, mins, rep.all_hold
        );
    }
    Ok(())
}
