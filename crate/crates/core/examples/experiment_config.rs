//! Driving the command-line layer from code: a saved experiment config and
//! the report envelope it produces.
//!
//! ```bash
//! cargo run --example experiment_config
//! ```

use qltc::cli::{self, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig::parse(
        r#"{
            "schema": "qltc.config/1",
            "source": "toric:8",
            "attack_kind": "expander",
            "attack": { "delta": 0.01, "seed": 4 }
        }"#,
    )?;
    let out = cli::cmd_attack(cfg.source.as_deref().unwrap(), cfg.attack_kind.unwrap(), &cfg.attack.unwrap())?;
    println!("exit code {}", out.exit_code);
    println!("{}", out.csv.unwrap_or_default());
    println!("r = {}", out.report["result"]["r"]);

    let bad = ExperimentConfig::parse(r#"{"schema": "qltc.config/1", "sed": 4}"#);
    println!("misspelt key: {}", bad.unwrap_err());

    // The same run through argument parsing.
    let code = cli::run(["qltc", "analyze", "steane", "--distance", "--succinct"]);
    println!("exit code {code}");
    Ok(())
}
