//! The `qltc` command line: argument parsing, experiment configs, report
//! envelopes and CSV tables.
//!
//! Exit codes: `0` for success or a refusal that still produced a report,
//! `1` for invalid input, `2` when a checked invariant fails.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::adversary::{self, AttackContext, AttackReport, CSV_HEADER};
use crate::code::{BuildOptions, StabilizerCode};
use crate::dense;
use crate::graph::{self, ExpansionMode};
use crate::search::{Budget, Exactness, Succinctness};
use crate::zoo::{self, ClassicalParityCode, CodeSource, CLASSICAL_SCAN_LIMIT};

pub const REPORT_SCHEMA: &str = "qltc.report/1";
pub const CONFIG_SCHEMA: &str = "qltc.config/1";
pub const WORKERS_ENV: &str = "QLTC_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "qltc", version, about = "Build, analyse, attack and verify stabilizer codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON experiment config; its values take precedence over flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    /// Write the CSV table here.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or ingest a code and validate it.
    Build {
        /// Preset such as `toric:4`, `steane`, `hgp:ring12,ring12`, or a code file.
        source: Option<String>,
        #[command(flatten)]
        options: BuildArgs,
    },
    /// Distance, succinctness, expansion and soundness profile.
    Analyze {
        /// Preset such as `toric:4`, `steane`, `hgp:ring12,ring12`, or a code file.
        source: Option<String>,
        #[command(flatten)]
        options: AnalyzeArgs,
    },
    /// Run one adversarial construction.
    Attack {
        /// Preset such as `toric:4`, `steane`, `hgp:ring12,ring12`, or a code file.
        source: Option<String>,
        kind: Option<AttackKind>,
        #[command(flatten)]
        options: AttackArgs,
    },
    /// Dense Hilbert-space verification.
    Verify {
        /// Preset such as `toric:4`, `steane`, `hgp:ring12,ring12`, or a code file.
        source: Option<String>,
        #[command(flatten)]
        options: VerifyArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackKind {
    Expander,
    Refined,
    Alphabet,
    Island,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildArgs {
    /// Reject codes whose qudits have unequal degree.
    #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub strict_degree: Option<bool>,
    /// Accept generators of differing weight.
    #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub allow_nonuniform: Option<bool>,
    /// Where to write the code file.
    #[arg(long)]
    pub code_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeArgs {
    #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub distance: Option<bool>,
    #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub succinct: Option<bool>,
    #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub expansion: Option<bool>,
    /// Largest set size for the expansion scan (default `k`).
    #[arg(long)]
    pub sets: Option<usize>,
    /// Sample this many sets instead of scanning exhaustively.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub profile: Option<bool>,
    /// Weight cap for the soundness profile and the classical scan.
    #[arg(long)]
    pub wcap: Option<usize>,
    /// Classical bit-set soundness scan (classical sources only).
    #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub soundness: Option<bool>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Candidate budget for each search.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackArgs {
    /// Target fraction of attacked qudits.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Monte Carlo trials for the island attack.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Required for the island attack.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Candidate budget for each search.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    /// Detectability radius (default: the code distance).
    #[arg(long)]
    pub rho: Option<usize>,
    /// Random states for the energy equivalence check.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub report: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

/// A saved experiment. Unknown keys are rejected.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: String,
    pub source: Option<String>,
    pub attack_kind: Option<AttackKind>,
    pub build: Option<BuildArgs>,
    pub analyze: Option<AnalyzeArgs>,
    pub attack: Option<AttackArgs>,
    pub verify: Option<VerifyArgs>,
    pub output: Option<OutputConfig>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| CliError::input(format!("config: {e}")))?;
        if cfg.schema != CONFIG_SCHEMA {
            return Err(CliError::input(format!(
                "config: schema is {:?}, expected {CONFIG_SCHEMA:?}",
                cfg.schema
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

macro_rules! overlay {
    ($base:expr, $over:expr, $($field:ident),+) => {{
        let mut b = $base;
        if let Some(o) = $over {
            $( if o.$field.is_some() { b.$field = o.$field; } )+
        }
        b
    }};
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            exit_code: 1,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// A finished command: the JSON report, an optional CSV table and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub csv: Option<String>,
    pub exit_code: i32,
}

fn envelope(command: &str, source: &str, body: Value) -> Value {
    let mut out = json!({
        "schema": REPORT_SCHEMA,
        "command": command,
        "source": source,
    });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    out
}

fn labeled<T: Serialize>(value: T, exactness: Exactness) -> Value {
    json!({ "value": value, "exactness": exactness })
}

fn code_summary(code: &StabilizerCode) -> Value {
    json!({
        "n": code.n(),
        "m": code.m(),
        "k": code.k(),
        "d": code.d(),
        "rank": labeled(code.rank(), Exactness::Exact),
        "logical_qudits": labeled(code.logical_qudits(), Exactness::Exact),
        "left_degree": code.left_degree(),
        "degree_regular": code.is_degree_regular(),
        "locality_uniform": code.is_locality_uniform(),
        "css": code.css().is_some(),
        "warnings": code.warnings(),
    })
}

fn classical_summary(code: &ClassicalParityCode) -> Value {
    let g = code.graph();
    json!({
        "n": code.n(),
        "m": code.m(),
        "left_degree": g.max_left_degree(),
        "right_degree": g.max_right_degree(),
        "regular": g.regular_left_degree().is_some() && g.regular_right_degree().is_some(),
    })
}

fn build_options(args: &BuildArgs) -> BuildOptions {
    BuildOptions {
        strict_degree: args.strict_degree.unwrap_or(false),
        allow_nonuniform_locality: args.allow_nonuniform.unwrap_or(false),
    }
}

fn load(source: &str, options: BuildOptions) -> Result<CodeSource, CliError> {
    zoo::load_source(source, options).map_err(|e| CliError::input(format!("{source}: {e}")))
}

fn load_quantum(source: &str) -> Result<StabilizerCode, CliError> {
    match load(source, BuildOptions::default())? {
        CodeSource::Quantum(c) => Ok(c),
        CodeSource::Classical(_) => Err(CliError::input(format!("{source}: a quantum code is required"))),
    }
}

fn budget(b: Option<u64>) -> Budget {
    b.map(Budget::new).unwrap_or_default()
}

pub fn cmd_build(source: &str, args: &BuildArgs) -> Result<Outcome, CliError> {
    let loaded = load(source, build_options(args))?;
    let (summary, file_text) = match &loaded {
        CodeSource::Quantum(code) => (
            json!({ "kind": "quantum", "code": code_summary(code) }),
            serde_json::to_string_pretty(&code.to_json()).expect("serialisable"),
        ),
        CodeSource::Classical(code) => (
            json!({ "kind": "classical", "code": classical_summary(code) }),
            zoo::write_sparse_matrix(code.parity_check()),
        ),
    };
    let mut body = summary;
    match &args.code_out {
        Some(path) => {
            fs::write(path, file_text + "\n").map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            body["code_file"] = json!(path.display().to_string());
        }
        None if matches!(loaded, CodeSource::Quantum(_)) => {
            body["code_json"] = serde_json::from_str(&file_text).expect("round trip");
        }
        None => body["parity_check"] = json!(file_text),
    }
    body["valid"] = json!(true);
    Ok(Outcome {
        report: envelope("build", source, body),
        csv: None,
        exit_code: 0,
    })
}

fn expansion_value(graph: &graph::BipartiteGraph, cap: usize, args: &AnalyzeArgs) -> Result<Value, CliError> {
    let mode = match args.samples {
        Some(samples) => {
            let seed = args
                .seed
                .ok_or_else(|| CliError::input("--seed is required when the expansion scan is sampled"))?;
            ExpansionMode::Sampled { samples, seed }
        }
        None => ExpansionMode::Exhaustive,
    };
    let est = graph::small_set_expansion_error(graph, cap, mode);
    let exactness = if est.exact { Exactness::Exact } else { Exactness::Sampled };
    Ok(json!({
        "size_cap": cap,
        "epsilon": labeled(est.epsilon, exactness),
        "worst": est.worst,
        "sets_examined": est.sets_examined,
        "warning": est.warning,
    }))
}

pub fn cmd_analyze(source: &str, args: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let loaded = load(source, BuildOptions::default())?;
    let mut body = serde_json::Map::new();
    let mut csv = None;
    match &loaded {
        CodeSource::Classical(code) => {
            body.insert("code".into(), classical_summary(code));
            if args.expansion == Some(true) {
                let cap = args.sets.unwrap_or(3);
                body.insert("expansion".into(), expansion_value(code.graph(), cap, args)?);
            }
            if args.soundness == Some(true) {
                let cap = args.wcap.unwrap_or(3).min(code.n());
                let total: u128 = (1..=cap).map(|w| crate::pauli::binomial(code.n(), w)).sum();
                let seed = match args.seed {
                    Some(s) => s,
                    None if total <= CLASSICAL_SCAN_LIMIT => 0,
                    None => return Err(CliError::input("--seed is required: the classical scan would be sampled")),
                };
                let rep = zoo::classical_soundness_check(code, cap, seed);
                let exactness = if rep.exhaustive { Exactness::Exact } else { Exactness::Sampled };
                body.insert("soundness".into(), json!({ "exactness": exactness, "result": rep }));
            }
        }
        CodeSource::Quantum(code) => {
            body.insert("code".into(), code_summary(code));
            let b = budget(args.budget);
            if args.distance == Some(true) {
                body.insert("distance".into(), serde_json::to_value(code.code_distance(b)).expect("serialisable"));
            }
            if args.succinct == Some(true) {
                let s = code.is_succinct(b);
                let exactness = match s {
                    Succinctness::Unknown { .. } => Exactness::Interval,
                    _ => Exactness::Exact,
                };
                body.insert("succinct".into(), json!({ "exactness": exactness, "result": s }));
            }
            if args.expansion == Some(true) {
                let cap = args.sets.unwrap_or(code.k());
                body.insert("expansion".into(), expansion_value(code.graph(), cap, args)?);
            }
            if args.profile == Some(true) {
                let cap = args.wcap.unwrap_or(2);
                match adversary::soundness_profile(code, cap) {
                    Ok(p) => {
                        let mut table = String::from("weight,delta,R,r\n");
                        for r in &p.rows {
                            table.push_str(&format!("{},{},{},{}\n", r.weight, r.delta, r.big_r, r.r));
                        }
                        csv = Some(table);
                        body.insert(
                            "profile".into(),
                            json!({ "exactness": Exactness::Exact, "monotone": p.is_monotone(), "result": p }),
                        );
                    }
                    Err(e) => {
                        body.insert("profile".into(), json!({ "refused": e.to_string() }));
                    }
                }
            }
        }
    }
    Ok(Outcome {
        report: envelope("analyze", source, Value::Object(body)),
        csv,
        exit_code: 0,
    })
}

fn attack_body(report: &AttackReport) -> Value {
    let mut v = serde_json::to_value(report).expect("serialisable");
    v["csv_row"] = json!(report.csv_row());
    v
}

fn breach(report: &AttackReport) -> bool {
    report.preconditions_hold() && report.bound.as_ref().is_some_and(|b| !b.holds)
}

pub fn cmd_attack(source: &str, kind: AttackKind, args: &AttackArgs) -> Result<Outcome, CliError> {
    let code = load_quantum(source)?;
    let b = budget(args.budget);
    let seed = args.seed;
    let need_delta = || args.delta.ok_or_else(|| CliError::input("--delta is required for this attack"));
    let fail = |e: adversary::AttackError| CliError::input(e.to_string());
    let (body, row, exit_code) = match kind {
        AttackKind::Island => {
            let seed = seed.ok_or_else(|| CliError::input("--seed is required for the island attack"))?;
            let trials = args.trials.unwrap_or(1000);
            let stats = adversary::island_attack(&code, trials, seed, b).map_err(fail)?;
            let row = stats.best.as_ref().map(|r| r.csv_row());
            let mut v = serde_json::to_value(&stats).expect("serialisable");
            v["exactness"] = json!(Exactness::Sampled);
            (json!({ "attack": "island", "result": v }), row, 0)
        }
        _ => {
            let delta = need_delta()?;
            let seed = seed.unwrap_or(0);
            let ctx = AttackContext::measure(&code, b);
            let report = match kind {
                AttackKind::Expander => adversary::expander_attack(&code, delta, seed, &ctx),
                AttackKind::Alphabet => adversary::alphabet_attack(&code, delta, seed, &ctx),
                _ => {
                    let u = graph::greedy_t_independent(code.graph(), 1, usize::MAX, seed);
                    adversary::refined_expander_attack(&code, &u.constraints, delta, &ctx)
                }
            }
            .map_err(fail)?;
            let exit = if breach(&report) { 2 } else { 0 };
            let eps = ctx.epsilon_star.map(|(e, exact)| {
                labeled(e, if exact { Exactness::Exact } else { Exactness::Sampled })
            });
            let row = report.csv_row();
            (
                json!({
                    "attack": report.attack,
                    "epsilon_star": eps,
                    "distance": ctx.distance,
                    "result": attack_body(&report),
                }),
                Some(row),
                exit,
            )
        }
    };
    Ok(Outcome {
        report: envelope("attack", source, body),
        csv: row.map(|r| format!("{CSV_HEADER}\n{r}\n")),
        exit_code,
    })
}

pub fn cmd_verify(source: &str, args: &VerifyArgs) -> Result<Outcome, CliError> {
    let code = load_quantum(source)?;
    if let Err(e) = dense::dimension(code.n(), code.d()) {
        return Ok(Outcome {
            report: envelope("verify", source, json!({ "refused": true, "reason": e.to_string() })),
            csv: None,
            exit_code: 0,
        });
    }
    let rho = match args.rho {
        Some(r) => r,
        None => code.code_distance(Budget::default()).bound.lower().min(code.n()),
    };
    let samples = args.samples.unwrap_or(50);
    let seed = args.seed.unwrap_or(0);
    let report = dense::verify_code(&code, rho, samples, seed).map_err(|e| CliError::input(e.to_string()))?;
    let exit_code = if report.passes { 0 } else { 2 };
    let mut v = serde_json::to_value(&report).expect("serialisable");
    v["exactness"] = json!({ "tolerance": dense::TOLERANCE, "energy_samples": Exactness::Sampled, "detectability": Exactness::Exact });
    Ok(Outcome {
        report: envelope("verify", source, json!({ "refused": false, "result": v })),
        csv: None,
        exit_code,
    })
}

fn configure_workers() -> Result<(), CliError> {
    if let Ok(value) = std::env::var(WORKERS_ENV) {
        let n: usize = value
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::input(format!("{WORKERS_ENV} must be a positive integer, got {value:?}")))?;
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn require_source(cli: Option<String>, cfg: &Option<ExperimentConfig>) -> Result<String, CliError> {
    cfg.as_ref()
        .and_then(|c| c.source.clone())
        .or(cli)
        .ok_or_else(|| CliError::input("a code source is required"))
}

/// Parses arguments, merges the config file, and runs the command.
pub fn execute(cli: Cli) -> Result<(Outcome, Option<PathBuf>, Option<PathBuf>), CliError> {
    configure_workers()?;
    let cfg = cli.config.as_deref().map(ExperimentConfig::load).transpose()?;
    let output = cfg.as_ref().and_then(|c| c.output.clone()).unwrap_or_default();
    let out = output.report.or(cli.out);
    let csv = output.csv.or(cli.csv);
    let outcome = match cli.command {
        Command::Build { source, options } => {
            let source = require_source(source, &cfg)?;
            let o = overlay!(options, cfg.as_ref().and_then(|c| c.build.clone()), strict_degree, allow_nonuniform, code_out);
            cmd_build(&source, &o)?
        }
        Command::Analyze { source, options } => {
            let source = require_source(source, &cfg)?;
            let o = overlay!(
                options,
                cfg.as_ref().and_then(|c| c.analyze.clone()),
                distance,
                succinct,
                expansion,
                sets,
                samples,
                profile,
                wcap,
                soundness,
                seed,
                budget
            );
            cmd_analyze(&source, &o)?
        }
        Command::Attack { source, kind, options } => {
            let source = require_source(source, &cfg)?;
            let kind = cfg
                .as_ref()
                .and_then(|c| c.attack_kind)
                .or(kind)
                .ok_or_else(|| CliError::input("an attack kind is required"))?;
            let o = overlay!(options, cfg.as_ref().and_then(|c| c.attack.clone()), delta, trials, seed, budget);
            cmd_attack(&source, kind, &o)?
        }
        Command::Verify { source, options } => {
            let source = require_source(source, &cfg)?;
            let o = overlay!(options, cfg.as_ref().and_then(|c| c.verify.clone()), rho, samples, seed);
            cmd_verify(&source, &o)?
        }
    };
    Ok((outcome, out, csv))
}

/// Entry point for the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok((outcome, out, csv)) => {
            let text = serde_json::to_string_pretty(&outcome.report).expect("serialisable") + "\n";
            let written = match &out {
                Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 1;
            }
            if let (Some(path), Some(table)) = (&csv, &outcome.csv) {
                if let Err(e) = fs::write(path, table) {
                    eprintln!("error: {}: {e}", path.display());
                    return 1;
                }
            }
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_unknown_keys() {
        let err = ExperimentConfig::parse(r#"{"schema":"qltc.config/1","sauce":"toric:2"}"#).unwrap_err();
        assert_eq!(err.exit_code, 1);
        assert!(ExperimentConfig::parse(r#"{"schema":"qltc.config/9"}"#).is_err());
        let cfg = ExperimentConfig::parse(r#"{"schema":"qltc.config/1","attack":{"delta":0.1,"seed":3}}"#).unwrap();
        assert_eq!(cfg.attack.unwrap().seed, Some(3));
    }

    #[test]
    fn config_overrides_flags() {
        let flags = AttackArgs {
            delta: Some(0.5),
            trials: Some(10),
            seed: None,
            budget: None,
        };
        let over = Some(AttackArgs {
            delta: Some(0.25),
            ..Default::default()
        });
        let merged = overlay!(flags, over, delta, trials, seed, budget);
        assert_eq!(merged.delta, Some(0.25));
        assert_eq!(merged.trials, Some(10));
    }

    #[test]
    fn build_reports_rank() {
        let out = cmd_build("toric:3", &BuildArgs::default()).unwrap();
        assert_eq!(out.report["code"]["rank"]["value"], 16);
        assert_eq!(out.report["schema"], REPORT_SCHEMA);
    }

    #[test]
    fn verify_refuses_large_codes() {
        let out = cmd_verify("toric:4", &VerifyArgs::default()).unwrap();
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.report["refused"], true);
    }

    #[test]
    fn island_requires_seed() {
        let err = cmd_attack("toric:3", AttackKind::Island, &AttackArgs::default()).unwrap_err();
        assert_eq!(err.exit_code, 1);
    }
}
