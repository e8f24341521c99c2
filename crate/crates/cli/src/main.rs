//! `corner-lab`: command-line access to the corner-core library.
//!
//! Every command prints a single JSON document `{"manifest": …, "report": …}`
//! on stdout. Diagnostics go to stderr. Exit codes: 0 success, 1 failed
//! suite, 2 bad input or violated precondition, 3 internal inconsistency.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use corner_core::battery::{d_parameters, run_battery, BatteryConfig};
use corner_core::classify3::{classify, cross_validate, ClassLabel};
use corner_core::compress::{
    certify_b, certify_c, certify_d, corner_is_algebra, corner_witness, falsify, repro_section2, Require,
};
use corner_core::exactnum::parse_rational;
use corner_core::generators::{parse_family, SampleConfig, PRNG_NAME};
use corner_core::span::SpanJson;
use corner_core::structure::{analyze, StructureSummary};
use corner_core::{Error, GaussianRational, Mat, Span};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "corner-lab", version, about = "Exact experiments on corners of matrix algebras over Q(i)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Sampling {
    #[arg(long, default_value_t = SampleConfig::default().seed)]
    seed: u64,
    /// Idempotents drawn per rank.
    #[arg(long, default_value_t = SampleConfig::default().count)]
    samples: usize,
    /// Bound on numerators and denominators of sampled entries.
    #[arg(long, default_value_t = SampleConfig::default().entry_bound)]
    entry_bound: u64,
}

impl Sampling {
    fn config(self) -> SampleConfig {
        SampleConfig { seed: self.seed, count: self.samples, entry_bound: self.entry_bound }
    }
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Search for an idempotent whose corner is not an algebra.
    Check {
        /// `family:NAME[:PARAMS]`, `@file.json`, or inline `{"n","p","generators"}` JSON.
        #[arg(long)]
        algebra: String,
        #[arg(long, value_parser = parse_mode)]
        mode: Require,
        /// Test this one matrix (JSON rows) instead of sampling.
        #[arg(long)]
        idempotent: Option<String>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Label a unital subalgebra of M_3.
    Classify {
        #[arg(long)]
        algebra: String,
        /// Also run the sampler in both modes and compare with the label.
        #[arg(long)]
        cross_validate: bool,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Block upper triangular form, radical and linked blocks.
    Structure {
        #[arg(long)]
        algebra: String,
        /// Adjoin the identity first.
        #[arg(long)]
        unitize: bool,
    },
    /// Replay the worked examples and certificates.
    Repro {
        #[command(subcommand)]
        which: Repro,
    },
    /// Run the acceptance battery.
    Suite {
        #[arg(long, default_value_t = BatteryConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = BatteryConfig::default().samples)]
        samples: usize,
        #[arg(long, default_value_t = BatteryConfig::default().parameter_sets)]
        parameter_sets: usize,
        #[arg(long, default_value_t = BatteryConfig::default().similarities)]
        similarities: usize,
        #[arg(long, default_value_t = BatteryConfig::default().property_cases)]
        property_cases: usize,
        /// Comma-separated criterion ids; all of them when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Subcommand)]
enum Repro {
    /// The introductory 3×3 counterexample.
    Sec2,
    /// Certificate that `B_st` has a projection corner that is not an algebra.
    #[command(name = "thmB")]
    ThmB {
        #[arg(long)]
        s: GaussianRational,
        #[arg(long)]
        t: GaussianRational,
        /// Real rational; defaults to the smallest positive integer other than s and t.
        #[arg(long)]
        k: Option<String>,
    },
    /// Certificate for `C_r`, `r` nonzero.
    #[command(name = "thmC")]
    ThmC {
        #[arg(long)]
        r: GaussianRational,
    },
    /// Certificate for `D_rst`.
    #[command(name = "thmD")]
    ThmD {
        #[arg(long)]
        r: GaussianRational,
        #[arg(long)]
        s: GaussianRational,
        #[arg(long)]
        t: GaussianRational,
        /// Real rational; `k` and `m` default to the first admissible pair of a fixed scan.
        #[arg(long, requires = "m")]
        k: Option<String>,
        #[arg(long, requires = "k")]
        m: Option<String>,
    },
}

fn parse_mode(s: &str) -> Result<Require, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure of a command, carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure { code: e.exit_code() as u8, message: e.to_string() }
    }
}

fn bad_input(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// Report plus the seed and sample count it depended on, if any.
struct Outcome {
    report: Value,
    seed: Option<u64>,
    samples: Option<usize>,
    /// Nonzero when the report itself records a failure.
    code: u8,
}

impl Outcome {
    fn plain(report: Value) -> Outcome {
        Outcome { report, seed: None, samples: None, code: 0 }
    }
}

fn load_algebra(arg: &str) -> Result<Span, Failure> {
    if let Some(name) = arg.strip_prefix("family:") {
        return Ok(parse_family(name)?.span);
    }
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| bad_input(format!("cannot read {path}: {e}")))?,
        None => arg.to_string(),
    };
    let json: SpanJson = serde_json::from_str(&text).map_err(|e| bad_input(format!("algebra JSON: {e}")))?;
    Ok(Span::try_from(json)?)
}

fn manifest(seed: Option<u64>, samples: Option<usize>, started: Instant) -> Value {
    json!({
        "command_line": std::env::args().collect::<Vec<_>>(),
        "seed": seed,
        "samples": samples,
        "version": env!("CARGO_PKG_VERSION"),
        "prng": PRNG_NAME,
        "duration_ms": started.elapsed().as_millis() as u64,
    })
}

fn label_fields(label: &ClassLabel) -> Value {
    json!({
        "tag": label.tag,
        "compressible": label.compressible,
        "transposed": label.transposed,
        "block_dims": label.evidence.block_dims,
        "radical_dim": label.evidence.radical_dim,
        "linked_partition": label.evidence.linked_partition,
    })
}

fn check(algebra: &str, mode: Require, idempotent: Option<&str>, sampling: Sampling) -> Result<Outcome, Failure> {
    let span = load_algebra(algebra)?;
    if let Some(text) = idempotent {
        let e: Mat = serde_json::from_str(text).map_err(|e| bad_input(format!("--idempotent: {e}")))?;
        let closed = corner_is_algebra(&span, &e, mode)?;
        let witness = if closed { None } else { corner_witness(&span, &e)? };
        return Ok(Outcome::plain(json!({
            "mode": mode,
            "e": e,
            "corner_is_algebra": closed,
            "witness_product": witness,
        })));
    }
    let cfg = sampling.config();
    let report = falsify(&span, mode, &cfg)?;
    Ok(Outcome { report: json!(report), seed: Some(cfg.seed), samples: Some(cfg.count), code: 0 })
}

fn classify_cmd(algebra: &str, validate: bool, sampling: Sampling) -> Result<Outcome, Failure> {
    let span = load_algebra(algebra)?;
    if !validate {
        return Ok(Outcome::plain(label_fields(&classify(&span)?)));
    }
    let cfg = sampling.config();
    let cv = cross_validate(&span, &cfg)?;
    let mut report = label_fields(&cv.label);
    report["cross_validation"] = json!({
        "agrees": cv.agrees,
        "idempotent": cv.idempotent,
        "projection": cv.projection,
    });
    if !cv.agrees {
        eprintln!("error: sampler verdicts contradict the label {}", cv.label.tag);
    }
    let code = if cv.agrees { 0 } else { 3 };
    Ok(Outcome { report, seed: Some(cfg.seed), samples: Some(cfg.count), code })
}

fn structure(algebra: &str, unitize: bool) -> Result<Outcome, Failure> {
    let mut span = load_algebra(algebra)?;
    if unitize {
        span = span.unitize()?;
    }
    let summary = StructureSummary::from(&analyze(&span)?);
    Ok(Outcome::plain(json!(summary)))
}

fn repro(which: Repro) -> Result<Outcome, Failure> {
    let report = match which {
        Repro::Sec2 => json!(repro_section2()?),
        Repro::ThmB { s, t, k } => {
            let k = match k {
                Some(text) => parse_rational(&text).map_err(|e| bad_input(format!("--k: {e}")))?,
                None => (1..)
                    .map(|n: i64| parse_rational(&n.to_string()).expect("integer literal"))
                    .find(|k| GaussianRational::real(k.clone()) != s && GaussianRational::real(k.clone()) != t)
                    .expect("only two values are excluded"),
            };
            json!(certify_b(&s, &t, &k)?)
        }
        Repro::ThmC { r } => json!(certify_c(&r)?),
        Repro::ThmD { r, s, t, k, m } => {
            let (k, m) = match (k, m) {
                (Some(k), Some(m)) => (
                    parse_rational(&k).map_err(|e| bad_input(format!("--k: {e}")))?,
                    parse_rational(&m).map_err(|e| bad_input(format!("--m: {e}")))?,
                ),
                _ => d_parameters(&r, &s, &t)
                    .ok_or_else(|| bad_input("no admissible (k, m) in the default scan; pass --k and --m"))?,
            };
            json!(certify_d(&r, &s, &t, &k, &m)?)
        }
    };
    Ok(Outcome::plain(report))
}

fn suite(cfg: BatteryConfig, only: &[u32]) -> Outcome {
    let results = run_battery(&cfg, only);
    for r in &results {
        eprintln!("{}", r.line());
    }
    let passed = results.iter().all(|r| r.passed());
    Outcome {
        report: json!({ "config": cfg, "passed": passed, "criteria": results }),
        seed: Some(cfg.seed),
        samples: Some(cfg.samples),
        code: if passed { 0 } else { 1 },
    }
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Check { algebra, mode, idempotent, sampling } => check(&algebra, mode, idempotent.as_deref(), sampling),
        Command::Classify { algebra, cross_validate, sampling } => classify_cmd(&algebra, cross_validate, sampling),
        Command::Structure { algebra, unitize } => structure(&algebra, unitize),
        Command::Repro { which } => repro(which),
        Command::Suite { seed, samples, parameter_sets, similarities, property_cases, only } => {
            let cfg = BatteryConfig { seed, samples, parameter_sets, similarities, property_cases };
            Ok(suite(cfg, &only))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(cli.command) {
        Ok(out) => {
            let doc = json!({ "manifest": manifest(out.seed, out.samples, started), "report": out.report });
            let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
            // A closed pipe (e.g. `| head`) is not an error of the command.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
