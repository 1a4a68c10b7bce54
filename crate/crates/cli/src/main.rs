//! `flagcert`: seeded verification campaigns, witness re-verification and
//! dumps of the model data.
//!
//! Exit codes: 0 pass, 1 check failure, 2 usage or parse error, 3 internal
//! error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use flagcert_core::campaign::{self, CampaignConfig, CampaignError, CaseName};
use flagcert_core::forms::StandardModel;
use flagcert_core::octonions;
use flagcert_core::serial::matrix_to_json;
use flagcert_core::witnesses::Witness;
use serde_json::{json, Value};

const PASS: u8 = 0;
const CHECK_FAILED: u8 = 1;
const USAGE: u8 = 2;
const INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "flagcert",
    version,
    about = "Exact certificates for the exceptional flag domains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the seeded verification campaign of one model case.
    Verify {
        /// projective-split, projective-pq, quadric7 or isotropic
        case: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long, default_value_t = CampaignConfig::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Entry bound B for sampled integer data.
        #[arg(long, default_value_t = CampaignConfig::DEFAULT_BOUND)]
        bound: i64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Stop at the first failing check.
        #[arg(long)]
        strict: bool,
    },
    /// Witness files.
    Witness {
        #[command(subcommand)]
        command: WitnessCommand,
    },
    /// Print model data as JSON.
    Dump {
        #[command(subcommand)]
        command: DumpCommand,
    },
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// Re-verify a serialized witness from scratch.
    Verify { file: PathBuf },
}

#[derive(Subcommand)]
enum DumpCommand {
    /// Structure constants of the split octonions.
    OctonionTable,
    /// Forms and structure maps of a model case.
    Model {
        case: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { PASS });
        }
    };
    ExitCode::from(match cli.command {
        Command::Verify {
            case,
            n,
            p,
            q,
            samples,
            seed,
            bound,
            out,
            strict,
        } => verify(&case, n, p, q, samples, seed, bound, out, strict),
        Command::Witness {
            command: WitnessCommand::Verify { file },
        } => verify_witness(&file),
        Command::Dump {
            command: DumpCommand::OctonionTable,
        } => emit(&octonion_table()),
        Command::Dump {
            command: DumpCommand::Model { case, n, p, q },
        } => match model_config(&case, n, p, q) {
            Ok(cfg) => emit(&model_json(&cfg.model())),
            Err(e) => usage(e),
        },
    })
}

fn usage(e: impl std::fmt::Display) -> u8 {
    eprintln!("error: {e}");
    USAGE
}

fn model_config(
    case: &str,
    n: Option<usize>,
    p: Option<usize>,
    q: Option<usize>,
) -> anyhow::Result<CampaignConfig> {
    let case: CaseName = case.parse()?;
    Ok(CampaignConfig::resolve(case, n, p, q)?)
}

#[allow(clippy::too_many_arguments)]
fn verify(
    case: &str,
    n: Option<usize>,
    p: Option<usize>,
    q: Option<usize>,
    samples: usize,
    seed: u64,
    bound: i64,
    out: Option<PathBuf>,
    strict: bool,
) -> u8 {
    let cfg = model_config(case, n, p, q).and_then(|c| {
        Ok(c.with_samples(samples)?
            .with_bound(bound)?
            .with_seed(seed)
            .with_strict(strict))
    });
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let report = match campaign::run_campaign(&cfg) {
        Ok(r) => r,
        Err(CampaignError::Config(e)) => return usage(e),
        Err(e) => {
            eprintln!("internal error: {e}");
            return INTERNAL;
        }
    };
    let text = report.to_json_string();
    let written = match &out {
        Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("writing the report"),
    };
    if let Err(e) = written {
        eprintln!("internal error: {e:#}");
        return INTERNAL;
    }
    let s = report.summary;
    eprintln!(
        "{}: {} passed, {} failed, {} skipped",
        cfg.case, s.pass, s.fail, s.skipped
    );
    if report.passed() {
        PASS
    } else {
        CHECK_FAILED
    }
}

fn verify_witness(file: &PathBuf) -> u8 {
    let text = match fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return usage(format!("{}: {e}", file.display())),
    };
    let value: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return usage(format!("{}: {e}", file.display())),
    };
    match Witness::from_json(&value) {
        Ok(w) if w.verified => {
            println!(
                "ok: {} witness in {} re-verifies",
                w.claim.kind(),
                w.group.name()
            );
            PASS
        }
        Ok(w) => {
            let violations = w.group.violations(&w.element).unwrap_or_default();
            println!(
                "FAILED: {} witness in {} does not re-verify (group constraints violated: {:?}; claim holds: {})",
                w.claim.kind(),
                w.group.name(),
                violations,
                w.claim.holds(&w.element)
            );
            CHECK_FAILED
        }
        Err(e) => usage(format!("{}: {e}", file.display())),
    }
}

fn emit(v: &Value) -> u8 {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    match std::io::stdout().write_all(s.as_bytes()) {
        Ok(()) => PASS,
        Err(e) => {
            eprintln!("internal error: {e}");
            INTERNAL
        }
    }
}

fn octonion_table() -> Value {
    let a = octonions::split_octonions();
    json!({
        "basis": ["e0", "e1", "e2", "e3", "e4", "e5", "e6", "e7"],
        "unit": a.unit(),
        "norm_gram": matrix_to_json(a.norm_gram()),
        "product": a.integer_table(),
    })
}

fn model_json(m: &StandardModel) -> Value {
    let mut v = json!({
        "case": m.case().name(),
        "dim": m.dim(),
        "manifold_dim": m.manifold_dim(),
        "b": matrix_to_json(m.b().gram()),
        "h": matrix_to_json(m.h().gram()),
        "E": matrix_to_json(m.e()),
    });
    let obj = v.as_object_mut().expect("object");
    if let Some(j) = m.j() {
        obj.insert("J".into(), matrix_to_json(j));
    }
    if let Some(w) = m.omega() {
        obj.insert("omega".into(), matrix_to_json(w.gram()));
    }
    if let Ok(d) = m.signature_change() {
        obj.insert("signature_change".into(), matrix_to_json(&d));
        if let Ok(sig) = m.open_orbit_signature() {
            obj.insert("open_orbit_signature".into(), json!([sig.pos, sig.neg]));
        }
        if let Ok(nf) = m.normal_form_real() {
            obj.insert("normal_form_real".into(), matrix_to_json(nf.basis()));
        }
        if let Ok(nf) = m.normal_form_complex() {
            obj.insert("normal_form_complex".into(), matrix_to_json(nf.basis()));
        }
    }
    v
}
