//! `quasihecke`: expand forms, build Hecke operators and run the verification suites.

mod dsl;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use quasihecke::exactq::Q;
use quasihecke::heckealg::{act_on_form, star, star_r, tn_op, TwistedHeckeOp};
use quasihecke::lattice::{set_orbit_guard, CongruenceLevel, DEFAULT_ORBIT_GUARD};
use quasihecke::suites::{run_suite, RunReport, SuiteConfig, FORMAT_VERSION, SUITES};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Core(#[from] quasihecke::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Parser)]
#[command(name = "quasihecke", version, about = "Quasimodular forms and quasimodular Hecke operators")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the q-expansion of a form expression, e.g. `G2*G2 + 1/12*G4`.
    Expand {
        form: String,
        #[arg(long, default_value_t = 10)]
        prec: i64,
    },
    /// Run a verification suite (or `all`) and write its report.
    Verify(VerifyArgs),
    /// Hecke operators on forms and on each other.
    Hecke {
        #[command(subcommand)]
        cmd: HeckeCommand,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// One of qm-structure, star-assoc, embedding, lie-L, hopf-H, hopf-H1,
    /// twisted-pairing, right-module, graded-hZ, or `all`.
    suite: String,
    #[arg(long, default_value_t = 1)]
    level: u64,
    #[arg(long, default_value_t = 12)]
    prec: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_ORBIT_GUARD)]
    guard_orbit: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    workers: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `drop-delta-term` (hopf-H1 only): remove δ₁⊗Y from Δ(X).
    #[arg(long)]
    negative_control: Option<String>,
    /// Include wall-clock time in the report; such reports are not reproducible.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum HeckeCommand {
    /// Apply the classical T_n, as an operator of level N, to a form.
    Apply {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 1)]
        level: u64,
        #[arg(long, default_value_t = 10)]
        prec: i64,
        /// Rescale by n^(k/2-1) to the classical normalization of T_n.
        #[arg(long)]
        classical: bool,
    },
    /// Multiply two operators; each is `T<n>` or a path to an operator JSON file.
    Star {
        left: String,
        right: String,
        #[arg(long, default_value_t = 1)]
        level: u64,
        /// Use the product ∗ʳ instead of ∗.
        #[arg(long)]
        right_product: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, format!("{}\n", text))?,
        None => println!("{}", text),
    }
    Ok(())
}

fn expand(form: &str, prec: i64) -> Result<(), CliError> {
    let f = dsl::parse_form(form)?;
    println!("{}", f.expand(Q::from_integer(prec))?.terms_to_string());
    Ok(())
}

fn operator(arg: &str, level: u64) -> Result<TwistedHeckeOp, CliError> {
    if let Some(n) = arg.strip_prefix('T').and_then(|n| n.parse::<u64>().ok()) {
        if n == 0 {
            return Err(CliError::Usage("T0 is not an operator".into()));
        }
        return Ok(tn_op(n, &CongruenceLevel::new(level))?);
    }
    let text = std::fs::read_to_string(arg)?;
    Ok(TwistedHeckeOp::from_json(&serde_json::from_str(&text)?)?)
}

fn hecke(cmd: HeckeCommand) -> Result<(), CliError> {
    match cmd {
        HeckeCommand::Apply { n, form, level, prec, classical } => {
            if n == 0 {
                return Err(CliError::Usage("n must be positive".into()));
            }
            let f = dsl::parse_form(&form)?;
            let g = act_on_form(&tn_op(n, &CongruenceLevel::new(level))?, &f)?;
            let mut s = g.expand(Q::from_integer(prec))?;
            if classical {
                let k = f.weight();
                if k < 2 {
                    return Err(CliError::Usage("--classical needs weight at least 2".into()));
                }
                s = s.scale_q(&BigRational::from_integer(BigInt::from(n).pow((k / 2 - 1) as u32)));
            }
            println!("{}", s.terms_to_string());
        }
        HeckeCommand::Star { left, right, level, right_product, out } => {
            let a = operator(&left, level)?;
            let b = operator(&right, level)?;
            let p = if right_product { star_r(&a, &b)? } else { star(&a, &b)? };
            emit(&serde_json::to_string_pretty(&p.to_json())?, &out)?;
        }
    }
    Ok(())
}

fn run_one(cfg: &SuiteConfig, timing: bool) -> Result<RunReport, CliError> {
    let t = Instant::now();
    let mut r = run_suite(cfg)?;
    if timing {
        r.timing_ms = Some(t.elapsed().as_millis());
    }
    eprintln!("{}: {} ({} checks, {} failed)", cfg.suite, r.status, r.checks, r.failures);
    Ok(r)
}

fn verify(a: VerifyArgs) -> Result<bool, CliError> {
    set_orbit_guard(a.guard_orbit);
    if let Some(w) = a.workers {
        if w == 0 {
            return Err(CliError::Usage("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let config = |suite: &str| SuiteConfig {
        suite: suite.to_string(),
        level: a.level,
        prec: a.prec,
        samples: a.samples,
        seed: a.seed,
        guard_orbit: a.guard_orbit,
        negative_control: a.negative_control.clone(),
    };
    if a.suite == "all" {
        if a.negative_control.is_some() {
            return Err(CliError::Usage("--negative-control needs a single suite".into()));
        }
        let cfgs: Vec<SuiteConfig> = SUITES.iter().map(|s| config(s)).collect();
        for c in &cfgs {
            c.validate()?;
        }
        let t = Instant::now();
        let reports = cfgs.iter().map(|c| run_one(c, a.timing)).collect::<Result<Vec<_>, _>>()?;
        let ok = reports.iter().all(|r| r.passed());
        let mut doc = json!({
            "format_version": FORMAT_VERSION,
            "status": if ok { "pass" } else { "fail" },
            "reports": reports,
        });
        if a.timing {
            doc["timing_ms"] = json!(t.elapsed().as_millis());
        }
        emit(&serde_json::to_string_pretty(&doc)?, &a.out)?;
        Ok(ok)
    } else {
        let cfg = config(&a.suite);
        cfg.validate()?;
        let r = run_one(&cfg, a.timing)?;
        emit(&r.to_json_string(), &a.out)?;
        Ok(r.passed())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Command::Expand { form, prec } => expand(&form, prec).map(|_| true),
        Command::Verify(a) => verify(a),
        Command::Hecke { cmd } => hecke(cmd).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
