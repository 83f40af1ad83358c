//! `qchev`: generate trace functions, check the invariance conditions, decompose, and run the
//! verification suites.
//!
//! Exit codes: 0 success, 1 a condition or suite failed, 2 usage or input error, 3 internal
//! assertion (a bug, or a counterexample worth investigating).

mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use qchev_core::chevalley::{check_conditions, decompose};
use qchev_core::intertwiner::HomSpace;
use qchev_core::modules::irreducible;
use qchev_core::suite::{self, par_map, SuiteOptions, SUITES};
use qchev_core::torus::{TorusFunction, TorusJson};
use qchev_core::{Error, Weight};
use serde::Serialize;

use config::{Flags, Job};

#[derive(Parser)]
#[command(name = "qchev", version, about = "Exact trace functions and the dynamical Weyl group")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one trace-function JSON file per highest weight and basis intertwiner.
    Generate {
        #[command(flatten)]
        flags: Flags,
    },
    /// Check conditions 1-3 for a trace-function JSON file.
    Check {
        input: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Decompose a function satisfying the conditions into trace functions.
    Decompose {
        input: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run the verification suites and write a CSV summary.
    VerifySuite {
        /// Suite to run (repeatable); all suites by default.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Random samples per configuration in the round-trip suite.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        flags: Flags,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure { code: 2, message: msg.into() }
    }

    fn internal(msg: impl Into<String>) -> Self {
        Failure { code: 3, message: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) | Error::Parse(_) | Error::Domain(_) => 2,
            Error::ConditionFailed { .. } => 1,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::internal(format!("{}: {}", path.display(), e))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        }
    }
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Writes to `--out` when given, else to stdout.
fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_file(p, &format!("{}\n", text)),
        None => {
            // A closed pipe (for instance `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout(), "{}", text);
            Ok(())
        }
    }
}

fn tag(w: &Weight) -> String {
    w.coords().iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_")
}

#[derive(Serialize)]
struct EvalTerm {
    weight: Weight,
    coeffs: Vec<String>,
}

#[derive(Serialize)]
struct Evaluated {
    q: String,
    terms: Vec<EvalTerm>,
}

fn evaluate(f: &TorusFunction, q: &BigRational) -> Result<Evaluated, Failure> {
    let mut terms = Vec::new();
    for (w, c) in f.terms() {
        let coeffs = c.iter().map(|x| x.eval_at(q).map(|r| r.to_string())).collect::<Result<Vec<_>, _>>()?;
        terms.push(EvalTerm { weight: w.clone(), coeffs });
    }
    Ok(Evaluated { q: q.to_string(), terms })
}

fn generate(flags: &Flags) -> Result<u8, Failure> {
    let job = Job::resolve(flags, None)?;
    let dir = job.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let v = irreducible(&job.datum, &job.v)?;
    let mus = job.mu_range();
    let results = par_map(&mus, job.jobs, |mu| -> Result<Vec<TorusFunction>, Error> {
        let h = HomSpace::new(mu, &v)?;
        h.expectation_basis()?.iter().map(|phi| h.trace(phi)).collect()
    });
    let mut written = 0;
    for (mu, fs) in mus.iter().zip(results) {
        for (k, f) in fs?.iter().enumerate() {
            let stem = format!("trace_{}_mu{}_v{}_{}", job.datum.name, tag(mu), tag(&job.v), k);
            let path = dir.join(format!("{}.json", stem));
            write_file(&path, &format!("{}\n", f.to_json_string()))?;
            println!("{}", path.display());
            if let Some(q) = &job.q {
                let text = serde_json::to_string_pretty(&evaluate(f, q)?).expect("serializes");
                write_file(&dir.join(format!("{}.q.json", stem)), &format!("{}\n", text))?;
            }
            written += 1;
        }
    }
    eprintln!("wrote {} trace function(s)", written);
    Ok(0)
}

fn read_input(input: &Path) -> Result<(TorusFunction, qchev_core::modules::WeightModule), Failure> {
    let text = fs::read_to_string(input).map_err(|e| Failure::usage(format!("{}: {}", input.display(), e)))?;
    TorusJson::parse(&text).map_err(|e| Failure::usage(e.to_string()))
}

fn check(input: &Path, flags: &Flags) -> Result<u8, Failure> {
    let (f, v) = read_input(input)?;
    let report = check_conditions(&f, &v)?;
    emit(&flags.out, &report.to_json_string())?;
    Ok(if report.pass { 0 } else { 1 })
}

fn decompose_cmd(input: &Path, flags: &Flags) -> Result<u8, Failure> {
    let (f, v) = read_input(input)?;
    let d = decompose(&f, &v)?;
    emit(&flags.out, &d.to_json_string())?;
    Ok(0)
}

#[derive(Serialize)]
struct CsvRow<'a> {
    suite: &'a str,
    case: &'a str,
    pass: bool,
    ms: u128,
}

fn verify_suite(names: &[String], samples: Option<usize>, flags: &Flags) -> Result<u8, Failure> {
    let job = Job::resolve(flags, Some("A1"))?;
    let mut opts = SuiteOptions { seed: job.seed, jobs: job.jobs, ..SuiteOptions::default() };
    if let Some(d) = job.depth {
        opts.depth = d;
    }
    if let Some(s) = samples.or(job.samples) {
        opts.samples = s;
    }
    let selected: Vec<String> = if !names.is_empty() {
        names.to_vec()
    } else if let Some(s) = &job.suites {
        s.clone()
    } else {
        SUITES.iter().map(|(n, _)| n.to_string()).collect()
    };
    for n in &selected {
        if !SUITES.iter().any(|(s, _)| s == n) {
            return Err(Failure::usage(format!("unknown suite '{}'", n)));
        }
    }
    let dir = job.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    let mut results = Vec::new();
    let mut all = true;
    for name in &selected {
        let r = suite::run(name, &opts)?;
        println!("{} {} ({} cases, {} ms)", if r.pass() { "PASS" } else { "FAIL" }, r.name, r.cases.len(), r.ms);
        for c in r.failures() {
            println!("  failed: {}: {}", c.case, c.detail);
        }
        all &= r.pass();
        results.push(r);
    }
    let csv_path = dir.join("suite_summary.csv");
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| Failure::internal(e.to_string()))?;
    for r in &results {
        for c in &r.cases {
            w.serialize(CsvRow { suite: &c.suite, case: &c.case, pass: c.pass, ms: c.ms })
                .map_err(|e| Failure::internal(e.to_string()))?;
        }
    }
    w.flush().map_err(|e| io_err(&csv_path, e))?;
    let json = serde_json::to_string_pretty(&results).expect("serializes");
    write_file(&dir.join("suite_results.json"), &format!("{}\n", json))?;
    Ok(if all { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Command::Generate { flags } => generate(flags),
        Command::Check { input, flags } => check(input, flags),
        Command::Decompose { input, flags } => decompose_cmd(input, flags),
        Command::VerifySuite { suites, samples, flags } => verify_suite(suites, *samples, flags),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("qchev: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
