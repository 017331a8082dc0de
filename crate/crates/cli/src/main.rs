//! `pmv`: run analyses on pseudo MV-algebras described by a JSON job file.
//!
//! Exit codes: 0 success, 1 malformed job or unusable input, 2 property
//! check failures (counterexamples are in the report), 3 cap exceeded.

mod analysis;
mod job;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use pmv_core::algebra::FiniteAlgebra;
use pmv_core::schema::AlgebraSpec;
use pmv_core::Error;

use crate::job::{Job, SpecError};

const EXIT_MALFORMED: u8 = 1;
const EXIT_PROPERTY: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "pmv", version, about = "Exact analyses of pseudo MV-algebras and their states")]
struct Cli {
    /// Worker threads for parallel analyses.
    #[arg(long, global = true, env = "PMV_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analyses of a job and write the report.
    Run {
        #[arg(long)]
        job: PathBuf,
        /// Report path; defaults to the job's output.json, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for CSV tables; defaults to the job's output.csv.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check a job file and run the axiom precheck on finite algebras.
    Validate {
        #[arg(long)]
        job: PathBuf,
    },
}

enum Failure {
    Spec(SpecError),
    Cap(String),
    Io(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Cap(_) => EXIT_CAP,
            _ => EXIT_MALFORMED,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Spec(e) => e.to_string(),
            Failure::Cap(m) | Failure::Io(m) | Failure::Other(m) => m.clone(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            Error::InvalidSpec { field, message } => Failure::Spec(SpecError { field, message }),
            other => Failure::Other(other.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<Job, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let spec = job::parse(&text).map_err(Failure::Spec)?;
    job::validate(spec).map_err(Failure::Spec)
}

fn tabulate(job: &Job) -> Result<Option<FiniteAlgebra>, Failure> {
    if !job.algebra.is_finite() {
        return Ok(None);
    }
    Ok(Some(job.algebra.finite(job.caps.max_carrier)?))
}

fn riesz_name(job: &Job) -> String {
    match job.rep.kind() {
        pmv_core::RieszKind::Qn(n) => format!("Q^{n}"),
        pmv_core::RieszKind::LexQ2 => "lexQ^2".into(),
    }
}

fn job_summary(job: &Job) -> Value {
    json!({
        "algebra": AlgebraSpec::describe(&job.algebra),
        "riesz": riesz_name(job),
        "analyses": job.analyses.iter().map(|a| a.name()).collect::<Vec<_>>(),
        "caps": job.caps,
        "family": job.family.as_ref().map(pmv_core::rational::to_string),
    })
}

fn write_csv(dir: &Path, name: &str, rows: &[Vec<String>]) -> Result<(), Failure> {
    let escape = |s: &str| {
        if s.contains([',', '"', '\n']) {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s.to_string()
        }
    };
    let mut text = String::new();
    for row in rows {
        text.push_str(&row.iter().map(|c| escape(c)).collect::<Vec<_>>().join(","));
        text.push('\n');
    }
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn run(path: &Path, out: Option<PathBuf>, csv: Option<PathBuf>) -> Result<u8, Failure> {
    let job = load(path)?;
    let fa = tabulate(&job)?;
    let results = analysis::run_all(&job, fa.as_ref());

    let mut sections = serde_json::Map::new();
    let mut failures = Vec::new();
    let mut tables = std::collections::BTreeMap::new();
    let mut cap_error = None;
    let mut other_error = None;
    for (a, r) in results {
        match r {
            Ok(section) => {
                for f in &section.failures {
                    failures.push(json!({"analysis": a.name(), "message": f}));
                }
                tables.extend(section.tables);
                sections.insert(a.name().to_string(), section.value);
            }
            Err(e) => {
                let failure = Failure::from(e);
                sections.insert(a.name().to_string(), json!({"error": failure.message()}));
                match failure {
                    Failure::Cap(_) => cap_error = cap_error.or(Some(failure)),
                    _ => other_error = other_error.or(Some(failure)),
                }
            }
        }
    }
    let status = if cap_error.is_some() {
        "cap_exceeded"
    } else if other_error.is_some() {
        "error"
    } else if !failures.is_empty() {
        "property_failure"
    } else {
        "ok"
    };
    let report = json!({
        "version": job::JOB_VERSION,
        "job": job_summary(&job),
        "carrier": fa.as_ref().map(|f| f.labels().to_vec()),
        "results": sections,
        "failures": failures,
        "status": status,
    });
    let text = serde_json::to_string_pretty(&report).expect("serializable report") + "\n";
    match out.or_else(|| job.output.json.clone()) {
        Some(p) => fs::write(&p, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    if let Some(dir) = csv.or_else(|| job.output.csv.clone()) {
        fs::create_dir_all(&dir).map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))?;
        for (name, rows) in &tables {
            write_csv(&dir, name, rows)?;
        }
    }
    if let Some(f) = cap_error.or(other_error) {
        return Err(f);
    }
    Ok(if failures.is_empty() { 0 } else { EXIT_PROPERTY })
}

fn validate(path: &Path) -> Result<u8, Failure> {
    let job = load(path)?;
    let fa = tabulate(&job)?;
    let section = analysis::axioms(&job, fa.as_ref())?;
    let valid = section.failures.is_empty();
    let diagnostics = json!({
        "valid": valid,
        "algebra": job.algebra.name(),
        "carrier_size": fa.as_ref().map(|f| f.len()),
        "axioms": section.value,
        "diagnostics": section.failures,
    });
    println!("{}", serde_json::to_string_pretty(&diagnostics).expect("serializable diagnostics"));
    Ok(if valid { 0 } else { EXIT_PROPERTY })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(EXIT_MALFORMED);
        }
    }
    let outcome = match cli.command {
        Command::Run { job, out, csv } => run(&job, out, csv),
        Command::Validate { job } => validate(&job),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
