//! Batch runner for the nildyn experiments: configuration, deterministic
//! parallel execution, artifact emission and golden comparison.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub mod config;
pub mod experiments;
pub mod goldens;
pub mod output;
pub mod sample;

pub use config::ExperimentConfig;
pub use experiments::{Outcome, CATALOG};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_ASSERTION: i32 = 2;
pub const EXIT_CONFIG: i32 = 64;

pub const WORKERS_ENV: &str = "NILDYN_WORKERS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) | CliError::Io(_) => EXIT_RUNTIME,
        }
    }
}

impl From<nildyn_core::Error> for CliError {
    fn from(e: nildyn_core::Error) -> Self {
        match e {
            nildyn_core::Error::Internal(m) => CliError::Runtime(m),
            e => CliError::Config(e.to_string()),
        }
    }
}

/// Worker count: NILDYN_WORKERS, then the config, then the machine's parallelism.
pub fn resolve_workers(cfg: &ExperimentConfig) -> Result<usize, CliError> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        return match v.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(w),
            _ => Err(CliError::Config(format!("{WORKERS_ENV}: expected a positive count, got '{v}'"))),
        };
    }
    Ok(cfg.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())))
}

/// Validates and runs `cfg` on a dedicated pool of `workers` threads.
pub fn run_with_workers(cfg: &ExperimentConfig, workers: usize) -> Result<Outcome, CliError> {
    let exp = experiments::find(&cfg.experiment).ok_or_else(|| {
        let names: Vec<&str> = CATALOG.iter().map(|e| e.name).collect();
        CliError::Usage(format!("unknown experiment '{}' (known: {})", cfg.experiment, names.join(", ")))
    })?;
    let constants = cfg.constant_table()?;
    let params = config::validate(cfg, exp.fields, &constants)?;
    let ctx = experiments::Ctx { timing: cfg.timing, constants };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Runtime(format!("worker pool: {e}")))?;
    Ok(pool.install(|| (exp.run)(&params, &ctx))?)
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    run_with_workers(cfg, resolve_workers(cfg)?)
}

pub fn write_artifacts(outcome: &Outcome, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)?;
    outcome
        .artifacts
        .iter()
        .map(|a| {
            let p = dir.join(&a.name);
            std::fs::write(&p, &a.bytes)?;
            Ok(p)
        })
        .collect()
}

pub fn catalog_text() -> String {
    let mut s = String::new();
    for e in CATALOG {
        s.push_str(&format!("{}\n  {}\n  parameters:\n", e.name, e.about));
        for f in e.fields {
            let default = f.default.map(|d| format!(" [default: {d}]")).unwrap_or_else(|| " [required]".into());
            s.push_str(&format!("    --{} <{}>{}  {}\n", f.name, f.kind.describe(), default, f.help));
        }
        s.push_str("  outputs:\n");
        for (file, cols) in e.outputs {
            s.push_str(&format!("    {file}: {cols}\n"));
        }
    }
    s
}

#[derive(Parser, Debug)]
#[command(name = "nildyn", version, about = "Deterministic experiments on rotations, skew products and Heisenberg nilsystems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run one experiment: `--key value` parameters, plus --config FILE, --out DIR, --workers K, --timing, --constants FILE.
    Run {
        experiment: String,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// List experiments with their parameter schemas and output files.
    List,
    /// Re-run every case under DIR and compare outputs byte for byte.
    CheckGoldens {
        dir: PathBuf,
        /// Rewrite the expected outputs instead of comparing.
        #[arg(long)]
        bless: bool,
    },
}

fn run_command(experiment: &str, args: &[String], out: &mut dyn Write) -> Result<i32, CliError> {
    let mut cfg = ExperimentConfig::new(experiment);
    cfg.merge_flags(args)?;
    let outcome = execute(&cfg)?;
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("nildyn-out").join(&cfg.experiment));
    let paths = write_artifacts(&outcome, &dir)?;
    let verdict = if outcome.passed { "PASS" } else { "FAIL" };
    writeln!(out, "{verdict} {}: {}", cfg.experiment, outcome.summary)?;
    for p in paths {
        writeln!(out, "  wrote {}", p.display())?;
    }
    Ok(if outcome.passed { EXIT_PASS } else { EXIT_ASSERTION })
}

/// Entry point shared by the binary and tests; returns the process exit code.
pub fn main_with_args(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match cli.cmd {
        Cmd::Run { experiment, args } => run_command(&experiment, &args, out),
        Cmd::List => write!(out, "{}", catalog_text()).map(|_| EXIT_PASS).map_err(CliError::from),
        Cmd::CheckGoldens { dir, bless } => {
            goldens::check_goldens(&dir, bless, out).map(|ok| if ok { EXIT_PASS } else { EXIT_ASSERTION })
        }
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "{e}");
        e.exit_code()
    })
}
