use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use orbhull_cli::{config, gallery, Command, Overrides, ReportEnvelope};

/// Thread count for parallel estimation; results do not depend on it.
const THREADS_ENV: &str = "ORBHULL_THREADS";

const EXIT_FAILURE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "orbhull", version, about = "Antisymmetry, nilcone and hull diagnostics for compact group orbits")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment config (TOML, see CONFIG.md).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    #[command(flatten)]
    run: RunFlags,
}

#[derive(Args, Clone)]
struct RunFlags {
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
    #[arg(long, value_name = "D", value_parser = clap::value_parser!(u32).range(1..))]
    degree_bound: Option<u32>,
    /// Exit with code 3 when the verdict is inconclusive.
    #[arg(long)]
    strict: bool,
    /// Write the JSON report here; `-` means standard output.
    #[arg(long, value_name = "PATH")]
    json: Option<String>,
}

impl RunFlags {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            samples: self.samples,
            degree_bound: self.degree_bound,
            json: self.json.clone(),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact spectrum, antisymmetry, nilcone and fibration data for a torus action.
    TorusAnalyze(Common),
    /// Monte Carlo multiplicativity defect of the invariant orbit measure.
    OrbitDefect(Common),
    /// Kempf-Ness descent of |g v|^2 over the complexified group.
    OrbitFlow(Common),
    /// Infinitesimal finiteness of N(H)/H for a Lie subalgebra pair.
    GroupCheckF(Common),
    /// Multiplicities of H-fixed vectors across a family of irreducibles.
    GroupGelfand(Common),
    /// Run (or write out) the built-in example gallery as a self-test.
    Fixtures {
        /// Write each example as a TOML config into DIR instead of running.
        #[arg(long, value_name = "DIR")]
        emit: Option<PathBuf>,
        /// Only entries whose name contains this string.
        #[arg(long, value_name = "NAME")]
        only: Option<String>,
        #[command(flatten)]
        run: RunFlags,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn emit_report(env: &ReportEnvelope, summary: &[String], json: Option<&str>) -> std::io::Result<()> {
    let text = env.to_json();
    let to_stdout = json == Some("-");
    {
        // the summary moves to stderr when stdout carries the JSON
        let mut out: Box<dyn Write> = if to_stdout {
            Box::new(std::io::stderr())
        } else {
            Box::new(std::io::stdout())
        };
        writeln!(out, "{}", env.command)?;
        for line in summary {
            writeln!(out, "  {line}")?;
        }
        for w in &env.warnings {
            writeln!(out, "  warning: {w}")?;
        }
    }
    match json {
        Some("-") => println!("{text}"),
        Some(path) => std::fs::write(Path::new(path), text + "\n")?,
        None => {}
    }
    Ok(())
}

fn run_command(command: Command, common: &Common) -> ExitCode {
    let start = Instant::now();
    let mut exp = match config::load(&common.config) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    common.run.overrides().apply(&mut exp);
    let mut outcome = match command.run(&exp) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    outcome.envelope.provenance.wall_time_ms = start.elapsed().as_millis() as u64;
    if let Err(e) = emit_report(&outcome.envelope, &outcome.summary, exp.config.json.as_deref()) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_FAILURE);
    }
    if outcome.inconclusive && common.run.strict {
        return ExitCode::from(EXIT_INCONCLUSIVE);
    }
    ExitCode::SUCCESS
}

fn run_fixtures(emit: Option<&Path>, only: Option<&str>, run: &RunFlags) -> ExitCode {
    if let Some(dir) = emit {
        return match gallery::emit(dir) {
            Ok(files) => {
                for f in files {
                    println!("{}", dir.join(f).display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: cannot write fixtures: {e}");
                ExitCode::from(EXIT_FAILURE)
            }
        };
    }
    let start = Instant::now();
    let overrides = run.overrides();
    let (mut env, results) = gallery::self_test(&overrides, only);
    env.provenance.wall_time_ms = start.elapsed().as_millis() as u64;
    let summary: Vec<String> = results
        .iter()
        .map(|r| {
            let mark = if r.pass { "pass" } else { "FAIL" };
            let detail = r.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default();
            format!("{mark} {:<28} {:<14} expected {:<25} got {}{detail}", r.name, r.command, r.expected, r.observed)
        })
        .collect();
    if let Err(e) = emit_report(&env, &summary, overrides.json.as_deref()) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_FAILURE);
    }
    if results.iter().all(|r| r.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURE)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_VALIDATION);
    }
    match &cli.command {
        Cmd::TorusAnalyze(c) => run_command(Command::TorusAnalyze, c),
        Cmd::OrbitDefect(c) => run_command(Command::OrbitDefect, c),
        Cmd::OrbitFlow(c) => run_command(Command::OrbitFlow, c),
        Cmd::GroupCheckF(c) => run_command(Command::GroupCheckF, c),
        Cmd::GroupGelfand(c) => run_command(Command::GroupGelfand, c),
        Cmd::Fixtures { emit, only, run } => run_fixtures(emit.as_deref(), only.as_deref(), run),
    }
}
