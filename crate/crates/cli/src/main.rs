use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, ValueEnum};
use cires_core::io::{run_cached, Cache, Command, Format, InputSpec, Overrides, Settings, EXPERIMENTS};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Resolve,
    Operators,
    Minors,
    Hilbert,
    Mf,
    Verify,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::Resolve => Command::Resolve,
            Cmd::Operators => Command::Operators,
            Cmd::Minors => Command::Minors,
            Cmd::Hilbert => Command::Hilbert,
            Cmd::Mf => Command::Mf,
            Cmd::Verify => Command::Verify,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Fmt {
    Csv,
    Json,
}

/// Minimal resolutions, operators and matrix factorizations over complete
/// intersections.
///
/// Exit status: 0 on success or a passing check, 1 when a check fails,
/// 2 on errors. The cache directory is taken from CIRES_CACHE.
#[derive(Debug, Parser)]
#[command(name = "cires", version)]
struct Cli {
    command: Cmd,
    input: PathBuf,
    /// Resolution length N.
    #[arg(long)]
    length: Option<usize>,
    /// Trailing window W for asymptotic checks.
    #[arg(long)]
    window: Option<usize>,
    /// Largest minor size.
    #[arg(long)]
    r_max: Option<usize>,
    /// Seed for random choices.
    #[arg(long)]
    seed: Option<u64>,
    /// Experiment run by `verify`.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(EXPERIMENTS))]
    experiment: Option<String>,
    /// Directory for artifacts; without it they go to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Fmt>,
    /// Ignore CIRES_CACHE.
    #[arg(long)]
    no_cache: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<bool> {
    let spec = InputSpec::from_file(&cli.input)?;
    let overrides = Overrides {
        length: cli.length,
        window: cli.window,
        r_max: cli.r_max,
        seed: cli.seed,
        experiment: cli.experiment.clone(),
        format: cli.format.map(|f| match f {
            Fmt::Csv => Format::Csv,
            Fmt::Json => Format::Json,
        }),
    };
    let settings = Settings::resolve(&spec, &overrides);
    let cache = if cli.no_cache { None } else { Cache::from_env() };
    let out = run_cached(cli.command.into(), &spec, &settings, cache.as_ref())?;
    match &cli.out {
        Some(dir) => {
            for p in cires_core::io::write_artifacts(&out, dir).with_context(|| format!("writing to {}", dir.display()))? {
                log::info!("wrote {}", p.display());
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for a in &out.artifacts {
                if out.artifacts.len() > 1 {
                    writeln!(stdout, "# {}", a.name)?;
                }
                stdout.write_all(a.content.as_bytes())?;
            }
        }
    }
    Ok(out.pass)
}
