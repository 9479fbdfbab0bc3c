//! `selberg`: command-line front end for the selberg library.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod grid;
mod heat_cmd;
mod lie_cmd;
mod orbital_cmd;
mod output;
mod selftest;
mod spectrum_cmd;
mod zeta_cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use crate::config::RunConfig;

/// Validation errors (bad input, bad config).
const EXIT_INVALID: u8 = 2;
/// Numerical guards (undetermined v(γ), parabolic elements, ill-conditioned fits).
const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "selberg",
    version,
    about = "Selberg zeta functions and trace-formula terms for hyperbolic orbifolds"
)]
struct Cli {
    /// Check inputs and exit without computing.
    #[arg(long, global = true)]
    validate: bool,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "SELBERG_THREADS")]
    threads: Option<usize>,

    /// TOML run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write CSV output here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Root system, Weyl group and characters of SO(2n).
    #[command(subcommand)]
    Lie(lie_cmd::LieCommand),
    /// Plancherel and elliptic orbital-integral polynomials.
    #[command(subcommand)]
    Orbital(orbital_cmd::OrbitalCommand),
    /// Element enumeration and length spectra of matrix groups.
    #[command(subcommand)]
    Spectrum(spectrum_cmd::SpectrumCommand),
    /// Truncated zeta functions, heat terms and partial fractions.
    #[command(subcommand)]
    Zeta(zeta_cmd::ZetaCommand),
    /// Heat traces and Weyl law on flat orbifold models.
    #[command(subcommand)]
    Heat(heat_cmd::HeatCommand),
    /// Randomized property checks across the library.
    Selftest(selftest::SelftestArgs),
}

pub struct Session {
    pub validate: bool,
    pub config: RunConfig,
    pub out: output::Sink,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let threads = cli.threads.or(config.threads);
    if let Some(n) = threads {
        if n == 0 {
            return Err(selberg::Error::Invalid("thread count must be positive".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let mut session = Session {
        validate: cli.validate,
        config,
        out: output::Sink::new(cli.output.as_deref())?,
    };
    match cli.command {
        Command::Lie(c) => lie_cmd::run(c, &mut session),
        Command::Orbital(c) => orbital_cmd::run(c, &mut session),
        Command::Spectrum(c) => spectrum_cmd::run(c, &mut session),
        Command::Zeta(c) => zeta_cmd::run(c, &mut session),
        Command::Heat(c) => heat_cmd::run(c, &mut session),
        Command::Selftest(a) => selftest::run(a, &mut session),
    }?;
    session.out.finish()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<selberg::Error>() {
            return if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_INVALID };
        }
        if cause.downcast_ref::<selftest::PropertyFailure>().is_some() {
            return EXIT_NUMERICAL;
        }
    }
    EXIT_INVALID
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
