use std::path::PathBuf;

use clap::{Args, Subcommand};
use selberg::geometry::{
    compute_length_spectrum, EnumerationLimits, GroupSpec, SpectrumOptions, WordBall, DEFAULT_ELEMENT_CAP,
    DEFAULT_WORD_LIMIT,
};

use crate::Session;

#[derive(Debug, Args)]
pub struct BallArgs {
    /// Group specification (TOML).
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    max_word_len: Option<usize>,
    #[arg(long)]
    element_cap: Option<usize>,
    #[arg(long)]
    word_limit: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum SpectrumCommand {
    /// Enumerate, classify and reduce to a cutoff length spectrum (CSV).
    Compute {
        #[command(flatten)]
        ball: BallArgs,
        #[arg(long)]
        cutoff: Option<f64>,
        /// Word-length radius of conjugators (default: half the ball).
        #[arg(long)]
        conjugator_radius: Option<usize>,
    },
    /// Count the distinct elements of the word ball.
    Enumerate {
        #[command(flatten)]
        ball: BallArgs,
    },
}

fn limits(ball: &BallArgs, s: &Session) -> EnumerationLimits {
    EnumerationLimits {
        word_limit: ball
            .word_limit
            .or(s.config.spectrum.word_limit)
            .unwrap_or(DEFAULT_WORD_LIMIT),
        element_cap: ball
            .element_cap
            .or(s.config.spectrum.element_cap)
            .unwrap_or(DEFAULT_ELEMENT_CAP),
    }
}

fn max_len(ball: &BallArgs, s: &Session) -> usize {
    ball.max_word_len
        .or(s.config.spectrum.max_word_len)
        .unwrap_or(SpectrumOptions::default().max_word_len)
}

pub fn run(cmd: SpectrumCommand, s: &mut Session) -> anyhow::Result<()> {
    match cmd {
        SpectrumCommand::Compute {
            ball,
            cutoff,
            conjugator_radius,
        } => {
            let spec = GroupSpec::from_path(&ball.spec)?;
            let options = SpectrumOptions {
                max_word_len: max_len(&ball, s),
                cutoff: cutoff
                    .or(s.config.spectrum.cutoff)
                    .unwrap_or(SpectrumOptions::default().cutoff),
                conjugator_radius: conjugator_radius.or(s.config.spectrum.conjugator_radius),
                limits: limits(&ball, s),
                ..SpectrumOptions::default()
            };
            if !(options.cutoff > 0.0) {
                return Err(selberg::Error::Invalid(format!("cutoff {} must be positive", options.cutoff)).into());
            }
            if options.max_word_len > options.limits.word_limit {
                return Err(selberg::Error::Invalid(format!(
                    "max word length {} exceeds the limit {}",
                    options.max_word_len, options.limits.word_limit
                ))
                .into());
            }
            if s.validate {
                return s.out.line(format!(
                    "ok: {} generators, spec hash {}",
                    spec.generators().len(),
                    spec.hash()
                ));
            }
            let spectrum = compute_length_spectrum(&spec, &options)?;
            spectrum.write_csv(s.out.writer())?;
            Ok(())
        }
        SpectrumCommand::Enumerate { ball } => {
            let spec = GroupSpec::from_path(&ball.spec)?;
            let lim = limits(&ball, s);
            let len = max_len(&ball, s);
            if s.validate {
                return s.out.line("ok");
            }
            let b = WordBall::enumerate(spec.generators(), len, lim)?;
            s.out.line(b.len().to_string())
        }
    }
}
