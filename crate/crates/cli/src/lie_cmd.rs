use clap::Subcommand;
use selberg::lie::{self, EllipticAngles, WeightVector};

use crate::output::f;
use crate::Session;

#[derive(Debug, Subcommand)]
pub enum LieCommand {
    /// Half-sum of positive roots δ_M = (n−1, …, 1, 0).
    DeltaM {
        #[arg(long)]
        n: usize,
    },
    /// List the Weyl group of D_n as signed permutations.
    Weyl {
        #[arg(long)]
        n: usize,
    },
    /// Character of the representation with highest weight `lambda`.
    Character {
        #[arg(long, allow_hyphen_values = true)]
        lambda: WeightVector,
        /// Rotation angles, e.g. `pi/3,0.5`.
        #[arg(long, allow_hyphen_values = true)]
        angles: EllipticAngles,
        /// Refuse singular elements instead of taking the limit.
        #[arg(long)]
        strict: bool,
    },
    /// Highest weight of w_0σ.
    Flip {
        #[arg(long, allow_hyphen_values = true)]
        lambda: WeightVector,
    },
}

pub fn run(cmd: LieCommand, s: &mut Session) -> anyhow::Result<()> {
    match cmd {
        LieCommand::DeltaM { n } => {
            let delta = lie::half_sum_delta_m(n)?;
            if s.validate {
                return s.out.line("ok");
            }
            s.out.line(delta.to_string())
        }
        LieCommand::Weyl { n } => {
            let group = lie::enumerate_weyl(n)?;
            if s.validate {
                return s.out.line(format!("ok: {} elements", group.len()));
            }
            let mut w = s.out.csv();
            w.write_record(["perm", "signs", "det"])?;
            for g in &group {
                let join = |v: Vec<String>| v.join(" ");
                w.write_record([
                    join(g.perm().iter().map(|p| p.to_string()).collect()),
                    join(g.signs().iter().map(|p| p.to_string()).collect()),
                    g.det().to_string(),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
        LieCommand::Character { lambda, angles, strict } => {
            if lambda.rank() != angles.rank() {
                return Err(selberg::Error::RankMismatch {
                    expected: lambda.rank(),
                    found: angles.rank(),
                }
                .into());
            }
            if s.validate {
                return s.out.line("ok");
            }
            let value = if strict {
                lie::weyl_character(&lambda, &angles)?
            } else {
                lie::class_character(&lambda, &angles)?
            };
            let mut w = s.out.csv();
            w.write_record(["re", "im"])?;
            w.write_record([f(value.re), f(value.im)])?;
            w.flush()?;
            Ok(())
        }
        LieCommand::Flip { lambda } => {
            if s.validate {
                return s.out.line("ok");
            }
            s.out.line(lie::w0_flip(&lambda).to_string())
        }
    }
}
