use clap::Subcommand;
use selberg::orbital::{self, EvenPolynomial, EVENNESS_TOL};
use selberg::{EllipticAngles, WeightVector};

use crate::output::f;
use crate::Session;

#[derive(Debug, Subcommand)]
pub enum OrbitalCommand {
    /// Coefficients of the elliptic orbital polynomial P^γ_σ(iν) in ν².
    Poly {
        #[arg(long, allow_hyphen_values = true)]
        lambda: WeightVector,
        #[arg(long, allow_hyphen_values = true)]
        angles: EllipticAngles,
    },
    /// Coefficient gap between P^γ_σ and P^γ_{w_0σ}.
    Gap {
        #[arg(long, allow_hyphen_values = true)]
        lambda: WeightVector,
        #[arg(long, allow_hyphen_values = true)]
        angles: EllipticAngles,
    },
    /// Plancherel polynomial P_σ(iν) for n = 1.
    Plancherel {
        #[arg(long, allow_hyphen_values = true)]
        lambda: WeightVector,
    },
    /// Positive roots of the stabilizer of an elliptic element.
    Stabilizer {
        #[arg(long, allow_hyphen_values = true)]
        angles: EllipticAngles,
    },
}

fn write_poly(s: &mut Session, p: &EvenPolynomial) -> anyhow::Result<()> {
    let mut w = s.out.csv();
    w.write_record(["nu_power", "re", "im"])?;
    for (m, c) in p.coeffs().iter().enumerate() {
        w.write_record([(2 * m).to_string(), f(c.re), f(c.im)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(cmd: OrbitalCommand, s: &mut Session) -> anyhow::Result<()> {
    let tol = s.config.tolerances.evenness.unwrap_or(EVENNESS_TOL);
    match cmd {
        OrbitalCommand::Poly { lambda, angles } => {
            let n = lambda.rank();
            orbital::stabilizer_roots(&angles, n)?;
            if s.validate {
                return s.out.line("ok");
            }
            let p = orbital::orbital_polynomial_with_tol(&lambda, &angles, n, tol)?;
            log::info!("odd residual {:.3e}", p.odd_residual());
            write_poly(s, &p)
        }
        OrbitalCommand::Gap { lambda, angles } => {
            orbital::stabilizer_roots(&angles, lambda.rank())?;
            if s.validate {
                return s.out.line("ok");
            }
            let gap = orbital::weyl_a_invariance_gap(&lambda, &angles, lambda.rank())?;
            s.out.line(f(gap))
        }
        OrbitalCommand::Plancherel { lambda } => {
            let p = orbital::plancherel_polynomial(&lambda, lambda.rank())?;
            if s.validate {
                return s.out.line("ok");
            }
            write_poly(s, &p)
        }
        OrbitalCommand::Stabilizer { angles } => {
            let roots = orbital::stabilizer_roots(&angles, angles.rank())?;
            if s.validate {
                return s.out.line("ok");
            }
            let mut w = s.out.csv();
            w.write_record(["root"])?;
            for r in &roots.positive_roots {
                w.write_record([r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}
