use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::Rational64;
use selberg::zeta::{self, ZetaOptions, ZetaTermContext};
use selberg::{LengthSpectrum, WeightVector};

use crate::grid::{parse_s_grid, parse_t_grid};
use crate::output::f;
use crate::Session;

#[derive(Debug, Args)]
pub struct ContextArgs {
    /// Length spectrum CSV written by `spectrum compute`.
    #[arg(long)]
    spectrum: PathBuf,
    /// Highest weight of σ; its length is the rank n.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    sigma: WeightVector,
    /// Keep only hyperbolic classes with l ≤ cutoff.
    #[arg(long)]
    cutoff: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    vol: f64,
    #[arg(long, default_value_t = 1)]
    chi_dim: usize,
    /// Comma list of vol(Γ_γ∖G_γ), one per elliptic class in file order.
    #[arg(long)]
    elliptic_volumes: Option<String>,
    #[arg(long)]
    allow_ambiguous: bool,
    #[arg(long)]
    conjugate_sigma_trace: bool,
    /// Drop the elliptic volume factor from the Ξ exponent.
    #[arg(long)]
    no_elliptic_volume_in_xi: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ZetaKind {
    LogZeta,
    Symmetric,
    Antisymmetric,
}

#[derive(Debug, Subcommand)]
pub enum ZetaCommand {
    /// Evaluate log Z (or S, S_a) on a grid of s.
    Eval {
        #[command(flatten)]
        ctx: ContextArgs,
        /// `re0:re1:step,im0:im1:step`.
        #[arg(long, allow_hyphen_values = true)]
        s_grid: String,
        #[arg(long, value_enum, default_value = "log-zeta")]
        kind: ZetaKind,
    },
    /// Evaluate Ξ(s, σ) on a grid of s (n = 1).
    Xi {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long, allow_hyphen_values = true)]
        s_grid: String,
    },
    /// Identity, elliptic and hyperbolic heat terms.
    HeatTerms {
        #[command(flatten)]
        ctx: ContextArgs,
        /// Comma list, or `lo:hi:count`.
        #[arg(long)]
        t: String,
    },
    /// Partial-fraction coefficients c_i = ∏_{j≠i} 1/(s_j² − s_i²).
    Pfrac {
        /// Comma list; exact output when every entry is an integer or a/b.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Empirical convergence abscissa of the spectrum.
    Abscissa {
        #[command(flatten)]
        ctx: ContextArgs,
    },
}

fn build_context(a: &ContextArgs, s: &Session) -> anyhow::Result<ZetaTermContext> {
    let mut spectrum = LengthSpectrum::load(&a.spectrum)?;
    if let Some(c) = a.cutoff {
        spectrum = spectrum.truncated(c);
    }
    let mut ctx = ZetaTermContext::new(a.sigma.rank(), a.sigma.clone(), a.chi_dim, spectrum, a.vol)?;
    if let Some(list) = &a.elliptic_volumes {
        ctx = ctx.with_elliptic_volumes(crate::grid::parse_list(list)?)?;
    }
    Ok(ctx.with_options(ZetaOptions {
        conjugate_sigma_trace: a.conjugate_sigma_trace || s.config.conjugate_sigma_trace,
        allow_ambiguous: a.allow_ambiguous || s.config.allow_ambiguous,
        elliptic_volume_in_xi: !a.no_elliptic_volume_in_xi,
    }))
}

fn parse_point(tok: &str) -> Result<Complex64, selberg::Error> {
    let tok = tok.trim();
    tok.parse::<Complex64>()
        .map_err(|_| selberg::Error::Parse(format!("bad point `{tok}`")))
}

pub fn run(cmd: ZetaCommand, s: &mut Session) -> anyhow::Result<()> {
    match cmd {
        ZetaCommand::Eval { ctx, s_grid, kind } => {
            let grid = parse_s_grid(&s_grid)?;
            let ctx = build_context(&ctx, s)?;
            if s.validate {
                return s
                    .out
                    .line(format!("ok: {} points, {} classes", grid.len(), ctx.spectrum().len()));
            }
            let mut w = s.out.csv();
            match kind {
                ZetaKind::LogZeta => w.write_record(["re_s", "im_s", "re_logZ", "im_logZ", "absZ"])?,
                _ => w.write_record(["re_s", "im_s", "re", "im", "abs"])?,
            }
            for z in grid {
                let (value, abs) = match kind {
                    ZetaKind::LogZeta => {
                        let l = zeta::log_zeta_truncated(z, &ctx)?;
                        (l, l.re.exp())
                    }
                    ZetaKind::Symmetric => {
                        let v = zeta::symmetric_zeta(z, &ctx)?;
                        (v, v.norm())
                    }
                    ZetaKind::Antisymmetric => {
                        let v = zeta::antisymmetric_zeta(z, &ctx)?;
                        (v, v.norm())
                    }
                };
                w.write_record([f(z.re), f(z.im), f(value.re), f(value.im), f(abs)])?;
            }
            w.flush()?;
            Ok(())
        }
        ZetaCommand::Xi { ctx, s_grid } => {
            let grid = parse_s_grid(&s_grid)?;
            let ctx = build_context(&ctx, s)?;
            selberg::orbital::plancherel_polynomial(ctx.sigma(), ctx.n())?;
            if s.validate {
                return s.out.line(format!("ok: {} points", grid.len()));
            }
            let mut w = s.out.csv();
            w.write_record(["re_s", "im_s", "re_xi", "im_xi"])?;
            for z in grid {
                let v = zeta::xi_correction(z, &ctx)?;
                w.write_record([f(z.re), f(z.im), f(v.re), f(v.im)])?;
            }
            w.flush()?;
            Ok(())
        }
        ZetaCommand::HeatTerms { ctx, t } => {
            let ts = parse_t_grid(&t)?;
            let ctx = build_context(&ctx, s)?;
            if s.validate {
                return s.out.line(format!("ok: {} times", ts.len()));
            }
            let mut w = s.out.csv();
            w.write_record(["t", "re_I", "im_I", "re_E", "im_E", "re_H", "im_H"])?;
            for t in ts {
                let h = zeta::geometric_heat_terms(t, &ctx)?;
                let (ire, iim) = h
                    .identity
                    .map_or((String::new(), String::new()), |i| (f(i.re), f(i.im)));
                w.write_record([
                    f(t),
                    ire,
                    iim,
                    f(h.elliptic.re),
                    f(h.elliptic.im),
                    f(h.hyperbolic.re),
                    f(h.hyperbolic.im),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
        ZetaCommand::Pfrac { s: list } => {
            let toks: Vec<&str> = list.split(',').map(str::trim).collect();
            let exact: Option<Vec<Rational64>> = toks.iter().map(|t| t.parse::<Rational64>().ok()).collect();
            match exact {
                Some(points) => {
                    let c = zeta::partial_fraction_coeffs_exact(&points)?;
                    if s.validate {
                        return s.out.line("ok");
                    }
                    s.out
                        .line(c.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","))
                }
                None => {
                    let points = toks.iter().map(|t| parse_point(t)).collect::<Result<Vec<_>, _>>()?;
                    let set = zeta::partial_fraction_coeffs(&points)?;
                    if s.validate {
                        return s.out.line("ok");
                    }
                    let mut w = s.out.csv();
                    w.write_record(["re_s", "im_s", "re_c", "im_c"])?;
                    for (p, c) in set.s_points.iter().zip(&set.c_coeffs) {
                        w.write_record([f(p.re), f(p.im), f(c.re), f(c.im)])?;
                    }
                    w.flush()?;
                    Ok(())
                }
            }
        }
        ZetaCommand::Abscissa { ctx } => {
            let ctx = build_context(&ctx, s)?;
            if s.validate {
                return s.out.line("ok");
            }
            let a = zeta::convergence_abscissa_estimate(&ctx)?;
            s.out.line(format!("c={}", f(a.c)))?;
            s.out.line(format!("count_rate={}", f(a.count_rate)))?;
            s.out.line(format!("chi_K={}", f(a.chi_growth.0)))?;
            s.out.line(format!("chi_k={}", f(a.chi_growth.1)))?;
            s.out.line(format!("defaulted={}", a.defaulted))
        }
    }
}
