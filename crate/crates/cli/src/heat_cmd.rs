use clap::{Args, Subcommand};
use selberg::heat::{self, FlatOrbifoldModel};

use crate::grid::parse_t_grid;
use crate::output::f;
use crate::Session;

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// circle, circle-reflection, or pillowcase (alias torus-involution).
    #[arg(long)]
    model: String,
    /// Radius R of the circle models.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Pillowcase side lengths `a,b`.
    #[arg(long, default_value = "6.283185307179586,6.283185307179586")]
    sides: String,
}

impl ModelArgs {
    fn build(&self) -> anyhow::Result<FlatOrbifoldModel> {
        let sides = crate::grid::parse_list(&self.sides)?;
        let [a, b] = sides.as_slice() else {
            return Err(selberg::Error::Invalid("--sides takes two lengths".into()).into());
        };
        Ok(FlatOrbifoldModel::new(&self.model, self.radius, (*a, *b))?)
    }
}

#[derive(Debug, Subcommand)]
pub enum HeatCommand {
    /// Heat trace Σ e^{−tλ} on a t grid.
    Trace {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma list, or `lo:hi:count`.
        #[arg(long)]
        t: String,
    },
    /// Fit the small-t expansion and report its coefficients.
    Fit {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "0.0005:0.01:40")]
        t_grid: String,
    },
    /// Weyl-law slope check of the eigenvalue counting function.
    Weyl {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        rmax: f64,
    },
    /// Exact eigenvalues with multiplicities up to a cutoff.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        cutoff: f64,
    },
    /// Plancherel constant C from the leading heat coefficient.
    Calibrate {
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
}

pub fn run(cmd: HeatCommand, s: &mut Session) -> anyhow::Result<()> {
    match cmd {
        HeatCommand::Trace { model, t } => {
            let model = model.build()?;
            let ts = parse_t_grid(&t)?;
            if s.validate {
                return s.out.line("ok");
            }
            let traces = heat::heat_traces(&model, &ts)?;
            let mut w = s.out.csv();
            w.write_record(["t", "trace"])?;
            for (t, tr) in ts.iter().zip(traces) {
                w.write_record([f(*t), f(tr)])?;
            }
            w.flush()?;
            Ok(())
        }
        HeatCommand::Fit { model, t_grid } => {
            let model = model.build()?;
            let ts = parse_t_grid(&t_grid)?;
            if s.validate {
                return s.out.line("ok");
            }
            let fit = heat::fit_expansion(&model, &ts)?;
            {
                let mut w = s.out.csv();
                w.write_record(["exponent", "coefficient"])?;
                for (e, c) in &fit.coefficients {
                    w.write_record([f(*e), f(*c)])?;
                }
                w.flush()?;
            }
            s.out.line(format!(
                "# leading={} predicted={}",
                f(fit.leading()),
                f(fit.predicted_leading)
            ))?;
            s.out.line(format!(
                "# constant={} predicted={}",
                f(fit.constant_term()),
                f(fit.predicted_constant)
            ))?;
            s.out.line(format!(
                "# max_relative_residual={} condition={}",
                f(fit.max_relative_residual),
                f(fit.condition_number)
            ))?;
            if let Some(e) = heat::stratum_exponent(&fit) {
                s.out.line(format!("# stratum_exponent={}", f(e)))?;
            }
            Ok(())
        }
        HeatCommand::Weyl { model, rmax } => {
            let model = model.build()?;
            if !(rmax > 0.0) {
                return Err(selberg::Error::Invalid(format!("rmax {rmax} must be positive")).into());
            }
            if s.validate {
                return s.out.line("ok");
            }
            let r = heat::weyl_counting_check(&model, rmax)?;
            s.out.line(format!("fitted_slope={:.6}", r.fitted_slope))?;
            s.out.line(format!("predicted_slope={:.6}", r.predicted_slope))?;
            s.out.line(format!("relative_error={:.3e}", r.relative_error))?;
            s.out.line(format!("eigenvalues={}", r.eigenvalue_count))
        }
        HeatCommand::Spectrum { model, cutoff } => {
            let model = model.build()?;
            if s.validate {
                return s.out.line("ok");
            }
            let ev = heat::exact_spectrum(&model, cutoff)?;
            let mut w = s.out.csv();
            w.write_record(["eigenvalue", "multiplicity"])?;
            for e in ev {
                w.write_record([f(e.value), e.multiplicity.to_string()])?;
            }
            w.flush()?;
            Ok(())
        }
        HeatCommand::Calibrate { n } => {
            let c = heat::calibrate_plancherel(n)?;
            if s.validate {
                return s.out.line("ok");
            }
            s.out.line(f(c))
        }
    }
}
