//! Heat-trace asymptotics and the Weyl law on flat global-quotient orbifolds
//! whose spectra are known in closed form.
//!
//! Three models are supported:
//!
//! - `circle`: the circle of circumference `2πR` (a manifold, used as control);
//! - `circle-reflection`: `S¹/ℤ₂` by `x ↦ −x`, an interval with two `ℤ₂` points;
//! - `pillowcase`: `T²/ℤ₂` by `z ↦ −z` on `ℝ²/(aℤ × bℤ)`, four `ℤ₂` cone points.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Target bound on the neglected tail of a spectral sum.
pub const TAIL_TOL: f64 = 1e-14;

/// Safety factor applied to the Gaussian tail bound.
const TAIL_SAFETY: f64 = 10.0;

/// Largest `t` accepted by [`fit_expansion`].
pub const ASYMPTOTIC_WINDOW: f64 = 0.05;

/// Condition-number ceiling for the least-squares fit.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlatOrbifoldModel {
    Circle { radius: f64 },
    CircleReflection { radius: f64 },
    Pillowcase { side_a: f64, side_b: f64 },
}

/// Singular stratum: its dimension and the order of its isotropy group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stratum {
    pub dim: usize,
    pub isotropy_order: usize,
}

impl FlatOrbifoldModel {
    pub fn new(name: &str, radius: f64, sides: (f64, f64)) -> Result<Self> {
        let model = match name {
            "circle" => Self::Circle { radius },
            "circle-reflection" => Self::CircleReflection { radius },
            "pillowcase" | "torus-involution" => Self::Pillowcase {
                side_a: sides.0,
                side_b: sides.1,
            },
            other => return Err(Error::Invalid(format!("unknown model {other:?}"))),
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Circle { radius } | Self::CircleReflection { radius } => radius > 0.0,
            Self::Pillowcase { side_a, side_b } => side_a > 0.0 && side_b > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("non-positive size parameter in {self}")))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Circle { .. } => "circle",
            Self::CircleReflection { .. } => "circle-reflection",
            Self::Pillowcase { .. } => "pillowcase",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Circle { .. } | Self::CircleReflection { .. } => 1,
            Self::Pillowcase { .. } => 2,
        }
    }

    pub fn volume(&self) -> f64 {
        match *self {
            Self::Circle { radius } => 2.0 * PI * radius,
            Self::CircleReflection { radius } => PI * radius,
            Self::Pillowcase { side_a, side_b } => side_a * side_b / 2.0,
        }
    }

    pub fn strata(&self) -> Vec<Stratum> {
        let point = Stratum {
            dim: 0,
            isotropy_order: 2,
        };
        match self {
            Self::Circle { .. } => vec![],
            Self::CircleReflection { .. } => vec![point; 2],
            Self::Pillowcase { .. } => vec![point; 4],
        }
    }

    /// Multiplicity of the zero eigenvalue (scalar Laplacian, connected).
    pub fn zero_multiplicity(&self) -> usize {
        1
    }
}

impl fmt::Display for FlatOrbifoldModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Circle { radius } | Self::CircleReflection { radius } => {
                write!(f, "{}(R={radius})", self.name())
            }
            Self::Pillowcase { side_a, side_b } => {
                write!(f, "pillowcase(a={side_a}, b={side_b})")
            }
        }
    }
}

impl FromStr for FlatOrbifoldModel {
    type Err = Error;

    /// Unit-size models by name; the pillowcase defaults to the square of side `2π`.
    fn from_str(s: &str) -> Result<Self> {
        Self::new(s, 1.0, (2.0 * PI, 2.0 * PI))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub value: f64,
    pub multiplicity: usize,
}

/// Eigenvalues `≤ cutoff` with multiplicities, sorted ascending.
pub fn exact_spectrum(model: &FlatOrbifoldModel, cutoff: f64) -> Result<Vec<Eigenvalue>> {
    model.validate()?;
    if !(cutoff > 0.0) {
        return Err(Error::Invalid(format!("cutoff must be positive, got {cutoff}")));
    }
    let mut pairs: Vec<(f64, usize)> = Vec::new();
    match *model {
        FlatOrbifoldModel::Circle { radius } | FlatOrbifoldModel::CircleReflection { radius } => {
            // eigenfunctions e^{±imx/R}; the reflection keeps cos(mx/R) only
            let both = matches!(model, FlatOrbifoldModel::Circle { .. });
            let m_max = (cutoff.sqrt() * radius).floor() as u64;
            for m in 0..=m_max {
                let mult = if m == 0 || !both { 1 } else { 2 };
                pairs.push(((m as f64 / radius).powi(2), mult));
            }
        }
        FlatOrbifoldModel::Pillowcase { side_a, side_b } => {
            // cos(2π(mx/a + ky/b)), one per orbit {±(m,k)}
            let fa = 2.0 * PI / side_a;
            let fb = 2.0 * PI / side_b;
            let m_max = (cutoff.sqrt() / fa).floor() as i64;
            let k_max = (cutoff.sqrt() / fb).floor() as i64;
            for m in 0..=m_max {
                for k in -k_max..=k_max {
                    if m == 0 && k < 0 {
                        continue;
                    }
                    let value = (fa * m as f64).powi(2) + (fb * k as f64).powi(2);
                    if value <= cutoff {
                        pairs.push((value, 1));
                    }
                }
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<Eigenvalue> = Vec::new();
    for (value, mult) in pairs {
        if value > cutoff {
            continue;
        }
        match out.last_mut() {
            Some(last) if (last.value - value).abs() <= 1e-12 * value.max(1.0) => last.multiplicity += mult,
            _ => out.push(Eigenvalue {
                value,
                multiplicity: mult,
            }),
        }
    }
    Ok(out)
}

/// Spectral cutoff `Λ` whose neglected tail `Σ_{λ>Λ} m e^{−tλ}` is below
/// [`TAIL_TOL`]; the count `#{λ ≤ x}` is bounded by `A x^{d/2} + B` for the
/// flat models, and the tail integral of that bound decays like `e^{−tΛ}`.
fn adaptive_cutoff(model: &FlatOrbifoldModel, t: f64) -> f64 {
    let d = model.dim() as f64;
    let weyl = weyl_constant(model) * 4.0 + 4.0;
    let mut cutoff = 1.0 / t;
    loop {
        let x = cutoff;
        // ∫_x^∞ e^{−tλ} dN(λ) ≤ e^{−tx} (N(x) + (d/2t) x^{d/2−1} A) with slack
        let bound = (-t * x).exp() * weyl * (x.powf(d / 2.0) + d / (2.0 * t) * x.powf(d / 2.0 - 1.0).max(1.0) + 1.0);
        if bound * TAIL_SAFETY < TAIL_TOL {
            return cutoff;
        }
        cutoff *= 1.5;
    }
}

/// `Σ m_λ e^{−tλ}` to a tail error below [`TAIL_TOL`].
pub fn heat_trace(model: &FlatOrbifoldModel, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Invalid(format!("t must be positive, got {t}")));
    }
    let spectrum = exact_spectrum(model, adaptive_cutoff(model, t))?;
    // smallest terms first
    let mut acc = CompensatedSum::new();
    for e in spectrum.iter().rev() {
        acc.add(e.multiplicity as f64 * (-t * e.value).exp());
    }
    Ok(acc.total())
}

/// Heat trace on a grid of times, evaluated in parallel.
pub fn heat_traces(model: &FlatOrbifoldModel, t_grid: &[f64]) -> Result<Vec<f64>> {
    t_grid.par_iter().map(|&t| heat_trace(model, t)).collect()
}

/// Least-squares fit of `Σ_k c_k t^{(k−d)/2}`, `k = 0..=d+1`.
#[derive(Debug, Clone)]
pub struct HeatFit {
    pub t_grid: Vec<f64>,
    pub traces: Vec<f64>,
    /// `(exponent, coefficient)` for every basis function.
    pub coefficients: Vec<(f64, f64)>,
    pub max_relative_residual: f64,
    pub condition_number: f64,
    /// Predicted leading coefficient `(4π)^{−d/2} vol`.
    pub predicted_leading: f64,
    /// Predicted constant term: an isolated point fixed by `−1 ∈ O(d)` in a
    /// `ℤ₂` quotient contributes `1/(2·|det(1 − (−1))|) = 2^{−d−1}`.
    pub predicted_constant: f64,
}

impl HeatFit {
    pub fn leading(&self) -> f64 {
        self.coefficients[0].1
    }

    pub fn coefficient(&self, exponent: f64) -> Option<f64> {
        self.coefficients
            .iter()
            .find(|(e, _)| (e - exponent).abs() < 1e-12)
            .map(|&(_, c)| c)
    }

    pub fn constant_term(&self) -> f64 {
        self.coefficient(0.0).unwrap_or(0.0)
    }

    pub fn leading_relative_error(&self) -> f64 {
        (self.leading() - self.predicted_leading).abs() / self.predicted_leading
    }
}

pub fn fit_expansion(model: &FlatOrbifoldModel, t_grid: &[f64]) -> Result<HeatFit> {
    let d = model.dim();
    let exponents: Vec<f64> = (0..=d + 1).map(|k| (k as f64 - d as f64) / 2.0).collect();
    if t_grid.len() < exponents.len() {
        return Err(Error::Invalid(format!(
            "need at least {} grid points, got {}",
            exponents.len(),
            t_grid.len()
        )));
    }
    if let Some(&bad) = t_grid.iter().find(|&&t| !(t > 0.0 && t <= ASYMPTOTIC_WINDOW)) {
        return Err(Error::Invalid(format!(
            "t = {bad} outside the asymptotic window (0, {ASYMPTOTIC_WINDOW}]"
        )));
    }
    let traces = heat_traces(model, t_grid)?;

    // Rows scaled by the leading power so every equation has unit weight.
    let rows = t_grid.len();
    let lead = exponents[0];
    let a = DMatrix::from_fn(rows, exponents.len(), |i, j| t_grid[i].powf(exponents[j] - lead));
    let b = DVector::from_fn(rows, |i, _| traces[i] * t_grid[i].powf(-lead));
    // column equilibration before measuring the conditioning
    let norms: Vec<f64> = (0..a.ncols()).map(|j| a.column(j).norm()).collect();
    let scaled = DMatrix::from_fn(rows, a.ncols(), |i, j| a[(i, j)] / norms[j]);
    let svd = scaled.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::IllConditioned(condition));
    }
    let sol = svd.solve(&b, 0.0).map_err(|e| Error::Invalid(e.to_string()))?;
    let coeffs: Vec<f64> = sol.iter().zip(&norms).map(|(x, n)| x / n).collect();

    let max_relative_residual = t_grid
        .iter()
        .zip(&traces)
        .map(|(&t, &tr)| {
            let fit: f64 = exponents.iter().zip(&coeffs).map(|(&e, &c)| c * t.powf(e)).sum();
            ((fit - tr) / tr).abs()
        })
        .fold(0.0, f64::max);

    let points = model.strata().iter().filter(|s| s.dim == 0).count();
    let predicted_constant = points as f64 / 2f64.powi(d as i32 + 1);
    Ok(HeatFit {
        t_grid: t_grid.to_vec(),
        traces,
        coefficients: exponents.into_iter().zip(coeffs).collect(),
        max_relative_residual,
        condition_number: condition,
        predicted_leading: (4.0 * PI).powf(-(d as f64) / 2.0) * model.volume(),
        predicted_constant,
    })
}

/// Exponent `β` of the first correction `trace − c_0 t^{−d/2} ≈ C t^β`,
/// estimated from the log-log slope between the two smallest grid times.
pub fn stratum_exponent(fit: &HeatFit) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = fit
        .t_grid
        .iter()
        .zip(&fit.traces)
        .map(|(&t, &tr)| (t, tr - fit.predicted_leading * t.powf(fit.coefficients[0].0)))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (t0, r0) = pts[0];
    let (t1, r1) = *pts.last()?;
    if r0 <= 0.0 || r1 <= 0.0 || t0 == t1 {
        return None;
    }
    Some((r1.ln() - r0.ln()) / (t1.ln() - t0.ln()))
}

/// Prefactor of the Weyl law `N(r) ~ A r^{d/2}` with `A = rk·vol/((4π)^{d/2} Γ(d/2+1))`.
pub fn weyl_constant(model: &FlatOrbifoldModel) -> f64 {
    let d = model.dim() as f64;
    model.volume() / ((4.0 * PI).powf(d / 2.0) * gamma_half_integer(d / 2.0 + 1.0))
}

/// `Γ(x)` for positive integers and half-integers.
fn gamma_half_integer(x: f64) -> f64 {
    let (mut value, mut arg) = if x.fract() == 0.0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while arg < x - 1e-12 {
        value *= arg;
        arg += 1.0;
    }
    value
}

#[derive(Debug, Clone)]
pub struct WeylReport {
    pub fitted_slope: f64,
    pub predicted_slope: f64,
    pub relative_error: f64,
    pub eigenvalue_count: usize,
}

/// Minimum number of eigenvalues (with multiplicity) needed by [`weyl_counting_check`].
pub const MIN_WEYL_EIGENVALUES: usize = 200;

/// Fits `N(r) ≈ A r^{d/2}` over `r ∈ [r_max/2, r_max]` and compares `A` with the
/// Weyl-law prediction.
pub fn weyl_counting_check(model: &FlatOrbifoldModel, r_max: f64) -> Result<WeylReport> {
    let spectrum = exact_spectrum(model, r_max)?;
    let cumulative: Vec<(f64, usize)> = spectrum
        .iter()
        .scan(0usize, |acc, e| {
            *acc += e.multiplicity;
            Some((e.value, *acc))
        })
        .collect();
    let total = cumulative.last().map_or(0, |c| c.1);
    if total < MIN_WEYL_EIGENVALUES {
        return Err(Error::Invalid(format!(
            "only {total} eigenvalues below {r_max}; need at least {MIN_WEYL_EIGENVALUES}"
        )));
    }
    let count_at = |r: f64| -> f64 {
        let idx = cumulative.partition_point(|&(v, _)| v <= r);
        if idx == 0 {
            0.0
        } else {
            cumulative[idx - 1].1 as f64
        }
    };
    let half_d = model.dim() as f64 / 2.0;
    let samples = 200;
    let mut num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    for i in 0..=samples {
        let r = r_max * (0.5 + 0.5 * i as f64 / samples as f64);
        let x = r.powf(half_d);
        num.add(count_at(r) * x);
        den.add(x * x);
    }
    let fitted_slope = num.total() / den.total();
    let predicted_slope = weyl_constant(model);
    Ok(WeylReport {
        fitted_slope,
        predicted_slope,
        relative_error: (fitted_slope - predicted_slope).abs() / predicted_slope,
        eigenvalue_count: total,
    })
}

/// Solves `C ∫ ν² e^{−tν²} dν = (4πt)^{−3/2}` at `t = 1`; the result is `1/(4π²)`.
pub fn calibrate_plancherel(n: usize) -> Result<f64> {
    calibrate_plancherel_at(n, 1.0)
}

pub fn calibrate_plancherel_at(n: usize, t: f64) -> Result<f64> {
    if n != 1 {
        return Err(Error::UnsupportedRank {
            rank: n,
            reason: "Plancherel calibration is only available for n = 1",
        });
    }
    if !(t > 0.0) {
        return Err(Error::Invalid(format!("t must be positive, got {t}")));
    }
    let identity_coefficient = (4.0 * PI * t).powf(-1.5);
    let second_moment = PI.sqrt() / 2.0 * t.powf(-1.5);
    Ok(identity_coefficient / second_moment)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reflection() -> FlatOrbifoldModel {
        "circle-reflection".parse().unwrap()
    }

    fn values(spec: &[Eigenvalue]) -> Vec<(f64, usize)> {
        spec.iter().map(|e| (e.value, e.multiplicity)).collect()
    }

    #[test]
    fn spectra_examples() {
        let s = exact_spectrum(&reflection(), 10.0).unwrap();
        assert_eq!(values(&s), vec![(0.0, 1), (1.0, 1), (4.0, 1), (9.0, 1)]);
        let s = exact_spectrum(&"circle".parse().unwrap(), 5.0).unwrap();
        assert_eq!(values(&s), vec![(0.0, 1), (1.0, 2), (4.0, 2)]);
        // orbits of (m,k) ↦ (−m,−k): {±(1,0)}, {±(0,1)} at 1 and {±(1,1)}, {±(1,−1)} at 2
        let s = exact_spectrum(&"pillowcase".parse().unwrap(), 3.0).unwrap();
        assert_eq!(values(&s), vec![(0.0, 1), (1.0, 2), (2.0, 2)]);
        assert!(exact_spectrum(&reflection(), 0.0).is_err());
        assert!(FlatOrbifoldModel::new("sphere", 1.0, (1.0, 1.0)).is_err());
    }

    #[test]
    fn trace_examples() {
        let direct: f64 = (0..40).map(|n: i32| (-(n * n) as f64).exp()).sum();
        let tr = heat_trace(&reflection(), 1.0).unwrap();
        assert!((tr - direct).abs() < 1e-14);
        assert!((tr - 1.386_318_602_413_326).abs() < 1e-14);
        assert!((heat_trace(&reflection(), 200.0).unwrap() - 1.0).abs() < 1e-80);
        for t in [0.01, 0.3, 2.0] {
            let circle = heat_trace(&"circle".parse().unwrap(), t).unwrap();
            let refl = heat_trace(&reflection(), t).unwrap();
            assert!((circle - (2.0 * refl - 1.0)).abs() < 1e-12 * circle);
        }
        assert!(heat_trace(&reflection(), 0.0).is_err());
    }

    #[test]
    fn completely_monotone() {
        for model in ["circle", "circle-reflection", "pillowcase"] {
            let m: FlatOrbifoldModel = model.parse().unwrap();
            let ts: Vec<f64> = (0..12).map(|i| 0.05 + 0.1 * i as f64).collect();
            let mut diffs = heat_traces(&m, &ts).unwrap();
            for order in 1..=3 {
                diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
                let sign = if order % 2 == 1 { -1.0 } else { 1.0 };
                assert!(diffs.iter().all(|&d| d * sign > 0.0), "{model} order {order}");
            }
        }
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_half_integer(1.5) - PI.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(gamma_half_integer(2.0), 1.0);
        assert_eq!(gamma_half_integer(4.0), 6.0);
    }

    #[test]
    fn calibration_is_t_independent() {
        let c: Vec<f64> = [0.1, 1.0, 10.0]
            .iter()
            .map(|&t| calibrate_plancherel_at(1, t).unwrap())
            .collect();
        for x in &c {
            assert!((x - c[1]).abs() < 1e-14 * c[1]);
        }
        assert!(calibrate_plancherel(2).is_err());
    }

    #[test]
    fn fit_rejects_large_t() {
        assert!(fit_expansion(&reflection(), &[0.01, 0.02, 0.03, 0.1]).is_err());
        assert!(fit_expansion(&reflection(), &[0.01, 0.02]).is_err());
    }

    #[test]
    fn weyl_needs_enough_eigenvalues() {
        assert!(weyl_counting_check(&reflection(), 100.0).is_err());
    }
}
