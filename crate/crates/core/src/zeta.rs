//! Truncated Selberg zeta functions over a cutoff length spectrum, the
//! geometric terms of the heat supertrace, and partial-fraction data.
//!
//! For a hyperbolic class with length `l`, rotation angles `φ`, power `p`,
//! hyperbolic weight `D` and orbifold factor `v`,
//!
//! ```text
//! log Z(s, σ) = −Σ_γ tr χ(γ) v(γ) tr σ(m_γ) e^{−(s+n) l} / (p · e^{n l} D(γ))
//! ```

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use num_rational::Rational64;
use rayon::prelude::*;

use crate::geometry::{fit_chi_growth, ConjClassRecord, LengthSpectrum};
use crate::lie::{self, WeightVector};
use crate::orbital;
use crate::sum::sum_complex;
use crate::{Error, Result};

/// Classes needed before the abscissa is fitted rather than defaulted.
pub const MIN_FIT_CLASSES: usize = 5;
const SQUARE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZetaOptions {
    /// Use `conj(tr σ)` in Z and `tr σ` in H instead of the other way round.
    pub conjugate_sigma_trace: bool,
    pub allow_ambiguous: bool,
    /// Multiply elliptic terms of Ξ by the per-class volume.
    pub elliptic_volume_in_xi: bool,
}

impl Default for ZetaOptions {
    fn default() -> Self {
        Self {
            conjugate_sigma_trace: false,
            allow_ambiguous: false,
            elliptic_volume_in_xi: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ZetaTermContext {
    n: usize,
    sigma: WeightVector,
    chi_dim: usize,
    spectrum: LengthSpectrum,
    vol: f64,
    elliptic_volumes: Vec<f64>,
    options: ZetaOptions,
    abscissa: OnceLock<Option<f64>>,
    warned: OnceLock<()>,
}

impl ZetaTermContext {
    pub fn new(n: usize, sigma: WeightVector, chi_dim: usize, spectrum: LengthSpectrum, vol: f64) -> Result<Self> {
        if sigma.rank() != n {
            return Err(Error::RankMismatch {
                expected: n,
                found: sigma.rank(),
            });
        }
        if !sigma.is_dominant() {
            return Err(Error::NotDominant(sigma.to_string()));
        }
        if !(vol > 0.0) {
            return Err(Error::Invalid(format!("volume {vol} must be positive")));
        }
        if !(spectrum.meta.cutoff > 0.0) {
            return Err(Error::Invalid(format!(
                "spectrum cutoff {} must be positive",
                spectrum.meta.cutoff
            )));
        }
        if chi_dim == 0 {
            return Err(Error::Invalid("dim V_χ must be positive".into()));
        }
        if let Some(r) = spectrum.records().iter().find(|r| r.angles.rank() != n) {
            return Err(Error::RankMismatch {
                expected: n,
                found: r.angles.rank(),
            });
        }
        let elliptic = spectrum.elliptic().count();
        if elliptic > 0 {
            log::warn!("elliptic centralizer volumes not supplied; using 1 for all {elliptic} classes");
        }
        Ok(Self {
            n,
            sigma,
            chi_dim,
            spectrum,
            vol,
            elliptic_volumes: vec![1.0; elliptic],
            options: ZetaOptions::default(),
            abscissa: OnceLock::new(),
            warned: OnceLock::new(),
        })
    }

    /// Per-class `vol(Γ_γ∖G_γ)` for the elliptic classes, in spectrum order.
    pub fn with_elliptic_volumes(mut self, volumes: Vec<f64>) -> Result<Self> {
        let expected = self.spectrum.elliptic().count();
        if volumes.len() != expected {
            return Err(Error::Invalid(format!(
                "{} elliptic volumes given for {expected} elliptic classes",
                volumes.len()
            )));
        }
        if let Some(v) = volumes.iter().find(|v| !(**v > 0.0)) {
            return Err(Error::Invalid(format!("elliptic volume {v} must be positive")));
        }
        self.elliptic_volumes = volumes;
        Ok(self)
    }

    pub fn with_options(mut self, options: ZetaOptions) -> Self {
        self.options = options;
        self
    }

    /// Same data with a different `σ` of the same rank.
    pub fn with_sigma(&self, sigma: WeightVector) -> Result<Self> {
        if sigma.rank() != self.n {
            return Err(Error::RankMismatch {
                expected: self.n,
                found: sigma.rank(),
            });
        }
        let mut ctx = self.clone();
        ctx.sigma = sigma;
        Ok(ctx)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> &WeightVector {
        &self.sigma
    }

    pub fn chi_dim(&self) -> usize {
        self.chi_dim
    }

    pub fn spectrum(&self) -> &LengthSpectrum {
        &self.spectrum
    }

    pub fn vol(&self) -> f64 {
        self.vol
    }

    pub fn options(&self) -> ZetaOptions {
        self.options
    }

    fn elliptic_with_volumes(&self) -> impl Iterator<Item = (&ConjClassRecord, f64)> {
        self.spectrum.elliptic().zip(self.elliptic_volumes.iter().copied())
    }

    fn check_ambiguous(&self) -> Result<()> {
        let count = self.spectrum.ambiguous_count();
        if count > 0 && !self.options.allow_ambiguous {
            return Err(Error::Ambiguous(count));
        }
        Ok(())
    }

    fn flipped(&self) -> Option<Self> {
        let w = lie::w0_flip(&self.sigma);
        (w != self.sigma).then(|| {
            let mut ctx = self.clone();
            ctx.sigma = w;
            ctx
        })
    }
}

/// `ε(σ)`: 2 if `σ ≠ w_0σ`, 1 otherwise.
pub fn epsilon_sigma(sigma: &WeightVector) -> u32 {
    if lie::w0_flip(sigma) == *sigma {
        1
    } else {
        2
    }
}

fn sigma_trace(sigma: &WeightVector, record: &ConjClassRecord) -> Result<Complex64> {
    lie::class_character(sigma, &record.angles)
}

fn d_gamma(record: &ConjClassRecord) -> Result<f64> {
    record
        .d_gamma
        .ok_or_else(|| Error::Invalid("hyperbolic class without D(γ)".into()))
}

/// `log Z(s, σ)` summed over the hyperbolic classes of the spectrum.
pub fn log_zeta_truncated(s: Complex64, ctx: &ZetaTermContext) -> Result<Complex64> {
    ctx.check_ambiguous()?;
    let records: Vec<&ConjClassRecord> = ctx.spectrum.hyperbolic().collect();
    if records.is_empty() {
        ctx.warned
            .get_or_init(|| log::warn!("empty hyperbolic spectrum: log Z = 0"));
        return Ok(Complex64::new(0.0, 0.0));
    }
    if let Some(c) = *ctx
        .abscissa
        .get_or_init(|| convergence_abscissa_estimate(ctx).ok().map(|a| a.c))
    {
        if s.re <= c {
            ctx.warned
                .get_or_init(|| log::warn!("Re(s) = {} is not above the estimated abscissa {c:.4}", s.re));
        }
    }
    let n = ctx.n as f64;
    let terms = records
        .par_iter()
        .map(|r| {
            let mut tr_sigma = sigma_trace(&ctx.sigma, r)?;
            if ctx.options.conjugate_sigma_trace {
                tr_sigma = tr_sigma.conj();
            }
            let denom = r.power as f64 * (n * r.length).exp() * d_gamma(r)?;
            Ok(r.tr_chi * r.v_gamma * tr_sigma * (-(s + n) * r.length).exp() / denom)
        })
        .collect::<Result<Vec<Complex64>>>()?;
    Ok(-sum_complex(terms))
}

pub fn zeta(s: Complex64, ctx: &ZetaTermContext) -> Result<Complex64> {
    Ok(log_zeta_truncated(s, ctx)?.exp())
}

/// `S(s, σ) = Z(s, σ) Z(s, w_0σ)`, or `Z(s, σ)` when `σ = w_0σ`.
pub fn symmetric_zeta(s: Complex64, ctx: &ZetaTermContext) -> Result<Complex64> {
    let z = zeta(s, ctx)?;
    match ctx.flipped() {
        Some(f) => Ok(z * zeta(s, &f)?),
        None => Ok(z),
    }
}

/// `S_a(s, σ) = Z(s, σ) / Z(s, w_0σ)`.
pub fn antisymmetric_zeta(s: Complex64, ctx: &ZetaTermContext) -> Result<Complex64> {
    let Some(f) = ctx.flipped() else {
        return Err(Error::Invalid(format!(
            "σ = {} is fixed by w_0; the antisymmetric zeta function is undefined",
            ctx.sigma
        )));
    };
    let denom = zeta(s, &f)?;
    if !(denom.norm() > f64::MIN_POSITIVE) || !denom.is_finite() {
        return Err(Error::ZeroDivisor(format!("Z(s, w_0σ) = {denom} at s = {s}")));
    }
    Ok(zeta(s, ctx)? / denom)
}

/// `∫_ℝ e^{−tλ²} e^{−ilλ} dλ = √(π/t) e^{−l²/4t}`.
pub fn gaussian_fourier(t: f64, l: f64) -> f64 {
    (PI / t).sqrt() * (-l * l / (4.0 * t)).exp()
}

/// Identity, elliptic and hyperbolic contributions to the heat supertrace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatTerms {
    /// `None` unless `n = 1`, where the Plancherel polynomial is known.
    pub identity: Option<Complex64>,
    pub elliptic: Complex64,
    pub hyperbolic: Complex64,
}

impl HeatTerms {
    pub fn total(&self) -> Option<Complex64> {
        self.identity.map(|i| i + self.elliptic + self.hyperbolic)
    }
}

/// `(I(t), E(t), H(t))` for the context.
pub fn geometric_heat_terms(t: f64, ctx: &ZetaTermContext) -> Result<HeatTerms> {
    if !(t > 0.0) {
        return Err(Error::Invalid(format!("t = {t} must be positive")));
    }
    ctx.check_ambiguous()?;
    let eps = epsilon_sigma(&ctx.sigma) as f64;
    let identity = if ctx.n == 1 {
        let p = orbital::plancherel_polynomial(&ctx.sigma, 1)?;
        Some(eps * ctx.chi_dim as f64 * ctx.vol * p.gaussian_integral(t))
    } else {
        log::warn!("identity heat term needs the Plancherel polynomial, available for n = 1 only");
        None
    };

    let elliptic_terms = ctx
        .elliptic_with_volumes()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|(r, vol)| {
            let p = orbital::orbital_polynomial(&ctx.sigma, &r.angles, ctx.n)?;
            Ok(r.tr_chi * *vol * p.gaussian_integral(t))
        })
        .collect::<Result<Vec<_>>>()?;
    let elliptic = eps * sum_complex(elliptic_terms);

    let flipped = ctx.flipped();
    let hyperbolic_terms = ctx
        .spectrum
        .hyperbolic()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|r| {
            let mut tr = sigma_trace(&ctx.sigma, r)?;
            if let Some(f) = &flipped {
                tr += sigma_trace(&f.sigma, r)?;
            }
            if !ctx.options.conjugate_sigma_trace {
                tr = tr.conj();
            }
            let weight = r.v_gamma * r.primitive_length / (2.0 * PI * d_gamma(r)?);
            Ok(r.tr_chi * weight * tr * gaussian_fourier(t, r.length))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HeatTerms {
        identity,
        elliptic,
        hyperbolic: sum_complex(hyperbolic_terms),
    })
}

/// Exponent of the Ξ prefactor,
/// `−2π ε dim V vol ∫_0^s P_σ − 2ε Σ_γ tr χ(γ) vol_γ ∫_0^s P^γ_σ`.
pub fn xi_exponent(s: Complex64, ctx: &ZetaTermContext) -> Result<Complex64> {
    let eps = epsilon_sigma(&ctx.sigma) as f64;
    let p = orbital::plancherel_polynomial(&ctx.sigma, ctx.n)?;
    let identity = -2.0 * PI * eps * ctx.chi_dim as f64 * ctx.vol * p.antiderivative_at(s);
    let elliptic = ctx
        .elliptic_with_volumes()
        .map(|(r, vol)| {
            let q = orbital::orbital_polynomial(&ctx.sigma, &r.angles, ctx.n)?;
            let vol = if ctx.options.elliptic_volume_in_xi { vol } else { 1.0 };
            Ok(r.tr_chi * vol * q.antiderivative_at(s))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(identity - 2.0 * eps * sum_complex(elliptic))
}

/// `Ξ(s, σ) = exp(xi_exponent) · S(s, σ)`.
pub fn xi_correction(s: Complex64, ctx: &ZetaTermContext) -> Result<Complex64> {
    Ok(xi_exponent(s, ctx)?.exp() * symmetric_zeta(s, ctx)?)
}

/// Points `s_i` with pairwise distinct squares and `c_i = ∏_{j≠i} 1/(s_j² − s_i²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularizationSet {
    pub s_points: Vec<Complex64>,
    pub c_coeffs: Vec<Complex64>,
}

impl RegularizationSet {
    /// `Σ_i c_i / (s_i² + z)`.
    pub fn partial_fraction_sum(&self, z: Complex64) -> Complex64 {
        sum_complex(self.s_points.iter().zip(&self.c_coeffs).map(|(s, c)| c / (s * s + z)))
    }

    /// `∏_i 1 / (s_i² + z)`.
    pub fn product(&self, z: Complex64) -> Complex64 {
        self.s_points
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, s| acc / (s * s + z))
    }
}

pub fn partial_fraction_coeffs(s_points: &[Complex64]) -> Result<RegularizationSet> {
    if s_points.is_empty() {
        return Err(Error::Invalid("at least one point is required".into()));
    }
    let squares: Vec<Complex64> = s_points.iter().map(|s| s * s).collect();
    for i in 0..squares.len() {
        for j in i + 1..squares.len() {
            let scale = 1.0 + squares[i].norm() + squares[j].norm();
            if (squares[i] - squares[j]).norm() <= SQUARE_TOL * scale {
                return Err(Error::RepeatedSquares(i, j));
            }
        }
    }
    let c_coeffs = (0..squares.len())
        .map(|i| {
            (0..squares.len())
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc / (squares[j] - squares[i]))
        })
        .collect();
    Ok(RegularizationSet {
        s_points: s_points.to_vec(),
        c_coeffs,
    })
}

/// The same coefficients in exact rational arithmetic.
pub fn partial_fraction_coeffs_exact(s_points: &[Rational64]) -> Result<Vec<Rational64>> {
    if s_points.is_empty() {
        return Err(Error::Invalid("at least one point is required".into()));
    }
    let squares: Vec<Rational64> = s_points.iter().map(|s| s * s).collect();
    for i in 0..squares.len() {
        for j in i + 1..squares.len() {
            if squares[i] == squares[j] {
                return Err(Error::RepeatedSquares(i, j));
            }
        }
    }
    Ok((0..squares.len())
        .map(|i| {
            (0..squares.len())
                .filter(|&j| j != i)
                .fold(Rational64::from_integer(1), |acc, j| acc / (squares[j] - squares[i]))
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbscissaEstimate {
    pub c: f64,
    /// Exponential growth rate of the class count `N(L)`.
    pub count_rate: f64,
    /// `(K, k)` with `|tr χ(γ)| ≤ K e^{k l(γ)}` on the spectrum.
    pub chi_growth: (f64, f64),
    /// True when too few classes were available and `c = 2n + k` was used.
    pub defaulted: bool,
}

/// Conservative abscissa `c = h + k` from the class-count growth rate `h`
/// and the character growth rate `k`; the decay of `e^{−n l}/D(γ)` is not
/// credited.
pub fn convergence_abscissa_estimate(ctx: &ZetaTermContext) -> Result<AbscissaEstimate> {
    let lengths: Vec<f64> = ctx.spectrum.hyperbolic().map(|r| r.length).collect();
    if lengths.is_empty() {
        return Err(Error::Invalid("abscissa needs a nonempty hyperbolic spectrum".into()));
    }
    let chi_growth = fit_chi_growth(&ctx.spectrum).unwrap_or_else(|| {
        let big_k = ctx.spectrum.hyperbolic().map(|r| r.tr_chi.norm()).fold(0.0, f64::max);
        (big_k, 0.0)
    });
    if lengths.len() < MIN_FIT_CLASSES {
        let c = 2.0 * ctx.n as f64 + chi_growth.1;
        log::warn!(
            "{} hyperbolic classes are too few to fit the abscissa; using c = {c}",
            lengths.len()
        );
        return Ok(AbscissaEstimate {
            c,
            count_rate: 0.0,
            chi_growth,
            defaulted: true,
        });
    }
    // Counting function sampled at the last class of each length.
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (i, &l) in lengths.iter().enumerate() {
        let count = (i + 1) as f64;
        match pts.last_mut() {
            Some(p) if (p.0 - l).abs() <= 1e-9 * (1.0 + l) => p.1 = count.ln(),
            _ => pts.push((l, count.ln())),
        }
    }
    let count_rate = crate::geometry::least_squares_slope(&pts).unwrap_or(0.0).max(0.0);
    let c = count_rate + chi_growth.1;
    log::info!(
        "abscissa estimate c = {c:.4} (count rate {count_rate:.4}, K = {:.4e}, k = {:.4})",
        chi_growth.0,
        chi_growth.1
    );
    Ok(AbscissaEstimate {
        c,
        count_rate,
        chi_growth,
        defaulted: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SpectrumMeta;
    use crate::lie::EllipticAngles;
    use std::f64::consts::E;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn w(k: &[i64]) -> WeightVector {
        WeightVector::from_integers(k).unwrap()
    }

    fn spectrum(records: Vec<ConjClassRecord>) -> LengthSpectrum {
        LengthSpectrum::new(
            SpectrumMeta {
                spec_hash: String::new(),
                cutoff: 10.0,
                max_word_len: 0,
            },
            records,
        )
    }

    fn hyp(l: f64, theta: &[f64], power: u32) -> ConjClassRecord {
        ConjClassRecord::hyperbolic(l, EllipticAngles::new(theta.to_vec()).unwrap(), power, c(1.0), 1.0)
    }

    fn ctx(n: usize, sigma: &[i64], records: Vec<ConjClassRecord>) -> ZetaTermContext {
        ZetaTermContext::new(n, w(sigma), 1, spectrum(records), 1.0).unwrap()
    }

    #[test]
    fn empty_spectrum_is_one() {
        let x = ctx(1, &[0], vec![]);
        assert_eq!(log_zeta_truncated(c(2.0), &x).unwrap(), c(0.0));
        assert_eq!(zeta(c(2.0), &x).unwrap(), c(1.0));
    }

    #[test]
    fn single_class_term() {
        let x = ctx(1, &[0], vec![hyp(1.0, &[0.0], 1)]);
        let expected = (-3f64).exp() / (E - 1.0).powi(2);
        let got = log_zeta_truncated(c(2.0), &x).unwrap();
        assert!((got.re + expected).abs() < 1e-15);
        assert!(got.im.abs() < 1e-18);
        assert!((expected - 0.016_862_7).abs() < 1e-7);
    }

    #[test]
    fn epsilon_cases() {
        assert_eq!(epsilon_sigma(&w(&[0, 0])), 1);
        assert_eq!(epsilon_sigma(&w(&[1, 1])), 2);
        assert_eq!(epsilon_sigma(&w(&[3])), 2);
        assert_eq!(epsilon_sigma(&w(&[2, 0])), 1);
    }

    #[test]
    fn symmetric_and_antisymmetric() {
        let recs = vec![
            hyp(0.9, &[0.4, 1.1], 1),
            hyp(1.8, &[0.8, 2.2], 2),
            hyp(1.3, &[2.0, 0.3], 1),
        ];
        let x = ctx(2, &[2, 1], recs.clone());
        let f = ctx(2, &[2, -1], recs);
        let s = c(0.7) + Complex64::new(0.0, 0.4);
        let z = zeta(s, &x).unwrap();
        let sym = symmetric_zeta(s, &x).unwrap();
        let anti = antisymmetric_zeta(s, &x).unwrap();
        assert!((z * z - sym * anti).norm() < 1e-12 * (z * z).norm());
        assert!((sym - symmetric_zeta(s, &f).unwrap()).norm() < 1e-14 * sym.norm());
        assert!((anti * antisymmetric_zeta(s, &f).unwrap() - 1.0).norm() < 1e-14);
        let trivial = ctx(2, &[0, 0], vec![hyp(1.0, &[0.3, 0.5], 1)]);
        assert_eq!(symmetric_zeta(s, &trivial).unwrap(), zeta(s, &trivial).unwrap());
        assert!(antisymmetric_zeta(s, &trivial).is_err());
    }

    #[test]
    fn antisymmetric_is_one_at_zero_angles() {
        let x = ctx(2, &[3, 2], vec![hyp(1.0, &[0.0, 0.0], 1), hyp(1.7, &[0.0, 0.0], 1)]);
        let v = antisymmetric_zeta(c(1.5), &x).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
    }

    #[test]
    fn ambiguity_is_refused_by_default() {
        let mut r = hyp(1.0, &[0.0], 1);
        r.ambiguous = true;
        let x = ctx(1, &[0], vec![r]);
        assert!(matches!(log_zeta_truncated(c(2.0), &x), Err(Error::Ambiguous(1))));
        let x = x.with_options(ZetaOptions {
            allow_ambiguous: true,
            ..ZetaOptions::default()
        });
        assert!(log_zeta_truncated(c(2.0), &x).is_ok());
    }

    #[test]
    fn heat_terms_basic() {
        assert!((gaussian_fourier(1.0, 2.0) - PI.sqrt() / E).abs() < 1e-15);
        assert!((gaussian_fourier(1.0, 2.0) - 0.652_049).abs() < 1e-6);
        let x = ctx(1, &[0], vec![]);
        for t in [0.1, 1.0, 10.0] {
            let h = geometric_heat_terms(t, &x).unwrap();
            let expected = (4.0 * PI * t).powf(-1.5);
            assert!((h.identity.unwrap().re - expected).abs() < 1e-10 * expected);
            assert_eq!(h.elliptic, c(0.0));
            assert_eq!(h.hyperbolic, c(0.0));
        }
        assert!(geometric_heat_terms(0.0, &x).is_err());
    }

    #[test]
    fn heat_terms_hyperbolic_and_linear() {
        let a = spectrum(vec![hyp(1.0, &[0.3], 1), hyp(2.0, &[0.6], 2)]);
        let b = spectrum(vec![hyp(1.4, &[1.0], 1)]);
        let make = |s: LengthSpectrum| ZetaTermContext::new(1, w(&[1]), 1, s, 2.0).unwrap();
        let ha = geometric_heat_terms(0.5, &make(a.clone())).unwrap();
        let hb = geometric_heat_terms(0.5, &make(b.clone())).unwrap();
        let hab = geometric_heat_terms(0.5, &make(a.concat(&b))).unwrap();
        assert!((hab.hyperbolic - ha.hyperbolic - hb.hyperbolic).norm() < 1e-15);
        // single class, σ = (1): tr σ + tr w_0σ = 2 cos θ, conjugation is moot
        let r = hyp(1.4, &[1.0], 1);
        let d = r.d_gamma.unwrap();
        let expected = 1.4 / (2.0 * PI * d) * 2.0 * 1f64.cos() * gaussian_fourier(0.5, 1.4);
        assert!((hb.hyperbolic.re - expected).abs() < 1e-15);
        let tiny = geometric_heat_terms(1e-3, &make(b)).unwrap();
        assert!(tiny.hyperbolic.norm() < 1e-200);
    }

    #[test]
    fn xi_prefactor() {
        let x = ctx(1, &[0], vec![]);
        let s = c(1.3);
        let expected = -2.0 * PI / (4.0 * PI * PI) * 1.3f64.powi(3) / 3.0;
        assert!((xi_exponent(s, &x).unwrap().re - expected).abs() < 1e-15);
        assert_eq!(xi_correction(c(0.0), &x).unwrap(), symmetric_zeta(c(0.0), &x).unwrap());
        let odd = xi_exponent(-s, &x).unwrap() + xi_exponent(s, &x).unwrap();
        assert!(odd.norm() < 1e-15);
        assert!(xi_exponent(s, &ctx(2, &[0, 0], vec![])).is_err());
    }

    #[test]
    fn partial_fractions() {
        let set = partial_fraction_coeffs(&[c(1.0), c(2.0)]).unwrap();
        assert!((set.c_coeffs[0] - 1.0 / 3.0).norm() < 1e-16);
        assert!((set.c_coeffs[1] + 1.0 / 3.0).norm() < 1e-16);
        assert!((set.partial_fraction_sum(c(0.0)) - 0.25).norm() < 1e-16);
        assert_eq!(partial_fraction_coeffs(&[c(3.0)]).unwrap().c_coeffs, vec![c(1.0)]);
        assert!(matches!(
            partial_fraction_coeffs(&[c(1.0), c(-1.0)]),
            Err(Error::RepeatedSquares(0, 1))
        ));
        let exact = partial_fraction_coeffs_exact(&[Rational64::from(1), Rational64::from(2)]).unwrap();
        assert_eq!(exact, vec![Rational64::new(1, 3), Rational64::new(-1, 3)]);
    }

    #[test]
    fn abscissa_default_and_fit() {
        let few = ctx(1, &[0], vec![hyp(1.0, &[0.0], 1)]);
        let a = convergence_abscissa_estimate(&few).unwrap();
        assert!(a.defaulted);
        assert_eq!(a.c, 2.0);
        // N(L) ≈ e^{L}: lengths ln(k)
        let recs = (2..200).map(|k| hyp((k as f64).ln(), &[0.0], 1)).collect();
        let a = convergence_abscissa_estimate(&ctx(1, &[0], recs)).unwrap();
        assert!(!a.defaulted);
        assert!((a.count_rate - 1.0).abs() < 0.1, "{}", a.count_rate);
        assert!(convergence_abscissa_estimate(&ctx(1, &[0], vec![])).is_err());
    }
}
