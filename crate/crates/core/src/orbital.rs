//! Plancherel polynomials `P_σ(iν)` and elliptic orbital-integral
//! polynomials `P^γ_σ(iν)`.
//!
//! For an elliptic `γ` with rotation angles `φ`, the orbital polynomial is
//!
//! ```text
//! Σ_{s∈W} det(s) · ∏_{α∈Δ_γ^+} ⟨−s(Λ+δ_M) − iν e_1, α⟩ · ξ_{−s(Λ+δ_M)}(γ)
//! ```
//!
//! where `Δ_γ^+` are the positive roots of `so(1,2n+1)` that pair with the
//! angle vector `(0, φ_2, …, φ_{n+1})` into `2πℤ`. Overall constants that only
//! rescale the orbital integral are not part of the polynomial.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::heat;
use crate::lie::{self, EllipticAngles, WeightVector};
use crate::sum::ComplexCompensatedSum;

/// Relative bound on odd-power coefficients before the reduction to `ν²`.
pub const EVENNESS_TOL: f64 = 1e-10;

/// Polynomial in `ν²`: `Σ_m coeffs[m] ν^{2m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenPolynomial {
    coeffs: Vec<Complex64>,
    /// Largest odd-power coefficient of the pre-reduction expansion relative
    /// to the largest coefficient overall.
    odd_residual: f64,
}

impl EvenPolynomial {
    pub fn from_even_coeffs(coeffs: Vec<Complex64>) -> Self {
        let mut p = Self {
            coeffs,
            odd_residual: 0.0,
        };
        p.trim();
        p
    }

    /// Reduces a dense polynomial in `ν`, rejecting it if odd powers survive.
    pub fn from_dense(dense: &[Complex64], tol: f64) -> Result<Self> {
        let scale = dense.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let odd = dense.iter().skip(1).step_by(2).map(|c| c.norm()).fold(0.0, f64::max);
        let odd_residual = if scale > 0.0 { odd / scale } else { 0.0 };
        if odd_residual > tol {
            return Err(Error::OddResidual(odd_residual));
        }
        let mut p = Self {
            coeffs: dense.iter().step_by(2).copied().collect(),
            odd_residual,
        };
        p.trim();
        Ok(p)
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(Complex64::new(0.0, 0.0));
        }
    }

    /// Coefficients of `ν^0, ν^2, ν^4, …`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Degree in `ν`.
    pub fn degree(&self) -> usize {
        2 * (self.coeffs.len() - 1)
    }

    pub fn degree_bound(&self) -> usize {
        self.degree()
    }

    pub fn odd_residual(&self) -> f64 {
        self.odd_residual
    }

    pub fn evenness_verified(&self) -> bool {
        self.odd_residual <= EVENNESS_TOL
    }

    pub fn eval(&self, nu: Complex64) -> Complex64 {
        let nu2 = nu * nu;
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * nu2 + c)
    }

    /// `∫_0^s P(r) dr`, integrating the stored polynomial in its own variable.
    pub fn antiderivative_at(&self, s: Complex64) -> Complex64 {
        let s2 = s * s;
        let mut acc = ComplexCompensatedSum::new();
        let mut power = s;
        for (m, &c) in self.coeffs.iter().enumerate() {
            acc.add(c * power / (2 * m + 1) as f64);
            power *= s2;
        }
        acc.total()
    }

    /// `∫_ℝ P(ν) e^{−tν²} dν = Σ_m c_m Γ(m+½) t^{−m−½}`.
    pub fn gaussian_integral(&self, t: f64) -> Complex64 {
        let mut acc = ComplexCompensatedSum::new();
        // Γ(m + 1/2) built up from Γ(1/2) = √π
        let mut gamma_half = PI.sqrt();
        for (m, &c) in self.coeffs.iter().enumerate() {
            acc.add(c * gamma_half * t.powf(-(m as f64) - 0.5));
            gamma_half *= m as f64 + 0.5;
        }
        acc.total()
    }

    pub fn max_coeff_gap(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        (0..len)
            .map(|m| {
                let a = self.coeffs.get(m).copied().unwrap_or(zero);
                let b = other.coeffs.get(m).copied().unwrap_or(zero);
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Positive roots of the stabilizer of an elliptic element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerRootData {
    /// Each root as coefficients over `e_1, …, e_{n+1}` (index 0 is `e_1`).
    pub positive_roots: Vec<Vec<i8>>,
}

impl StabilizerRootData {
    pub fn cardinality(&self) -> usize {
        self.positive_roots.len()
    }

    /// Roots with a nonzero `e_1` component; each contributes one power of `ν`.
    pub fn noncompact_count(&self) -> usize {
        self.positive_roots.iter().filter(|r| r[0] != 0).count()
    }
}

/// Positive roots `e_i ± e_j` (`1 ≤ i < j ≤ n+1`) with `⟨α, (0, φ)⟩ ∈ 2πℤ`.
pub fn stabilizer_roots(gamma: &EllipticAngles, n: usize) -> Result<StabilizerRootData> {
    if gamma.rank() != n {
        return Err(Error::RankMismatch {
            expected: n,
            found: gamma.rank(),
        });
    }
    let mut full = Vec::with_capacity(n + 1);
    full.push(0.0);
    full.extend_from_slice(gamma.angles());
    let mut positive_roots = Vec::new();
    for i in 0..=n {
        for j in i + 1..=n {
            for sign in [-1i8, 1] {
                if lie::in_two_pi_z(full[i] + sign as f64 * full[j]) {
                    let mut r = vec![0i8; n + 1];
                    r[i] = 1;
                    r[j] = sign;
                    positive_roots.push(r);
                }
            }
        }
    }
    Ok(StabilizerRootData { positive_roots })
}

/// Dense coefficients of `∏ (a_k + b_k ν)` in increasing powers of `ν`.
fn expand_linear_factors(factors: &[(Complex64, Complex64)]) -> Vec<Complex64> {
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for &(a, b) in factors {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (k, &c) in poly.iter().enumerate() {
            next[k] += c * a;
            next[k + 1] += c * b;
        }
        poly = next;
    }
    poly
}

fn check_inputs(lambda: &WeightVector, gamma: &EllipticAngles, n: usize) -> Result<()> {
    for found in [lambda.rank(), gamma.rank()] {
        if found != n {
            return Err(Error::RankMismatch { expected: n, found });
        }
    }
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    Ok(())
}

/// Dense (pre-reduction) expansion of the orbital polynomial in powers of `ν`.
pub fn orbital_dense(lambda: &WeightVector, gamma: &EllipticAngles, n: usize) -> Result<Vec<Complex64>> {
    check_inputs(lambda, gamma, n)?;
    let roots = stabilizer_roots(gamma, n)?;
    let shifted = lambda.checked_add(&lie::half_sum_delta_m(n)?)?;
    let weyl = lie::enumerate_weyl(n)?;

    let terms: Vec<Vec<Complex64>> = weyl
        .par_iter()
        .map(|s| -> Result<Vec<Complex64>> {
            let image = s.apply(&shifted)?;
            let k = image.coords();
            // ⟨−s(Λ+δ) − iν e_1, α⟩ = −Σ_j α_j k_j − i α_1 ν
            let factors: Vec<(Complex64, Complex64)> = roots
                .positive_roots
                .iter()
                .map(|r| {
                    let constant: f64 = r[1..].iter().zip(&k).map(|(&c, &kj)| c as f64 * kj).sum();
                    (Complex64::new(-constant, 0.0), Complex64::new(0.0, -(r[0] as f64)))
                })
                .collect();
            let weight = lie::character_xi(&-&image, gamma)? * s.det() as f64;
            Ok(expand_linear_factors(&factors)
                .into_iter()
                .map(|c| c * weight)
                .collect())
        })
        .collect::<Result<_>>()?;

    let len = roots.cardinality() + 1;
    let mut accs = vec![ComplexCompensatedSum::new(); len];
    for term in &terms {
        for (acc, &c) in accs.iter_mut().zip(term) {
            acc.add(c);
        }
    }
    Ok(accs.iter().map(|a| a.total()).collect())
}

/// `P^γ_σ(iν)` as an even polynomial; see the module docs for the formula.
pub fn orbital_polynomial(lambda: &WeightVector, gamma: &EllipticAngles, n: usize) -> Result<EvenPolynomial> {
    orbital_polynomial_with_tol(lambda, gamma, n, EVENNESS_TOL)
}

pub fn orbital_polynomial_with_tol(
    lambda: &WeightVector,
    gamma: &EllipticAngles,
    n: usize,
    tol: f64,
) -> Result<EvenPolynomial> {
    EvenPolynomial::from_dense(&orbital_dense(lambda, gamma, n)?, tol)
}

/// `P_σ(iν) = C (ν² + k²)` for `n = 1`, `σ` of weight `k`, with `C` from
/// [`heat::calibrate_plancherel`].
pub fn plancherel_polynomial(lambda: &WeightVector, n: usize) -> Result<EvenPolynomial> {
    if n != 1 {
        return Err(Error::UnsupportedRank {
            rank: n,
            reason: "closed-form Plancherel polynomial is only available for n = 1",
        });
    }
    if lambda.rank() != 1 {
        return Err(Error::RankMismatch {
            expected: 1,
            found: lambda.rank(),
        });
    }
    let c = heat::calibrate_plancherel(1)?;
    let k = lambda.coord(0);
    Ok(EvenPolynomial::from_even_coeffs(vec![
        Complex64::new(c * k * k, 0.0),
        Complex64::new(c, 0.0),
    ]))
}

/// `max |P^γ_σ − P^γ_{w_0σ}|` over coefficients.
pub fn weyl_a_invariance_gap(lambda: &WeightVector, gamma: &EllipticAngles, n: usize) -> Result<f64> {
    let flipped = lie::w0_flip(lambda);
    if &flipped == lambda {
        return Ok(0.0);
    }
    let p = orbital_polynomial(lambda, gamma, n)?;
    let q = orbital_polynomial(&flipped, gamma, n)?;
    Ok(p.max_coeff_gap(&q))
}
