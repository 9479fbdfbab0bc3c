//! Root system, Weyl group and characters of `so(2n)` inside `so(1, 2n+1)`.
//!
//! Coordinates follow the basis `e_1, …, e_{n+1}` of the Cartan subalgebra
//! `a ⊕ b`; the compact part `so(2n)` sees only `e_2, …, e_{n+1}`, which are
//! stored at positions `0..n` of every vector in this module. The pairing
//! `⟨e_i, e_j⟩ = δ_ij` is used throughout.
//!
//! Weights are kept as doubled integers so that half-integral (spin) weights
//! stay exact; floating point only enters when a character is evaluated.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sum::ComplexCompensatedSum;

/// Largest rank for which [`enumerate_weyl`] materialises the group.
pub const MAX_WEYL_RANK: usize = 6;

/// Threshold on `|Σ det(s) ξ_{sδ}|` below which an element counts as singular.
pub const REGULARITY_TOL: f64 = 1e-12;

/// Tolerance for deciding `⟨α, φ⟩ ∈ 2πℤ`.
pub const ROOT_ANGLE_TOL: f64 = 1e-9;

/// Highest weight `Σ k_j e_j` of an `SO(2n)` (or `Spin(2n)`) representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector {
    doubled: Vec<i64>,
}

impl WeightVector {
    /// Builds a weight from the doubled coordinates `2k_j`.
    pub fn from_doubled(doubled: Vec<i64>) -> Result<Self> {
        if doubled.is_empty() {
            return Err(Error::Invalid("weight of rank 0".into()));
        }
        let parity = doubled[0].rem_euclid(2);
        if doubled.iter().any(|d| d.rem_euclid(2) != parity) {
            return Err(Error::Invalid(format!(
                "mixed integral and half-integral coordinates in {doubled:?}"
            )));
        }
        Ok(Self { doubled })
    }

    pub fn from_integers(coords: &[i64]) -> Result<Self> {
        Self::from_doubled(coords.iter().map(|k| 2 * k).collect())
    }

    pub fn zero(rank: usize) -> Result<Self> {
        Self::from_doubled(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.doubled.len()
    }

    pub fn doubled(&self) -> &[i64] {
        &self.doubled
    }

    /// Coordinate `k_j` as a float (exact for half-integers).
    pub fn coord(&self, j: usize) -> f64 {
        self.doubled[j] as f64 / 2.0
    }

    pub fn coords(&self) -> Vec<f64> {
        self.doubled.iter().map(|&d| d as f64 / 2.0).collect()
    }

    /// Half-integral weights only exist for `Spin(2n)`.
    pub fn is_spin(&self) -> bool {
        self.doubled[0].rem_euclid(2) == 1
    }

    pub fn is_zero(&self) -> bool {
        self.doubled.iter().all(|&d| d == 0)
    }

    /// `λ_2 ≥ … ≥ λ_n ≥ |λ_{n+1}|`.
    pub fn is_dominant(&self) -> bool {
        let n = self.rank();
        if n == 1 {
            return true;
        }
        let d = &self.doubled;
        d.windows(2).take(n - 2).all(|w| w[0] >= w[1]) && d[n - 2] >= d[n - 1].abs()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_rank(self.rank(), other.rank())?;
        Self::from_doubled(self.doubled.iter().zip(&other.doubled).map(|(a, b)| a + b).collect())
    }

    /// `⟨self, other⟩` for the orthonormal basis `e_j`.
    pub fn dot(&self, other: &Self) -> f64 {
        self.doubled
            .iter()
            .zip(&other.doubled)
            .map(|(&a, &b)| (a * b) as f64)
            .sum::<f64>()
            / 4.0
    }
}

impl Neg for &WeightVector {
    type Output = WeightVector;

    fn neg(self) -> WeightVector {
        WeightVector {
            doubled: self.doubled.iter().map(|d| -d).collect(),
        }
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self
            .doubled
            .iter()
            .map(|&d| {
                if d % 2 == 0 {
                    format!("{}", d / 2)
                } else {
                    format!("{d}/2")
                }
            })
            .join(",");
        f.write_str(&s)
    }
}

impl FromStr for WeightVector {
    type Err = Error;

    /// Comma-separated integers or halves, e.g. `"3/2,1/2,-1/2"`.
    fn from_str(s: &str) -> Result<Self> {
        let doubled = s
            .split(',')
            .map(|tok| parse_doubled(tok.trim()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_doubled(doubled)
    }
}

fn parse_doubled(tok: &str) -> Result<i64> {
    let bad = || Error::Parse(format!("weight coordinate {tok:?}"));
    match tok.split_once('/') {
        Some((num, den)) => {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => Ok(num),
                "1" => Ok(2 * num),
                _ => Err(bad()),
            }
        }
        None => tok.parse::<i64>().map(|k| 2 * k).map_err(|_| bad()),
    }
}

fn check_rank(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::RankMismatch { expected, found })
    }
}

/// Element of `W(D_n)`: a permutation of the coordinates combined with an
/// even number of sign changes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    /// Input coordinate `i` lands at output position `perm[i]`.
    perm: Vec<usize>,
    /// Sign attached to each output position.
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        check_rank(n, signs.len())?;
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Invalid(format!("{perm:?} is not a permutation")));
            }
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Invalid(format!("signs {signs:?} must be ±1")));
        }
        if signs.iter().filter(|&&s| s < 0).count() % 2 != 0 {
            return Err(Error::Invalid(format!(
                "odd number of sign changes {signs:?} is not in W(D_n)"
            )));
        }
        Ok(Self { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn perm_sign(&self) -> i32 {
        // parity from cycle decomposition
        let mut seen = vec![false; self.perm.len()];
        let mut sign = 1;
        for start in 0..self.perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.perm[i];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// Determinant of the coordinate action; equals `perm_sign` on `W(D_n)`.
    pub fn det(&self) -> i32 {
        let flips: i32 = self.signs.iter().map(|&s| s as i32).product();
        self.perm_sign() * flips
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_rank(self.rank(), other.rank())?;
        let perm: Vec<usize> = other.perm.iter().map(|&p| self.perm[p]).collect();
        let mut signs = vec![1i8; perm.len()];
        for (i, &target) in perm.iter().enumerate() {
            signs[target] = self.signs[target] * other.signs[other.perm[i]];
        }
        Ok(Self { perm, signs })
    }

    pub fn inverse(&self) -> Self {
        let n = self.rank();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p] = i;
            signs[i] = self.signs[p];
        }
        Self { perm, signs }
    }

    /// Acts on a plain coordinate slice.
    pub fn act<T>(&self, coords: &[T]) -> Result<Vec<T>>
    where
        T: Copy + Default + Neg<Output = T>,
    {
        check_rank(self.rank(), coords.len())?;
        let mut out = vec![T::default(); coords.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            out[p] = if self.signs[p] < 0 { -coords[i] } else { coords[i] };
        }
        Ok(out)
    }

    pub fn apply(&self, w: &WeightVector) -> Result<WeightVector> {
        Ok(WeightVector {
            doubled: self.act(w.doubled())?,
        })
    }

    pub fn apply_angles(&self, angles: &EllipticAngles) -> Result<EllipticAngles> {
        EllipticAngles::new(self.act(angles.angles())?)
    }
}

/// Free-function form of [`SignedPermutation::apply`].
pub fn apply(s: &SignedPermutation, w: &WeightVector) -> Result<WeightVector> {
    s.apply(w)
}

/// Rotation angles `φ_2, …, φ_{n+1}` of a torus element, normalised to `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticAngles {
    angles: Vec<f64>,
}

impl EllipticAngles {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::Invalid(format!("non-finite angle in {angles:?}")));
        }
        Ok(Self {
            angles: angles.into_iter().map(normalize_angle).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self { angles: vec![0.0; n] }
    }

    pub fn rank(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Multiplies every angle by `m` (the angles of the `m`-th power).
    pub fn scaled(&self, m: f64) -> Self {
        Self {
            angles: self.angles.iter().map(|a| normalize_angle(a * m)).collect(),
        }
    }
}

impl fmt::Display for EllipticAngles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.angles.iter().map(|a| format!("{a:.16e}")).join(";"))
    }
}

impl FromStr for EllipticAngles {
    type Err = Error;

    /// Comma-separated decimals or rational multiples of π (`"2pi/3,0,pi"`).
    fn from_str(s: &str) -> Result<Self> {
        let angles = s
            .split(',')
            .map(|tok| parse_angle(tok.trim()))
            .collect::<Result<Vec<_>>>()?;
        if angles.is_empty() {
            return Err(Error::Parse("empty angle list".into()));
        }
        Self::new(angles)
    }
}

/// Maps into `[0, 2π)`; values within rounding of `2π` snap to `0`.
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if TAU - r < 1e-13 {
        0.0
    } else {
        r
    }
}

/// Parses `"0.5"`, `"pi"`, `"-pi/2"`, `"2pi/3"`, `"3*pi/4"` or `"π/3"`.
pub fn parse_angle(tok: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("angle {tok:?}"));
    let t = tok.replace('π', "pi").replace(' ', "");
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let coef = t[..pos].trim_end_matches('*');
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = &t[pos + 2..];
    let den = match rest {
        "" => 1.0,
        r => r.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
    };
    if den == 0.0 {
        return Err(bad());
    }
    Ok(coef * PI / den)
}

/// `δ_M = Σ_j (n+1−j) e_j`, i.e. `(n−1, …, 1, 0)`.
pub fn half_sum_delta_m(n: usize) -> Result<WeightVector> {
    if n == 0 {
        return Err(Error::Invalid("rank must be at least 1".into()));
    }
    WeightVector::from_integers(&(0..n).rev().map(|k| k as i64).collect::<Vec<_>>())
}

/// All `2^{n−1} n!` elements of `W(D_n)` in a fixed order.
pub fn enumerate_weyl(n: usize) -> Result<Vec<SignedPermutation>> {
    if n == 0 || n > MAX_WEYL_RANK {
        return Err(Error::UnsupportedRank {
            rank: n,
            reason: "Weyl group enumeration supports 1 ≤ n ≤ 6",
        });
    }
    let sign_patterns: Vec<Vec<i8>> = (0u32..1 << n)
        .filter(|mask| mask.count_ones() % 2 == 0)
        .map(|mask| (0..n).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect())
        .collect();
    let mut out = Vec::with_capacity(sign_patterns.len() * (1..=n).product::<usize>());
    for perm in (0..n).permutations(n) {
        for signs in &sign_patterns {
            out.push(SignedPermutation {
                perm: perm.clone(),
                signs: signs.clone(),
            });
        }
    }
    Ok(out)
}

/// Highest weight of `w_0σ`: the last coordinate changes sign.
pub fn w0_flip(w: &WeightVector) -> WeightVector {
    let mut doubled = w.doubled.clone();
    if let Some(last) = doubled.last_mut() {
        *last = -*last;
    }
    WeightVector { doubled }
}

/// `ξ_Ω(φ) = exp(i Σ_j k_j φ_j)` on the compact torus.
pub fn character_xi(omega: &WeightVector, gamma: &EllipticAngles) -> Result<Complex64> {
    check_rank(omega.rank(), gamma.rank())?;
    let phase: f64 = omega
        .doubled
        .iter()
        .zip(&gamma.angles)
        .map(|(&d, &a)| d as f64 / 2.0 * a)
        .sum();
    Ok(Complex64::from_polar(1.0, phase))
}

/// Weyl character formula at a regular torus element.
///
/// Fails with [`Error::NonRegular`] when the Weyl denominator vanishes; use
/// [`class_character`] for arbitrary angles.
pub fn weyl_character(lambda: &WeightVector, gamma: &EllipticAngles) -> Result<Complex64> {
    let n = lambda.rank();
    check_rank(n, gamma.rank())?;
    let delta = half_sum_delta_m(n)?;
    let shifted = lambda.checked_add(&delta)?;
    let weyl = enumerate_weyl(n)?;
    let num = alternating_sum(&weyl, &shifted, gamma, &[])?;
    let den = alternating_sum(&weyl, &delta, gamma, &[])?;
    if den.norm() < REGULARITY_TOL {
        return Err(Error::NonRegular(den.norm()));
    }
    Ok(num / den)
}

/// Character value valid at every torus element, singular ones included.
///
/// At a singular element both alternating sums vanish to the order of the
/// compact roots `α` with `⟨α, φ⟩ ∈ 2πℤ`; applying `∏ ∂_α` to numerator and
/// denominator (the multipliers `⟨sμ, α⟩`) yields the limit.
pub fn class_character(lambda: &WeightVector, gamma: &EllipticAngles) -> Result<Complex64> {
    let n = lambda.rank();
    check_rank(n, gamma.rank())?;
    let delta = half_sum_delta_m(n)?;
    let shifted = lambda.checked_add(&delta)?;
    let weyl = enumerate_weyl(n)?;
    let roots = singular_compact_roots(gamma);
    let num = alternating_sum(&weyl, &shifted, gamma, &roots)?;
    let den = alternating_sum(&weyl, &delta, gamma, &roots)?;
    if den.norm() < REGULARITY_TOL {
        return Err(Error::NonRegular(den.norm()));
    }
    Ok(num / den)
}

/// Positive compact roots `e_i ± e_j` (given as coefficient vectors over the
/// compact coordinates) that pair with `φ` into `2πℤ`.
pub fn singular_compact_roots(gamma: &EllipticAngles) -> Vec<Vec<i8>> {
    let n = gamma.rank();
    let a = gamma.angles();
    let mut roots = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for sign in [-1i8, 1] {
                let pairing = a[i] + sign as f64 * a[j];
                if in_two_pi_z(pairing) {
                    let mut r = vec![0i8; n];
                    r[i] = 1;
                    r[j] = sign;
                    roots.push(r);
                }
            }
        }
    }
    roots
}

pub(crate) fn in_two_pi_z(x: f64) -> bool {
    let r = x.rem_euclid(TAU);
    r < ROOT_ANGLE_TOL || TAU - r < ROOT_ANGLE_TOL
}

/// `Σ_s det(s) ∏_α ⟨sμ, α⟩ ξ_{sμ}(φ)`.
fn alternating_sum(
    weyl: &[SignedPermutation],
    mu: &WeightVector,
    gamma: &EllipticAngles,
    roots: &[Vec<i8>],
) -> Result<Complex64> {
    let mut acc = ComplexCompensatedSum::new();
    for s in weyl {
        let image = s.apply(mu)?;
        let multiplier: f64 = roots
            .iter()
            .map(|r| {
                r.iter()
                    .zip(image.doubled())
                    .map(|(&c, &d)| c as f64 * d as f64 / 2.0)
                    .sum::<f64>()
            })
            .product();
        acc.add(character_xi(&image, gamma)? * (s.det() as f64 * multiplier));
    }
    Ok(acc.total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(coords: &[i64]) -> WeightVector {
        WeightVector::from_integers(coords).unwrap()
    }

    fn angles(a: &[f64]) -> EllipticAngles {
        EllipticAngles::new(a.to_vec()).unwrap()
    }

    #[test]
    fn delta_m_values() {
        assert_eq!(half_sum_delta_m(3).unwrap(), w(&[2, 1, 0]));
        assert_eq!(half_sum_delta_m(1).unwrap(), w(&[0]));
        assert_eq!(half_sum_delta_m(2).unwrap(), w(&[1, 0]));
        assert!(half_sum_delta_m(0).is_err());
    }

    #[test]
    fn weyl_group_orders() {
        assert_eq!(enumerate_weyl(1).unwrap(), vec![SignedPermutation::identity(1)]);
        for (n, order) in [(2, 4), (3, 24), (4, 192), (5, 1920)] {
            let group = enumerate_weyl(n).unwrap();
            assert_eq!(group.len(), order);
            let distinct: std::collections::HashSet<_> = group.iter().collect();
            assert_eq!(distinct.len(), order);
        }
        assert!(enumerate_weyl(0).is_err());
        assert!(enumerate_weyl(7).is_err());
    }

    #[test]
    fn apply_examples() {
        let id = SignedPermutation::identity(2);
        assert_eq!(id.apply(&w(&[1, 0])).unwrap(), w(&[1, 0]));
        let swap = SignedPermutation::new(vec![1, 0], vec![-1, -1]).unwrap();
        assert_eq!(swap.apply(&w(&[1, 0])).unwrap(), w(&[0, -1]));
        for s in enumerate_weyl(3).unwrap() {
            assert!(s.apply(&w(&[0, 0, 0])).unwrap().is_zero());
        }
        assert!(matches!(id.apply(&w(&[1, 0, 0])), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn rejects_odd_sign_changes() {
        assert!(SignedPermutation::new(vec![0, 1], vec![-1, 1]).is_err());
        assert!(SignedPermutation::new(vec![0, 0], vec![1, 1]).is_err());
    }

    #[test]
    fn w0_flip_examples() {
        assert_eq!(w0_flip(&w(&[3, 1])), w(&[3, -1]));
        assert_eq!(w0_flip(&w(&[0, 0])), w(&[0, 0]));
        let x = w(&[2, 1, -1]);
        assert_eq!(w0_flip(&w0_flip(&x)), x);
    }

    #[test]
    fn xi_examples() {
        let one = character_xi(&w(&[0, 0]), &angles(&[0.3, 1.1])).unwrap();
        assert_eq!(one, Complex64::new(1.0, 0.0));
        let z = character_xi(&w(&[1]), &angles(&[PI])).unwrap();
        assert!((z - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let z = character_xi(&w(&[1, 2]), &angles(&[PI / 2.0, PI])).unwrap();
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn weyl_character_examples() {
        let g = angles(&[0.4, 1.3]);
        let triv = weyl_character(&w(&[0, 0]), &g).unwrap();
        assert!((triv - 1.0).norm() < 1e-12);
        for k in -3..=3 {
            let z = weyl_character(&w(&[k]), &angles(&[0.7])).unwrap();
            assert!((z - Complex64::from_polar(1.0, k as f64 * 0.7)).norm() < 1e-14);
        }
        let z = weyl_character(&w(&[1, 0]), &g).unwrap();
        let expected = 2.0 * 0.4f64.cos() + 2.0 * 1.3f64.cos();
        assert!((z - expected).norm() < 1e-12);
    }

    #[test]
    fn weyl_character_rejects_singular() {
        assert!(matches!(
            weyl_character(&w(&[1, 0]), &angles(&[0.5, 0.5])),
            Err(Error::NonRegular(_))
        ));
    }

    #[test]
    fn class_character_at_singular_points() {
        // standard rep of SO(4): dimension at the identity, 4cos θ on the diagonal
        let id = class_character(&w(&[1, 0]), &angles(&[0.0, 0.0])).unwrap();
        assert!((id - 4.0).norm() < 1e-12);
        let diag = class_character(&w(&[1, 0]), &angles(&[0.9, 0.9])).unwrap();
        assert!((diag - 4.0 * 0.9f64.cos()).norm() < 1e-12);
        // adjoint of SO(6), weight (1,1,0), has dimension 15
        let adj = class_character(&w(&[1, 1, 0]), &EllipticAngles::identity(3)).unwrap();
        assert!((adj - 15.0).norm() < 1e-9);
        // half-spin of Spin(8) has dimension 8
        let spin: WeightVector = "1/2,1/2,1/2,1/2".parse().unwrap();
        let d = class_character(&spin, &EllipticAngles::identity(4)).unwrap();
        assert!((d - 8.0).norm() < 1e-9);
    }

    #[test]
    fn parsing_round_trip() {
        let x: WeightVector = "3/2,1/2,-1/2".parse().unwrap();
        assert_eq!(x.doubled(), &[3, 1, -1]);
        assert!(x.is_spin());
        assert_eq!(x.to_string(), "3/2,1/2,-1/2");
        assert_eq!("2,1,0".parse::<WeightVector>().unwrap().to_string(), "2,1,0");
        assert!("1,1/2".parse::<WeightVector>().is_err());
        assert!("1/3".parse::<WeightVector>().is_err());

        let a: EllipticAngles = "2pi/3, 0, pi, -pi/2, 0.25, 3*pi/4".parse().unwrap();
        let expected = [2.0 * PI / 3.0, 0.0, PI, 1.5 * PI, 0.25, 0.75 * PI];
        for (x, y) in a.angles().iter().zip(expected) {
            assert!((x - y).abs() < 1e-15);
        }
        assert!("2pi3".parse::<EllipticAngles>().is_err());
    }

    #[test]
    fn dominance() {
        assert!(w(&[3, 1, -1]).is_dominant());
        assert!(w(&[-4]).is_dominant());
        assert!(!w(&[1, 2]).is_dominant());
        assert!(!w(&[1, 2, 0]).is_dominant());
        assert!(!w(&[1, 0, 2]).is_dominant());
    }

    fn signed_perm(n: usize) -> impl Strategy<Value = SignedPermutation> {
        (0..enumerate_weyl(n).unwrap().len()).prop_map(move |i| enumerate_weyl(n).unwrap()[i].clone())
    }

    fn weight(n: usize) -> impl Strategy<Value = WeightVector> {
        (prop::collection::vec(-6i64..=6, n), any::<bool>())
            .prop_map(|(v, spin)| WeightVector::from_doubled(v.iter().map(|k| 2 * k + spin as i64).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_undoes_action(s in signed_perm(4), x in weight(4)) {
            let back = s.apply(&s.inverse().apply(&x).unwrap()).unwrap();
            prop_assert_eq!(back, x);
        }

        #[test]
        fn det_is_multiplicative(s in signed_perm(4), t in signed_perm(4), x in weight(4)) {
            let st = s.compose(&t).unwrap();
            prop_assert_eq!(st.det(), s.det() * t.det());
            prop_assert_eq!(st.apply(&x).unwrap(), s.apply(&t.apply(&x).unwrap()).unwrap());
            prop_assert_eq!(s.det(), s.perm_sign());
        }

        #[test]
        fn xi_is_additive(a in weight(3), b in weight(3), phi in prop::collection::vec(0.0..TAU, 3)) {
            let g = EllipticAngles::new(phi).unwrap();
            if let Ok(sum) = a.checked_add(&b) {
                let lhs = character_xi(&a, &g).unwrap() * character_xi(&b, &g).unwrap();
                prop_assert!((lhs - character_xi(&sum, &g).unwrap()).norm() < 1e-12);
            }
        }
    }
}
