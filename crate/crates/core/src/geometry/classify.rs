use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::group::Model;
use super::matrix::{Mat2, MATRIX_TOL};
use crate::lie::normalize_angle;
use crate::{Error, Result};

pub const PARABOLIC_TOL: f64 = 1e-8;
pub const HYPERBOLIC_TOL: f64 = 1e-8;
const FIXED_POINT_TIE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Identity,
    Elliptic,
    Hyperbolic,
}

impl ElementKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ElementKind::Identity => "identity",
            ElementKind::Elliptic => "elliptic",
            ElementKind::Hyperbolic => "hyperbolic",
        }
    }
}

impl std::fmt::Display for ElementKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ElementKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(ElementKind::Identity),
            "elliptic" => Ok(ElementKind::Elliptic),
            "hyperbolic" => Ok(ElementKind::Hyperbolic),
            other => Err(Error::Parse(format!("unknown element kind `{other}`"))),
        }
    }
}

/// Kind and raw invariants of a single element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub kind: ElementKind,
    /// Translation length `l = 2 ln|λ|`, zero unless hyperbolic.
    pub length: f64,
    /// Rotation angle `2 arg λ` in `[0, 2π)`.
    pub angle: f64,
    /// The eigenvalue the invariants were read from.
    pub eigenvalue: Complex64,
}

impl Classification {
    pub fn identity() -> Self {
        Self {
            kind: ElementKind::Identity,
            length: 0.0,
            angle: 0.0,
            eigenvalue: Complex64::new(1.0, 0.0),
        }
    }
}

// Fixed point on the Riemann sphere of the eigenline for `lambda`; `None` is ∞.
fn fixed_point(m: &Mat2, lambda: Complex64) -> Option<Complex64> {
    let scale = 1.0 + m.max_abs();
    if m.c.norm() > MATRIX_TOL * scale {
        Some((lambda - m.a) / m.c)
    } else if (lambda - m.a).norm() < (lambda - m.d).norm() {
        None
    } else {
        Some(m.b / (lambda - m.a))
    }
}

// Canonical order on fixed points: ∞ first, then larger real part, then
// larger imaginary part. Returns true if `p` precedes `q`.
fn precedes(p: Option<Complex64>, q: Option<Complex64>) -> bool {
    match (p, q) {
        (None, _) => true,
        (_, None) => false,
        (Some(p), Some(q)) => {
            if (p.re - q.re).abs() > FIXED_POINT_TIE * (1.0 + p.re.abs().max(q.re.abs())) {
                p.re > q.re
            } else {
                p.im > q.im
            }
        }
    }
}

/// Classifies an element of `PSL(2, ℝ)` or `PSL(2, ℂ)`.
///
/// For elliptic elements the two eigenvalues give the angles `θ` and `2π - θ`.
/// The orientation is fixed by the eigenvalue whose fixed point comes first:
/// in the real model θ is the counterclockwise rotation about the fixed point
/// in the upper half-plane, in the complex model λ belongs to the canonically
/// ordered endpoint of the rotation axis.
pub fn classify(m: &Mat2, model: Model) -> Result<Classification> {
    if m.projectively_eq(&Mat2::identity(), MATRIX_TOL) {
        return Ok(Classification::identity());
    }
    let tr = m.trace();
    let disc = (tr * tr - 4.0).sqrt();
    let l1 = (tr + disc) / 2.0;
    let l2 = (tr - disc) / 2.0;
    if (tr - 2.0).norm() < PARABOLIC_TOL || (tr + 2.0).norm() < PARABOLIC_TOL {
        return Err(Error::Parabolic(format!("{tr}")));
    }
    let (big, small) = if l1.norm() >= l2.norm() { (l1, l2) } else { (l2, l1) };
    if big.norm() > 1.0 + HYPERBOLIC_TOL {
        let angle = match model {
            Model::H2Real => 0.0,
            Model::H3Complex => normalize_angle(2.0 * big.arg()),
        };
        return Ok(Classification {
            kind: ElementKind::Hyperbolic,
            length: 2.0 * big.norm().ln(),
            angle,
            eigenvalue: big,
        });
    }
    let lambda = match model {
        Model::H2Real => {
            // The derivative at the fixed point is μ^{-2} for its eigenvalue μ,
            // so the other eigenvalue gives the counterclockwise angle.
            let p = fixed_point(m, big).unwrap_or(Complex64::new(0.0, -1.0));
            if p.im > 0.0 {
                small
            } else {
                big
            }
        }
        Model::H3Complex => {
            if precedes(fixed_point(m, big), fixed_point(m, small)) {
                big
            } else {
                small
            }
        }
    };
    let angle = normalize_angle(2.0 * lambda.arg());
    Ok(Classification {
        kind: ElementKind::Elliptic,
        length: 0.0,
        angle,
        eigenvalue: lambda,
    })
}

/// Smallest `m ≥ 1` with `g^m = ±1`, searched up to `max_order`.
pub fn elliptic_order(m: &Mat2, max_order: u32) -> Option<u32> {
    let mut p = *m;
    for k in 1..=max_order {
        if p.projectively_eq(&Mat2::identity(), MATRIX_TOL) {
            return Some(k);
        }
        p = p * *m;
    }
    None
}

/// `∏_j 4|sinh((l + iφ_j)/2)|²`, the hyperbolic weight `D(γ)`.
pub fn hyperbolic_weight(length: f64, angles: &[f64]) -> f64 {
    angles
        .iter()
        .map(|&phi| {
            let z = Complex64::new(length / 2.0, phi / 2.0).sinh();
            4.0 * z.norm_sqr()
        })
        .product()
}

/// Angle difference on the circle, in `[0, π]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}
