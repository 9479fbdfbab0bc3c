use std::ops::{Mul, Neg};

use num_complex::Complex64;

/// Relative tolerance for matrix equality in the projective model.
pub const MATRIX_TOL: f64 = 1e-8;

/// 2×2 complex matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mat2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn diag(x: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::new(x, zero, zero, x.inv())
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Inverse of a unit-determinant matrix.
    pub fn inv_unimodular(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Equality up to overall sign, relative to the entry scale.
    pub fn projectively_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = 1.0 + self.max_abs().max(other.max_abs());
        self.max_abs_diff(other) <= tol * scale || self.max_abs_diff(&-*other) <= tol * scale
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.entries().iter().all(|z| z.im.abs() <= tol)
    }

    pub fn pow(&self, m: u32) -> Self {
        let mut out = Self::identity();
        for _ in 0..m {
            out = out * *self;
        }
        out
    }

    pub fn conjugate_by(&self, h: &Self) -> Self {
        *h * *self * h.inv_unimodular()
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Neg for Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }
}
