//! Geometric side of the twisted Selberg trace formula for compact hyperbolic
//! orbifolds `Γ\ℍ^{2n+1}`.
//!
//! The crate is split along the computation pipeline:
//!
//! - [`lie`]: exact `D_n` root-system, Weyl-group and character arithmetic.
//! - [`orbital`]: Plancherel and elliptic orbital-integral polynomials.
//! - [`geometry`]: word-ball enumeration of 2×2 matrix groups and the
//!   resulting cutoff length spectrum.
//! - [`zeta`]: truncated Selberg zeta functions, heat terms of the trace
//!   formula and partial-fraction regularization.
//! - [`heat`]: heat-trace asymptotics and Weyl law on exactly solvable flat
//!   orbifolds.
//! - [`sum`]: compensated accumulation used by every reduction.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod heat;
pub mod lie;
pub mod orbital;
pub mod sum;
pub mod zeta;

pub use error::{Error, Result};
pub use geometry::{ConjClassRecord, GroupSpec, LengthSpectrum};
pub use lie::{EllipticAngles, SignedPermutation, WeightVector};
pub use orbital::EvenPolynomial;

pub use num_complex::Complex64;
