//! Discrete groups of isometries of `ℍ²` and `ℍ³` given by 2×2 generator
//! matrices, and their cutoff length spectra.
//!
//! The pipeline is [`WordBall::enumerate`] → [`classify`] per element →
//! [`EnumeratedGroup::conjugacy_reduce`] → [`LengthSpectrum`]; the helper
//! [`compute_length_spectrum`] runs all of it.

mod classes;
mod classify;
mod enumerate;
mod group;
mod matrix;
mod spectrum;

pub use classes::{
    compute_length_spectrum, enumerate_elements, CentralizerIndex, EnumeratedGroup, SpectrumOptions,
    DEFAULT_MAX_ELLIPTIC_ORDER, INVARIANT_TOL,
};
pub use classify::{
    angle_distance, classify, elliptic_order, hyperbolic_weight, Classification, ElementKind, HYPERBOLIC_TOL,
    PARABOLIC_TOL,
};
pub use enumerate::{
    ElementIndex, EnumerationLimits, GroupElement, WordBall, DEFAULT_ELEMENT_CAP, DEFAULT_WORD_LIMIT, HASH_GRID,
};
pub use group::{evaluate_word, format_word, parse_word, ChiRep, GroupSpec, Model, TorsionFreeSubgroup, Word, DET_TOL};
pub use matrix::{Mat2, MATRIX_TOL};
pub use spectrum::{fit_chi_growth, least_squares_slope, weight_D, ConjClassRecord, LengthSpectrum, SpectrumMeta};
