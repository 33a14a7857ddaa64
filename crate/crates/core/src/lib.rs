//! Numerical laboratory for difference series of averaging operators.
//!
//! The library evaluates the Fourier multipliers of Cesàro averages,
//! Lebesgue-derivative (sinc) kernels, and powers of probability measures on
//! the integers, forms truncated difference sums
//! `S_K(θ) = Σ_{k≤K} w_k |Δ_k(θ)|^p`, and estimates their suprema over the
//! torus, the integers, or the real line.  Companion modules provide exact
//! grid models on ℤ, a brute-force sign oracle for bounded coefficient
//! families, and an exact piecewise-linear simulation of Cesàro averages
//! under an irrational circle rotation.
//!
//! All supremum estimates are certified lower bounds: the reported value is
//! actually attained at the reported argmax.  All randomized routines are
//! seeded and reproducible.

pub mod config;
pub mod discrete;
pub mod engine;
pub mod multiplier;
pub mod phase;
pub mod report;
pub mod rng;
pub mod rotation;
pub mod sequences;
pub mod signs;
pub mod sum;
pub mod verify;

pub use engine::{DifferenceSumQuery, Frequency, SamplingPlan, SupremumEstimate};
pub use multiplier::{Angle, FiniteMeasureZ, KernelSpec};
pub use sequences::{IndexSequence, SequenceKind, WeightPreset};
