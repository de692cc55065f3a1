//! Executable metric-space notions on finite carriers.
//!
//! The crate works with [`FiniteMetricSpace`]s (dense, validated distance
//! matrices) and provides:
//!
//! - [`chains`]: ε-chains, ε-components, the chainability threshold and
//!   finite-chainability certificates;
//! - [`boundedness`]: greedy ε-nets and maximal ε-separated sets;
//! - [`covers`]: cover realization, Lebesgue-number bounds, exact values
//!   and witnesses, local finiteness, greedy subcovers, and the adversarial
//!   cover built from a separated sequence;
//! - [`convexity`]: tolerance-parameterized property P, Menger and metric
//!   convexity checks;
//! - [`examples`]: generators for the classical examples and
//!   counterexamples, each bundled with machine-checkable expectations.
//!
//! Infinite constructions are truncated with an explicit parameter; nothing
//! here claims an infinite-space statement directly.

pub mod boundedness;
pub mod chains;
pub mod convexity;
pub mod covers;
mod error;
pub mod examples;
pub mod io;
pub mod serde_ext;
mod space;
mod union_find;

pub use error::{Error, Result};
pub use space::{
    validate_matrix, FiniteMetricSpace, Metric, MetricViolation, PointSet, ViolationKind,
    DEFAULT_AXIOM_TOL_FACTOR,
};
