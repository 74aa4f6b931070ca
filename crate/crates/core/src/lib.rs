//! Approximate proof labeling scheme (APLS) for monotone hyperfinite
//! properties of bounded-degree graphs, with planarity as the shipped
//! predicate.
//!
//! The crate covers both sides of the scheme:
//!
//! * the honest prover: Property-A witnesses ([`measures`], [`separators`]),
//!   their discretization, distance coloring and label encoding
//!   ([`labeling`]);
//! * the distributed verifier: per-vertex checks on anonymous labeled balls,
//!   the locally-P verifier, product verifiers and the combined pipeline
//!   ([`verifier`]);
//! * soundness-side extraction: turning any accepted labeling into a
//!   hyperfinite partition and an edit-distance upper bound ([`hyperfinite`]).
//!
//! All probabilities are exact rationals; there is no floating point in any
//! check.

pub mod driver;
pub mod error;
pub mod generators;
pub mod graph;
pub mod hyperfinite;
pub mod labeling;
pub mod measures;
pub mod rational;
pub mod separators;
pub mod verifier;

pub use error::{Error, Result};
pub use graph::{max_ball_size_actual, max_ball_size_bound, BoundedDegreeGraph, RootedBall};
pub use rational::Rational;
