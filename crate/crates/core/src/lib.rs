//! Exact simulation and analysis of discrete-time regulatory networks.
//!
//! A network on `d` units evolves on the unit cube `[0,1]^d` by
//!
//! ```text
//! x_j ↦ a·x_j + (1 − a) · Σ_i K[i][j] · H(s[i][j] · (x_i − T[i][j]))
//! ```
//!
//! with `H(x) = 0` for `x ≤ 0` and `1` otherwise. The crate computes the
//! dynamical complexity `C(t)` (the number of distinguishable itineraries of
//! length `t`) exactly, checks the structural facts that bound it, and
//! extracts periodic attractors.
//!
//! Modules, bottom-up:
//!
//! * [`numerics`]: exact rationals, flagged intervals and rectangles.
//! * [`model`]: network specification, validation, map evaluation and
//!   coordinatewise-injectivity analysis.
//! * [`partition`]: base partition, exact propagation of dynamical partitions
//!   and complexity traces.
//! * [`structure`]: underlying digraph, head-independent sets, 2-loops,
//!   base–bundle splits and polynomial complexity bounds.
//! * [`attractor`]: orbits, stabilization, exact periodic orbits and the
//!   self-inhibitor rotation number.
//! * [`presets`]: the standard example networks.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod attractor;
pub mod model;
pub mod numerics;
pub mod partition;
pub mod presets;
pub mod structure;

pub use model::{Mode, Network, NetworkSpec, OffsetRule, OffsetSequence, Sign};
pub use numerics::{FlaggedInterval, Rational, Rect, Scalar, F64};
pub use partition::{ComplexityTrace, EngineMode, TraceConfig};
