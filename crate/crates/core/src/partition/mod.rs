//! Base partition, exact propagation of the dynamical partitions and
//! complexity traces.
//!
//! The engine runs the forward recursion `Q^{t+1} = F(Q^t) ∨ P`. Each atom of
//! `Q^t` is the image `F^{t−1}(A)` of an atom `A` of `P^t`; since `F` is a
//! single affine map on each base atom, the image of a rect is a rect, and
//! the nonempty intersections with base atoms are exactly the realizable
//! one-symbol extensions of `A`'s itinerary. The number of nodes is therefore
//! `C(t)` for any contraction rate, injective or not.
//!
//! Children are emitted parent by parent in increasing base-atom order, so
//! every generation is sorted lexicographically by itinerary.

mod base;
mod checks;
mod engine;
mod oracle;
mod repr;
mod specification;
mod trace;

pub use base::{BasePartition, CoordinatePartition};
pub use checks::{sample_subsets, InvariantKind, InvariantLog, InvariantViolation};
pub use engine::{AtomNode, Engine, Frame, Generation, ROOT};
pub use oracle::grid_oracle_complexity;
pub use repr::{Representation, ScaleContext};
pub use specification::{degeneracy, max_degeneracy, projection_count, projection_multiplicity, Specification};
pub use trace::{
    complexity_trace, float_trace, run_trace, sequence_trace, CheckLevel, Clock, ComplexityTrace, EngineMode, Lineage,
    NoClock, StepRecord, TraceConfig, TraceError, Truncation,
};
#[cfg(feature = "std")]
pub use trace::StdClock;
