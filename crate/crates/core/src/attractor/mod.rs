//! Orbits and attractors.
//!
//! Point orbits are iterated exactly, but an exact rational orbit is
//! seldom exactly periodic, so point recurrence is only a heuristic.
//! Certified periodicity comes from the partition side: once
//! `C(τ+1) = C(τ)`, every atom of `P^τ` has a unique successor atom, and
//! each cycle of that successor map carries a periodic orbit, the fixed
//! point of the composed affine branches.

mod orbit;
mod periodic;
mod rotation;

pub use orbit::{
    discontinuities, distance_to_discontinuity, rect_distance_to_discontinuity, simulate_orbit, Orbit, PointCycle,
};
pub use periodic::{
    analyze_attractor, compose_branches, detect_stabilization, extract_periodic_orbits, AttractorReport,
    OrbitStatus, PeriodicOrbit, SuccessorMap,
};
pub use rotation::{rotation_number, RotationError, RotationEstimate};
