//! The underlying digraph and the structural facts that bound complexity:
//! head-independent sets (whose complements are essential), 2-loops (whose
//! drivers are redundant), base–bundle splits and the resulting polynomial
//! bounds.

mod bounds;
mod graph;
mod loops;
mod reduction;
mod report;

pub use bounds::{
    bound_degree, bound_polynomial, bound_skew, growth_rate, negative_circuit_bound, quadratic_bound,
    self_inhibitor_bound, verify_bound, BoundCheck, BoundForm, BoundKind, BoundPolynomial, BoundRow, InvalidSplit,
    Monomial,
};
pub use graph::{HeadIndependence, MaximalSets, UnderlyingNetwork, EXHAUSTIVE_LIMIT};
pub use loops::{BaseBundle, BaseBundleSplits, TwoLoop};
pub use reduction::{certify_degree_reduction, DegreeReduction, Ineligible};
pub use report::{
    bundle_network, bundle_offset_room, sample_bundle_complexity, structure_report, validate_dynamically, Certified,
    DrivingCheck, DynamicValidation, EssentialCheck, Reason, StructureLimits, StructureReport,
};
