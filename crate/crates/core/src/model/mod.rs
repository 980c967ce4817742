//! Network specification, validation, the map itself and the
//! coordinatewise-injectivity analysis.

mod injectivity;
mod network;
mod spec;

pub use injectivity::{
    BranchColumn, BranchSystem, DegeneracyWitness, InjectivityReport, NonDegeneracy, OverlapWitness,
    DEFAULT_INDEGREE_CAP,
};
pub use network::{heaviside, Network};
pub use spec::{Location, Mode, NetworkSpec, OffsetRule, OffsetSequence, Rule, Sign, Violation};

use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("malformed network: {0}")]
    Shape(String),
    #[error("invalid network: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("no arrow from unit {} to unit {}", from + 1, to + 1)]
    NoInteraction { from: usize, to: usize },
    #[error("unit {} has in-degree {indegree}, above the cap {cap}", column + 1)]
    IndegreeCap { column: usize, indegree: usize, cap: usize },
    #[error("point has {found} coordinates, network has {expected}")]
    PointDimension { expected: usize, found: usize },
    #[error("coordinate {} lies outside [0, 1]", .0 + 1)]
    OutsideCube(usize),
}

fn join(v: &[Violation]) -> String {
    let mut out = String::new();
    for (k, item) in v.iter().enumerate() {
        if k > 0 {
            out.push_str("; ");
        }
        out.push_str(&item.message);
    }
    out
}
