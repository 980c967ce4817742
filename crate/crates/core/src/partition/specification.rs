use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::engine::Generation;
use crate::numerics::{FlaggedInterval, Rational, Scalar};

/// A choice of projection for each coordinate in `coords`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Specification<S: Scalar = Rational> {
    pub t: usize,
    pub coords: Vec<usize>,
    pub sides: Vec<FlaggedInterval<S>>,
}

impl<S: Scalar> Specification<S> {
    /// The specification met by node `k` on `coords`.
    pub fn of(gen: &Generation<S>, k: usize, coords: &[usize]) -> Self {
        let rect = &gen.nodes[k].rect;
        Specification { t: gen.t, coords: coords.to_vec(), sides: coords.iter().map(|&i| rect.side(i).clone()).collect() }
    }

    fn matches(&self, rect: &crate::numerics::Rect<S>) -> bool {
        self.coords.iter().zip(&self.sides).all(|(&i, s)| rect.side(i) == s)
    }
}

/// `N(S)`: the number of atoms meeting the specification.
pub fn degeneracy<S: Scalar>(gen: &Generation<S>, spec: &Specification<S>) -> usize {
    gen.nodes.iter().filter(|n| spec.matches(&n.rect)).count()
}

/// `n(U, t)`: the largest degeneracy over the specifications present.
pub fn max_degeneracy<S: Scalar>(gen: &Generation<S>, coords: &[usize]) -> usize {
    let mut counts: BTreeMap<Vec<&FlaggedInterval<S>>, usize> = BTreeMap::new();
    for n in &gen.nodes {
        *counts.entry(coords.iter().map(|&i| n.rect.side(i)).collect()).or_insert(0) += 1;
    }
    counts.into_values().max().unwrap_or(0)
}

/// `max_J #C_j(J)` over `J ∈ Q_i^t`: how many distinct `j`-projections share
/// one `i`-projection.
pub fn projection_multiplicity<S: Scalar>(gen: &Generation<S>, i: usize, j: usize) -> usize {
    let mut by_i: BTreeMap<&FlaggedInterval<S>, BTreeSet<&FlaggedInterval<S>>> = BTreeMap::new();
    for n in &gen.nodes {
        by_i.entry(n.rect.side(i)).or_default().insert(n.rect.side(j));
    }
    by_i.values().map(BTreeSet::len).max().unwrap_or(0)
}

/// Distinct projections onto coordinate `i`.
pub fn projection_count<S: Scalar>(gen: &Generation<S>, i: usize) -> usize {
    gen.nodes.iter().map(|n| n.rect.side(i)).collect::<BTreeSet<_>>().len()
}
