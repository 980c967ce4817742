use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{ModelError, Network};
use crate::numerics::{FlaggedInterval, Rational};

/// Largest in-degree for which the `2^indeg` offset enumeration is allowed.
pub const DEFAULT_INDEGREE_CAP: usize = 20;

/// The achievable offsets of one coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchColumn {
    /// Tails of the arrows into this coordinate; the ε bits range over these.
    pub in_neighbors: Vec<usize>,
    /// Distinct subset sums `Σ ε_i K[i][j]`, ascending.
    pub offsets: Vec<Rational>,
    /// Number of ε vectors enumerated, `2^indeg`.
    pub candidates: usize,
}

/// Per coordinate, the affine contractions `x ↦ a·x + (1 − a)·η`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchSystem {
    pub a: Rational,
    pub columns: Vec<BranchColumn>,
}

impl BranchSystem {
    /// `(slope, intercept)` of branch `k` of coordinate `j`.
    pub fn branch(&self, j: usize, k: usize) -> (Rational, Rational) {
        let one_minus_a = Rational::one() - &self.a;
        (self.a.clone(), &one_minus_a * &self.columns[j].offsets[k])
    }

    /// `f([0, 1])` for branch `k` of coordinate `j`.
    pub fn branch_image(&self, j: usize, k: usize) -> FlaggedInterval {
        let (slope, intercept) = self.branch(j, k);
        FlaggedInterval::unit().map_affine(&slope, &intercept)
    }
}

/// Two branches of one coordinate with intersecting images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapWitness {
    pub column: usize,
    pub lower_offset: Rational,
    pub upper_offset: Rational,
    pub lower_image: FlaggedInterval,
    pub upper_image: FlaggedInterval,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityReport {
    /// Smallest gap between distinct offsets of any coordinate; `None` when
    /// no coordinate has two offsets.
    pub delta: Option<Rational>,
    /// `δ / (1 + δ)`, or 1 when `delta` is `None`.
    pub a0: Rational,
    pub a: Rational,
    pub injective_at_a: bool,
    pub witnesses: Vec<OverlapWitness>,
}

/// ε vector (over all `d` units) that produced a colliding subset sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyWitness {
    pub column: usize,
    pub first: Vec<u8>,
    pub second: Vec<u8>,
    pub sum: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonDegeneracy {
    Holds,
    Fails(DegeneracyWitness),
}

impl NonDegeneracy {
    pub fn holds(&self) -> bool {
        matches!(self, NonDegeneracy::Holds)
    }
}

impl Network {
    fn check_indegree(&self, cap: usize) -> Result<(), ModelError> {
        for j in 0..self.dim() {
            let indeg = self.in_neighbors(j).len();
            if indeg > cap {
                return Err(ModelError::IndegreeCap { column: j, indegree: indeg, cap });
            }
        }
        Ok(())
    }

    /// Calls `visit(mask, sum)` for every ε supported on the in-neighbours of `j`.
    fn for_each_subset_sum(&self, j: usize, mut visit: impl FnMut(u64, Rational)) {
        let tails = self.in_neighbors(j);
        let weights: Vec<&Rational> = tails.iter().map(|&i| self.spec().k(i, j)).collect();
        for mask in 0u64..(1u64 << tails.len()) {
            let sum: Rational =
                weights.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, w)| *w).sum();
            visit(mask, sum);
        }
    }

    pub fn branch_systems(&self, indegree_cap: usize) -> Result<BranchSystem, ModelError> {
        self.check_indegree(indegree_cap)?;
        let columns = (0..self.dim())
            .map(|j| {
                let mut offsets = Vec::new();
                self.for_each_subset_sum(j, |_, s| offsets.push(s));
                let candidates = offsets.len();
                offsets.sort();
                offsets.dedup();
                BranchColumn { in_neighbors: self.in_neighbors(j).to_vec(), offsets, candidates }
            })
            .collect();
        Ok(BranchSystem { a: self.a().clone(), columns })
    }

    /// δ, `a₀ = δ/(1+δ)` and the exact image-disjointness test at the
    /// network's own `a`.
    pub fn injectivity_analysis(&self, indegree_cap: usize) -> Result<InjectivityReport, ModelError> {
        let system = self.branch_systems(indegree_cap)?;
        let delta = system
            .columns
            .iter()
            .flat_map(|c| c.offsets.windows(2).map(|w| &w[1] - &w[0]))
            .min();
        let a0 = match &delta {
            Some(dl) => dl / &(Rational::one() + dl),
            None => Rational::one(),
        };
        let mut witnesses = Vec::new();
        for (j, col) in system.columns.iter().enumerate() {
            for k in 1..col.offsets.len() {
                let lower = system.branch_image(j, k - 1);
                let upper = system.branch_image(j, k);
                if lower.intersects(&upper) {
                    witnesses.push(OverlapWitness {
                        column: j,
                        lower_offset: col.offsets[k - 1].clone(),
                        upper_offset: col.offsets[k].clone(),
                        lower_image: lower,
                        upper_image: upper,
                    });
                }
            }
        }
        Ok(InjectivityReport {
            delta,
            a0,
            a: self.a().clone(),
            injective_at_a: witnesses.is_empty(),
            witnesses,
        })
    }

    /// Whether every column's subset sums over its in-neighbours are distinct.
    pub fn non_degenerate(&self, indegree_cap: usize) -> Result<NonDegeneracy, ModelError> {
        self.check_indegree(indegree_cap)?;
        let d = self.dim();
        for j in 0..d {
            let tails = self.in_neighbors(j);
            let mut seen: BTreeMap<Rational, u64> = BTreeMap::new();
            let mut collision = None;
            self.for_each_subset_sum(j, |mask, sum| {
                if collision.is_some() {
                    return;
                }
                if let Some(&prev) = seen.get(&sum) {
                    collision = Some((prev, mask, sum));
                } else {
                    seen.insert(sum, mask);
                }
            });
            if let Some((first, second, sum)) = collision {
                let expand = |mask: u64| {
                    let mut eps = alloc::vec![0u8; d];
                    for (b, &i) in tails.iter().enumerate() {
                        eps[i] = (mask >> b & 1) as u8;
                    }
                    eps
                };
                return Ok(NonDegeneracy::Fails(DegeneracyWitness {
                    column: j,
                    first: expand(first),
                    second: expand(second),
                    sum,
                }));
            }
        }
        Ok(NonDegeneracy::Holds)
    }
}
