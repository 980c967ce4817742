use alloc::vec::Vec;

use super::{ModelError, NetworkSpec, Sign};
use crate::numerics::Rational;

/// `H(s·(x − T))` with `H(y) = 0` for `y ≤ 0`.
///
/// A `+` arrow is off on `[0, T]` and on on `(T, 1]`; a `−` arrow is on on
/// `[0, T)` and off on `[T, 1]`.
pub fn heaviside(sign: Sign, x: &Rational, threshold: &Rational) -> bool {
    match sign {
        Sign::Plus => x > threshold,
        Sign::Minus => x < threshold,
        Sign::Zero => false,
    }
}

/// A validated network with cached adjacency.
#[derive(Debug, Clone)]
pub struct Network {
    spec: NetworkSpec,
    in_neighbors: Vec<Vec<usize>>,
    out_neighbors: Vec<Vec<usize>>,
    one_minus_a: Rational,
}

impl Network {
    pub fn new(spec: NetworkSpec) -> Result<Self, ModelError> {
        let violations = spec.validate();
        if !violations.is_empty() {
            return Err(ModelError::Invalid(violations));
        }
        let d = spec.dim();
        let mut in_neighbors = alloc::vec![Vec::new(); d];
        let mut out_neighbors = alloc::vec![Vec::new(); d];
        for i in 0..d {
            for j in 0..d {
                if !spec.k(i, j).is_zero() {
                    in_neighbors[j].push(i);
                    out_neighbors[i].push(j);
                }
            }
        }
        let one_minus_a = Rational::one() - spec.a();
        Ok(Network { spec, in_neighbors, out_neighbors, one_minus_a })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn a(&self) -> &Rational {
        self.spec.a()
    }

    pub fn one_minus_a(&self) -> &Rational {
        &self.one_minus_a
    }

    /// Tails of the arrows into `j`, ascending.
    pub fn in_neighbors(&self, j: usize) -> &[usize] {
        &self.in_neighbors[j]
    }

    /// Heads of the arrows out of `i`, ascending.
    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out_neighbors[i]
    }

    pub fn has_arrow(&self, i: usize, j: usize) -> bool {
        !self.spec.k(i, j).is_zero()
    }

    pub fn heaviside_term(&self, x_i: &Rational, i: usize, j: usize) -> Result<bool, ModelError> {
        if !self.has_arrow(i, j) {
            return Err(ModelError::NoInteraction { from: i, to: j });
        }
        Ok(heaviside(self.spec.s(i, j), x_i, self.spec.t(i, j)))
    }

    /// Offset `η_j = Σ_i K[i][j]·H(s[i][j](x_i − T[i][j]))` selected by `x`.
    pub fn offsets_at(&self, x: &[Rational]) -> Vec<Rational> {
        (0..self.dim())
            .map(|j| {
                self.in_neighbors[j]
                    .iter()
                    .filter(|&&i| heaviside(self.spec.s(i, j), &x[i], self.spec.t(i, j)))
                    .map(|&i| self.spec.k(i, j))
                    .sum()
            })
            .collect()
    }

    /// One application of the map; `offset` is the external `D_t` of a
    /// driven network.
    pub fn evaluate_map(&self, x: &[Rational], offset: Option<&[Rational]>) -> Result<Vec<Rational>, ModelError> {
        let d = self.dim();
        if x.len() != d {
            return Err(ModelError::PointDimension { expected: d, found: x.len() });
        }
        if let Some(off) = offset {
            if off.len() != d {
                return Err(ModelError::PointDimension { expected: d, found: off.len() });
            }
        }
        let zero = Rational::zero();
        let one = Rational::one();
        if let Some(bad) = x.iter().position(|v| *v < zero || *v > one) {
            return Err(ModelError::OutsideCube(bad));
        }
        let eta = self.offsets_at(x);
        Ok(eta
            .into_iter()
            .enumerate()
            .map(|(j, mut e)| {
                if let Some(off) = offset {
                    e = e + &off[j];
                }
                self.a() * &x[j] + &self.one_minus_a * &e
            })
            .collect())
    }
}
