use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::model::{ModelError, Network};
use crate::numerics::{Rational, Rect};
use crate::partition::BasePartition;

/// Grid used by the heuristic recurrence test.
const QUANTUM: f64 = (1u64 << 40) as f64;

/// A recurrence found along a simulated orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointCycle {
    pub transient: usize,
    pub period: usize,
    /// The exact states recur. Otherwise only the base atom and a state
    /// rounded to `2^-40` did, which suggests but does not prove a cycle.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// `points[t] = F^t(x0)`.
    pub points: Vec<Vec<Rational>>,
    /// Base atom of each point.
    pub itinerary: Vec<u32>,
    pub cycle: Option<PointCycle>,
    /// Times at which some coordinate sat exactly on an active threshold.
    pub boundary_hits: Vec<usize>,
}

impl Orbit {
    pub fn initial(&self) -> &[Rational] {
        &self.points[0]
    }
}

/// Iterates `F` exactly for `t_max` points starting at `x0`.
pub fn simulate_orbit(net: &Network, x0: &[Rational], t_max: usize) -> Result<Orbit, ModelError> {
    let base = BasePartition::build(net);
    let mut points = Vec::with_capacity(t_max);
    let mut itinerary = Vec::with_capacity(t_max);
    let mut boundary_hits = Vec::new();
    let mut exact_seen: BTreeMap<Vec<Rational>, usize> = BTreeMap::new();
    let mut rough_seen: BTreeMap<(u32, Vec<i64>), usize> = BTreeMap::new();
    let mut exact_cycle = None;
    let mut rough_cycle = None;
    let mut x = x0.to_vec();
    for t in 0..t_max {
        let w = base.locate(&x).ok_or_else(|| ModelError::OutsideCube(outside_coordinate(&x)))?;
        if on_discontinuity(net, &x) {
            boundary_hits.push(t);
        }
        if exact_cycle.is_none() {
            if let Some(&first) = exact_seen.get(&x) {
                exact_cycle = Some(PointCycle { transient: first, period: t - first, exact: true });
            } else {
                exact_seen.insert(x.clone(), t);
            }
        }
        if rough_cycle.is_none() {
            let key = (w as u32, x.iter().map(|v| libm::round(v.to_f64() * QUANTUM) as i64).collect());
            if let Some(&first) = rough_seen.get(&key) {
                rough_cycle = Some(PointCycle { transient: first, period: t - first, exact: false });
            } else {
                rough_seen.insert(key, t);
            }
        }
        itinerary.push(w as u32);
        let next = net.evaluate_map(&x, None)?;
        points.push(core::mem::replace(&mut x, next));
    }
    Ok(Orbit { points, itinerary, cycle: exact_cycle.or(rough_cycle), boundary_hits })
}

fn outside_coordinate(x: &[Rational]) -> usize {
    let (zero, one) = (Rational::zero(), Rational::one());
    x.iter().position(|v| *v < zero || *v > one).unwrap_or(0)
}

/// Hyperplanes `x_i = T[i][j]` over the arrows `i → j`, as
/// `(coordinate, threshold)` pairs.
pub fn discontinuities(net: &Network) -> Vec<(usize, Rational)> {
    let mut out = Vec::new();
    for i in 0..net.dim() {
        for &j in net.out_neighbors(i) {
            let t = net.spec().t(i, j).clone();
            if !out.contains(&(i, t.clone())) {
                out.push((i, t));
            }
        }
    }
    out
}

fn on_discontinuity(net: &Network, x: &[Rational]) -> bool {
    discontinuities(net).iter().any(|(i, t)| x[*i] == *t)
}

/// Smallest coordinate distance from any of `points` to a discontinuity
/// hyperplane; `None` when the network has no arrows.
pub fn distance_to_discontinuity(net: &Network, points: &[Vec<Rational>]) -> Option<Rational> {
    let planes = discontinuities(net);
    points.iter().flat_map(|x| planes.iter().map(move |(i, t)| (&x[*i] - t).abs())).min()
}

/// As [`distance_to_discontinuity`] for the closures of rects.
pub fn rect_distance_to_discontinuity(net: &Network, rects: &[Rect]) -> Option<Rational> {
    let planes = discontinuities(net);
    rects
        .iter()
        .flat_map(|r| {
            planes.iter().map(move |(i, t)| {
                let side = r.side(*i);
                if side.lo() <= t && t <= side.hi() {
                    Rational::zero()
                } else {
                    (side.lo() - t).abs().min((side.hi() - t).abs())
                }
            })
        })
        .min()
}
