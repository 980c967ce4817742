use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::orbit::{distance_to_discontinuity, rect_distance_to_discontinuity};
use crate::model::{ModelError, Network};
use crate::numerics::{Rational, Rect};
use crate::partition::{complexity_trace, BasePartition, ComplexityTrace, EngineMode, TraceConfig, TraceError};

/// Smallest `τ` with `C(τ+1) = C(τ)`; `complexities[0]` is `C(1)`.
pub fn detect_stabilization(complexities: &[usize]) -> Option<usize> {
    complexities.windows(2).position(|w| w[0] == w[1]).map(|k| k + 1)
}

/// The map `P^τ → P^τ` sending each atom to the atom containing its image,
/// with its functional-graph decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessorMap {
    pub tau: usize,
    pub next: Vec<usize>,
    /// Each cycle starts at its smallest node.
    pub cycles: Vec<Vec<usize>>,
    /// Index into `cycles` of the cycle each node falls into.
    pub cycle_of: Vec<usize>,
    /// Steps before each node reaches its cycle.
    pub transient: Vec<usize>,
    /// Unique child in generation `τ + 1` of each node.
    pub(crate) child: Vec<usize>,
}

impl SuccessorMap {
    pub fn len(&self) -> usize {
        self.next.len()
    }

    pub fn is_empty(&self) -> bool {
        self.next.is_empty()
    }

    pub fn max_transient(&self) -> usize {
        self.transient.iter().copied().max().unwrap_or(0)
    }

    /// Builds the map from a trace that reached `τ + 1` with
    /// `C(τ+1) = C(τ)`. `None` if the trace did not stabilize or has no
    /// lineage.
    pub fn from_trace<S: crate::numerics::Scalar>(trace: &ComplexityTrace<S>) -> Option<Self> {
        let tau = detect_stabilization(&trace.complexities())?;
        let lineage = trace.lineage.as_ref()?;
        if lineage.horizon() < tau + 1 {
            return None;
        }
        let n = lineage.len(tau);
        let index: BTreeMap<Vec<u32>, usize> = (0..n).map(|k| (lineage.itinerary(tau, k), k)).collect();
        let mut next = vec![usize::MAX; n];
        let mut child = vec![usize::MAX; n];
        for c in 0..lineage.len(tau + 1) {
            let parent = lineage.parent(tau + 1, c)?;
            let word = lineage.itinerary(tau + 1, c);
            next[parent] = *index.get(&word[1..])?;
            child[parent] = c;
        }
        if next.contains(&usize::MAX) {
            return None;
        }
        let (cycles, cycle_of, transient) = decompose(&next);
        Some(SuccessorMap { tau, next, cycles, cycle_of, transient, child })
    }
}

fn decompose(next: &[usize]) -> (Vec<Vec<usize>>, Vec<usize>, Vec<usize>) {
    const UNSEEN: usize = usize::MAX;
    let n = next.len();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut cycle_of = vec![UNSEEN; n];
    let mut transient = vec![UNSEEN; n];
    // walk stamps: which start visited a node, and at which position
    let mut stamp = vec![UNSEEN; n];
    for start in 0..n {
        if cycle_of[start] != UNSEEN {
            continue;
        }
        let mut path = Vec::new();
        let mut v = start;
        while cycle_of[v] == UNSEEN && stamp[v] == UNSEEN {
            stamp[v] = start;
            path.push(v);
            v = next[v];
        }
        let tail_len = if cycle_of[v] == UNSEEN {
            // closed a new cycle at v
            let pos = path.iter().position(|&u| u == v).expect("cycle entry on path");
            let mut cycle = path[pos..].to_vec();
            let min = (0..cycle.len()).min_by_key(|&k| cycle[k]).unwrap_or(0);
            cycle.rotate_left(min);
            for &u in &cycle {
                cycle_of[u] = cycles.len();
                transient[u] = 0;
            }
            cycles.push(cycle);
            pos
        } else {
            path.len()
        };
        for (k, &u) in path[..tail_len].iter().enumerate().rev() {
            let after = if k + 1 < tail_len { path[k + 1] } else { v };
            cycle_of[u] = cycle_of[after];
            transient[u] = transient[after] + 1;
        }
    }
    (cycles, cycle_of, transient)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitStatus {
    /// `F^p(x*) = x*` exactly and no point lies on a discontinuity.
    Verified,
    /// Periodic under `F`, but some point sits on a threshold hyperplane.
    OnDiscontinuity,
    /// The affine fixed point is not periodic under `F`: it left the
    /// closure of its atoms or fell on the wrong side of a threshold.
    Ghost,
}

/// The periodic orbit carried by one cycle of the successor map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicOrbit {
    pub period: usize,
    /// `τ`-atoms visited, in order.
    pub cycle: Vec<usize>,
    /// Base atoms visited, in order.
    pub word: Vec<u32>,
    /// `points[m]` lies in atom `cycle[m]`; `points[0]` is the fixed point
    /// of the composed map.
    pub points: Vec<Vec<Rational>>,
    /// Slope `a^p` of the composed map `x ↦ a^p x + b`.
    pub slope: Rational,
    pub intercept: Vec<Rational>,
    pub status: OrbitStatus,
    pub distance: Option<Rational>,
}

/// Composes the affine branches along `word` and returns
/// `(a^p, b, b/(1 − a^p))`.
pub fn compose_branches(
    net: &Network,
    base: &BasePartition,
    word: &[u32],
) -> (Rational, Vec<Rational>, Vec<Rational>) {
    let a = net.a();
    let mut slope = Rational::one();
    let mut b = vec![Rational::zero(); net.dim()];
    for &w in word {
        let eta = base.eta(w as usize);
        for (bj, ej) in b.iter_mut().zip(eta) {
            *bj = a * &*bj + net.one_minus_a() * ej;
        }
        slope = &slope * a;
    }
    let denom = &Rational::one() - &slope;
    let fixed = b.iter().map(|bj| bj / &denom).collect();
    (slope, b, fixed)
}

/// One periodic orbit per cycle of the successor map, each checked against
/// the map itself. `child_rects[k]` is the `τ+1` atom of node `k`'s child.
pub fn extract_periodic_orbits(
    net: &Network,
    successor: &SuccessorMap,
    words_at_tau: &[u32],
    child_rects: &[Rect],
) -> Result<Vec<PeriodicOrbit>, ModelError> {
    let base = BasePartition::build(net);
    let mut orbits = Vec::with_capacity(successor.cycles.len());
    for cycle in &successor.cycles {
        let word: Vec<u32> = cycle.iter().map(|&k| words_at_tau[k]).collect();
        let (slope, intercept, fixed) = compose_branches(net, &base, &word);
        let p = cycle.len();
        let mut points = Vec::with_capacity(p);
        let mut x = fixed.clone();
        let mut consistent = true;
        for m in 0..p {
            // x must follow the cycle: in base atom word[m] and, after one
            // step, in the child of cycle[m]
            consistent &= base.locate(&x) == Some(word[m] as usize);
            let next = net.evaluate_map(&x, None)?;
            consistent &= child_rects[cycle[m]].closure_contains(&next);
            points.push(core::mem::replace(&mut x, next));
        }
        let distance = distance_to_discontinuity(net, &points);
        let status = if !consistent || x != fixed {
            OrbitStatus::Ghost
        } else if distance.as_ref().is_some_and(Rational::is_zero) {
            OrbitStatus::OnDiscontinuity
        } else {
            OrbitStatus::Verified
        };
        orbits.push(PeriodicOrbit {
            period: p,
            cycle: cycle.clone(),
            word,
            points,
            slope,
            intercept,
            status,
            distance,
        });
    }
    Ok(orbits)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttractorReport {
    /// Largest `t` computed.
    pub horizon: usize,
    pub truncated: bool,
    pub complexities: Vec<usize>,
    pub stabilization: Option<usize>,
    pub successor: Option<SuccessorMap>,
    pub orbits: Vec<PeriodicOrbit>,
    /// Exact distance from the extracted orbit points to the discontinuity
    /// set.
    pub orbit_distance: Option<Rational>,
    /// Distance from the `τ+1` atoms on successor cycles to the
    /// discontinuity set, a lower estimate for the attractor.
    pub cycle_atom_distance: Option<Rational>,
}

impl AttractorReport {
    pub fn verified(&self) -> impl Iterator<Item = &PeriodicOrbit> {
        self.orbits.iter().filter(|o| o.status == OrbitStatus::Verified)
    }

    /// `C(τ)` at stabilization.
    pub fn stable_complexity(&self) -> Option<usize> {
        self.stabilization.map(|tau| self.complexities[tau - 1])
    }
}

/// Runs the exact engine until `C(τ+1) = C(τ)` or the horizon, then
/// extracts the periodic orbits of the successor map.
pub fn analyze_attractor(net: &Network, config: &TraceConfig) -> Result<AttractorReport, TraceError> {
    let mut config = config.clone().stop_at_stabilization(true);
    config.mode = EngineMode::ItineraryExact;
    let trace = complexity_trace(net, &config)?;
    let complexities = trace.complexities();
    let successor = SuccessorMap::from_trace(&trace);
    let (orbits, cycle_atom_distance) = match &successor {
        Some(s) => {
            let lineage = trace.lineage.as_ref().expect("itinerary-exact trace has lineage");
            let words: Vec<u32> = (0..s.len()).map(|k| lineage.atom(s.tau, k)).collect();
            let mut child_rects = vec![Rect::unit(0); s.len()];
            for (k, &c) in s.child.iter().enumerate() {
                child_rects[k] = trace.final_generation.nodes[c].rect.clone();
            }
            let on_cycles: Vec<Rect> = s.cycles.iter().flatten().map(|&k| child_rects[k].clone()).collect();
            (
                extract_periodic_orbits(net, s, &words, &child_rects)?,
                rect_distance_to_discontinuity(net, &on_cycles),
            )
        }
        None => (Vec::new(), None),
    };
    let orbit_distance = orbits.iter().filter_map(|o| o.distance.clone()).min();
    Ok(AttractorReport {
        horizon: trace.horizon(),
        truncated: trace.is_truncated(),
        stabilization: successor.as_ref().map(|s| s.tau),
        complexities,
        successor,
        orbits,
        orbit_distance,
        cycle_atom_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn stabilization_is_first_repeat() {
        assert_eq!(detect_stabilization(&[2, 3, 4, 4, 5]), Some(3));
        assert_eq!(detect_stabilization(&[1, 1]), Some(1));
        assert_eq!(detect_stabilization(&[2, 3, 4]), None);
        assert_eq!(detect_stabilization(&[]), None);
    }

    #[test]
    fn decomposition_of_a_small_functional_graph() {
        // 0 → 1 → 2 → 1, 3 → 3, 4 → 0
        let (cycles, cycle_of, transient) = decompose(&[1, 2, 1, 3, 0]);
        assert_eq!(cycles, vec![vec![1, 2], vec![3]]);
        assert_eq!(cycle_of, [0, 0, 0, 1, 0]);
        assert_eq!(transient, [1, 0, 0, 0, 2]);
    }

    #[test]
    fn single_branch_fixed_point_is_eta() {
        let net = presets::self_inhibitor(q(1, 3), q(1, 2)).unwrap();
        let base = BasePartition::build(&net);
        for w in 0..base.len() as u32 {
            let (_, _, fixed) = compose_branches(&net, &base, &[w]);
            assert_eq!(fixed, base.eta(w as usize));
        }
    }

    #[test]
    fn self_inhibitor_two_cycle() {
        let net = presets::self_inhibitor(q(1, 4), q(1, 2)).unwrap();
        let report = analyze_attractor(&net, &TraceConfig::new(50)).unwrap();
        assert_eq!(report.stabilization, Some(1));
        assert_eq!(report.orbits.len(), 1);
        let o = &report.orbits[0];
        assert_eq!(o.status, OrbitStatus::Verified);
        let mut xs: Vec<Rational> = o.points.iter().map(|p| p[0].clone()).collect();
        xs.sort();
        assert_eq!(xs, [q(1, 5), q(4, 5)]);
        assert_eq!(report.orbit_distance, Some(q(3, 10)));
    }
}
