use alloc::vec::Vec;

use super::{TwoLoop, UnderlyingNetwork};
use crate::model::{DegeneracyWitness, ModelError, Network, NonDegeneracy};

/// A redundant set `U` of 2-loop drivers with essential complement `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReduction {
    /// One loop per redundant vertex, in driver order.
    pub loops: Vec<TwoLoop>,
    pub redundant: Vec<usize>,
    pub essential: Vec<usize>,
    /// `#W`, the degree of the resulting bound.
    pub q: usize,
}

impl DegreeReduction {
    /// The essential vertex each redundant vertex is assigned to: the
    /// first essential vertex in order that it drives.
    pub fn assignment(&self) -> Vec<(usize, usize)> {
        self.redundant
            .iter()
            .map(|&i| {
                let j = self.loops.iter().filter(|l| l.driver == i).map(|l| l.end).min().expect("driver has a loop");
                (i, j)
            })
            .collect()
    }
}

/// Why no degree reduction could be certified.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Ineligible {
    #[error("the network is not coordinatewise injective at this contraction rate")]
    NotInjective,
    #[error("the interaction matrix is degenerate in column {}", .0.column + 1)]
    Degenerate(DegeneracyWitness),
    #[error("the underlying network has no 2-loop")]
    NoTwoLoops,
    #[error("no set of 2-loop drivers is head-independent with isolated ends outside it")]
    NoValidLoopSet,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Largest loop count searched exhaustively.
const LOOP_SEARCH_LIMIT: usize = 24;

/// Picks the largest set of pairwise disjoint 2-loops whose drivers form a
/// head-independent set avoiding every chosen isolated end.
pub fn certify_degree_reduction(net: &Network, indegree_cap: usize) -> Result<DegreeReduction, Ineligible> {
    if !net.injectivity_analysis(indegree_cap)?.injective_at_a {
        return Err(Ineligible::NotInjective);
    }
    if let NonDegeneracy::Fails(w) = net.non_degenerate(indegree_cap)? {
        return Err(Ineligible::Degenerate(w));
    }
    let g = net.underlying();
    let loops = g.two_loops();
    if loops.is_empty() {
        return Err(Ineligible::NoTwoLoops);
    }
    let chosen = if loops.len() <= LOOP_SEARCH_LIMIT { best_subset(&g, &loops) } else { greedy(&g, &loops) };
    if chosen.is_empty() {
        return Err(Ineligible::NoValidLoopSet);
    }
    let mut chosen: Vec<TwoLoop> = chosen.into_iter().map(|k| loops[k]).collect();
    chosen.sort();
    let redundant: Vec<usize> = chosen.iter().map(|l| l.driver).collect();
    let essential: Vec<usize> = (0..net.dim()).filter(|v| !redundant.contains(v)).collect();
    Ok(DegreeReduction { q: essential.len(), loops: chosen, redundant, essential })
}

fn compatible(g: &UnderlyingNetwork, loops: &[TwoLoop], chosen: &[usize], next: usize) -> bool {
    let l = loops[next];
    let mut drivers: Vec<usize> = chosen.iter().map(|&k| loops[k].driver).collect();
    if drivers.contains(&l.driver) || chosen.iter().any(|&k| loops[k].end == l.driver || loops[k].driver == l.end) {
        return false;
    }
    if !chosen.iter().all(|&k| g.loops_disjoint(loops[k], l)) {
        return false;
    }
    drivers.push(l.driver);
    g.is_head_independent(&drivers).holds()
}

fn best_subset(g: &UnderlyingNetwork, loops: &[TwoLoop]) -> Vec<usize> {
    fn go(g: &UnderlyingNetwork, loops: &[TwoLoop], k: usize, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        if k == loops.len() || cur.len() + (loops.len() - k) <= best.len() {
            return;
        }
        if compatible(g, loops, cur, k) {
            cur.push(k);
            go(g, loops, k + 1, cur, best);
            cur.pop();
        }
        go(g, loops, k + 1, cur, best);
    }
    let mut best = Vec::new();
    go(g, loops, 0, &mut Vec::new(), &mut best);
    best
}

fn greedy(g: &UnderlyingNetwork, loops: &[TwoLoop]) -> Vec<usize> {
    let mut chosen = Vec::new();
    for k in 0..loops.len() {
        if compatible(g, loops, &chosen, k) {
            chosen.push(k);
        }
    }
    chosen
}
