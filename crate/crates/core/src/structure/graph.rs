use alloc::vec;
use alloc::vec::Vec;

use crate::model::{Network, NetworkSpec};

/// The digraph with an arrow `i → j` wherever `K[i][j] > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnderlyingNetwork {
    d: usize,
    arrows: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

/// Outcome of [`UnderlyingNetwork::is_head_independent`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeadIndependence {
    Holds,
    /// The arrow `tail → head` has both ends in the set.
    HeadInside { tail: usize, head: usize },
    /// Two tails in the set share `head`.
    SharedHead { first: usize, second: usize, head: usize },
}

impl HeadIndependence {
    pub fn holds(self) -> bool {
        self == HeadIndependence::Holds
    }
}

/// Maximal head-independent sets. `complete` is true when every maximal set
/// was enumerated; each listed set is maximal either way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalSets {
    pub sets: Vec<Vec<usize>>,
    pub complete: bool,
}

/// Largest dimension searched exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 20;

impl UnderlyingNetwork {
    pub fn from_spec(spec: &NetworkSpec) -> Self {
        let d = spec.dim();
        let arrows: Vec<(usize, usize)> =
            (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).filter(|&(i, j)| spec.k(i, j).is_positive()).collect();
        Self::from_arrows(d, arrows)
    }

    pub fn from_arrows(d: usize, mut arrows: Vec<(usize, usize)>) -> Self {
        arrows.sort_unstable();
        arrows.dedup();
        let mut out = vec![Vec::new(); d];
        let mut inn = vec![Vec::new(); d];
        for &(i, j) in &arrows {
            out[i].push(j);
            inn[j].push(i);
        }
        UnderlyingNetwork { d, arrows, out, inn }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Sorted by `(tail, head)`.
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn has_arrow(&self, i: usize, j: usize) -> bool {
        self.arrows.binary_search(&(i, j)).is_ok()
    }

    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    pub fn in_neighbors(&self, j: usize) -> &[usize] {
        &self.inn[j]
    }

    pub fn is_head_independent(&self, u: &[usize]) -> HeadIndependence {
        let mut inside = vec![false; self.d];
        for &i in u {
            inside[i] = true;
        }
        let mut owner: Vec<Option<usize>> = vec![None; self.d];
        let mut tails: Vec<usize> = u.to_vec();
        tails.sort_unstable();
        tails.dedup();
        for &i in &tails {
            for &j in &self.out[i] {
                if inside[j] {
                    return HeadIndependence::HeadInside { tail: i, head: j };
                }
                if let Some(first) = owner[j] {
                    return HeadIndependence::SharedHead { first, second: i, head: j };
                }
                owner[j] = Some(i);
            }
        }
        HeadIndependence::Holds
    }

    /// `conflict[i]` lists the vertices that cannot share a head-independent
    /// set with `i`; `None` when `i` has a self-arrow.
    fn conflicts(&self) -> Vec<Option<Vec<bool>>> {
        (0..self.d)
            .map(|i| {
                if self.has_arrow(i, i) {
                    return None;
                }
                let mut row = vec![false; self.d];
                for &j in &self.out[i] {
                    row[j] = true;
                    for &k in &self.inn[j] {
                        if k != i {
                            row[k] = true;
                        }
                    }
                }
                for &k in &self.inn[i] {
                    row[k] = true;
                }
                Some(row)
            })
            .collect()
    }

    /// All maximal head-independent sets for `d ≤ 20` (at most `cap` of
    /// them), otherwise one greedy maximal set per starting vertex.
    pub fn maximal_head_independent_sets(&self, cap: usize) -> MaximalSets {
        let conflicts = self.conflicts();
        let usable: Vec<usize> = (0..self.d).filter(|&i| conflicts[i].is_some()).collect();
        let clash = |i: usize, j: usize| conflicts[i].as_ref().is_some_and(|row| row[j]);
        if self.d <= EXHAUSTIVE_LIMIT {
            let mut search = Search { clash: &clash, cap, sets: Vec::new(), truncated: false };
            search.run(Vec::new(), usable, Vec::new());
            let mut sets = search.sets;
            sets.sort();
            return MaximalSets { sets, complete: !search.truncated };
        }
        let mut sets: Vec<Vec<usize>> = Vec::new();
        for start in 0..usable.len() {
            let mut set: Vec<usize> = Vec::new();
            for &v in usable[start..].iter().chain(&usable[..start]) {
                if set.iter().all(|&u| !clash(u, v)) {
                    set.push(v);
                }
            }
            set.sort_unstable();
            if !sets.contains(&set) {
                sets.push(set);
            }
            if sets.len() >= cap {
                break;
            }
        }
        sets.sort();
        MaximalSets { sets, complete: false }
    }

    /// `true` when no usable vertex can be added to `u`.
    pub fn is_maximal_head_independent(&self, u: &[usize]) -> bool {
        self.is_head_independent(u).holds()
            && (0..self.d).filter(|v| !u.contains(v)).all(|v| {
                let mut w = u.to_vec();
                w.push(v);
                !self.is_head_independent(&w).holds()
            })
    }
}

/// Bron–Kerbosch with pivoting over the non-conflict relation.
struct Search<'c, F: Fn(usize, usize) -> bool> {
    clash: &'c F,
    cap: usize,
    sets: Vec<Vec<usize>>,
    truncated: bool,
}

impl<F: Fn(usize, usize) -> bool> Search<'_, F> {
    fn compatible(&self, u: usize, v: usize) -> bool {
        u != v && !(self.clash)(u, v) && !(self.clash)(v, u)
    }

    fn run(&mut self, current: Vec<usize>, mut cand: Vec<usize>, mut excluded: Vec<usize>) {
        if self.truncated {
            return;
        }
        if cand.is_empty() && excluded.is_empty() {
            if self.sets.len() >= self.cap {
                self.truncated = true;
                return;
            }
            let mut set = current;
            set.sort_unstable();
            self.sets.push(set);
            return;
        }
        let pivot = *cand
            .iter()
            .chain(&excluded)
            .max_by_key(|&&p| cand.iter().filter(|&&v| self.compatible(p, v)).count())
            .expect("non-empty");
        let branch: Vec<usize> = cand.iter().copied().filter(|&v| !self.compatible(pivot, v)).collect();
        for v in branch {
            let mut next = current.clone();
            next.push(v);
            let c: Vec<usize> = cand.iter().copied().filter(|&w| self.compatible(v, w)).collect();
            let x: Vec<usize> = excluded.iter().copied().filter(|&w| self.compatible(v, w)).collect();
            self.run(next, c, x);
            cand.retain(|&w| w != v);
            excluded.push(v);
        }
    }
}

impl Network {
    pub fn underlying(&self) -> UnderlyingNetwork {
        UnderlyingNetwork::from_spec(self.spec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circuit(d: usize) -> UnderlyingNetwork {
        UnderlyingNetwork::from_arrows(d, (0..d).map(|i| (i, (i + 1) % d)).collect())
    }

    #[test]
    fn alternate_circuit_vertices_are_head_independent() {
        for d in 2..9 {
            let c = circuit(d);
            let evens: Vec<usize> = (1..=d / 2).map(|k| 2 * k - 1).collect();
            assert!(c.is_head_independent(&evens).holds(), "d = {d}");
        }
    }

    #[test]
    fn violations_name_the_arrows() {
        let c = circuit(4);
        assert_eq!(c.is_head_independent(&[0, 1]), HeadIndependence::HeadInside { tail: 0, head: 1 });
        let fan = UnderlyingNetwork::from_arrows(3, vec![(0, 2), (1, 2)]);
        assert_eq!(fan.is_head_independent(&[0, 1]), HeadIndependence::SharedHead { first: 0, second: 1, head: 2 });
    }

    #[test]
    fn self_arrow_vertex_is_never_head_independent() {
        let g = UnderlyingNetwork::from_arrows(1, vec![(0, 0)]);
        assert!(!g.is_head_independent(&[0]).holds());
        assert_eq!(g.maximal_head_independent_sets(16).sets, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn exhaustive_sets_are_maximal_and_complete() {
        let c = circuit(6);
        let found = c.maximal_head_independent_sets(1000);
        assert!(found.complete);
        for s in &found.sets {
            assert!(c.is_maximal_head_independent(s), "{s:?}");
        }
        // brute force over all subsets
        let all: Vec<Vec<usize>> = (0u32..64)
            .map(|m| (0..6).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| c.is_maximal_head_independent(s))
            .collect();
        let mut all = all;
        all.sort();
        assert_eq!(found.sets, all);
    }

    #[test]
    fn greedy_sets_are_maximal() {
        let c = circuit(25);
        let found = c.maximal_head_independent_sets(8);
        assert!(!found.complete);
        assert!(!found.sets.is_empty());
        for s in &found.sets {
            assert!(c.is_maximal_head_independent(s));
        }
    }
}
