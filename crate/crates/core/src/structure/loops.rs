use alloc::vec;
use alloc::vec::Vec;

use super::UnderlyingNetwork;

/// A 2-loop `driver ⇄ end` whose end has no other in- or out-arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoLoop {
    pub driver: usize,
    /// The isolated end.
    pub end: usize,
}

impl UnderlyingNetwork {
    /// Every 2-loop, ordered by `(driver, end)`. A pair can appear twice,
    /// once per isolated end.
    pub fn two_loops(&self) -> Vec<TwoLoop> {
        let mut out = Vec::new();
        for &(i, j) in self.arrows() {
            if i != j && self.in_neighbors(j) == [i] && self.out_neighbors(j) == [i] && self.has_arrow(j, i) {
                out.push(TwoLoop { driver: i, end: j });
            }
        }
        out
    }

    /// Two 2-loops are disjoint when their drivers have no common head.
    pub fn loops_disjoint(&self, first: TwoLoop, second: TwoLoop) -> bool {
        let a = self.out_neighbors(first.driver);
        self.out_neighbors(second.driver).iter().all(|h| !a.contains(h))
    }

    /// `m[k][l]` is whether loops `k` and `l` are disjoint.
    pub fn loop_disjointness(&self, loops: &[TwoLoop]) -> Vec<Vec<bool>> {
        loops.iter().map(|&x| loops.iter().map(|&y| x != y && self.loops_disjoint(x, y)).collect()).collect()
    }

    /// Strongly connected components in topological order: no arrow runs
    /// from a later component to an earlier one. Each component is sorted.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let d = self.dim();
        let mut index = vec![usize::MAX; d];
        let mut low = vec![0usize; d];
        let mut on_stack = vec![false; d];
        let mut stack = Vec::new();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut next = 0usize;
        // iterative Tarjan; frames are (vertex, next out-neighbor position)
        for root in 0..d {
            if index[root] != usize::MAX {
                continue;
            }
            let mut frames = vec![(root, 0usize)];
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
                if let Some(&w) = self.out_neighbors(v).get(*pos) {
                    *pos += 1;
                    if index[w] == usize::MAX {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        frames.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
        // Tarjan emits sinks first
        comps.reverse();
        comps
    }

    /// Lazily enumerates the nontrivial base–bundle splits.
    pub fn base_bundle_splits(&self) -> BaseBundleSplits {
        let comps = self.strongly_connected_components();
        let mut comp_of = vec![0usize; self.dim()];
        for (c, members) in comps.iter().enumerate() {
            for &v in members {
                comp_of[v] = c;
            }
        }
        let mut preds = vec![Vec::new(); comps.len()];
        for &(i, j) in self.arrows() {
            let (ci, cj) = (comp_of[i], comp_of[j]);
            if ci != cj && !preds[cj].contains(&ci) {
                preds[cj].push(ci);
            }
        }
        let n = comps.len();
        BaseBundleSplits { comps, preds, stack: vec![(0, vec![false; n])] }
    }

    /// `true` when no arrow runs from `bundle` into `base` and the two sets
    /// partition the vertices.
    pub fn is_base_bundle(&self, base: &[usize], bundle: &[usize]) -> bool {
        let mut seen = vec![0u8; self.dim()];
        for &v in base {
            seen[v] += 1;
        }
        for &v in bundle {
            seen[v] += 2;
        }
        seen.iter().all(|&s| s == 1 || s == 2) && self.arrows().iter().all(|&(i, j)| !(seen[i] == 2 && seen[j] == 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BaseBundle {
    pub base: Vec<usize>,
    pub bundle: Vec<usize>,
}

/// Iterator over predecessor-closed unions of strongly connected
/// components, excluding the empty set and the whole vertex set.
#[derive(Debug, Clone)]
pub struct BaseBundleSplits {
    comps: Vec<Vec<usize>>,
    preds: Vec<Vec<usize>>,
    stack: Vec<(usize, Vec<bool>)>,
}

impl Iterator for BaseBundleSplits {
    type Item = BaseBundle;

    fn next(&mut self) -> Option<BaseBundle> {
        let n = self.comps.len();
        while let Some((k, chosen)) = self.stack.pop() {
            if k == n {
                let count = chosen.iter().filter(|&&c| c).count();
                if count == 0 || count == n {
                    continue;
                }
                let mut base = Vec::new();
                let mut bundle = Vec::new();
                for (c, members) in self.comps.iter().enumerate() {
                    (if chosen[c] { &mut base } else { &mut bundle }).extend_from_slice(members);
                }
                base.sort_unstable();
                bundle.sort_unstable();
                return Some(BaseBundle { base, bundle });
            }
            // push "exclude" first so that "include" is explored first
            self.stack.push((k + 1, chosen.clone()));
            if self.preds[k].iter().all(|&p| chosen[p]) {
                let mut with = chosen;
                with[k] = true;
                self.stack.push((k + 1, with));
            }
        }
        None
    }
}
