//! Runtime assertions of the injectivity lemmas, evaluated on live
//! generations.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::engine::{AtomNode, Generation};
use crate::numerics::{FlaggedInterval, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InvariantKind {
    /// `C(t + 1) ≥ C(t)`.
    Monotone,
    /// Every atom has between 1 and `#P` successors.
    Branching,
    /// Distinct projections of `Q^t` onto one coordinate are disjoint.
    DisjointProjections,
    /// At most one `(J, f)` with `T ∈ f(J)` per arrow.
    UniqueThresholdHit,
    /// A child's `U`-projection determines its parent's.
    Predecessor,
    /// The degeneracy recursion inequality.
    Recurrence,
}

impl InvariantKind {
    pub fn name(self) -> &'static str {
        match self {
            InvariantKind::Monotone => "monotone",
            InvariantKind::Branching => "branching",
            InvariantKind::DisjointProjections => "disjoint-projections",
            InvariantKind::UniqueThresholdHit => "unique-threshold-hit",
            InvariantKind::Predecessor => "predecessor",
            InvariantKind::Recurrence => "recurrence",
        }
    }
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantViolation {
    pub t: usize,
    pub kind: InvariantKind,
    pub detail: String,
}

/// Which assertions ran and what they found.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvariantLog {
    /// `(kind, number of evaluations)`.
    pub evaluated: BTreeMap<InvariantKind, usize>,
    pub violations: Vec<InvariantViolation>,
    /// Assertions that did not apply to this run, with the reason.
    pub skipped: Vec<String>,
}

impl InvariantLog {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: InvariantKind) -> usize {
        self.evaluated.get(&kind).copied().unwrap_or(0)
    }

    pub(crate) fn record(&mut self, kind: InvariantKind) {
        *self.evaluated.entry(kind).or_insert(0) += 1;
    }

    pub(crate) fn fail(&mut self, t: usize, kind: InvariantKind, detail: String) {
        self.violations.push(InvariantViolation { t, kind, detail });
    }
}

/// Sorted distinct projections of a generation onto each coordinate.
pub(crate) fn projections<S: Scalar>(gen: &Generation<S>) -> Vec<Vec<&FlaggedInterval<S>>> {
    let d = gen.nodes.first().map_or(0, |n| n.rect.dim());
    (0..d)
        .map(|i| {
            let mut v: Vec<&FlaggedInterval<S>> = gen.nodes.iter().map(|n| n.rect.side(i)).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect()
}

pub(crate) fn check_disjoint<S: Scalar>(t: usize, proj: &[Vec<&FlaggedInterval<S>>], log: &mut InvariantLog) {
    log.record(InvariantKind::DisjointProjections);
    for (i, list) in proj.iter().enumerate() {
        // sorted by lower end; compare each interval with the one reaching
        // furthest so far
        let mut reach: Option<&FlaggedInterval<S>> = None;
        for &iv in list {
            if let Some(r) = reach {
                if r.intersects(iv) {
                    log.fail(t, InvariantKind::DisjointProjections, format!("coordinate {}: {r} meets {iv}", i + 1));
                    return;
                }
                if (iv.hi(), iv.hi_closed()) > (r.hi(), r.hi_closed()) {
                    reach = Some(iv);
                }
            } else {
                reach = Some(iv);
            }
        }
    }
}

/// An arrow `i → j` with its threshold in scalar form.
#[derive(Debug, Clone)]
pub(crate) struct ArrowThreshold<S> {
    pub tail: usize,
    pub head: usize,
    pub threshold: S,
}

/// For each arrow, the unique `J ∈ Q_i^t` with `T ∈ f(J)` for some branch
/// `f` of coordinate `i`, if any. `branches[i]` lists the intercepts of
/// coordinate `i` for this step.
pub(crate) fn threshold_hits<'g, S: Scalar>(
    t: usize,
    a: &S,
    proj: &[Vec<&'g FlaggedInterval<S>>],
    arrows: &[ArrowThreshold<S>],
    branches: &[Vec<S>],
    log: &mut InvariantLog,
) -> Vec<Option<&'g FlaggedInterval<S>>> {
    log.record(InvariantKind::UniqueThresholdHit);
    let mut out = Vec::with_capacity(arrows.len());
    for arrow in arrows {
        let list = &proj[arrow.tail];
        let mut found: Option<&FlaggedInterval<S>> = None;
        let mut hits = 0usize;
        for b in &branches[arrow.tail] {
            let start = list.partition_point(|j| j.hi().affine(a, b) < arrow.threshold);
            for &j in &list[start..] {
                let img = j.map_affine(a, b);
                if *img.lo() > arrow.threshold {
                    break;
                }
                if img.contains(&arrow.threshold) {
                    hits += 1;
                    found = Some(j);
                }
            }
        }
        if hits > 1 {
            log.fail(
                t,
                InvariantKind::UniqueThresholdHit,
                format!("arrow {} -> {}: threshold {} hit {hits} times", arrow.tail + 1, arrow.head + 1, arrow.threshold),
            );
        }
        out.push(found);
    }
    out
}

fn key<'g, S: Scalar>(node: &'g AtomNode<S>, coords: &[usize]) -> Vec<&'g FlaggedInterval<S>> {
    coords.iter().map(|&i| node.rect.side(i)).collect()
}

/// Predecessor-lemma and recursion spot checks on one step.
pub(crate) fn check_specifications<S: Scalar>(
    t: usize,
    c: usize,
    parents: &Generation<S>,
    children: &[AtomNode<S>],
    subsets: &[Vec<usize>],
    arrows: &[ArrowThreshold<S>],
    hits: &[Option<&FlaggedInterval<S>>],
    log: &mut InvariantLog,
) {
    for u in subsets {
        log.record(InvariantKind::Predecessor);
        log.record(InvariantKind::Recurrence);
        let mut parent_groups: BTreeMap<Vec<&FlaggedInterval<S>>, Vec<usize>> = BTreeMap::new();
        for (k, node) in parents.nodes.iter().enumerate() {
            parent_groups.entry(key(node, u)).or_default().push(k);
        }
        let mut child_specs: BTreeMap<Vec<&FlaggedInterval<S>>, (Vec<&FlaggedInterval<S>>, usize)> = BTreeMap::new();
        let mut broken = false;
        for child in children {
            let parent_key = key(&parents.nodes[child.parent as usize], u);
            let entry = child_specs.entry(key(child, u)).or_insert_with(|| (parent_key.clone(), 0));
            if entry.0 != parent_key && !broken {
                broken = true;
                log.fail(t + 1, InvariantKind::Predecessor, format!("U = {}: specification has two parent specifications", show(u)));
            }
            entry.1 += 1;
        }
        if broken {
            continue;
        }
        for (ps, n) in child_specs.values() {
            let group = &parent_groups[ps];
            let mut extra = 0usize;
            for (arrow, hit) in arrows.iter().zip(hits) {
                if u.contains(&arrow.tail) {
                    continue;
                }
                if let Some(j) = hit {
                    extra += group.iter().filter(|&&k| parents.nodes[k].rect.side(arrow.tail) == *j).count();
                }
            }
            let bound = group.len() + c * extra;
            if *n > bound {
                log.fail(t + 1, InvariantKind::Recurrence, format!("U = {}: N(S) = {n} exceeds {bound}", show(u)));
                break;
            }
        }
    }
}

fn show(u: &[usize]) -> String {
    let parts: Vec<String> = u.iter().map(|i| format!("{}", i + 1)).collect();
    format!("{{{}}}", parts.join(","))
}

/// Coordinate subsets used by the specification spot checks: all nonempty
/// proper subsets for `d ≤ 4`, otherwise singletons and their complements.
pub fn sample_subsets(d: usize) -> Vec<Vec<usize>> {
    if d <= 4 {
        (1..(1usize << d) - 1).map(|m| (0..d).filter(|i| m >> i & 1 == 1).collect()).collect()
    } else {
        let mut out = Vec::new();
        for i in 0..d {
            out.push(alloc::vec![i]);
            out.push((0..d).filter(|&k| k != i).collect());
        }
        out
    }
}
