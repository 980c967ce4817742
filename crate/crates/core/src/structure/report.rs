use alloc::vec::Vec;

use super::{
    certify_degree_reduction, BaseBundle, DegreeReduction, Ineligible, MaximalSets, TwoLoop, UnderlyingNetwork,
};
use crate::model::{Mode, ModelError, Network, OffsetSequence};
use crate::numerics::Rational;
use crate::partition::{
    complexity_trace, max_degeneracy, projection_multiplicity, sequence_trace, BasePartition, TraceConfig, TraceError,
};

/// Why a set was certified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    /// Complement of this head-independent set.
    ComplementOf(Vec<usize>),
    /// Each vertex drives the isolated end of its 2-loop.
    DrivesIsolatedEnds(Vec<TwoLoop>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certified {
    pub set: Vec<usize>,
    pub reason: Reason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub underlying: UnderlyingNetwork,
    pub injective: bool,
    pub head_independent: MaximalSets,
    pub two_loops: Vec<TwoLoop>,
    /// `loop_disjointness[k][l]` for `two_loops[k]`, `two_loops[l]`.
    pub loop_disjointness: Vec<Vec<bool>>,
    pub base_bundle: Vec<BaseBundle>,
    /// False when the split list hit its cap.
    pub splits_complete: bool,
    pub redundant_certified: Vec<Certified>,
    pub essential_certified: Vec<Certified>,
    pub degree_reduction: Result<DegreeReduction, Ineligible>,
}

impl StructureReport {
    /// Size of the certified essential set used for degree reduction.
    pub fn q(&self) -> Option<usize> {
        self.degree_reduction.as_ref().ok().map(|r| r.q)
    }
}

/// Caps on the enumerations in a [`StructureReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructureLimits {
    pub max_sets: usize,
    pub max_splits: usize,
    pub indegree_cap: usize,
}

impl Default for StructureLimits {
    fn default() -> Self {
        StructureLimits { max_sets: 4096, max_splits: 4096, indegree_cap: crate::model::DEFAULT_INDEGREE_CAP }
    }
}

pub fn structure_report(net: &Network, limits: StructureLimits) -> Result<StructureReport, ModelError> {
    let g = net.underlying();
    let injective = net.injectivity_analysis(limits.indegree_cap)?.injective_at_a;
    let head_independent = g.maximal_head_independent_sets(limits.max_sets);
    let two_loops = g.two_loops();
    let loop_disjointness = g.loop_disjointness(&two_loops);
    let mut splits = g.base_bundle_splits();
    let base_bundle: Vec<BaseBundle> = splits.by_ref().take(limits.max_splits).collect();
    let splits_complete = splits.next().is_none();

    let essential_certified = if injective {
        head_independent
            .sets
            .iter()
            .filter(|u| !u.is_empty())
            .map(|u| Certified {
                set: (0..net.dim()).filter(|v| !u.contains(v)).collect(),
                reason: Reason::ComplementOf(u.clone()),
            })
            .collect()
    } else {
        Vec::new()
    };
    let degree_reduction = certify_degree_reduction(net, limits.indegree_cap);
    let mut redundant_certified = Vec::new();
    let loops_drive = injective && net.non_degenerate(limits.indegree_cap)?.holds();
    if loops_drive {
        for l in &two_loops {
            redundant_certified.push(Certified { set: alloc::vec![l.driver], reason: Reason::DrivesIsolatedEnds(alloc::vec![*l]) });
        }
    }
    if let Ok(r) = &degree_reduction {
        if r.redundant.len() > 1 {
            redundant_certified
                .push(Certified { set: r.redundant.clone(), reason: Reason::DrivesIsolatedEnds(r.loops.clone()) });
        }
    }
    Ok(StructureReport {
        underlying: g,
        injective,
        head_independent,
        two_loops,
        loop_disjointness,
        base_bundle,
        splits_complete,
        redundant_certified,
        essential_certified,
        degree_reduction,
    })
}

/// Largest measured degeneracy of a certified essential set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssentialCheck {
    pub set: Vec<usize>,
    pub max_degeneracy: usize,
    pub bound: usize,
}

/// Largest measured `#C_end(J)` over `J` in the driver's projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrivingCheck {
    pub two_loop: TwoLoop,
    pub max_multiplicity: usize,
    pub bound: usize,
}

/// Finite-horizon measurements behind the certificates: they confirm the
/// uniform bounds up to `horizon` only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicValidation {
    pub horizon: usize,
    pub essential: Vec<EssentialCheck>,
    pub driving: Vec<DrivingCheck>,
}

impl DynamicValidation {
    pub fn holds(&self) -> bool {
        self.essential.iter().all(|e| e.max_degeneracy <= e.bound)
            && self.driving.iter().all(|d| d.max_multiplicity <= d.bound)
    }
}

pub fn validate_dynamically(
    net: &Network,
    report: &StructureReport,
    config: &TraceConfig,
) -> Result<DynamicValidation, TraceError> {
    let trace = complexity_trace(net, &config.clone().keep_history(true))?;
    let base = BasePartition::build(net);
    let essential = report
        .essential_certified
        .iter()
        .map(|c| EssentialCheck {
            set: c.set.clone(),
            max_degeneracy: trace.history.iter().map(|g| max_degeneracy(g, &c.set)).max().unwrap_or(0),
            bound: base.len(),
        })
        .collect();
    let mut loops: Vec<TwoLoop> = Vec::new();
    for c in &report.redundant_certified {
        if let Reason::DrivesIsolatedEnds(ls) = &c.reason {
            for l in ls {
                if !loops.contains(l) {
                    loops.push(*l);
                }
            }
        }
    }
    let driving = loops
        .into_iter()
        .map(|l| DrivingCheck {
            two_loop: l,
            max_multiplicity: trace.history.iter().map(|g| projection_multiplicity(g, l.driver, l.end)).max().unwrap_or(0),
            bound: base.coordinate(l.end).len(),
        })
        .collect();
    Ok(DynamicValidation { horizon: trace.horizon(), essential, driving })
}

/// The bundle as a driven network, with room `1 − Σ K` left in each column
/// for offsets.
pub fn bundle_network(net: &Network, split: &BaseBundle) -> Result<Network, ModelError> {
    Network::new(net.spec().restrict(&split.bundle, Mode::Sequence)?)
}

/// Largest admissible offset per bundle coordinate.
pub fn bundle_offset_room(bundle: &Network) -> Vec<Rational> {
    (0..bundle.dim()).map(|j| &Rational::one() - &bundle.spec().column_sum(j)).collect()
}

/// Pointwise maximum of `C_D(t)` over the given offset sequences; an
/// empirical lower estimate of the bundle complexity.
pub fn sample_bundle_complexity(
    bundle: &Network,
    sequences: &[OffsetSequence],
    config: &TraceConfig,
) -> Result<Vec<usize>, TraceError> {
    let mut best: Vec<usize> = Vec::new();
    for seq in sequences {
        let trace = sequence_trace(bundle, seq, config)?;
        for (k, c) in trace.complexities().into_iter().enumerate() {
            match best.get_mut(k) {
                Some(b) => *b = (*b).max(c),
                None => best.push(c),
            }
        }
    }
    Ok(best)
}
