//! Structured TOML reports.

use regnet_core::attractor::{AttractorReport, OrbitStatus, RotationEstimate};
use regnet_core::model::InjectivityReport;
use regnet_core::partition::Truncation;
use regnet_core::structure::{BoundCheck, BoundPolynomial, DynamicValidation, Reason, StructureReport};
use regnet_core::{ComplexityTrace, Rational, Scalar};
use serde::Serialize;

fn set_names(set: &[usize], units: &[String]) -> Vec<String> {
    set.iter().map(|&i| units[i].clone()).collect()
}

fn opt_string<T: ToString>(v: Option<&T>) -> Option<String> {
    v.map(ToString::to_string)
}

#[derive(Debug, Serialize)]
pub struct InjectivitySection {
    pub delta: Option<String>,
    pub a0: String,
    pub a: String,
    pub injective_at_a: bool,
    pub overlapping_pairs: usize,
}

impl From<&InjectivityReport> for InjectivitySection {
    fn from(r: &InjectivityReport) -> Self {
        InjectivitySection {
            delta: opt_string(r.delta.as_ref()),
            a0: r.a0.to_string(),
            a: r.a.to_string(),
            injective_at_a: r.injective_at_a,
            overlapping_pairs: r.witnesses.len(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ValidationReport {
    pub network: String,
    pub d: usize,
    pub mode: String,
    pub valid: bool,
    pub violations: Vec<String>,
    pub base_atoms: Option<usize>,
    pub non_degenerate: Option<bool>,
    pub injectivity: Option<InjectivitySection>,
}

#[derive(Debug, Serialize)]
pub struct BoundSummary {
    pub kind: String,
    pub formula: String,
    pub applicable: bool,
    pub valid_from: usize,
    pub compared: usize,
    pub holds: bool,
    pub first_violation_t: Option<usize>,
    pub constants: Vec<(String, String)>,
}

impl BoundSummary {
    pub fn new(bound: &BoundPolynomial, check: &BoundCheck) -> Self {
        BoundSummary {
            kind: bound.kind.name().into(),
            formula: bound.to_string(),
            applicable: bound.applicable,
            valid_from: bound.valid_from,
            compared: check.compared(),
            holds: check.holds(),
            first_violation_t: check.first_violation.as_ref().map(|r| r.t),
            constants: bound.constants.iter().map(|(n, v)| (n.clone(), v.to_string())).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ViolationEntry {
    pub t: usize,
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct TraceReport {
    pub network: String,
    pub engine: String,
    pub numeric: String,
    pub horizon: usize,
    pub final_complexity: usize,
    pub truncation: Option<String>,
    pub certified: bool,
    pub base_atoms: usize,
    pub growth_rate: Option<f64>,
    pub invariants_evaluated: Vec<(String, usize)>,
    pub invariant_violations: Vec<ViolationEntry>,
    pub skipped_checks: Vec<String>,
    pub warnings: Vec<String>,
    pub injectivity: Option<InjectivitySection>,
    pub bounds: Vec<BoundSummary>,
}

pub fn truncation_text(t: &Truncation) -> String {
    match t {
        Truncation::AtomCap { t, cap } => format!("atom cap {cap} exceeded at t = {t}"),
        Truncation::TimeCap { t, micros } => format!("time cap reached after t = {t} ({micros} µs)"),
    }
}

impl TraceReport {
    pub fn new<S: Scalar>(network: &str, numeric: &str, trace: &ComplexityTrace<S>, bounds: Vec<BoundSummary>) -> Self {
        let complexities = trace.complexities();
        TraceReport {
            network: network.into(),
            engine: trace.mode.name().into(),
            numeric: numeric.into(),
            horizon: trace.horizon(),
            final_complexity: complexities.last().copied().unwrap_or(0),
            truncation: trace.truncation.as_ref().map(truncation_text),
            certified: trace.certified,
            base_atoms: trace.base_size,
            growth_rate: regnet_core::structure::growth_rate(&complexities),
            invariants_evaluated: trace.invariants.evaluated.iter().map(|(k, n)| (k.name().into(), *n)).collect(),
            invariant_violations: trace
                .invariants
                .violations
                .iter()
                .map(|v| ViolationEntry { t: v.t, kind: v.kind.name().into(), detail: v.detail.clone() })
                .collect(),
            skipped_checks: trace.invariants.skipped.clone(),
            warnings: trace.warnings.clone(),
            injectivity: trace.injectivity.as_ref().map(InjectivitySection::from),
            bounds,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CertifiedEntry {
    pub set: Vec<String>,
    pub reason: String,
}

#[derive(Debug, Serialize)]
pub struct LoopEntry {
    pub driver: String,
    pub end: String,
}

#[derive(Debug, Serialize)]
pub struct SplitEntry {
    pub base: Vec<String>,
    pub bundle: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct DegreeSection {
    pub certified: bool,
    pub q: Option<usize>,
    pub redundant: Vec<String>,
    pub essential: Vec<String>,
    pub reason: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct DynamicSection {
    pub horizon: usize,
    pub holds: bool,
    /// `(set, measured max degeneracy, bound)`.
    pub essential: Vec<(Vec<String>, usize, usize)>,
    /// `(driver, end, measured max multiplicity, bound)`.
    pub driving: Vec<(String, String, usize, usize)>,
}

#[derive(Debug, Serialize)]
pub struct StructureSection {
    pub network: String,
    pub units: Vec<String>,
    pub arrows: Vec<(String, String)>,
    pub injective: bool,
    pub head_independent_sets: Vec<Vec<String>>,
    pub head_independent_complete: bool,
    pub two_loops: Vec<LoopEntry>,
    pub loop_disjointness: Vec<Vec<bool>>,
    pub base_bundle_splits: Vec<SplitEntry>,
    pub splits_complete: bool,
    pub redundant_certified: Vec<CertifiedEntry>,
    pub essential_certified: Vec<CertifiedEntry>,
    pub degree_reduction: DegreeSection,
    pub dynamic: Option<DynamicSection>,
}

impl StructureSection {
    pub fn new(network: &str, units: &[String], r: &StructureReport, dynamic: Option<&DynamicValidation>) -> Self {
        let names = |s: &[usize]| set_names(s, units);
        let certified = |list: &[regnet_core::structure::Certified]| -> Vec<CertifiedEntry> {
            list.iter()
                .map(|c| CertifiedEntry {
                    set: names(&c.set),
                    reason: match &c.reason {
                        Reason::ComplementOf(u) => format!("complement of head-independent {{{}}}", names(u).join(", ")),
                        Reason::DrivesIsolatedEnds(ls) => format!(
                            "drives isolated end(s) {}",
                            ls.iter().map(|l| units[l.end].clone()).collect::<Vec<_>>().join(", ")
                        ),
                    },
                })
                .collect()
        };
        StructureSection {
            network: network.into(),
            units: units.to_vec(),
            arrows: r.underlying.arrows().iter().map(|&(i, j)| (units[i].clone(), units[j].clone())).collect(),
            injective: r.injective,
            head_independent_sets: r.head_independent.sets.iter().map(|s| names(s)).collect(),
            head_independent_complete: r.head_independent.complete,
            two_loops: r
                .two_loops
                .iter()
                .map(|l| LoopEntry { driver: units[l.driver].clone(), end: units[l.end].clone() })
                .collect(),
            loop_disjointness: r.loop_disjointness.clone(),
            base_bundle_splits: r
                .base_bundle
                .iter()
                .map(|s| SplitEntry { base: names(&s.base), bundle: names(&s.bundle) })
                .collect(),
            splits_complete: r.splits_complete,
            redundant_certified: certified(&r.redundant_certified),
            essential_certified: certified(&r.essential_certified),
            degree_reduction: match &r.degree_reduction {
                Ok(d) => DegreeSection {
                    certified: true,
                    q: Some(d.q),
                    redundant: names(&d.redundant),
                    essential: names(&d.essential),
                    reason: None,
                },
                Err(e) => DegreeSection {
                    certified: false,
                    q: None,
                    redundant: Vec::new(),
                    essential: Vec::new(),
                    reason: Some(e.to_string()),
                },
            },
            dynamic: dynamic.map(|v| DynamicSection {
                horizon: v.horizon,
                holds: v.holds(),
                essential: v.essential.iter().map(|e| (names(&e.set), e.max_degeneracy, e.bound)).collect(),
                driving: v
                    .driving
                    .iter()
                    .map(|d| {
                        (units[d.two_loop.driver].clone(), units[d.two_loop.end].clone(), d.max_multiplicity, d.bound)
                    })
                    .collect(),
            }),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CycleEntry {
    pub period: usize,
    pub status: String,
    /// Exact periodic points, one `p/q` string per coordinate.
    pub points: Vec<Vec<String>>,
    pub word: Vec<u32>,
    pub slope: String,
    pub intercept: Vec<String>,
    pub distance_to_discontinuity: Option<String>,
    /// Atoms of `P^τ` whose successor orbit ends in this cycle.
    pub basin: usize,
}

#[derive(Debug, Serialize)]
pub struct AttractorSection {
    pub network: String,
    pub horizon: usize,
    pub truncated: bool,
    pub stabilization: Option<usize>,
    pub complexity_at_stabilization: Option<usize>,
    pub max_transient: Option<usize>,
    pub cycles: Vec<CycleEntry>,
    pub orbit_distance: Option<String>,
    pub cycle_atom_distance: Option<String>,
}

fn status_name(s: OrbitStatus) -> &'static str {
    match s {
        OrbitStatus::Verified => "verified",
        OrbitStatus::OnDiscontinuity => "on-discontinuity",
        OrbitStatus::Ghost => "ghost",
    }
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

impl AttractorSection {
    pub fn new(network: &str, r: &AttractorReport) -> Self {
        let basin = |cycle: usize| {
            r.successor.as_ref().map_or(0, |s| s.cycle_of.iter().filter(|&&c| c == cycle).count())
        };
        AttractorSection {
            network: network.into(),
            horizon: r.horizon,
            truncated: r.truncated,
            stabilization: r.stabilization,
            complexity_at_stabilization: r.stable_complexity(),
            max_transient: r.successor.as_ref().map(|s| s.max_transient()),
            cycles: r
                .orbits
                .iter()
                .enumerate()
                .map(|(n, o)| CycleEntry {
                    period: o.period,
                    status: status_name(o.status).into(),
                    points: o.points.iter().map(|p| strings(p)).collect(),
                    word: o.word.clone(),
                    slope: o.slope.to_string(),
                    intercept: strings(&o.intercept),
                    distance_to_discontinuity: opt_string(o.distance.as_ref()),
                    basin: basin(n),
                })
                .collect(),
            orbit_distance: opt_string(r.orbit_distance.as_ref()),
            cycle_atom_distance: opt_string(r.cycle_atom_distance.as_ref()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RotationSection {
    pub network: String,
    pub x0: String,
    pub t_max: usize,
    pub estimate: String,
    pub estimate_decimal: f64,
    pub resolution: String,
    pub exact: Option<String>,
}

impl RotationSection {
    pub fn new(network: &str, x0: &Rational, r: &RotationEstimate) -> Self {
        RotationSection {
            network: network.into(),
            x0: x0.to_string(),
            t_max: r.t_max,
            estimate: r.estimate.to_string(),
            estimate_decimal: r.estimate.to_f64(),
            resolution: format!("1/{}", r.t_max.max(1)),
            exact: opt_string(r.exact.as_ref()),
        }
    }
}

pub fn to_toml<T: Serialize>(value: &T) -> String {
    toml::to_string(value).expect("report serializes")
}
