use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::checks::{self, ArrowThreshold, InvariantKind, InvariantLog};
use super::engine::{Engine, Generation};
use super::{BasePartition, Representation};
use crate::model::{InjectivityReport, ModelError, Network, OffsetSequence, Violation, DEFAULT_INDEGREE_CAP};
use crate::numerics::{Rational, ScaledInt, Scalar, F64};

/// How complexity is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EngineMode {
    /// Tracks the itinerary of every atom. Valid for any `a`.
    ItineraryExact,
    /// Counts live rects only; refused unless the network is coordinatewise
    /// injective.
    InjectiveFast,
}

impl EngineMode {
    pub fn name(self) -> &'static str {
        match self {
            EngineMode::ItineraryExact => "itinerary-exact",
            EngineMode::InjectiveFast => "injective-fast",
        }
    }
}

/// How much per-step verification to do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckLevel {
    Off,
    /// Monotonicity and branching.
    Basic,
    /// Also projection disjointness and unique threshold hits, when the
    /// network is injective.
    Lemmas,
    /// Also predecessor and recursion spot checks on sampled coordinate sets.
    Full,
}

/// Elapsed-time source. `None` disables timing and time caps.
pub trait Clock {
    fn micros(&self) -> Option<u64>;
}

/// A clock that never reports time.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn micros(&self) -> Option<u64> {
        None
    }
}

#[cfg(feature = "std")]
#[derive(Debug, Clone, Copy)]
pub struct StdClock(std::time::Instant);

#[cfg(feature = "std")]
impl StdClock {
    pub fn start() -> Self {
        StdClock(std::time::Instant::now())
    }
}

#[cfg(feature = "std")]
impl Clock for StdClock {
    fn micros(&self) -> Option<u64> {
        Some(self.0.elapsed().as_micros() as u64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceConfig {
    pub t_max: usize,
    pub mode: EngineMode,
    pub max_atoms: usize,
    pub max_micros: Option<u64>,
    pub checks: CheckLevel,
    /// Keep every generation, not only the last.
    pub keep_history: bool,
    /// Float-mode distance below which an endpoint counts as on a cut.
    pub epsilon: f64,
    pub indegree_cap: usize,
    /// End the trace at the first `t` with `C(t) = C(t − 1)`.
    pub stop_at_stabilization: bool,
}

impl TraceConfig {
    pub fn new(t_max: usize) -> Self {
        TraceConfig {
            t_max,
            mode: EngineMode::ItineraryExact,
            max_atoms: 1_000_000,
            max_micros: None,
            checks: CheckLevel::Lemmas,
            keep_history: false,
            epsilon: 1e-12,
            indegree_cap: DEFAULT_INDEGREE_CAP,
            stop_at_stabilization: false,
        }
    }

    pub fn mode(mut self, mode: EngineMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn checks(mut self, level: CheckLevel) -> Self {
        self.checks = level;
        self
    }

    pub fn max_atoms(mut self, cap: usize) -> Self {
        self.max_atoms = cap;
        self
    }

    pub fn max_micros(mut self, cap: u64) -> Self {
        self.max_micros = Some(cap);
        self
    }

    pub fn keep_history(mut self, keep: bool) -> Self {
        self.keep_history = keep;
        self
    }

    pub fn epsilon(mut self, eps: f64) -> Self {
        self.epsilon = eps;
        self
    }

    pub fn stop_at_stabilization(mut self, stop: bool) -> Self {
        self.stop_at_stabilization = stop;
        self
    }
}

/// One row of a trace. `branching_atoms` and `max_branch` describe the step
/// that produced generation `t` and are zero at `t = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepRecord {
    pub t: usize,
    pub complexity: usize,
    pub branching_atoms: usize,
    pub max_branch: usize,
    pub micros: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Generation `t` would have exceeded `cap` atoms.
    AtomCap { t: usize, cap: usize },
    /// The time cap was reached after generation `t`.
    TimeCap { t: usize, micros: u64 },
}

/// `(parent, base atom)` of every node of every generation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lineage {
    generations: Vec<Vec<(u32, u32)>>,
}

impl Lineage {
    pub fn horizon(&self) -> usize {
        self.generations.len()
    }

    pub fn len(&self, t: usize) -> usize {
        self.generations[t - 1].len()
    }

    pub fn is_empty(&self) -> bool {
        self.generations.is_empty()
    }

    pub fn parent(&self, t: usize, k: usize) -> Option<usize> {
        (t > 1).then(|| self.generations[t - 1][k].0 as usize)
    }

    pub fn atom(&self, t: usize, k: usize) -> u32 {
        self.generations[t - 1][k].1
    }

    /// Base-atom word `w_0 … w_{t−1}` of node `k` of generation `t`.
    pub fn itinerary(&self, t: usize, k: usize) -> Vec<u32> {
        let mut word = Vec::with_capacity(t);
        let mut k = k;
        for g in (1..=t).rev() {
            let (p, a) = self.generations[g - 1][k];
            word.push(a);
            k = p as usize;
        }
        word.reverse();
        word
    }
}

#[derive(Debug, Clone)]
pub struct ComplexityTrace<S: Scalar = Rational> {
    pub mode: EngineMode,
    pub steps: Vec<StepRecord>,
    pub truncation: Option<Truncation>,
    pub invariants: InvariantLog,
    /// Exact arithmetic, no warnings and no invariant violations.
    pub certified: bool,
    pub warnings: Vec<String>,
    /// `#P`.
    pub base_size: usize,
    pub injectivity: Option<InjectivityReport>,
    pub final_generation: Generation<S>,
    /// Present in itinerary-exact mode.
    pub lineage: Option<Lineage>,
    /// Every generation, when requested.
    pub history: Vec<Generation<S>>,
}

impl<S: Scalar> ComplexityTrace<S> {
    /// Largest `t` computed.
    pub fn horizon(&self) -> usize {
        self.steps.len()
    }

    pub fn complexity(&self, t: usize) -> Option<usize> {
        t.checked_sub(1).and_then(|k| self.steps.get(k)).map(|s| s.complexity)
    }

    /// `C(1), C(2), …`.
    pub fn complexities(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.complexity).collect()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncation.is_some()
    }

    pub fn injective(&self) -> bool {
        self.injectivity.as_ref().is_some_and(|r| r.injective_at_a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("injective-fast mode refused: {} overlapping branch pair(s), first on coordinate {}", .0.witnesses.len(), .0.witnesses.first().map_or(0, |w| w.column + 1))]
    NotInjective(Box<InjectivityReport>),
    #[error("invalid offsets: {}", .0.iter().map(|v| v.message.as_str()).collect::<Vec<_>>().join("; "))]
    Offsets(Vec<Violation>),
    #[error("t_max must be at least 1")]
    EmptyHorizon,
}

/// Complexity trace of an autonomous network in exact arithmetic.
pub fn complexity_trace(net: &Network, config: &TraceConfig) -> Result<ComplexityTrace, TraceError> {
    run_trace::<ScaledInt>(net, None, config, &default_clock())
}

/// Complexity trace of a network driven by external offsets.
pub fn sequence_trace(net: &Network, offsets: &OffsetSequence, config: &TraceConfig) -> Result<ComplexityTrace, TraceError> {
    run_trace::<ScaledInt>(net, Some(offsets), config, &default_clock())
}

/// Complexity trace in binary64. Never certified.
pub fn float_trace(
    net: &Network,
    offsets: Option<&OffsetSequence>,
    config: &TraceConfig,
) -> Result<ComplexityTrace<F64>, TraceError> {
    run_trace::<F64>(net, offsets, config, &default_clock())
}

#[cfg(feature = "std")]
fn default_clock() -> StdClock {
    StdClock::start()
}

#[cfg(not(feature = "std"))]
fn default_clock() -> NoClock {
    NoClock
}

/// The general driver behind the convenience wrappers. `R` chooses the
/// arithmetic; [`ScaledInt`] and [`Rational`] give identical results.
pub fn run_trace<R: Representation>(
    net: &Network,
    offsets: Option<&OffsetSequence>,
    config: &TraceConfig,
    clock: &dyn Clock,
) -> Result<ComplexityTrace<R::Output>, TraceError> {
    if config.t_max == 0 {
        return Err(TraceError::EmptyHorizon);
    }
    if let Some(seq) = offsets {
        let violations = seq.validate_against(net.spec());
        if !violations.is_empty() {
            return Err(TraceError::Offsets(violations));
        }
    }
    let injectivity = match net.injectivity_analysis(config.indegree_cap) {
        Ok(r) => Some(r),
        Err(e) if config.mode == EngineMode::InjectiveFast => return Err(e.into()),
        Err(_) => None,
    };
    let injective = injectivity.as_ref().is_some_and(|r| r.injective_at_a);
    if config.mode == EngineMode::InjectiveFast && !injective {
        return Err(TraceError::NotInjective(Box::new(injectivity.expect("checked above"))));
    }

    let base = BasePartition::build(net);
    let mut log = InvariantLog::default();
    let lemma_checks = config.checks >= CheckLevel::Lemmas;
    let mut lemmas = lemma_checks && injective && R::EXACT;
    if lemma_checks && !injective {
        log.skipped.push("projection lemmas: network is not coordinatewise injective".into());
    } else if lemma_checks && !R::EXACT {
        log.skipped.push("projection lemmas: binary64 cannot decide exact set relations".into());
    }
    let mut hit_checks = lemmas;
    if lemmas && net.a().is_zero() {
        hit_checks = false;
        log.skipped.push("threshold-hit uniqueness: a = 0 makes every branch constant".into());
    }

    let arrow_list: Vec<(usize, usize)> =
        (0..net.dim()).flat_map(|i| net.out_neighbors(i).iter().map(move |&j| (i, j))).collect();
    let thresholds: Vec<Rational> = arrow_list.iter().map(|&(i, j)| net.spec().t(i, j).clone()).collect();
    let intercepts: Vec<Vec<Rational>> = if hit_checks {
        match net.branch_systems(config.indegree_cap) {
            Ok(sys) => sys.columns.iter().map(|c| c.offsets.iter().map(|o| net.one_minus_a() * o).collect()).collect(),
            Err(_) => {
                lemmas = false;
                hit_checks = false;
                Vec::new()
            }
        }
    } else {
        Vec::new()
    };
    let full = config.checks >= CheckLevel::Full && hit_checks;
    let subsets = if full { checks::sample_subsets(net.dim()) } else { Vec::new() };
    let scaled_offsets: Vec<Vec<Rational>> = offsets
        .map(|seq| seq.vectors().iter().map(|v| v.iter().map(|x| net.one_minus_a() * x).collect()).collect())
        .unwrap_or_default();

    let mut constants = thresholds.clone();
    constants.extend(intercepts.iter().flatten().cloned());
    constants.extend(scaled_offsets.iter().flatten().cloned());
    let engine: Engine<R> = Engine::new(net, &base, config.epsilon, &constants);

    let mut gen = engine.initial_generation();
    let mut steps = alloc::vec![StepRecord {
        t: 1,
        complexity: gen.len(),
        branching_atoms: 0,
        max_branch: 0,
        micros: clock.micros(),
    }];
    let mut lineage = (config.mode == EngineMode::ItineraryExact).then(Lineage::default);
    if let Some(l) = lineage.as_mut() {
        l.generations.push(gen.nodes.iter().map(|n| (n.parent, n.atom)).collect());
    }
    let mut history = Vec::new();
    let mut warnings = Vec::new();
    let mut truncation = None;
    if gen.len() > config.max_atoms {
        truncation = Some(Truncation::AtomCap { t: 1, cap: config.max_atoms });
    }

    let mut t = 1;
    while truncation.is_none() && t < config.t_max {
        let raw_offset = match offsets {
            Some(seq) => match seq.for_step(t) {
                Some(v) => Some(v.iter().map(|x| net.one_minus_a() * x).collect::<Vec<_>>()),
                None => break,
            },
            None => None,
        };
        let offset = raw_offset.as_ref().map(|v| engine.lift(t + 1, v));
        let extra = offset.as_deref();
        let frame = engine.frame(t + 1);

        let proj = if lemmas { checks::projections(&gen) } else { Vec::new() };
        if lemmas {
            checks::check_disjoint(t, &proj, &mut log);
        }
        let arrows: Vec<ArrowThreshold<R>> = if hit_checks {
            let lifted = engine.lift(t + 1, &thresholds);
            arrow_list
                .iter()
                .zip(lifted)
                .map(|(&(tail, head), threshold)| ArrowThreshold { tail, head, threshold })
                .collect()
        } else {
            Vec::new()
        };
        let hits = if hit_checks {
            let shifted: Vec<Vec<R>> = intercepts
                .iter()
                .enumerate()
                .map(|(i, list)| {
                    let lifted = engine.lift(t + 1, list);
                    match extra {
                        Some(e) => lifted.iter().map(|b| b.plus(&e[i])).collect(),
                        None => lifted,
                    }
                })
                .collect();
            checks::threshold_hits(t, engine.slope(), &proj, &arrows, &shifted, &mut log)
        } else {
            Vec::new()
        };

        let Some(out) = engine.step(&gen, &frame, extra, config.max_atoms) else {
            truncation = Some(Truncation::AtomCap { t: t + 1, cap: config.max_atoms });
            break;
        };

        if config.checks >= CheckLevel::Basic {
            log.record(InvariantKind::Branching);
            if out.min_branch < 1 || out.max_branch > base.len() {
                log.fail(
                    t + 1,
                    InvariantKind::Branching,
                    format!("successor counts range over [{}, {}], #P = {}", out.min_branch, out.max_branch, base.len()),
                );
            }
            log.record(InvariantKind::Monotone);
            if out.nodes.len() < gen.len() {
                log.fail(t + 1, InvariantKind::Monotone, format!("C dropped from {} to {}", gen.len(), out.nodes.len()));
            }
        }
        if full {
            checks::check_specifications(t, base.len() - 1, &gen, &out.nodes, &subsets, &arrows, &hits, &mut log);
        }
        if out.near_cuts > 0 {
            warnings.push(format!(
                "t = {}: {} image endpoint(s) within {:e} of a cut",
                t + 1,
                out.near_cuts,
                config.epsilon
            ));
        }

        let out_len_unchanged = out.nodes.len() == gen.len();
        let next = Generation { t: t + 1, nodes: out.nodes };
        if let Some(l) = lineage.as_mut() {
            l.generations.push(next.nodes.iter().map(|n| (n.parent, n.atom)).collect());
        }
        let prev = core::mem::replace(&mut gen, next);
        if config.keep_history {
            history.push(R::lower_generation(prev, engine.context()));
        }
        t += 1;
        let micros = clock.micros();
        steps.push(StepRecord {
            t,
            complexity: gen.len(),
            branching_atoms: out.branching_atoms,
            max_branch: out.max_branch,
            micros,
        });
        if config.stop_at_stabilization && out_len_unchanged {
            break;
        }
        if let (Some(cap), Some(now)) = (config.max_micros, micros) {
            if now > cap && t < config.t_max {
                truncation = Some(Truncation::TimeCap { t, micros: now });
            }
        }
    }
    if lemmas {
        let proj = checks::projections(&gen);
        checks::check_disjoint(t, &proj, &mut log);
    }
    let final_generation = R::lower_generation(gen, engine.context());
    if config.keep_history {
        history.push(final_generation.clone());
    }

    let certified = R::EXACT && warnings.is_empty() && log.is_clean();
    Ok(ComplexityTrace {
        mode: config.mode,
        steps,
        truncation,
        invariants: log,
        certified,
        warnings,
        base_size: base.len(),
        injectivity,
        final_generation,
        lineage,
        history,
    })
}
