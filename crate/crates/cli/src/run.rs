//! Subcommand execution.

use std::fmt::Write as _;
use std::path::PathBuf;

use regnet_core::attractor::{analyze_attractor, rotation_number, simulate_orbit, RotationError};
use regnet_core::model::{Mode, ModelError, Network, Violation, DEFAULT_INDEGREE_CAP};
use regnet_core::partition::{complexity_trace, float_trace, sequence_trace, TraceError};
use regnet_core::structure::{
    bound_degree, bound_polynomial, bound_skew, negative_circuit_bound, quadratic_bound, self_inhibitor_bound,
    structure_report, validate_dynamically, verify_bound, BoundPolynomial, StructureLimits,
};
use regnet_core::{ComplexityTrace, EngineMode, Rational, Scalar, TraceConfig};

use crate::netfile::{FileError, NetworkFile};
use crate::output::{atoms_csv, bound_csv, loglog_csv, orbit_csv, trace_csv, write_atomic, Table};
use crate::registry::{build_preset, PresetArgs, PresetError};
use crate::report::{
    to_toml, AttractorSection, BoundSummary, RotationSection, StructureSection, TraceReport, ValidationReport,
};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok = 0,
    Failure = 1,
    Validation = 2,
    Invariant = 3,
    Truncated = 4,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }

    /// Invariant violations outrank truncation.
    fn combine(self, other: Status) -> Status {
        match (self, other) {
            (Status::Invariant, _) | (_, Status::Invariant) => Status::Invariant,
            (Status::Ok, s) | (s, Status::Ok) => s,
            (s, _) => s,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Source {
    Preset { name: String, args: PresetArgs },
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Numeric {
    Rational,
    Float { epsilon: f64 },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: Source,
    pub t_max: usize,
    pub numeric: Numeric,
    pub mode: EngineMode,
    pub out: Option<PathBuf>,
    pub max_atoms: usize,
    pub max_seconds: Option<f64>,
}

impl RunConfig {
    pub fn new(source: Source) -> Self {
        RunConfig {
            source,
            t_max: 100,
            numeric: Numeric::Rational,
            mode: EngineMode::ItineraryExact,
            out: None,
            max_atoms: 1_000_000,
            max_seconds: None,
        }
    }

    fn trace_config(&self) -> TraceConfig {
        let mut c = TraceConfig::new(self.t_max).mode(self.mode).max_atoms(self.max_atoms);
        if let Numeric::Float { epsilon } = self.numeric {
            c = c.epsilon(epsilon);
        }
        if let Some(s) = self.max_seconds {
            c = c.max_micros((s * 1e6) as u64);
        }
        c
    }
}

#[derive(Debug, Clone)]
pub enum Command {
    Validate,
    Complexity { dump_atoms: bool },
    Structure { dynamic: bool },
    Bounds,
    Attractor { x0: Option<Vec<Rational>> },
    Rotation { x0: Rational },
    Sweep { preset: String, a_values: Vec<Rational>, t_values: Vec<Rational> },
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error(transparent)]
    Preset(#[from] PresetError),
    #[error("invalid network:\n  {}", .0.iter().map(|v| v.message.clone()).collect::<Vec<_>>().join("\n  "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Model(ModelError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Rotation(#[from] RotationError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl From<ModelError> for RunError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Invalid(v) => RunError::Invalid(v),
            other => RunError::Model(other),
        }
    }
}

impl RunError {
    pub fn status(&self) -> Status {
        match self {
            RunError::Invalid(_) => Status::Validation,
            RunError::Trace(TraceError::Offsets(_)) => Status::Validation,
            RunError::Trace(TraceError::Model(ModelError::Invalid(_))) => Status::Validation,
            _ => Status::Failure,
        }
    }
}

/// What a run produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

struct Loaded {
    file: NetworkFile,
    label: String,
}

fn load(source: &Source) -> Result<Loaded, RunError> {
    Ok(match source {
        Source::Preset { name, args } => Loaded { file: build_preset(name, args)?, label: name.clone() },
        Source::File(path) => {
            let file = NetworkFile::read(path)?;
            let label = file.name.clone().unwrap_or_else(|| path.display().to_string());
            Loaded { file, label }
        }
    })
}

fn violations(file: &NetworkFile) -> Vec<Violation> {
    let mut v = file.spec.validate();
    if let Some(o) = &file.offsets {
        v.extend(o.validate_against(&file.spec));
    }
    v
}

struct Sink {
    out: Option<PathBuf>,
    files: Vec<PathBuf>,
}

impl Sink {
    fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> Result<(), RunError> {
        if let Some(dir) = &self.out {
            self.files.push(write_atomic(dir, name, contents.as_ref())?);
        }
        Ok(())
    }

    fn table(&mut self, name: &str, table: Table) -> Result<(), RunError> {
        self.write(name, table.into_bytes())
    }
}

pub fn run(config: &RunConfig, command: &Command) -> Result<Outcome, RunError> {
    if config.t_max == 0 {
        return Err(RunError::Usage("--t-max must be at least 1".into()));
    }
    if config.max_atoms == 0 {
        return Err(RunError::Usage("--max-atoms must be positive".into()));
    }
    if config.max_seconds.is_some_and(|s| !(s > 0.0)) {
        return Err(RunError::Usage("--max-seconds must be positive".into()));
    }
    let mut sink = Sink { out: config.out.clone(), files: Vec::new() };
    if let Command::Sweep { preset, a_values, t_values } = command {
        return sweep(config, preset, a_values, t_values, sink);
    }
    let loaded = load(&config.source)?;
    let bad = violations(&loaded.file);
    if matches!(command, Command::Validate) {
        return validate(&loaded, bad, sink);
    }
    if !bad.is_empty() {
        return Err(RunError::Invalid(bad));
    }
    sink.write("network.toml", loaded.file.to_toml())?;
    let net = Network::new(loaded.file.spec.clone())?;
    let (status, summary) = match command {
        Command::Validate | Command::Sweep { .. } => unreachable!("handled above"),
        Command::Complexity { dump_atoms } => complexity(config, &loaded, &net, *dump_atoms, &mut sink)?,
        Command::Structure { dynamic } => structure(config, &loaded, &net, *dynamic, &mut sink)?,
        Command::Bounds => bounds(config, &loaded, &net, &mut sink)?,
        Command::Attractor { x0 } => attractor(config, &loaded, &net, x0.as_deref(), &mut sink)?,
        Command::Rotation { x0 } => rotation(config, &loaded, &net, x0, &mut sink)?,
    };
    Ok(Outcome { status, summary, files: sink.files })
}

fn validate(loaded: &Loaded, bad: Vec<Violation>, mut sink: Sink) -> Result<Outcome, RunError> {
    let spec = &loaded.file.spec;
    let mut summary = String::new();
    let mut report = ValidationReport {
        network: loaded.label.clone(),
        d: spec.dim(),
        mode: spec.mode().name().into(),
        valid: bad.is_empty(),
        violations: bad.iter().map(|v| v.message.clone()).collect(),
        base_atoms: None,
        non_degenerate: None,
        injectivity: None,
    };
    let status = if bad.is_empty() {
        let net = Network::new(spec.clone())?;
        let inj = net.injectivity_analysis(DEFAULT_INDEGREE_CAP)?;
        let base = regnet_core::partition::BasePartition::build(&net);
        report.base_atoms = Some(base.len());
        report.non_degenerate = Some(net.non_degenerate(DEFAULT_INDEGREE_CAP)?.holds());
        let _ = writeln!(summary, "{}: valid {} network, d = {}, a = {}", loaded.label, spec.mode().name(), spec.dim(), spec.a());
        let _ = writeln!(summary, "#P = {}", base.len());
        let _ = writeln!(
            summary,
            "a0 = {}, coordinatewise injective at a: {}",
            inj.a0,
            if inj.injective_at_a { "yes" } else { "no" }
        );
        report.injectivity = Some((&inj).into());
        Status::Ok
    } else {
        let _ = writeln!(summary, "{}: {} violation(s)", loaded.label, bad.len());
        for v in &bad {
            let _ = writeln!(summary, "  {}", v.message);
        }
        Status::Validation
    };
    sink.write("validation.toml", to_toml(&report))?;
    Ok(Outcome { status, summary, files: sink.files })
}

/// Known closed-form bounds for specific presets, checked alongside the
/// general ones.
fn reference_bounds(label: &str, net: &Network) -> Vec<BoundPolynomial> {
    let half = Rational::ratio(1, 2);
    match label {
        "self_inhibitor" => vec![self_inhibitor_bound()],
        "negative_2_circuit" if net.a() < &half => vec![negative_circuit_bound()],
        "negative_2_circuit" => vec![quadratic_bound()],
        _ => Vec::new(),
    }
}

enum AnyTrace {
    Exact(ComplexityTrace),
    Float(ComplexityTrace<regnet_core::F64>),
}

impl AnyTrace {
    fn complexities(&self) -> Vec<usize> {
        match self {
            AnyTrace::Exact(t) => t.complexities(),
            AnyTrace::Float(t) => t.complexities(),
        }
    }

    fn status(&self) -> Status {
        fn of<S: Scalar>(t: &ComplexityTrace<S>) -> Status {
            if !t.invariants.is_clean() {
                Status::Invariant
            } else if t.is_truncated() {
                Status::Truncated
            } else {
                Status::Ok
            }
        }
        match self {
            AnyTrace::Exact(t) => of(t),
            AnyTrace::Float(t) => of(t),
        }
    }

    fn report(&self, label: &str, bounds: Vec<BoundSummary>) -> TraceReport {
        match self {
            AnyTrace::Exact(t) => TraceReport::new(label, "rational", t, bounds),
            AnyTrace::Float(t) => TraceReport::new(label, "float", t, bounds),
        }
    }

    fn table(&self) -> Table {
        match self {
            AnyTrace::Exact(t) => trace_csv(t),
            AnyTrace::Float(t) => trace_csv(t),
        }
    }
}

fn trace(config: &RunConfig, file: &NetworkFile, net: &Network) -> Result<AnyTrace, RunError> {
    let tc = config.trace_config();
    Ok(match (config.numeric, &file.offsets) {
        (Numeric::Rational, None) => AnyTrace::Exact(complexity_trace(net, &tc)?),
        (Numeric::Rational, Some(o)) => AnyTrace::Exact(sequence_trace(net, o, &tc)?),
        (Numeric::Float { .. }, o) => AnyTrace::Float(float_trace(net, o.as_ref(), &tc)?),
    })
}

fn trace_line<S: Scalar>(summary: &mut String, label: &str, t: &ComplexityTrace<S>) {
    let c = t.complexities();
    let _ = writeln!(
        summary,
        "{label}: {} up to t = {}, C(t) = {}{}",
        t.mode.name(),
        t.horizon(),
        c.last().copied().unwrap_or(0),
        t.truncation.as_ref().map(|x| format!(" ({})", crate::report::truncation_text(x))).unwrap_or_default()
    );
    let _ = writeln!(
        summary,
        "invariants: {} violation(s){}",
        t.invariants.violations.len(),
        if t.certified { ", certified" } else { "" }
    );
}

/// Runs each bound against the trace; applicable violated bounds make the
/// run an invariant failure.
fn check_bounds(
    complexities: &[usize],
    bounds: &[BoundPolynomial],
    summary: &mut String,
    sink: &mut Sink,
    files: bool,
) -> Result<(Vec<BoundSummary>, Status), RunError> {
    let mut out = Vec::new();
    let mut status = Status::Ok;
    let mut seen: Vec<String> = Vec::new();
    for b in bounds {
        let check = verify_bound(complexities, b);
        let mut stem = b.kind.name().to_string();
        let repeats = seen.iter().filter(|s| **s == stem).count();
        seen.push(stem.clone());
        if repeats > 0 {
            stem = format!("{stem}_{repeats}");
        }
        let _ = writeln!(
            summary,
            "bound {stem}: {b}{} ... {}",
            if b.applicable { "" } else { " (hypotheses fail)" },
            match &check.first_violation {
                None => format!("holds on {} rows", check.compared()),
                Some(r) => format!("VIOLATED at t = {} (C = {})", r.t, r.complexity),
            }
        );
        if b.applicable && !check.holds() {
            status = Status::Invariant;
        }
        if files {
            sink.table(&format!("bounds_{stem}.csv"), bound_csv(&check))?;
            sink.table(&format!("loglog_{stem}.csv"), loglog_csv(complexities, b))?;
        }
        out.push(BoundSummary::new(b, &check));
    }
    Ok((out, status))
}

fn complexity(
    config: &RunConfig,
    loaded: &Loaded,
    net: &Network,
    dump_atoms: bool,
    sink: &mut Sink,
) -> Result<(Status, String), RunError> {
    let tr = trace(config, &loaded.file, net)?;
    let mut summary = String::new();
    match &tr {
        AnyTrace::Exact(t) => trace_line(&mut summary, &loaded.label, t),
        AnyTrace::Float(t) => trace_line(&mut summary, &loaded.label, t),
    }
    let mut bounds = Vec::new();
    if loaded.file.offsets.is_none() {
        bounds.push(bound_polynomial(net));
        bounds.extend(reference_bounds(&loaded.label, net));
    }
    let c = tr.complexities();
    let (summaries, bound_status) = check_bounds(&c, &bounds, &mut summary, sink, false)?;
    sink.table("trace.csv", tr.table())?;
    sink.write("report.toml", to_toml(&tr.report(&loaded.label, summaries)))?;
    if dump_atoms {
        match &tr {
            AnyTrace::Exact(t) => sink.table("atoms.csv", atoms_csv(&t.final_generation))?,
            AnyTrace::Float(t) => sink.table("atoms.csv", atoms_csv(&t.final_generation))?,
        }
    }
    Ok((tr.status().combine(bound_status), summary))
}

fn structure(
    config: &RunConfig,
    loaded: &Loaded,
    net: &Network,
    dynamic: bool,
    sink: &mut Sink,
) -> Result<(Status, String), RunError> {
    let report = structure_report(net, StructureLimits::default())?;
    let units = &loaded.file.units;
    let validation = if dynamic { Some(validate_dynamically(net, &report, &config.trace_config())?) } else { None };
    let section = StructureSection::new(&loaded.label, units, &report, validation.as_ref());
    let mut summary = String::new();
    let _ = writeln!(summary, "{}: {} arrow(s), injective at a: {}", loaded.label, section.arrows.len(), report.injective);
    let _ = writeln!(summary, "maximal head-independent sets: {:?}", section.head_independent_sets);
    let _ = writeln!(
        summary,
        "2-loops: {}",
        section.two_loops.iter().map(|l| format!("{} → {}", l.driver, l.end)).collect::<Vec<_>>().join(", ")
    );
    let _ = writeln!(summary, "base–bundle splits: {}", section.base_bundle_splits.len());
    match &section.degree_reduction.q {
        Some(q) => {
            let _ = writeln!(summary, "degree reduction certified, q = {q}");
        }
        None => {
            let reason = section.degree_reduction.reason.as_deref().unwrap_or("");
            let _ = writeln!(summary, "degree reduction not certified: {reason}");
        }
    }
    let mut status = Status::Ok;
    if let Some(v) = &validation {
        let _ = writeln!(summary, "dynamic validation to t = {}: {}", v.horizon, if v.holds() { "holds" } else { "FAILS" });
        if !v.holds() {
            status = Status::Invariant;
        }
    }
    sink.write("structure.toml", to_toml(&section))?;
    Ok((status, summary))
}

/// Skew bound of every nontrivial split, up to this many.
const MAX_SKEW_SPLITS: usize = 8;

fn bounds(config: &RunConfig, loaded: &Loaded, net: &Network, sink: &mut Sink) -> Result<(Status, String), RunError> {
    if loaded.file.offsets.is_some() {
        return Err(RunError::Usage("bounds apply to autonomous networks only".into()));
    }
    let tr = trace(config, &loaded.file, net)?;
    let c = tr.complexities();
    let mut summary = String::new();
    match &tr {
        AnyTrace::Exact(t) => trace_line(&mut summary, &loaded.label, t),
        AnyTrace::Float(t) => trace_line(&mut summary, &loaded.label, t),
    }
    let mut list = vec![bound_polynomial(net)];
    if let Ok(r) = regnet_core::structure::certify_degree_reduction(net, DEFAULT_INDEGREE_CAP) {
        list.push(bound_degree(net, &r));
    }
    let splits = net.underlying().base_bundle_splits();
    let tc = config.trace_config();
    for split in splits.filter(|s| !s.base.is_empty()).take(MAX_SKEW_SPLITS) {
        let base_net = Network::new(net.spec().restrict(&split.base, Mode::Autonomous)?)?;
        let base_trace = match config.numeric {
            Numeric::Rational => complexity_trace(&base_net, &tc)?.complexities(),
            Numeric::Float { .. } => float_trace(&base_net, None, &tc)?.complexities(),
        };
        if let Ok(b) = bound_skew(net, &split, &base_trace) {
            list.push(b);
        }
    }
    list.extend(reference_bounds(&loaded.label, net));
    let (summaries, bound_status) = check_bounds(&c, &list, &mut summary, sink, true)?;
    sink.table("trace.csv", tr.table())?;
    sink.write("bounds.toml", to_toml(&tr.report(&loaded.label, summaries)))?;
    Ok((tr.status().combine(bound_status), summary))
}

fn parse_point(net: &Network, x0: Option<&[Rational]>) -> Result<Option<Vec<Rational>>, RunError> {
    match x0 {
        Some(x) if x.len() != net.dim() => Err(RunError::Usage(format!(
            "--x0 has {} coordinate(s), network has {}",
            x.len(),
            net.dim()
        ))),
        Some(x) => Ok(Some(x.to_vec())),
        None => Ok(None),
    }
}

fn attractor(
    config: &RunConfig,
    loaded: &Loaded,
    net: &Network,
    x0: Option<&[Rational]>,
    sink: &mut Sink,
) -> Result<(Status, String), RunError> {
    if loaded.file.offsets.is_some() {
        return Err(RunError::Usage("attractor analysis needs an autonomous network".into()));
    }
    let report = analyze_attractor(net, &config.trace_config())?;
    let section = AttractorSection::new(&loaded.label, &report);
    let mut summary = String::new();
    match report.stabilization {
        Some(tau) => {
            let _ = writeln!(
                summary,
                "{}: C({}) = C({}) = {}, {} cycle(s)",
                loaded.label,
                tau,
                tau + 1,
                report.complexities[tau - 1],
                report.orbits.len()
            );
        }
        None => {
            let _ = writeln!(summary, "{}: no stabilization up to t = {}", loaded.label, report.horizon);
        }
    }
    for c in &section.cycles {
        let pts: Vec<String> = c.points.iter().map(|p| format!("({})", p.join(", "))).collect();
        let _ = writeln!(summary, "  period {} [{}]: {}", c.period, c.status, pts.join(" → "));
    }
    if let Some(d) = &section.orbit_distance {
        let _ = writeln!(summary, "dist(orbits, Δ) = {d}");
    }
    sink.write("attractor.toml", to_toml(&section))?;
    if let Some(x) = parse_point(net, x0)? {
        sink.table("orbit.csv", orbit_csv(&simulate_orbit(net, &x, config.t_max)?))?;
    }
    let status = if report.truncated { Status::Truncated } else { Status::Ok };
    Ok((status, summary))
}

fn rotation(
    config: &RunConfig,
    loaded: &Loaded,
    net: &Network,
    x0: &Rational,
    sink: &mut Sink,
) -> Result<(Status, String), RunError> {
    let r = rotation_number(net, x0, config.t_max)?;
    let section = RotationSection::new(&loaded.label, x0, &r);
    let mut summary = format!(
        "{}: rotation estimate {} ≈ {:.6} over {} steps",
        loaded.label, section.estimate, section.estimate_decimal, r.t_max
    );
    if let Some(e) = &section.exact {
        let _ = write!(summary, ", exact {e} from a verified cycle");
    }
    summary.push('\n');
    sink.write("rotation.toml", to_toml(&section))?;
    Ok((Status::Ok, summary))
}

fn sweep(
    config: &RunConfig,
    preset: &str,
    a_values: &[Rational],
    t_values: &[Rational],
    mut sink: Sink,
) -> Result<Outcome, RunError> {
    if a_values.is_empty() || t_values.is_empty() {
        return Err(RunError::Usage("sweep needs at least one a and one T value".into()));
    }
    let base_args = match &config.source {
        Source::Preset { args, .. } => args.clone(),
        Source::File(_) => PresetArgs::default(),
    };
    let mut table = Table::new([
        "a",
        "T",
        "horizon",
        "C_final",
        "stabilization",
        "truncated",
        "violations",
        "certified",
        "polynomial_bound_ok",
    ]);
    let mut status = Status::Ok;
    for a in a_values {
        for t in t_values {
            let args = PresetArgs { a: Some(a.clone()), thresholds: vec![t.clone()], ..base_args.clone() };
            let file = build_preset(preset, &args)?;
            let bad = violations(&file);
            if !bad.is_empty() {
                return Err(RunError::Invalid(bad));
            }
            let net = Network::new(file.spec.clone())?;
            let tr = trace(config, &file, &net)?;
            let c = tr.complexities();
            let ok = verify_bound(&c, &bound_polynomial(&net)).holds();
            let (horizon, truncated, violations, certified) = match &tr {
                AnyTrace::Exact(x) => (x.horizon(), x.is_truncated(), x.invariants.violations.len(), x.certified),
                AnyTrace::Float(x) => (x.horizon(), x.is_truncated(), x.invariants.violations.len(), x.certified),
            };
            status = status.combine(tr.status());
            table.row([
                a.to_string(),
                t.to_string(),
                horizon.to_string(),
                c.last().copied().unwrap_or(0).to_string(),
                regnet_core::attractor::detect_stabilization(&c).map(|s| s.to_string()).unwrap_or_default(),
                truncated.to_string(),
                violations.to_string(),
                certified.to_string(),
                ok.to_string(),
            ]);
        }
    }
    let text = table.into_string();
    let summary = format!("{preset}: {} cell(s)\n{text}", a_values.len() * t_values.len());
    sink.write("sweep.csv", text)?;
    Ok(Outcome { status, summary, files: sink.files })
}
