//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use regnet::{random_spec, RandomParams};
use regnet_core::attractor::{analyze_attractor, detect_stabilization, distance_to_discontinuity, SuccessorMap};
use regnet_core::model::{Mode, Network, Sign, DEFAULT_INDEGREE_CAP};
use regnet_core::partition::{complexity_trace, grid_oracle_complexity, EngineMode, InvariantKind, TraceConfig};
use regnet_core::presets::{self, Fig3Params, P53Params};
use regnet_core::structure::{
    bound_degree, bound_polynomial, bound_skew, certify_degree_reduction, negative_circuit_bound, quadratic_bound,
    self_inhibitor_bound, verify_bound, BaseBundle, BoundPolynomial,
};
use regnet_core::{ComplexityTrace, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

type Outcome = Result<String, String>;

/// A trace kept for the cross-cutting criteria 6, 7 and 11.
struct Run {
    label: String,
    net: Network,
    trace: ComplexityTrace,
}

#[derive(Default)]
struct Runs {
    runs: Vec<Run>,
}

impl Runs {
    fn trace(&mut self, label: String, net: Network, t_max: usize) -> Result<&Run, String> {
        let trace = complexity_trace(&net, &TraceConfig::new(t_max)).map_err(|e| format!("{label}: {e}"))?;
        self.runs.push(Run { label, net, trace });
        Ok(self.runs.last().expect("just pushed"))
    }
}

fn check_bound(run: &Run, bound: &BoundPolynomial, need_horizon: usize) -> Result<usize, String> {
    if run.trace.horizon() < need_horizon {
        return Err(format!("{}: horizon {} < {need_horizon}", run.label, run.trace.horizon()));
    }
    let check = verify_bound(&run.trace.complexities(), bound);
    match &check.first_violation {
        Some(r) => Err(format!("{}: C({}) = {} > {}", run.label, r.t, r.complexity, bound_at(bound, r.t))),
        None => Ok(check.compared()),
    }
}

fn bound_at(bound: &BoundPolynomial, t: usize) -> String {
    bound.eval(t).map_or_else(|| "undefined".into(), |b| b.to_string())
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("runtime {:.2} s exceeds {:.0} s", elapsed.as_secs_f64(), limit.as_secs_f64()))
    }
}

fn criterion_1(runs: &mut Runs) -> Outcome {
    let start = Instant::now();
    let a_values = [q(1, 10), q(1, 5), q(3, 10), q(2, 5), q(9, 20)];
    let t_values = [q(1, 5), q(7, 20), q(1, 2), q(13, 20), q(4, 5)];
    let mut compared = 0;
    for a in &a_values {
        for t in &t_values {
            let net = presets::self_inhibitor(a.clone(), t.clone()).map_err(|e| e.to_string())?;
            let run = runs.trace(format!("self-inhibitor a={a} T={t}"), net, 500)?;
            compared += check_bound(run, &self_inhibitor_bound(), 500)?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("25 pairs, {compared} comparisons C(t) <= t+2, t <= 500, {:.2} s", elapsed.as_secs_f64()))
}

fn criterion_2(runs: &mut Runs) -> Outcome {
    let start = Instant::now();
    let mut last = Vec::new();
    for a in [q(1, 10), q(1, 4), q(2, 5)] {
        let net = presets::negative_2_circuit(a.clone(), q(1, 2), q(1, 2)).map_err(|e| e.to_string())?;
        let run = runs.trace(format!("negative 2-circuit a={a}"), net, 300)?;
        check_bound(run, &negative_circuit_bound(), 300)?;
        last.push(format!("C(300)={}", run.trace.complexity(300).unwrap_or(0)));
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("a in {{1/10, 1/4, 2/5}}: C(t) <= 2t+2 for t <= 300 ({}), {:.2} s", last.join(", "), elapsed.as_secs_f64()))
}

fn criterion_3(runs: &mut Runs) -> Outcome {
    let start = Instant::now();
    let net = presets::negative_2_circuit(q(93, 100), q(1, 2), q(1, 2)).map_err(|e| e.to_string())?;
    let run = runs.trace("negative 2-circuit a=93/100".into(), net, 200)?;
    let reach = run.trace.horizon();
    if reach < 100 {
        return Err(format!("horizon {reach} below 100"));
    }
    let compared = check_bound(run, &quadratic_bound(), 100)?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(300))?;
    Ok(format!(
        "C(t) <= 4t^2 for 2 <= t <= {reach} ({compared} comparisons, C({reach}) = {}), {:.2} s",
        run.trace.complexity(reach).unwrap_or(0),
        elapsed.as_secs_f64()
    ))
}

fn criterion_4(runs: &mut Runs) -> Outcome {
    let start = Instant::now();
    let mut max_c = 0;
    for seed in 0..50u64 {
        let params = RandomParams { d: 1 + (seed as usize) % 4, seed, ..RandomParams::default() };
        let spec = random_spec(&params).map_err(|e| format!("seed {seed}: {e}"))?;
        let net = Network::new(spec).map_err(|e| format!("seed {seed}: {e}"))?;
        let r = net.injectivity_analysis(DEFAULT_INDEGREE_CAP).map_err(|e| e.to_string())?;
        if net.a() >= &r.a0 {
            return Err(format!("seed {seed}: a = {} not below a0 = {}", net.a(), r.a0));
        }
        let bound = bound_polynomial(&net);
        let run = runs.trace(format!("random seed {seed} d={}", params.d), net, 50)?;
        check_bound(run, &bound, 50)?;
        max_c = max_c.max(run.trace.complexity(50).unwrap_or(0));
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(120))?;
    Ok(format!("50 seeds, d = 1..4, zero violations up to t = 50 (max C(50) = {max_c}), {:.2} s", elapsed.as_secs_f64()))
}

fn criterion_5() -> Outcome {
    for d in 1..=6 {
        for signs in [vec![Sign::Minus; d], vec![Sign::Plus; d]] {
            let a0 = presets::circuit(d, &signs, q(1, 4), &vec![q(1, 2); d])
                .and_then(|n| n.injectivity_analysis(DEFAULT_INDEGREE_CAP))
                .map_err(|e| e.to_string())?
                .a0;
            if a0 != q(1, 2) {
                return Err(format!("circuit d = {d}: a0 = {a0}"));
            }
        }
    }
    let probe = Network::new(presets::column_probe(&[q(1, 3), q(2, 3)], q(1, 10)).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let r = probe.injectivity_analysis(DEFAULT_INDEGREE_CAP).map_err(|e| e.to_string())?;
    if r.a0 != q(1, 4) {
        return Err(format!("column {{0,1/3,2/3,1}}: a0 = {}", r.a0));
    }
    // subset sums of {1/3, 2/3}: {0, 1/3, 2/3, 1}, minimal gap 1/3, a0 = (1/3)/(4/3)
    Ok("a0 = 1/2 for circuits d = 1..6 (both sign patterns); column {0,1/3,2/3,1} gives a0 = 1/4".into())
}

fn criterion_6(runs: &Runs) -> Outcome {
    let cases = [
        ("self-inhibitor a=1/4 T=1/2", presets::self_inhibitor(q(1, 4), q(1, 2)), 12, 200),
        ("self-inhibitor a=19/40 T=1/8", presets::self_inhibitor(q(19, 40), q(1, 8)), 12, 2000),
        ("negative 2-circuit a=1/4", presets::negative_2_circuit(q(1, 4), q(1, 2), q(1, 2)), 8, 40),
        ("negative 2-circuit a=19/40 T=1/10", presets::negative_2_circuit(q(19, 40), q(1, 10), q(1, 10)), 8, 40),
    ];
    for (label, net, t_max, res) in cases {
        let net = net.map_err(|e| e.to_string())?;
        let trace = complexity_trace(&net, &TraceConfig::new(t_max)).map_err(|e| e.to_string())?;
        for t in 1..=t_max {
            let oracle = grid_oracle_complexity(&net, t, res).map_err(|e| e.to_string())?;
            let engine = trace.complexity(t).unwrap_or(0);
            if oracle != engine {
                return Err(format!("{label}: oracle {oracle} != engine {engine} at t = {t}"));
            }
        }
    }
    let mut compared = 0;
    for run in runs.runs.iter().filter(|r| r.trace.injective()) {
        let fast = complexity_trace(&run.net, &TraceConfig::new(run.trace.horizon()).mode(EngineMode::InjectiveFast))
            .map_err(|e| format!("{}: {e}", run.label))?;
        if fast.complexities() != run.trace.complexities() {
            return Err(format!("{}: injective-fast disagrees with itinerary-exact", run.label));
        }
        compared += 1;
    }
    Ok(format!("grid oracle equals engine on 4 networks; exact == fast on {compared} certified-injective runs"))
}

fn criterion_7(runs: &Runs) -> Outcome {
    let kinds = [
        InvariantKind::DisjointProjections,
        InvariantKind::UniqueThresholdHit,
        InvariantKind::Branching,
        InvariantKind::Monotone,
    ];
    let mut totals = [0usize; 4];
    for run in &runs.runs {
        let log = &run.trace.invariants;
        if let Some(v) = log.violations.first() {
            return Err(format!("{}: {} at t = {}: {}", run.label, v.kind.name(), v.t, v.detail));
        }
        for (total, kind) in totals.iter_mut().zip(kinds) {
            *total += log.count(kind);
        }
        if run.trace.injective() && (log.count(InvariantKind::DisjointProjections) == 0) {
            return Err(format!("{}: projection lemma never evaluated", run.label));
        }
    }
    if totals.contains(&0) {
        return Err(format!("some invariant was never evaluated: {totals:?}"));
    }
    let parts: Vec<String> = kinds.iter().zip(totals).map(|(k, n)| format!("{} x{n}", k.name())).collect();
    Ok(format!("{} runs, zero violations ({})", runs.runs.len(), parts.join(", ")))
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    for a in [q(1, 10), q(1, 4), q(2, 5)] {
        for (name, net) in [
            ("negative", presets::negative_2_circuit(a.clone(), q(1, 2), q(1, 2))),
            ("positive", presets::toggle_switch(a.clone(), q(1, 2), q(1, 2))),
        ] {
            let net = net.map_err(|e| e.to_string())?;
            let r = certify_degree_reduction(&net, DEFAULT_INDEGREE_CAP)
                .map_err(|e| format!("{name} 2-circuit a={a}: {e}"))?;
            if r.q != 1 {
                return Err(format!("{name} 2-circuit a={a}: q = {}", r.q));
            }
            let bound = bound_degree(&net, &r);
            let trace = complexity_trace(&net, &TraceConfig::new(200)).map_err(|e| e.to_string())?;
            let run = Run { label: format!("{name} 2-circuit a={a}"), net, trace };
            check_bound(&run, &bound, 200)?;
            if notes.is_empty() {
                notes.push(format!("2-circuits q = 1, C(t) <= {bound} for t <= 200"));
            }
        }
    }
    let net = presets::fig3_three_loops(q(1, 4), &Fig3Params::default()).map_err(|e| e.to_string())?;
    let r = certify_degree_reduction(&net, DEFAULT_INDEGREE_CAP).map_err(|e| format!("three-loop network: {e}"))?;
    if r.q != 3 || net.dim() != 6 {
        return Err(format!("three-loop network: d = {}, q = {}", net.dim(), r.q));
    }
    let bound = bound_degree(&net, &r);
    if !bound.applicable {
        return Err("three-loop network: cubic bound not applicable".into());
    }
    let trace = complexity_trace(&net, &TraceConfig::new(60)).map_err(|e| e.to_string())?;
    let run = Run { label: "three-loop network".into(), net, trace };
    check_bound(&run, &bound, 60)?;
    notes.push(format!("three-loop network q = 3, C(60) = {} <= {}", run.trace.complexity(60).unwrap_or(0), bound_at(&bound, 60)));
    Ok(notes.join("; "))
}

fn criterion_9() -> Outcome {
    let net = presets::p53(q(1, 4), &P53Params::default()).map_err(|e| e.to_string())?;
    let split = BaseBundle { base: vec![0, 1], bundle: vec![2, 3] };
    if !net.underlying().is_base_bundle(&split.base, &split.bundle) {
        return Err("{p53, m} is not a base".into());
    }
    let base = Network::new(net.spec().restrict(&split.base, Mode::Autonomous).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let cfg = TraceConfig::new(60);
    let cb = complexity_trace(&base, &cfg).map_err(|e| e.to_string())?.complexities();
    let bound = bound_skew(&net, &split, &cb).map_err(|e| e.to_string())?;
    let trace = complexity_trace(&net, &cfg).map_err(|e| e.to_string())?;
    let run = Run { label: "p53".into(), net, trace };
    let compared = check_bound(&run, &bound, 60)?;
    Ok(format!(
        "joint C(t) <= C_b(t) x bundle polynomial on {compared} steps, C(60) = {} <= {}",
        run.trace.complexity(60).unwrap_or(0),
        bound_at(&bound, 60)
    ))
}

fn criterion_10() -> Outcome {
    let cases = [
        ("toggle a=1/4", presets::toggle_switch(q(1, 4), q(1, 2), q(1, 2))),
        ("self-inhibitor a=1/4 T=1/2", presets::self_inhibitor(q(1, 4), q(1, 2))),
        ("self-inhibitor a=1/2 T=1/4", presets::self_inhibitor(q(1, 2), q(1, 4))),
    ];
    let mut notes = Vec::new();
    for (label, net) in cases {
        let net = net.map_err(|e| e.to_string())?;
        let report = analyze_attractor(&net, &TraceConfig::new(200)).map_err(|e| e.to_string())?;
        let tau = report.stabilization.ok_or(format!("{label}: no stabilization"))?;
        let orbits: Vec<_> = report.verified().collect();
        if orbits.is_empty() {
            return Err(format!("{label}: no verified periodic orbit"));
        }
        for orbit in &orbits {
            for (k, x) in orbit.points.iter().enumerate() {
                let mut y = x.clone();
                for _ in 0..orbit.period {
                    y = net.evaluate_map(&y, None).map_err(|e| e.to_string())?;
                }
                if &y != x {
                    return Err(format!("{label}: F^{}(x_{k}) != x_{k}", orbit.period));
                }
            }
            let dist = distance_to_discontinuity(&net, &orbit.points).ok_or(format!("{label}: no discontinuity set"))?;
            if dist <= Rational::zero() {
                return Err(format!("{label}: orbit touches a threshold"));
            }
        }
        let periods: Vec<String> = orbits.iter().map(|o| o.period.to_string()).collect();
        notes.push(format!("{label}: tau = {tau}, periods [{}], dist = {}", periods.join(","), report.orbit_distance.unwrap()));
    }
    Ok(notes.join("; "))
}

/// Checks the successor map against the lineage directly.
fn successor_consistent(label: &str, trace: &ComplexityTrace) -> Result<Option<usize>, String> {
    let Some(tau) = detect_stabilization(&trace.complexities()) else {
        return Ok(None);
    };
    if trace.horizon() < tau + 1 {
        return Ok(None);
    }
    let map = SuccessorMap::from_trace(trace).ok_or(format!("{label}: successor map undefined at tau = {tau}"))?;
    let lineage = trace.lineage.as_ref().ok_or(format!("{label}: no lineage"))?;
    let n = lineage.len(tau);
    let mut children = vec![0usize; n];
    for c in 0..lineage.len(tau + 1) {
        let p = lineage.parent(tau + 1, c).ok_or(format!("{label}: orphan atom"))?;
        children[p] += 1;
        let word = lineage.itinerary(tau + 1, c);
        if lineage.itinerary(tau, map.next[p]) != word[1..] {
            return Err(format!("{label}: successor of atom {p} has the wrong itinerary"));
        }
    }
    if children.iter().any(|&k| k != 1) || map.next.len() != n || map.next.iter().any(|&k| k >= n) {
        return Err(format!("{label}: successor relation is not a function on P^{tau}"));
    }
    if map.cycles.len() > n {
        return Err(format!("{label}: {} cycles > C(tau) = {n}", map.cycles.len()));
    }
    Ok(Some(map.cycles.len()))
}

fn criterion_11(runs: &Runs) -> Outcome {
    let mut stabilized = 0;
    let mut cycles = 0;
    for run in &runs.runs {
        if let Some(k) = successor_consistent(&run.label, &run.trace)? {
            stabilized += 1;
            cycles += k;
        }
    }
    let extra = [
        ("toggle a=1/4", presets::toggle_switch(q(1, 4), q(1, 2), q(1, 2))),
        ("toggle a=2/5 T=(1/5,7/10)", presets::toggle_switch(q(2, 5), q(1, 5), q(7, 10))),
        ("repressilator a=1/4", presets::repressilator(q(1, 4), &[q(1, 2), q(1, 3), q(2, 3)])),
        ("p53 a=1/4", presets::p53(q(1, 4), &P53Params::default())),
    ];
    for (label, net) in extra {
        let net = net.map_err(|e| e.to_string())?;
        let cfg = TraceConfig::new(200).stop_at_stabilization(true);
        let trace = complexity_trace(&net, &cfg).map_err(|e| e.to_string())?;
        if let Some(k) = successor_consistent(label, &trace)? {
            stabilized += 1;
            cycles += k;
        }
    }
    if stabilized == 0 {
        return Err("no run stabilized".into());
    }
    Ok(format!("{stabilized} stabilized runs, successor map a function on each, {cycles} cycles in total"))
}

fn main() -> ExitCode {
    let mut runs = Runs::default();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "self-inhibitor linear complexity", criterion_1(&mut runs)),
        (2, "negative 2-circuit, small a", criterion_2(&mut runs)),
        (3, "quadratic bound at a = 93/100", criterion_3(&mut runs)),
        (4, "polynomial bound fuzz", criterion_4(&mut runs)),
        (5, "injectivity threshold", criterion_5()),
        (6, "oracle equivalence", criterion_6(&runs)),
        (7, "lemma invariants", criterion_7(&runs)),
        (8, "degree reduction", criterion_8()),
        (9, "p53 skew bound", criterion_9()),
        (10, "exact periodic orbits", criterion_10()),
        (11, "multiperiodicity consistency", criterion_11(&runs)),
    ];
    let mut failed = 0;
    for (n, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {n:2} PASS  {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("criterion {n:2} FAIL  {name}: {reason}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
