use proptest::prelude::*;
use regnet_core::attractor::{
    analyze_attractor, detect_stabilization, distance_to_discontinuity, rect_distance_to_discontinuity,
    rotation_number, simulate_orbit, AttractorReport, OrbitStatus,
};
use regnet_core::model::Network;
use regnet_core::numerics::{FlaggedInterval, Rational, Rect};
use regnet_core::partition::{complexity_trace, TraceConfig};
use regnet_core::presets;

fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

fn iterate(net: &Network, x: &[Rational], n: usize) -> Vec<Rational> {
    let mut x = x.to_vec();
    for _ in 0..n {
        x = net.evaluate_map(&x, None).unwrap();
    }
    x
}

fn check_multiperiodicity(net: &Network, report: &AttractorReport) {
    let Some(s) = &report.successor else { return };
    let c_tau = report.stable_complexity().unwrap();
    assert_eq!(s.len(), c_tau);
    assert!(s.next.iter().all(|&k| k < c_tau), "successor map leaves P^τ");
    assert!(report.orbits.len() <= c_tau);
    for (k, &tr) in s.transient.iter().enumerate() {
        assert!(tr + s.cycles[s.cycle_of[k]].len() <= c_tau);
    }
    for o in &report.orbits {
        if o.status != OrbitStatus::Ghost {
            assert_eq!(iterate(net, &o.points[0], o.period), o.points[0]);
        }
        if o.status == OrbitStatus::Verified {
            assert!(o.distance.as_ref().is_none_or(|d| d.is_positive()));
        }
    }
}

/// Threshold whose self-inhibitor orbit at `a = 1/2` has rotation close to
/// the golden mean, found by exact bisection.
fn golden_threshold(bits: usize, steps: usize) -> Rational {
    let a = q(1, 2);
    let target = (((5f64).sqrt() - 1.0) / 2.0 * steps as f64) as usize;
    let below = |t: &Rational| {
        let mut x = Rational::zero();
        let mut c = 0;
        for _ in 0..steps {
            x = if &x < t {
                c += 1;
                &(&a * &x) + &a
            } else {
                &a * &x
            };
        }
        c
    };
    let (mut lo, mut hi) = (q(1, 2), q(1, 1));
    for _ in 0..bits {
        let mid = &(&lo + &hi) / &q(2, 1);
        if below(&mid) > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

#[test]
fn toggle_switch_is_bistable() {
    let net = presets::toggle_switch(q(1, 4), q(1, 2), q(1, 2)).unwrap();
    let report = analyze_attractor(&net, &TraceConfig::new(50)).unwrap();
    assert!(report.stabilization.is_some_and(|tau| tau <= 3));
    let mut fixed: Vec<Vec<Rational>> =
        report.verified().filter(|o| o.period == 1).map(|o| o.points[0].clone()).collect();
    fixed.sort();
    assert_eq!(fixed, [vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]);
    assert!(report.orbit_distance.as_ref().unwrap().is_positive());
    assert!(report.cycle_atom_distance.as_ref().unwrap().is_positive());
    check_multiperiodicity(&net, &report);
}

#[test]
fn self_inhibitor_quarter_half() {
    let net = presets::self_inhibitor(q(1, 4), q(1, 2)).unwrap();
    let report = analyze_attractor(&net, &TraceConfig::new(50)).unwrap();
    let o = report.verified().next().unwrap();
    assert_eq!(o.period, 2);
    assert_eq!(o.slope, q(1, 16));
    assert_eq!(iterate(&net, &o.points[0], 2), o.points[0]);
    let r = rotation_number(&net, &q(0, 1), 200).unwrap();
    assert_eq!(r.exact, Some(q(1, 2)));
}

#[test]
fn constant_network_stabilizes_at_once() {
    // a = 0 and T = 0: F ≡ 0
    let net = presets::self_inhibitor(q(0, 1), q(0, 1)).unwrap();
    let report = analyze_attractor(&net, &TraceConfig::new(10)).unwrap();
    assert_eq!(report.complexities, [1, 1]);
    assert_eq!(report.stabilization, Some(1));
    assert_eq!(report.orbits.len(), 1);
    assert_eq!(report.orbits[0].points, [vec![q(0, 1)]]);
    assert_eq!(report.orbits[0].status, OrbitStatus::OnDiscontinuity);
}

#[test]
fn boundary_cases_are_flagged() {
    // T = 2/3: the 2-cycle {1/3, 2/3} touches the threshold; T = 1/3: the
    // affine fixed point is not an orbit of F
    let on = presets::self_inhibitor(q(1, 2), q(2, 3)).unwrap();
    let report = analyze_attractor(&on, &TraceConfig::new(20)).unwrap();
    assert_eq!(report.orbits[0].status, OrbitStatus::OnDiscontinuity);
    assert_eq!(report.orbit_distance, Some(q(0, 1)));
    let ghost = presets::self_inhibitor(q(1, 2), q(1, 3)).unwrap();
    let report = analyze_attractor(&ghost, &TraceConfig::new(20)).unwrap();
    assert_eq!(report.orbits[0].status, OrbitStatus::Ghost);
    assert_ne!(iterate(&ghost, &report.orbits[0].points[0], 2), report.orbits[0].points[0]);
}

#[test]
fn periods_across_thresholds() {
    // at a = 1/2 the period grows as T approaches 0
    for (tn, p) in [(1, 10), (13, 7), (123, 4), (247, 3), (500, 2)] {
        let net = presets::self_inhibitor(q(1, 2), q(tn, 1000)).unwrap();
        let report = analyze_attractor(&net, &TraceConfig::new(100)).unwrap();
        assert_eq!(report.stabilization, Some(p), "T = {tn}/1000");
        let o = report.verified().next().unwrap();
        assert_eq!(o.period, p);
        let r = rotation_number(&net, &q(0, 1), 100).unwrap();
        assert_eq!(r.exact, Some(q(1, p as i64)));
        check_multiperiodicity(&net, &report);
    }
}

#[test]
fn multiperiodicity_on_presets() {
    let nets = [
        presets::repressilator(q(1, 4), &[q(1, 2), q(1, 3), q(2, 3)]).unwrap(),
        presets::negative_2_circuit(q(1, 4), q(1, 2), q(1, 2)).unwrap(),
        presets::fig3_three_loops(q(1, 4), &Default::default()).unwrap(),
        presets::p53(q(1, 4), &Default::default()).unwrap(),
        presets::toggle_switch(q(2, 5), q(1, 3), q(3, 5)).unwrap(),
    ];
    for net in &nets {
        let report = analyze_attractor(net, &TraceConfig::new(60).max_atoms(20_000)).unwrap();
        check_multiperiodicity(net, &report);
    }
}

#[test]
fn quasiperiodic_proxy() {
    let t = golden_threshold(120, 400);
    let net = presets::self_inhibitor(q(1, 2), t).unwrap();
    // the rotation is rational with long period: no stabilization
    // before it, and C(t) strictly increasing up to it
    let short = analyze_attractor(&net, &TraceConfig::new(60)).unwrap();
    assert_eq!(short.stabilization, None);
    assert!(short.orbits.is_empty());
    let c = &short.complexities;
    assert!(c.windows(2).all(|w| w[1] > w[0]));
    // one infinite orbit: C(t) ≥ t + 1
    assert!(c.iter().enumerate().all(|(k, &ck)| ck >= k + 2));

    let long = analyze_attractor(&net, &TraceConfig::new(200)).unwrap();
    let tau = long.stabilization.unwrap();
    let o = long.verified().next().unwrap();
    assert_eq!(o.period, tau);
    let r = rotation_number(&net, &q(0, 1), 200).unwrap();
    let golden = ((5f64).sqrt() - 1.0) / 2.0;
    let exact = r.exact.unwrap();
    assert!((exact.to_f64() - golden).abs() < 1.0 / tau as f64);
    assert!(tau > 60);
    let (numer, denom) = (exact.numer().clone(), exact.denom().clone());
    assert_eq!(denom, o.period.into());
    assert!(numer > 0.into());
}

#[test]
fn rotation_estimates_settle() {
    let t = golden_threshold(120, 400);
    let net = presets::self_inhibitor(q(1, 2), t).unwrap();
    let mut prev: Option<(usize, f64)> = None;
    for n in [25, 50, 100, 200, 400] {
        let r = rotation_number(&net, &q(0, 1), n).unwrap();
        let e = r.estimate.to_f64();
        if let Some((m, p)) = prev {
            assert!((e - p).abs() <= 2.0 / m as f64, "t = {m} → {n}: {p} → {e}");
        }
        prev = Some((n, e));
    }
}

#[test]
fn single_branch_regimes() {
    // T = 0: H(−x) = 0 always and the orbit decays to 0
    let never = presets::self_inhibitor(q(1, 2), q(0, 1)).unwrap();
    assert_eq!(rotation_number(&never, &q(1, 2), 50).unwrap().estimate, q(0, 1));
    // T = 1: x stays below 1 from any start below 1
    let always = presets::self_inhibitor(q(1, 2), q(1, 1)).unwrap();
    let r = rotation_number(&always, &q(0, 1), 50).unwrap();
    assert_eq!(r.estimate, q(1, 1));
}

#[test]
fn distances() {
    let net = presets::negative_2_circuit(q(1, 4), q(1, 2), q(1, 3)).unwrap();
    assert_eq!(distance_to_discontinuity(&net, &[vec![q(1, 2), q(0, 1)]]), Some(q(0, 1)));
    assert_eq!(distance_to_discontinuity(&net, &[vec![q(0, 1), q(1, 3)]]), Some(q(0, 1)));
    assert_eq!(distance_to_discontinuity(&net, &[vec![q(1, 10), q(9, 10)]]), Some(q(2, 5)));
    let side = |lo, hi| FlaggedInterval::new(lo, hi, true, false).unwrap();
    let away = Rect::new(vec![side(q(3, 5), q(4, 5)), side(q(1, 2), q(3, 5))]);
    assert_eq!(rect_distance_to_discontinuity(&net, std::slice::from_ref(&away)), Some(q(1, 10)));
    let across = Rect::new(vec![side(q(0, 1), q(1, 5)), side(q(1, 5), q(2, 5))]);
    assert_eq!(rect_distance_to_discontinuity(&net, &[away, across]), Some(q(0, 1)));
}

#[test]
fn stabilization_from_engine() {
    let net = presets::toggle_switch(q(1, 4), q(1, 2), q(1, 2)).unwrap();
    let trace = complexity_trace(&net, &TraceConfig::new(10)).unwrap();
    assert_eq!(detect_stabilization(&trace.complexities()), Some(1));
    let net = presets::self_inhibitor(q(19, 40), q(1, 8)).unwrap();
    let trace = complexity_trace(&net, &TraceConfig::new(11)).unwrap();
    assert_eq!(detect_stabilization(&trace.complexities()), None);
    let trace = complexity_trace(&net, &TraceConfig::new(12)).unwrap();
    assert_eq!(detect_stabilization(&trace.complexities()), Some(11));
}

fn point_strategy(d: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec((0i64..=1000).prop_map(|n| q(n, 1000)), d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn orbit_itinerary_matches_engine(x in point_strategy(2), t in 1usize..8) {
        let net = presets::negative_2_circuit(q(19, 40), q(1, 10), q(1, 10)).unwrap();
        let trace = complexity_trace(&net, &TraceConfig::new(t).keep_history(true)).unwrap();
        let lineage = trace.lineage.as_ref().unwrap();
        let orbit = simulate_orbit(&net, &x, t).unwrap();
        let gen = &trace.history[t - 1];
        let matching: Vec<usize> =
            (0..gen.len()).filter(|&k| lineage.itinerary(t, k) == orbit.itinerary).collect();
        prop_assert_eq!(matching.len(), 1);
        prop_assert!(gen.nodes[matching[0]].rect.contains(&orbit.points[t - 1]));
    }

    #[test]
    fn shared_itineraries_contract_at_rate_a(
        x in point_strategy(2),
        shift in proptest::collection::vec(-20i64..=20, 2),
        t in 1usize..12,
    ) {
        let net = presets::toggle_switch(q(1, 3), q(1, 2), q(2, 5)).unwrap();
        let y: Vec<Rational> = x.iter().zip(&shift).map(|(v, &s)| v + &q(s, 100_000)).collect();
        prop_assume!(y.iter().all(|v| *v >= 0 && *v <= 1));
        let ox = simulate_orbit(&net, &x, t + 1).unwrap();
        let oy = simulate_orbit(&net, &y, t + 1).unwrap();
        prop_assume!(ox.itinerary[..t] == oy.itinerary[..t]);
        let sup = |u: &[Rational], v: &[Rational]| u.iter().zip(v).map(|(a, b)| (a - b).abs()).max().unwrap();
        prop_assert_eq!(sup(&ox.points[t], &oy.points[t]), &q(1, 3).pow(t as u32) * &sup(&x, &y));
    }
}
