use cacheroute::config::{PathKind, ScenarioFile};
use cacheroute::sim::{analytic_optimum, compare, replicate, run, run_with, PolicyKind, RequestRecord, Served};
use cacheroute::Error;

fn small(kind: PolicyKind, seed: u64) -> ScenarioFile {
    let mut f = ScenarioFile::with_seed(seed);
    f.catalog.files = 200;
    f.policy.cache_size = 20;
    f.arrivals = 50_000;
    f.window = 5_000;
    f.policy.kind = kind.name().into();
    f
}

fn records(f: &ScenarioFile) -> Vec<RequestRecord> {
    let mut out = Vec::new();
    run_with(&f.to_scenario().unwrap(), |r| out.push(*r)).unwrap();
    out
}

#[test]
fn full_static_cache_costs_exactly_the_hit_delay() {
    let mut f = small(PolicyKind::Optimal, 1);
    f.policy.cache_size = 200;
    f.delays.hit = cacheroute::config::PerUser::Each(vec![1.0, 2.0, 1.5, 1.0, 3.0]);
    let s = f.to_scenario().unwrap();
    let report = run(&s).unwrap();
    assert_eq!(report.counts.hits, s.arrivals);
    let expected: f64 = records(&f).iter().map(|r| s.delays.hit(r.user)).sum();
    assert_eq!(report.total_delay, expected);
}

#[test]
fn identical_seeds_give_identical_records() {
    for kind in PolicyKind::ALL {
        let mut f = small(kind, 9);
        f.arrivals = 20_000;
        if matches!(kind, PolicyKind::TwoLru | PolicyKind::AlphaTwoLru) {
            f.path.model = PathKind::Mm1;
            f.path.service_rate = 2.0;
        }
        assert_eq!(records(&f), records(&f), "{kind}");
    }
}

#[test]
fn policy_choice_does_not_shift_the_workload() {
    let a = records(&small(PolicyKind::Lru, 4));
    let b = records(&small(PolicyKind::Dcr, 4));
    assert!(a.iter().zip(&b).all(|(x, y)| x.time == y.time && x.user == y.user && x.file == y.file));
}

#[test]
fn conservation_and_delay_classes() {
    for kind in PolicyKind::ALL {
        let mut f = small(kind, 2);
        f.delays.uncached = cacheroute::config::PerUser::All(5.0);
        let s = f.to_scenario().unwrap();
        let mut recs = Vec::new();
        let report = run_with(&s, |r| recs.push(*r)).unwrap();
        let c = report.counts;
        assert_eq!(c.total(), s.arrivals, "{kind}");
        assert_eq!(report.windows.last().unwrap().cumulative_counts, c);
        for r in &recs {
            let expected = match r.served {
                Served::Hit => s.delays.hit(r.user),
                Served::Miss => s.delays.miss(r.user),
                Served::Deflected | Served::Uncached => s.delays.uncached(r.user),
            };
            assert_eq!(r.delay, expected, "{kind}");
        }
        let sum: f64 = recs.iter().map(|r| r.delay).sum();
        assert_eq!(report.total_delay, sum);
        assert_eq!(report.mean_delay(), sum / s.arrivals as f64);
    }
}

#[test]
fn queue_sojourns_are_at_least_zero_and_windows_add_up() {
    let mut f = small(PolicyKind::Optimal, 3);
    f.path.model = PathKind::Mm1;
    let s = f.to_scenario().unwrap();
    let mut queued = Vec::new();
    let report = run_with(&s, |r| {
        if r.served == Served::Uncached {
            queued.push(r.delay)
        }
    })
    .unwrap();
    assert!(!queued.is_empty() && queued.iter().all(|&d| d > 0.0));
    let total: u64 = report.windows.iter().map(|w| w.window_arrivals).sum();
    assert_eq!(total, s.arrivals);
    assert_eq!(report.windows.len(), 10);
}

#[test]
fn unstable_queue_aborts_with_a_diagnostic() {
    let mut f = small(PolicyKind::TwoLru, 5);
    f.path.model = PathKind::Mm1;
    f.path.service_rate = 0.05;
    f.path.max_backlog = 500.0;
    match run(&f.to_scenario().unwrap()) {
        Err(Error::Aborted(msg)) => assert!(msg.contains("unstable"), "{msg}"),
        other => panic!("expected abort, got {other:?}"),
    }
}

#[test]
fn optimized_routing_rejects_a_congested_path() {
    let mut f = small(PolicyKind::OptimizedRouting, 1);
    f.path.model = PathKind::Mm1;
    assert!(f.to_scenario().is_err());
}

#[test]
fn optimal_tracks_the_analytic_optimum() {
    let mut f = small(PolicyKind::Optimal, 11);
    f.arrivals = 400_000;
    let s = f.to_scenario().unwrap();
    let sim = run(&s).unwrap().mean_delay();
    let exact = analytic_optimum(&s).unwrap();
    assert!((sim - exact).abs() / exact < 0.01, "{sim} vs {exact}");
}

#[test]
fn optimal_delay_does_not_increase_with_cache_size() {
    let mut last = f64::INFINITY;
    for c in [0, 10, 50, 100, 200] {
        let mut f = small(PolicyKind::Optimal, 1);
        f.policy.cache_size = c;
        let d = analytic_optimum(&f.to_scenario().unwrap()).unwrap();
        assert!(d <= last + 1e-12);
        last = d;
    }
}

#[test]
fn lru_is_worse_than_optimal_at_small_caches() {
    let scen: Vec<_> = [PolicyKind::Lru, PolicyKind::Optimal]
        .iter()
        .map(|&k| small(k, 6).to_scenario().unwrap())
        .collect();
    let r = compare(&scen, 4).unwrap();
    assert!(r[0].mean() > r[1].mean() + 3.0 * r[0].std_error().hypot(r[1].std_error()));
}

#[test]
fn replications_are_reproducible_and_distinct() {
    let s = small(PolicyKind::Lru, 8).to_scenario().unwrap();
    let a = replicate(&s, 3).unwrap();
    let b = replicate(&s, 3).unwrap();
    assert_eq!(a, b);
    assert!(a.runs[0] != a.runs[1]);
    assert!(a.std_error() > 0.0);
}

#[test]
fn compare_rejects_different_workloads() {
    let a = small(PolicyKind::Lru, 1).to_scenario().unwrap();
    let mut g = small(PolicyKind::Optimal, 1);
    g.catalog.zipf_skew = 1.0;
    let b = g.to_scenario().unwrap();
    assert!(compare(&[a.clone(), b], 2).is_err());
    let mut c = small(PolicyKind::Optimal, 1);
    c.policy.cache_size = 40;
    assert!(compare(&[a, c.to_scenario().unwrap()], 2).is_ok());
}
