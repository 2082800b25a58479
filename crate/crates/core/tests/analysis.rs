use std::f64::consts::PI;

use ratecorr::analysis::{
    chaos_scan, input_scan, sync_constraint_solve, sync_experiment, sync_family, sync_limit, FreeParam, SyncExperiment, SyncKind,
};
use ratecorr::neuron::stationary_state;
use ratecorr::{AnalyticModel, Execution, NetworkParams, NoiseSpec, Order, SimConfig, TopologySpec};

fn noise() -> NoiseSpec {
    NoiseSpec::uncorrelated([0.1, 0.1, 0.1, 0.0, 0.0])
}

#[test]
fn fully_connected_sync_point_is_perron_dominated() {
    let n = 6;
    let model = AnalyticModel::new(&TopologySpec::complete(n).unwrap(), &NetworkParams::table2(), 0.0, noise()).unwrap();
    let r = sync_limit(&model, 0, 3).unwrap();
    assert_eq!(r.kind, SyncKind::Synchronizing);
    assert_eq!(r.multiplicity, 1);
    assert_eq!(r.limit, 1.0);
    assert!(r.dominant.norm() < 1e-12);
    // The Perron projector is 11ᵀ/n.
    assert!(r.e.iter().all(|x| (x - 1.0 / n as f64).abs() < 1e-12));
}

#[test]
fn decaying_network_reports_stationary_correlation() {
    let p = NetworkParams::table1();
    let mu = stationary_state(&p).unwrap()[0];
    let model = AnalyticModel::new(&TopologySpec::circular_ladder(5).unwrap(), &p, mu, noise()).unwrap();
    let r = sync_limit(&model, 0, 1).unwrap();
    assert_eq!(r.kind, SyncKind::Stable);
    assert!((r.dominant.re - (-1.0 + p.sigmoid.d1(mu))).abs() < 1e-12);
    let late = model.correlation(0, 1, 200.0).unwrap();
    assert!((r.limit - late).abs() < 1e-9, "{} vs {late}", r.limit);
}

#[test]
fn cycle_limits_follow_the_dominant_modes() {
    let tau = 0.1;
    // Excitatory: the uniform mode grows, every pair locks in phase.
    let exc = NetworkParams { tau, weight: 40.0, input: 0.0, ..NetworkParams::table2() };
    let model = AnalyticModel::new(&TopologySpec::cycle(5).unwrap(), &exc, 0.0, noise()).unwrap();
    let r = sync_limit(&model, 0, 2).unwrap();
    assert_eq!((r.kind, r.multiplicity, r.limit), (SyncKind::Synchronizing, 1, 1.0));

    // Inhibitory: modes k = 2, 3 dominate with rate -1/τ + ΛS'(0)cos(4π/5) > 0.
    // E is the projector onto those modes, E_ij = (2/5)cos(4π(i-j)/5), so the
    // limit is cos(4π(i-j)/5).
    let inh = NetworkParams { weight: -60.0, ..exc };
    let model = AnalyticModel::new(&TopologySpec::cycle(5).unwrap(), &inh, 0.0, noise()).unwrap();
    let want_rate = -1.0 / tau + inh.weight * 0.25 * (4.0 * PI / 5.0).cos();
    for (i, j) in [(0, 1), (0, 2), (1, 4)] {
        let r = sync_limit(&model, i, j).unwrap();
        assert_eq!((r.kind, r.multiplicity), (SyncKind::Synchronizing, 2));
        assert!((r.dominant.re - want_rate).abs() < 1e-12);
        let d = (i as f64 - j as f64).abs();
        assert!((r.limit - (4.0 * PI * d / 5.0).cos()).abs() < 1e-12, "({i},{j}) {}", r.limit);
    }
}

// Independent check of a solution: stationary and marginal at the same μ.
fn assert_sync_point(p: &NetworkParams, mu: f64) {
    assert!((mu - p.tau * (p.weight * p.sigmoid.value(mu) + p.input)).abs() < 1e-8, "{p:?} μ={mu}");
    assert!((-1.0 / p.tau + p.weight * p.sigmoid.d1(mu)).abs() < 1e-7, "{p:?} μ={mu}");
}

#[test]
fn constraint_solver_for_each_free_parameter() {
    let base = NetworkParams::table2();
    for free in [FreeParam::Input, FreeParam::Tau, FreeParam::Weight] {
        let sols = sync_constraint_solve(&base, free).unwrap();
        for s in &sols {
            assert_sync_point(&s.params, s.mu);
        }
        // The table2 preset itself lies on every slice.
        assert!(sols.iter().any(|s| (s.params.tau - 0.1).abs() < 1e-9 && (s.params.weight - 40.0).abs() < 1e-7 && (s.params.input + 20.0).abs() < 1e-7), "{free:?}: {sols:?}");
    }
    // Off the family: τ = 1, Ī = -3 with Λ free has a tangency away from μ = 0.
    let off = NetworkParams { tau: 1.0, input: -3.0, ..NetworkParams::table2() };
    let sols = sync_constraint_solve(&off, FreeParam::Weight).unwrap();
    for s in &sols {
        assert_sync_point(&s.params, s.mu);
        assert!(s.mu.abs() > 1e-3);
    }
    // τΛλT_MAX = 1 < 4 leaves no input that works.
    assert!(matches!(sync_constraint_solve(&NetworkParams::table1(), FreeParam::Input), Err(ratecorr::Error::NoSolution(_))));
}

#[test]
fn family_members_sit_exactly_at_zero_rate() {
    for input in [-2.0, -20.0, -0.5] {
        let s = sync_family(input).unwrap();
        assert_eq!(s.mu, 0.0);
        assert_eq!(s.residual, 0.0);
        assert_eq!(s.a0, 0.0);
        assert_sync_point(&s.params, 0.0);
    }
    assert!(sync_family(1.0).is_err());
}

#[test]
fn chaos_scan_decreases_and_validates_bands() {
    let p = NetworkParams::table1();
    let seq = chaos_scan(100, 1..=50, 1.0, &p, [0.1; 3], Execution::Sequential).unwrap();
    assert_eq!(seq, chaos_scan(100, 1..=50, 1.0, &p, [0.1; 3], Execution::Parallel).unwrap());
    assert!(seq.windows(2).all(|w| w[1].corr <= w[0].corr + 1e-15));
    assert_eq!(seq[0].in_degree, 2);
    assert_eq!(seq[49].in_degree, 99);
    for row in &seq {
        assert!((row.corr - row.cov / row.var).abs() < 1e-12);
    }
    assert!(matches!(chaos_scan(100, [0], 1.0, &p, [0.1; 3], Execution::Sequential), Err(ratecorr::Error::BadBand(_))));
    assert!(matches!(chaos_scan(100, [51], 1.0, &p, [0.1; 3], Execution::Sequential), Err(ratecorr::Error::BadBand(_))));
}

#[test]
fn input_away_from_threshold_weakens_correlation() {
    let mut base = SimConfig::new(TopologySpec::cycle(5).unwrap(), NetworkParams::table1(), noise(), 5.0, 4000, 5, Order::Exact);
    base.dt = 0.1;
    let rows = input_scan(&base, &[-5.0, 0.0, 5.0], Execution::default()).unwrap();
    let mid = rows[1].max_abs_corr;
    for side in [rows[0].max_abs_corr, rows[2].max_abs_corr] {
        assert!(mid.value - side.value > 4.0 * (mid.stderr.powi(2) + side.stderr.powi(2)).sqrt(), "{mid:?} vs {side:?}");
    }
    assert!(rows.iter().all(|r| r.at_time > 0.0));
}

#[test]
fn fully_connected_family_synchronizes() {
    let exp = SyncExperiment {
        sizes: vec![5],
        network: NetworkParams::table2(),
        noise: noise(),
        t_max: 5.0,
        dt: 0.01,
        trials: 300,
        seed: 3,
        threshold: 0.9,
    };
    let runs = sync_experiment(&exp, Execution::default()).unwrap();
    let run = &runs[0];
    assert_eq!(run.corr.len(), run.times.len());
    let hit = run.time_to_threshold.expect("reaches 0.9");
    assert!(hit > 0.0 && hit < 5.0);
    assert!(*run.corr.last().unwrap() > 0.9);
}
