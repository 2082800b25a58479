//! One function per subcommand, each turning a resolved config into tables.

use ratecorr::analysis::{chaos_mc_check, chaos_scan, input_scan, sync_constraint_solve, sync_experiment, sync_family, sync_limit, SyncExperiment, SyncSolution};
use ratecorr::convergence::{arctangent_radius, sigmoid_radius};
use ratecorr::neuron::{select_branch, stationary_state};
use ratecorr::simulator::run;
use ratecorr::spectral::spectrum;
use ratecorr::{AnalyticModel, EnsembleStats, Execution, Order, Result, SimConfig, TopologySpec};

use crate::config::{AnalyticCovConfig, ChaosScanConfig, CompareConfig, InputScanConfig, RadiusConfig, SpectrumConfig, SyncSolveConfig};
use crate::output::{int, num, Table};

pub fn spectrum_table(cfg: &SpectrumConfig) -> Result<Vec<Table>> {
    let s = spectrum(&cfg.topology, cfg.weight)?;
    let mut t = Table::new("spectrum.csv", &["k", "re", "im"]);
    for (k, e) in s.eigenvalues.iter().enumerate() {
        t.push(vec![int(k), num(e.re), num(e.im)]);
    }
    Ok(vec![t])
}

pub fn analytic_cov(cfg: &AnalyticCovConfig) -> Result<Vec<Table>> {
    let mu = select_branch(&stationary_state(&cfg.network)?, cfg.branch)?;
    let model = AnalyticModel::new(&cfg.topology, &cfg.network, mu, cfg.noise)?;
    let times = grid(cfg.t_max, cfg.dt);
    let report = model.report(&cfg.pairs, &times)?;
    let mut t = Table::new(
        "analytic.csv",
        &["t", "i", "j", "cov", "var_i", "var_j", "corr", "term_noise", "term_initial", "term_weights"],
    );
    t.notes.push(format!("mu={}", num(mu)));
    for r in &report.rows {
        t.push(vec![
            num(r.t),
            int(r.i),
            int(r.j),
            num(r.cov),
            num(r.var_i),
            num(r.var_j),
            num(r.corr),
            num(r.terms[0]),
            num(r.terms[1]),
            num(r.terms[2]),
        ]);
    }
    Ok(vec![t])
}

fn grid(t_max: f64, dt: f64) -> Vec<f64> {
    let steps = (t_max / dt).round() as usize;
    (0..=steps).map(|k| k as f64 * dt).collect()
}

pub fn simulate(cfg: &SimConfig) -> Result<Vec<Table>> {
    let stats = run(cfg, Execution::default())?;
    let mut t = Table::new(
        "simulate.csv",
        &["t", "i", "j", "mean_i", "mean_j", "var_i", "var_j", "cov", "cov_stderr", "corr", "corr_stderr"],
    );
    for s in 0..stats.time_points() {
        for (p, &(i, j)) in stats.pairs.iter().enumerate() {
            t.push(vec![
                num(stats.times[s]),
                int(i),
                int(j),
                num(stats.mean(s, i)),
                num(stats.mean(s, j)),
                num(stats.var(s, i)),
                num(stats.var(s, j)),
                num(stats.cov(s, p)),
                num(stats.cov_stderr(s, p)),
                num(stats.corr(s, p)),
                num(stats.corr_stderr(s, p)),
            ]);
        }
    }
    Ok(vec![t])
}

/// Potentials, variance of node 0, covariance and correlation of pair (0, 1).
pub fn compare(cfg: &CompareConfig) -> Result<Vec<Table>> {
    let orders = [Order::Exact, Order::Order1, Order::Order2];
    let runs: Vec<EnsembleStats> = orders.iter().map(|&o| run(&cfg.sim(o), Execution::default())).collect::<Result<_>>()?;
    let base = cfg.sim(Order::Order1);
    let mu = base.stationary()?;
    // The analytic curves need an exchange-invariant topology.
    let model = match cfg.topology.in_degree() {
        Some(_) => Some(AnalyticModel::new(&cfg.topology, &cfg.network, mu, cfg.noise)?),
        None => None,
    };
    let analytic = |f: &dyn Fn(&AnalyticModel) -> Result<f64>| -> Result<f64> { model.as_ref().map_or(Ok(f64::NAN), f) };

    let mut pot = Table::new(
        "potentials.csv",
        &["t", "exact_mean", "order1_mean", "order2_mean", "exact_trial0", "order1_trial0", "order2_trial0", "mu"],
    );
    let with_err = ["t", "exact", "exact_stderr", "order1", "order1_stderr", "order2", "order2_stderr", "analytic"];
    let mut var = Table::new("var.csv", &with_err);
    let mut cov = Table::new("cov.csv", &with_err);
    let mut corr = Table::new("corr.csv", &with_err);
    let steps = runs[0].time_points();
    for s in 0..steps {
        let t = runs[0].times[s];
        let mut row = vec![num(t)];
        row.extend(runs.iter().map(|r| num(r.mean(s, 0))));
        row.extend(runs.iter().map(|r| num(r.first_trajectory.as_ref().expect("kept")[s][0])));
        row.push(num(mu));
        pot.push(row);

        let mut v = vec![num(t)];
        let mut c = vec![num(t)];
        let mut r = vec![num(t)];
        for st in &runs {
            v.extend([num(st.var(s, 0)), num(st.var_stderr(s, 0))]);
            c.extend([num(st.cov(s, 0)), num(st.cov_stderr(s, 0))]);
            r.extend([num(st.corr(s, 0)), num(st.corr_stderr(s, 0))]);
        }
        v.push(num(analytic(&|m| m.variance(0, t))?));
        c.push(num(analytic(&|m| m.covariance(0, 1, t))?));
        r.push(num(analytic(&|m| Ok(m.correlation(0, 1, t).unwrap_or(f64::NAN)))?));
        var.push(v);
        cov.push(c);
        corr.push(r);
    }
    Ok(vec![pot, var, cov, corr])
}

pub fn chaos(cfg: &ChaosScanConfig) -> Result<Vec<Table>> {
    let nus = cfg.nus.clone().unwrap_or_else(|| (1..=cfg.n / 2).collect());
    let rows = chaos_scan(cfg.n, nus, cfg.t, &cfg.network, cfg.sigma, Execution::default())?;
    let mut t = Table::new("chaos.csv", &["nu", "in_degree", "cov", "var", "corr", "mc_corr", "mc_stderr"]);
    for r in rows {
        let (mc, se) = if cfg.mc_nus.contains(&r.nu) {
            let (_, est) = chaos_mc_check(cfg.n, r.nu, cfg.t, &cfg.network, cfg.sigma, cfg.trials, cfg.dt, cfg.seed)?;
            (est.value, est.stderr)
        } else {
            (f64::NAN, f64::NAN)
        };
        t.push(vec![int(r.nu), int(r.in_degree), num(r.cov), num(r.var), num(r.corr), num(mc), num(se)]);
    }
    Ok(vec![t])
}

pub fn inputs(cfg: &InputScanConfig) -> Result<Vec<Table>> {
    let rows = input_scan(&cfg.sim(), &cfg.inputs, Execution::default())?;
    let mut t = Table::new("input_scan.csv", &["input", "max_abs_corr", "stderr", "at_time"]);
    for r in rows {
        t.push(vec![num(r.input), num(r.max_abs_corr.value), num(r.max_abs_corr.stderr), num(r.at_time)]);
    }
    Ok(vec![t])
}

pub fn sync_solve(cfg: &SyncSolveConfig) -> Result<Vec<Table>> {
    let mut t = Table::new("sync_solve.csv", &["source", "tau", "weight", "input", "mu", "branch", "residual", "a0"]);
    let mut push = |source: &str, s: &SyncSolution| {
        t.push(vec![
            source.to_string(),
            num(s.params.tau),
            num(s.params.weight),
            num(s.params.input),
            num(s.mu),
            int(s.branch),
            num(s.residual),
            num(s.a0),
        ]);
    };
    if let Some(free) = cfg.free {
        let name = serde_json::to_value(free).expect("serializes");
        for s in sync_constraint_solve(&cfg.network, free)? {
            push(&format!("free_{}", name.as_str().unwrap_or("?")), &s);
        }
    }
    for &input in &cfg.family {
        push("family", &sync_family(input)?);
    }
    Ok(vec![t])
}

pub fn sync_run(cfg: &SyncExperiment) -> Result<Vec<Table>> {
    let runs = sync_experiment(cfg, Execution::default())?;
    let mu = select_branch(&stationary_state(&cfg.network)?, None)?;
    let mut t = Table::new("sync.csv", &["t", "n", "corr", "corr_stderr"]);
    for r in &runs {
        let model = AnalyticModel::new(&TopologySpec::complete(r.n)?, &cfg.network, mu, cfg.noise)?;
        let regime = sync_limit(&model, 0, 1)?;
        let ttt = r.time_to_threshold.map_or_else(|| "none".to_string(), num);
        t.notes.push(format!(
            "n={} kind={:?} dominant={} multiplicity={} limit={} time_to_threshold={}",
            r.n,
            regime.kind,
            num(regime.dominant.re),
            regime.multiplicity,
            num(regime.limit),
            ttt
        ));
    }
    for r in &runs {
        for (k, &time) in r.times.iter().enumerate() {
            t.push(vec![num(time), int(r.n), num(r.corr[k]), num(r.corr_stderr[k])]);
        }
    }
    Ok(vec![t])
}

pub fn radius(cfg: &RadiusConfig) -> Result<Vec<Table>> {
    let mut t = Table::new("radius.csv", &["slope", "x0", "sigmoid", "arctangent"]);
    for &slope in &cfg.slopes {
        for &x0 in &cfg.x0 {
            let r = sigmoid_radius(x0, slope, cfg.n_max)?;
            t.push(vec![num(slope), num(x0), num(r), num(arctangent_radius(x0, slope))]);
        }
    }
    Ok(vec![t])
}
