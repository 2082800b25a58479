//! The headline experiments: correlation against input, against the number of
//! connections, and stochastic synchronization.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{circulant_chaos_correlation, circulant_chaos_covariance, AnalyticModel, NoiseSpec};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::neuron::{stationary_state, NetworkParams, SigmoidParams};
use crate::simulator::{run, Estimate, Order, SimConfig};
use crate::topology::TopologySpec;

/// One row of a chaos scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaosRow {
    pub nu: usize,
    pub in_degree: usize,
    pub cov: f64,
    pub var: f64,
    pub corr: f64,
}

/// Correlation of neurons 0 and 1 at time `t` on circulant bands of half-width
/// `nus` over `n` nodes, with all noise correlations zero.
pub fn chaos_scan(n: usize, nus: impl IntoIterator<Item = usize>, t: f64, params: &NetworkParams, sigma: [f64; 3], exec: Execution) -> Result<Vec<ChaosRow>> {
    let mu = crate::neuron::select_branch(&stationary_state(params)?, None)?;
    let nus: Vec<usize> = nus.into_iter().collect();
    if let Some(&bad) = nus.iter().find(|&&nu| nu == 0 || nu > n / 2) {
        return Err(Error::BadBand(format!("half-width {bad} outside 1..={}", n / 2)));
    }
    exec.map(nus.len(), |k| {
        let nu = nus[k];
        let cov = circulant_chaos_covariance(n, nu, 0, 1, t, params, mu, sigma);
        let var = circulant_chaos_covariance(n, nu, 0, 0, t, params, mu, sigma);
        let corr = circulant_chaos_correlation(n, nu, 0, 1, t, params, mu, sigma)?;
        Ok(ChaosRow { nu, in_degree: if nu == n / 2 { n - 1 } else { 2 * nu }, cov, var, corr })
    })
    .into_iter()
    .collect()
}

/// Analytic chaos-scan correlation next to a first-order Monte Carlo estimate at the same time.
pub fn chaos_mc_check(n: usize, nu: usize, t: f64, params: &NetworkParams, sigma: [f64; 3], trials: usize, dt: f64, seed: u64) -> Result<(f64, Estimate)> {
    let mu = crate::neuron::select_branch(&stationary_state(params)?, None)?;
    let analytic = circulant_chaos_correlation(n, nu, 0, 1, t, params, mu, sigma)?;
    let noise = NoiseSpec::uncorrelated([sigma[0], sigma[1], sigma[2], 0.0, 0.0]);
    let mut cfg = SimConfig::new(TopologySpec::circulant_band(n, nu)?, *params, noise, t, trials, seed, Order::Order1);
    cfg.dt = dt;
    let stats = run(&cfg, Execution::default())?;
    let last = stats.time_points() - 1;
    Ok((analytic, Estimate { value: stats.corr(last, 0), stderr: stats.corr_stderr(last, 0) }))
}

/// Whether the dominant mode grows or all modes decay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyncKind {
    /// Dominant eigenvalue with non-negative real part.
    Synchronizing,
    /// Every mode decays; the limit is the stationary correlation.
    Stable,
}

/// Asymptotic correlation structure set by the dominant eigenvalue of A.
#[derive(Debug, Clone, PartialEq)]
pub struct SyncRegime {
    pub kind: SyncKind,
    pub dominant: Complex64,
    pub multiplicity: usize,
    /// `E = Σ_k Q_{·,r+k} B_{r+k,·}` over the dominant modes (real part).
    pub e: DMatrix<f64>,
    /// Limiting correlation of the requested pair.
    pub limit: f64,
    /// Set when a dominant eigenvector has a zero component at the pair.
    pub degenerate: bool,
}

/// Relative tolerance for grouping eigenvalues equal to the dominant one.
pub const MULTIPLICITY_TOL: f64 = 1e-9;

/// Rates with real part above this count as non-negative.
pub const GROWTH_TOL: f64 = 1e-9;

/// Dominant-mode analysis of the linearized network for the pair (i, j).
pub fn sync_limit(model: &AnalyticModel, i: usize, j: usize) -> Result<SyncRegime> {
    let prop = model.propagator();
    let rates = prop.rates();
    let dominant = *rates
        .iter()
        .max_by(|a, b| a.re.total_cmp(&b.re))
        .ok_or_else(|| Error::InvalidParameter("empty spectrum".into()))?;
    let tol = MULTIPLICITY_TOL * dominant.norm().max(1.0);
    let idx: Vec<usize> = (0..rates.len()).filter(|&k| (rates[k] - dominant).norm() <= tol).collect();
    let (q, b) = prop.spectrum().basis_matrices();
    let n = prop.n();
    let e_c = DMatrix::from_fn(n, n, |p, s| idx.iter().map(|&k| q[(p, k)] * b[(k, s)]).sum::<Complex64>());
    let e = e_c.map(|z| z.re);
    let degenerate = idx.iter().all(|&k| q[(i, k)].norm() < 1e-14 || q[(j, k)].norm() < 1e-14);
    let kind = if dominant.re >= -GROWTH_TOL { SyncKind::Synchronizing } else { SyncKind::Stable };
    let limit = match kind {
        SyncKind::Synchronizing if idx.len() == 1 => {
            // Σ_k E_ik E_jk / √(Σ E_ik² Σ E_jk²) collapses to the sign of Q_ir Q_jr.
            let p = q[(i, idx[0])] * q[(j, idx[0])];
            if degenerate {
                f64::NAN
            } else if p.re >= 0.0 {
                1.0
            } else {
                -1.0
            }
        }
        SyncKind::Synchronizing => {
            let dot = |a: usize, c: usize| (0..n).map(|k| e[(a, k)] * e[(c, k)]).sum::<f64>();
            dot(i, j) / (dot(i, i) * dot(j, j)).sqrt()
        }
        SyncKind::Stable => {
            let t = 50.0 / dominant.re.abs();
            model.correlation(i, j, t)?
        }
    };
    Ok(SyncRegime { kind, dominant, multiplicity: idx.len(), e, limit, degenerate })
}

/// Parameter left free in the synchronization constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeParam {
    Tau,
    Weight,
    Input,
}

/// Fully connected parameter set with a zero dominant rate at a stationary state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyncSolution {
    pub params: NetworkParams,
    pub mu: f64,
    /// 0 for the `+` root of S(μ), 1 for the `-` root.
    pub branch: usize,
    /// `s - S(τ(Λs + Ī))` at the chosen root.
    pub residual: f64,
    /// `-1/τ + ΛS'(μ)`.
    pub a0: f64,
}

/// S(μ) values where ΛS'(μ) = 1/τ, or `None` when τΛλT_MAX < 4.
pub fn sync_rates(tau: f64, weight: f64, sigmoid: &SigmoidParams) -> Option<[f64; 2]> {
    let prod = tau * weight * sigmoid.slope * sigmoid.t_max;
    if !(prod >= 4.0) {
        return None;
    }
    let root = (1.0 - 4.0 / prod).max(0.0).sqrt();
    Some([sigmoid.t_max * (1.0 + root) / 2.0, sigmoid.t_max * (1.0 - root) / 2.0])
}

/// Residual of the synchronization constraint on `branch` (0: `+`, 1: `-`).
pub fn sync_residual(params: &NetworkParams, branch: usize) -> Option<f64> {
    let s = sync_rates(params.tau, params.weight, &params.sigmoid)?[branch];
    let mu = params.tau * (params.weight * s + params.input);
    Some(s - params.sigmoid.value(mu))
}

fn solution(params: NetworkParams, branch: usize) -> Option<SyncSolution> {
    let s = sync_rates(params.tau, params.weight, &params.sigmoid)?[branch];
    let mu = params.tau * (params.weight * s + params.input);
    Some(SyncSolution {
        params,
        mu,
        branch,
        residual: s - params.sigmoid.value(mu),
        a0: -1.0 / params.tau + params.weight * params.sigmoid.d1(mu),
    })
}

/// Accepted constraint residual.
pub const SYNC_RESIDUAL_TOL: f64 = 1e-10;

/// Solve the synchronization constraint for the free parameter; the other two
/// are taken from `base`.
pub fn sync_constraint_solve(base: &NetworkParams, free: FreeParam) -> Result<Vec<SyncSolution>> {
    base.sigmoid.validate()?;
    let sg = base.sigmoid;
    let mut out: Vec<SyncSolution> = Vec::new();
    match free {
        FreeParam::Input => {
            let rates = sync_rates(base.tau, base.weight, &sg)
                .ok_or_else(|| Error::NoSolution(format!("τΛλT_MAX = {} < 4", base.tau * base.weight * sg.slope * sg.t_max)))?;
            for (branch, &s) in rates.iter().enumerate() {
                let mu = sg.threshold + (s / (sg.t_max - s)).ln() / sg.slope;
                let input = mu / base.tau - base.weight * s;
                out.extend(solution(NetworkParams { input, ..*base }, branch));
            }
        }
        FreeParam::Tau | FreeParam::Weight => {
            let known = if free == FreeParam::Tau { base.weight } else { base.tau };
            if !(known > 0.0) {
                return Err(Error::NoSolution("τΛ must be positive".into()));
            }
            let lo = 4.0 / (known * sg.slope * sg.t_max);
            let with = |x: f64| match free {
                FreeParam::Tau => NetworkParams { tau: x, ..*base },
                _ => NetworkParams { weight: x, ..*base },
            };
            for branch in 0..2 {
                let r = |x: f64| sync_residual(&with(x), branch).unwrap_or(f64::NAN);
                for x in scan_roots(&r, lo, lo * 1e6, 4000) {
                    out.extend(solution(with(x), branch));
                }
            }
        }
    }
    out.retain(|s| s.residual.abs() <= SYNC_RESIDUAL_TOL);
    out.dedup_by(|a, b| (a.mu - b.mu).abs() < 1e-12 && a.params == b.params);
    if out.is_empty() {
        return Err(Error::NoSolution(format!("no parameter set satisfies the constraint with {free:?} free")));
    }
    Ok(out)
}

// Roots of f on a log grid over [lo, hi]: exact zeros and bisected sign changes.
fn scan_roots(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let xs: Vec<f64> = (0..=n).map(|k| lo * (hi / lo).powf(k as f64 / n as f64)).collect();
    let xs: Vec<f64> = std::iter::once(lo).chain(xs.into_iter().skip(1)).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for k in 0..xs.len() {
        if fs[k].abs() <= 1e-14 {
            roots.push(xs[k]);
            continue;
        }
        if k + 1 < xs.len() && fs[k + 1].abs() > 1e-14 && fs[k].signum() != fs[k + 1].signum() {
            let (mut a, mut b, fa) = (xs[k], xs[k + 1], fs[k]);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if f(m).signum() == fa.signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
    }
    roots
}

/// Closed family λ = T_MAX = 1, V_T = 0, Λ = -2Ī, τ = -2/Ī with μ = 0.
pub fn sync_family(input: f64) -> Result<SyncSolution> {
    if !(input < 0.0) {
        return Err(Error::NoSolution(format!("the family needs Ī < 0, got {input}")));
    }
    let params = NetworkParams { tau: -2.0 / input, weight: -2.0 * input, input, sigmoid: SigmoidParams::default() };
    Ok(SyncSolution {
        params,
        mu: 0.0,
        branch: 0,
        residual: sync_residual(&params, 0).expect("discriminant is zero on the family"),
        a0: -1.0 / params.tau + params.weight * params.sigmoid.d1(0.0),
    })
}

/// Settings of a synchronization run shared by every network size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyncExperiment {
    pub sizes: Vec<usize>,
    pub network: NetworkParams,
    pub noise: NoiseSpec,
    pub t_max: f64,
    pub dt: f64,
    pub trials: usize,
    pub seed: u64,
    /// Reporting threshold for the time to synchronize.
    pub threshold: f64,
}

/// Correlation curve of neurons 0 and 1 for one network size.
#[derive(Debug, Clone, PartialEq)]
pub struct SyncRun {
    pub n: usize,
    pub times: Vec<f64>,
    pub corr: Vec<f64>,
    pub corr_stderr: Vec<f64>,
    /// First time the correlation reaches the threshold.
    pub time_to_threshold: Option<f64>,
}

/// Exact-dynamics ensembles on fully connected networks of each size.
pub fn sync_experiment(exp: &SyncExperiment, exec: Execution) -> Result<Vec<SyncRun>> {
    exp.sizes
        .iter()
        .map(|&n| {
            let mut cfg = SimConfig::new(TopologySpec::complete(n)?, exp.network, exp.noise, exp.t_max, exp.trials, exp.seed, Order::Exact);
            cfg.dt = exp.dt;
            let stats = run(&cfg, exec)?;
            let last = stats.time_points() - 1;
            let (vi, vj) = (stats.var(last, 0), stats.var(last, 1));
            crate::analytic::pearson(stats.cov(last, 0), vi, vj)?;
            let corr: Vec<f64> = (0..stats.time_points()).map(|s| stats.corr(s, 0)).collect();
            let corr_stderr = (0..stats.time_points()).map(|s| stats.corr_stderr(s, 0)).collect();
            let time_to_threshold = corr.iter().position(|&c| c >= exp.threshold).map(|s| stats.times[s]);
            Ok(SyncRun { n, times: stats.times.clone(), corr, corr_stderr, time_to_threshold })
        })
        .collect()
}

/// Largest |corr(0,1)| over t > 0 for one input value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputScanRow {
    pub input: f64,
    pub max_abs_corr: Estimate,
    pub at_time: f64,
}

/// Exact-dynamics ensembles with the baseline input replaced by each value.
pub fn input_scan(base: &SimConfig, inputs: &[f64], exec: Execution) -> Result<Vec<InputScanRow>> {
    let pair = base.pairs.first().copied().unwrap_or((0, 1));
    inputs
        .iter()
        .map(|&input| {
            let mut cfg = base.clone();
            cfg.network.input = input;
            cfg.pairs = vec![pair];
            let stats = run(&cfg, exec)?;
            let (step, value) = (1..stats.time_points())
                .map(|s| (s, stats.corr(s, 0).abs()))
                .filter(|(_, c)| c.is_finite())
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .ok_or(Error::DegenerateVariance { var_i: 0.0, var_j: 0.0 })?;
            Ok(InputScanRow {
                input,
                max_abs_corr: Estimate { value, stderr: stats.corr_stderr(step, 0) },
                at_time: stats.times[step],
            })
        })
        .collect()
}
