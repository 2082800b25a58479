//! Seeded Euler–Maruyama ensembles of the exact dynamics and of the first- and
//! second-order perturbative systems.
//!
//! Every trial owns a ChaCha stream selected by `(seed, trial index)` and draws
//! its randomness in a fixed order: V(0), then W, then one Brownian increment
//! per step. The three orders consume identical draws, so for a given config
//! they are driven by the same noise realization.

pub mod sampling;
pub mod stats;

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::NoiseSpec;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::neuron::{select_branch, stationary_state, NetworkParams};
use crate::topology::{realize_with, TopologySpec, WeightedAdjacency};

pub use sampling::{
    sample_brownian_increments, sample_initial_conditions, sample_weight_perturbation, EquicorrelatedSampler,
};
pub use stats::{estimate_higher_order, estimate_higher_order_with_error, Accumulator, EnsembleStats, Estimate};

/// Potentials beyond this magnitude abort the run.
pub const BLOWUP: f64 = 1e6;

/// Trials per work unit. Fixed so that results do not depend on thread count.
pub const CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    Exact,
    Order1,
    Order2,
}

/// Time-dependent weight perturbation Z(t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ZDrive {
    #[default]
    #[serde(rename = "zero")]
    Zero,
    /// Z(t) = e^{-t} J̄.
    #[serde(rename = "exp_decay_J")]
    ExpDecayJ,
}

/// External input perturbation H(t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HDrive {
    #[default]
    Zero,
    /// H(t) = sin(2πt) on every neuron.
    SineUniform,
}

impl ZDrive {
    /// Scalar z(t) with Z(t) = z(t) J̄.
    pub fn factor(self, t: f64) -> f64 {
        match self {
            ZDrive::Zero => 0.0,
            ZDrive::ExpDecayJ => (-t).exp(),
        }
    }
}

impl HDrive {
    pub fn value(self, t: f64) -> f64 {
        match self {
            HDrive::Zero => 0.0,
            HDrive::SineUniform => (2.0 * PI * t).sin(),
        }
    }
}

fn default_dt() -> f64 {
    0.1
}

/// Everything needed to reproduce an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub topology: TopologySpec,
    #[serde(default)]
    pub allow_irregular: bool,
    pub network: NetworkParams,
    pub noise: NoiseSpec,
    pub t_max: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub trials: usize,
    pub seed: u64,
    pub order: Order,
    #[serde(default)]
    pub z: ZDrive,
    #[serde(default)]
    pub h: HDrive,
    /// Index into the sorted stationary states; required when there are several.
    #[serde(default)]
    pub branch: Option<usize>,
    /// Pairs whose covariance and correlation are tracked.
    #[serde(default)]
    pub pairs: Vec<(usize, usize)>,
    /// Node tuples for higher-order correlations.
    #[serde(default)]
    pub tuples: Vec<Vec<usize>>,
    /// Keep the potentials of trial 0.
    #[serde(default)]
    pub keep_trajectory: bool,
}

impl SimConfig {
    /// Config with Euler step 0.1, tracking pair (0, 1), no drives.
    pub fn new(topology: TopologySpec, network: NetworkParams, noise: NoiseSpec, t_max: f64, trials: usize, seed: u64, order: Order) -> Self {
        SimConfig {
            topology,
            allow_irregular: false,
            network,
            noise,
            t_max,
            dt: default_dt(),
            trials,
            seed,
            order,
            z: ZDrive::Zero,
            h: HDrive::Zero,
            branch: None,
            pairs: vec![(0, 1)],
            tuples: Vec::new(),
            keep_trajectory: false,
        }
    }

    pub fn steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps()).map(|k| k as f64 * self.dt).collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.network.validate()?;
        let n = self.topology.node_count();
        self.noise.validate(n)?;
        if !(self.dt > 0.0) || !(self.t_max >= self.dt) || self.trials == 0 {
            return Err(Error::InvalidParameter(format!(
                "need dt > 0, t_max >= dt and trials >= 1 (dt={}, t_max={}, trials={})",
                self.dt, self.t_max, self.trials
            )));
        }
        let bad = |i: usize| i >= n;
        if self.pairs.iter().any(|&(i, j)| bad(i) || bad(j)) || self.tuples.iter().flatten().any(|&i| bad(i)) {
            return Err(Error::InvalidParameter(format!("pair or tuple index outside 0..{n}")));
        }
        Ok(())
    }

    /// Selected stationary state.
    pub fn stationary(&self) -> Result<f64> {
        select_branch(&stationary_state(&self.network)?, self.branch)
    }
}

/// Trial-independent data derived from a config.
struct Model {
    n: usize,
    steps: usize,
    dt: f64,
    tau: f64,
    input: f64,
    mu: f64,
    sigma: [f64; 5],
    z: ZDrive,
    h: HDrive,
    sigmoid: crate::neuron::SigmoidParams,
    /// Neighbour lists flattened row by row.
    nbr: Vec<usize>,
    row_start: Vec<usize>,
    /// Λ/M_i for each row.
    jw: Vec<f64>,
    /// 1/M_i for each row (0 without edges).
    inv_m: Vec<f64>,
    s_mu: f64,
    d1: f64,
    d2: f64,
    ic: EquicorrelatedSampler,
    bm: EquicorrelatedSampler,
    ws: EquicorrelatedSampler,
}

impl Model {
    fn new(cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        let adj: WeightedAdjacency = realize_with(&cfg.topology, cfg.network.weight, cfg.allow_irregular)?;
        let mu = cfg.stationary()?;
        let n = adj.n();
        let mut nbr = Vec::new();
        let mut row_start = vec![0];
        for row in &adj.neighbors {
            nbr.extend_from_slice(row);
            row_start.push(nbr.len());
        }
        let inv_m: Vec<f64> = adj.neighbors.iter().map(|r| if r.is_empty() { 0.0 } else { 1.0 / r.len() as f64 }).collect();
        let sg = cfg.network.sigmoid;
        Ok(Model {
            n,
            steps: cfg.steps(),
            dt: cfg.dt,
            tau: cfg.network.tau,
            input: cfg.network.input,
            mu,
            sigma: cfg.noise.sigma,
            z: cfg.z,
            h: cfg.h,
            sigmoid: sg,
            jw: inv_m.iter().map(|m| m * cfg.network.weight).collect(),
            inv_m,
            nbr,
            row_start,
            s_mu: sg.value(mu),
            d1: sg.d1(mu),
            d2: sg.d2(mu),
            ic: EquicorrelatedSampler::new(n, cfg.noise.c2)?,
            bm: EquicorrelatedSampler::new(n, cfg.noise.c1)?,
            ws: sampling::weight_sampler(&adj, cfg.noise.c3)?,
        })
    }

    fn rng(seed: u64, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        rng
    }

    fn row(&self, i: usize) -> std::ops::Range<usize> {
        self.row_start[i]..self.row_start[i + 1]
    }

    // out = J̄ x
    fn jbar(&self, x: &[f64], out: &mut [f64]) {
        for i in 0..self.n {
            let s: f64 = self.nbr[self.row(i)].iter().map(|&j| x[j]).sum();
            out[i] = self.jw[i] * s;
        }
    }

    // out = (W/M) x, with W stored per slot
    fn wmul(&self, w: &[f64], x: &[f64], out: &mut [f64]) {
        for i in 0..self.n {
            let r = self.row(i);
            let s: f64 = self.nbr[r.clone()].iter().zip(&w[r]).map(|(&j, &wij)| wij * x[j]).sum();
            out[i] = self.inv_m[i] * s;
        }
    }

    fn check(&self, v: &[f64], trial: usize, step: usize) -> Result<()> {
        if v.iter().any(|x| !(x.abs() <= BLOWUP)) {
            return Err(Error::NumericalBlowup { trial, step });
        }
        Ok(())
    }

    /// Run one trial, reporting V at every step. Returns the final
    /// first-order components for the perturbative orders.
    fn trial(&self, seed: u64, trial: usize, order: Order, full: bool, mut observe: impl FnMut(usize, &[f64])) -> Result<Option<[Vec<f64>; 5]>> {
        let n = self.n;
        let mut rng = Self::rng(seed, trial);
        let mut x0 = vec![0.0; n];
        self.ic.sample(&mut rng, &mut x0);
        let mut w = vec![0.0; self.ws.len()];
        self.ws.sample(&mut rng, &mut w);
        let mut db = vec![0.0; n];
        let mut v = vec![0.0; n];
        match order {
            Order::Exact => {
                for i in 0..n {
                    v[i] = self.mu + self.sigma[1] * x0[i];
                }
                self.check(&v, trial, 0)?;
                observe(0, &v);
                // Per-slot fixed part of J: Λ/M_i + σ₃ W_ij / M_i.
                let mut jfix = vec![0.0; w.len()];
                for i in 0..n {
                    for s in self.row(i) {
                        jfix[s] = self.jw[i] + self.sigma[2] * w[s] * self.inv_m[i];
                    }
                }
                let mut rate = vec![0.0; n];
                let mut next = vec![0.0; n];
                for step in 1..=self.steps {
                    let t = (step - 1) as f64 * self.dt;
                    sample_brownian_increments(&self.bm, self.dt, &mut rng, &mut db);
                    for j in 0..n {
                        rate[j] = self.sigmoid.value(v[j]);
                    }
                    let zt = self.sigma[3] * self.z.factor(t);
                    let ext = self.input + self.sigma[4] * self.h.value(t);
                    for i in 0..n {
                        let r = self.row(i);
                        let mut syn = 0.0;
                        let mut plain = 0.0;
                        for s in r {
                            let sj = rate[self.nbr[s]];
                            syn += jfix[s] * sj;
                            plain += sj;
                        }
                        let drift = -v[i] / self.tau + syn + zt * self.jw[i] * plain + ext;
                        next[i] = v[i] + drift * self.dt + self.sigma[0] * db[i];
                    }
                    std::mem::swap(&mut v, &mut next);
                    self.check(&v, trial, step)?;
                    observe(step, &v);
                }
                Ok(None)
            }
            Order::Order1 | Order::Order2 => self.perturbative(&mut rng, trial, order == Order::Order2, full, x0, w, observe).map(Some),
        }
    }

    fn perturbative(
        &self,
        rng: &mut ChaCha8Rng,
        trial: usize,
        second: bool,
        full: bool,
        x0: Vec<f64>,
        w: Vec<f64>,
        mut observe: impl FnMut(usize, &[f64]),
    ) -> Result<[Vec<f64>; 5]> {
        let n = self.n;
        let sg = self.sigma;
        // Components with zero intensity never reach V and are skipped unless requested.
        let active: [bool; 5] = std::array::from_fn(|m| full || sg[m] != 0.0);
        let mut y: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
        y[1] = x0;
        // Second-order pairs (m, n) with σ_m σ_n ≠ 0.
        let pairs: Vec<(usize, usize)> = if second {
            (0..5).flat_map(|a| (a..5).map(move |b| (a, b))).filter(|&(a, b)| sg[a] * sg[b] != 0.0).collect()
        } else {
            Vec::new()
        };
        let mut y2: Vec<Vec<f64>> = vec![vec![0.0; n]; pairs.len()];
        // Row sums of W/M: the Y3 source up to S(μ).
        let wrow: Vec<f64> = (0..n).map(|i| self.row(i).map(|s| w[s]).sum::<f64>() * self.inv_m[i]).collect();
        let deg_w: Vec<f64> = (0..n).map(|i| self.jw[i] * self.row(i).len() as f64).collect();
        let mut db = vec![0.0; n];
        let mut v = vec![0.0; n];
        let mut tmp = vec![0.0; n];
        let mut tmp2 = vec![0.0; n];
        let mut prod = vec![0.0; n];
        let mut dy: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
        let mut dy2: Vec<Vec<f64>> = vec![vec![0.0; n]; pairs.len()];

        let compose = |y: &[Vec<f64>; 5], y2: &[Vec<f64>], v: &mut [f64]| {
            for i in 0..n {
                let mut acc = self.mu;
                for m in 0..5 {
                    acc += sg[m] * y[m][i];
                }
                for (p, &(a, b)) in pairs.iter().enumerate() {
                    acc += sg[a] * sg[b] * y2[p][i];
                }
                v[i] = acc;
            }
        };
        compose(&y, &y2, &mut v);
        self.check(&v, trial, 0)?;
        observe(0, &v);

        for step in 1..=self.steps {
            let t = (step - 1) as f64 * self.dt;
            sample_brownian_increments(&self.bm, self.dt, rng, &mut db);
            let zt = self.z.factor(t);
            let ht = self.h.value(t);
            // First-order drifts A Y_m + sources.
            for m in 0..5 {
                if !active[m] {
                    continue;
                }
                self.jbar(&y[m], &mut tmp);
                for i in 0..n {
                    let src = match m {
                        2 => self.s_mu * wrow[i],
                        3 => self.s_mu * zt * deg_w[i],
                        4 => ht,
                        _ => 0.0,
                    };
                    dy[m][i] = -y[m][i] / self.tau + self.d1 * tmp[i] + src;
                }
            }
            // Second-order drifts use the first-order state at the same time.
            for (p, &(a, b)) in pairs.iter().enumerate() {
                let half = if a == b { 0.5 } else { 1.0 };
                for i in 0..n {
                    prod[i] = y[a][i] * y[b][i];
                }
                self.jbar(&prod, &mut tmp);
                self.jbar(&y2[p], &mut tmp2);
                for i in 0..n {
                    dy2[p][i] = -y2[p][i] / self.tau + self.d1 * tmp2[i] + half * self.d2 * tmp[i];
                }
                // W couples to the partner of a Y₃ index, Z(t) to the partner of a Y₄ index.
                let links: &[(usize, usize)] = if a == b { &[(a, a)] } else { &[(a, b), (b, a)] };
                for &(k, other) in links {
                    match k {
                        2 => self.wmul(&w, &y[other], &mut tmp),
                        3 => {
                            self.jbar(&y[other], &mut tmp);
                            tmp.iter_mut().for_each(|x| *x *= zt);
                        }
                        _ => continue,
                    }
                    for i in 0..n {
                        dy2[p][i] += self.d1 * tmp[i];
                    }
                }
            }
            for m in 0..5 {
                if !active[m] {
                    continue;
                }
                for i in 0..n {
                    y[m][i] += dy[m][i] * self.dt;
                }
            }
            if active[0] {
                for i in 0..n {
                    y[0][i] += db[i];
                }
            }
            for p in 0..pairs.len() {
                for i in 0..n {
                    y2[p][i] += dy2[p][i] * self.dt;
                }
            }
            compose(&y, &y2, &mut v);
            self.check(&v, trial, step)?;
            observe(step, &v);
        }
        Ok(y)
    }
}

/// Distinct nodes appearing in tuples, in first-appearance order.
fn tuple_slots(tuples: &[Vec<usize>]) -> Vec<usize> {
    let mut out = Vec::new();
    for &i in tuples.iter().flatten() {
        if !out.contains(&i) {
            out.push(i);
        }
    }
    out
}

/// Run the ensemble at the order named in the config.
pub fn run(cfg: &SimConfig, exec: Execution) -> Result<EnsembleStats> {
    let model = Model::new(cfg)?;
    let pairs = cfg.pairs.clone();
    let slots = tuple_slots(&cfg.tuples);
    let steps = model.steps + 1;
    let chunks = cfg.trials.div_ceil(CHUNK);
    let parts = exec.map(chunks, |c| -> Result<(Accumulator, Option<Vec<Vec<f64>>>)> {
        let mut acc = Accumulator::new(model.n, steps, pairs.clone(), slots.clone());
        let mut traj = None;
        for trial in c * CHUNK..((c + 1) * CHUNK).min(cfg.trials) {
            acc.begin_trial();
            let keep = cfg.keep_trajectory && trial == 0;
            let mut rows = Vec::new();
            model.trial(cfg.seed, trial, cfg.order, false, |s, v| {
                acc.observe(s, v);
                if keep {
                    rows.push(v.to_vec());
                }
            })?;
            if keep {
                traj = Some(rows);
            }
        }
        Ok((acc, traj))
    });
    let mut total = Accumulator::new(model.n, steps, pairs, slots);
    let mut trajectory = None;
    for part in parts {
        let (acc, traj) = part?;
        total.merge(acc);
        if traj.is_some() {
            trajectory = traj;
        }
    }
    Ok(total.finish(cfg.times(), cfg.tuples.clone(), trajectory))
}

fn with_order(cfg: &SimConfig, order: Order) -> Result<EnsembleStats> {
    run(&SimConfig { order, ..cfg.clone() }, Execution::default())
}

/// Ensemble of the exact nonlinear dynamics.
pub fn run_exact(cfg: &SimConfig) -> Result<EnsembleStats> {
    with_order(cfg, Order::Exact)
}

/// Ensemble of the first-order perturbative system.
pub fn run_order1(cfg: &SimConfig) -> Result<EnsembleStats> {
    with_order(cfg, Order::Order1)
}

/// Ensemble of the second-order perturbative system.
pub fn run_order2(cfg: &SimConfig) -> Result<EnsembleStats> {
    with_order(cfg, Order::Order2)
}

/// Potentials of one trial at every step.
pub fn trajectory(cfg: &SimConfig, trial: usize) -> Result<Vec<Vec<f64>>> {
    let model = Model::new(cfg)?;
    let mut rows = Vec::with_capacity(model.steps + 1);
    model.trial(cfg.seed, trial, cfg.order, false, |_, v| rows.push(v.to_vec()))?;
    Ok(rows)
}

/// First-order components Y₁..Y₅ of one trial at `t_max`, all integrated
/// regardless of their intensities.
pub fn first_order_components(cfg: &SimConfig, trial: usize) -> Result<[Vec<f64>; 5]> {
    let model = Model::new(cfg)?;
    Ok(model.trial(cfg.seed, trial, Order::Order1, true, |_, _| {})?.expect("perturbative order"))
}
