//! Sigmoid activation, stationary states and the linearized drift matrix.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::WeightedAdjacency;

/// Logistic activation `S(V) = T_MAX / (1 + exp(-λ(V - V_T)))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmoidParams {
    pub t_max: f64,
    pub slope: f64,
    pub threshold: f64,
}

impl Default for SigmoidParams {
    fn default() -> Self {
        SigmoidParams { t_max: 1.0, slope: 1.0, threshold: 0.0 }
    }
}

// Logistic function in [0, 1], evaluated without overflow.
fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl SigmoidParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_max > 0.0 && self.slope > 0.0 && self.threshold.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigmoid needs T_MAX > 0 and λ > 0, got {self:?}")));
        }
        Ok(())
    }

    // p and 1-p, each computed directly so neither suffers cancellation.
    fn p_q(&self, v: f64) -> (f64, f64) {
        let x = self.slope * (v - self.threshold);
        (logistic(x), logistic(-x))
    }

    pub fn value(&self, v: f64) -> f64 {
        self.t_max * self.p_q(v).0
    }

    /// S'(V) = λ[S - S²/T_MAX].
    pub fn d1(&self, v: f64) -> f64 {
        let (p, q) = self.p_q(v);
        self.slope * self.t_max * p * q
    }

    pub fn d2(&self, v: f64) -> f64 {
        let (p, q) = self.p_q(v);
        self.slope * self.slope * self.t_max * p * q * (q - p)
    }
}

/// Neuron constants shared by the whole network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkParams {
    /// Membrane time constant τ.
    pub tau: f64,
    /// Weight scale Λ; every row of J̄ sums to it.
    pub weight: f64,
    /// Baseline input Ī.
    pub input: f64,
    pub sigmoid: SigmoidParams,
}

impl NetworkParams {
    /// τ = 1, Ī = 0, Λ = 1, unit logistic.
    pub fn table1() -> Self {
        NetworkParams { tau: 1.0, weight: 1.0, input: 0.0, sigmoid: SigmoidParams::default() }
    }

    /// Synchronization setting τ = 0.1, Ī = -20, Λ = 40, unit logistic.
    pub fn table2() -> Self {
        NetworkParams { tau: 0.1, weight: 40.0, input: -20.0, sigmoid: SigmoidParams::default() }
    }

    pub fn validate(&self) -> Result<()> {
        self.sigmoid.validate()?;
        if !(self.tau > 0.0) || !self.weight.is_finite() || !self.input.is_finite() {
            return Err(Error::InvalidParameter(format!("need τ > 0 and finite Λ, Ī, got {self:?}")));
        }
        Ok(())
    }

    /// Residual `μ - τ(ΛS(μ) + Ī)` of the stationary equation.
    pub fn stationary_residual(&self, mu: f64) -> f64 {
        mu - self.tau * (self.weight * self.sigmoid.value(mu) + self.input)
    }

    /// Interval that contains every stationary state.
    pub fn stationary_bracket(&self) -> (f64, f64) {
        let c = self.tau * self.input;
        let w = (self.tau * self.weight).abs() * self.sigmoid.t_max;
        (c - w, c + w)
    }
}

/// Root finder settings for [`stationary_state_with`].
#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    pub subdivisions: usize,
    /// Bisection stops once the bracket is narrower than this.
    pub xtol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { subdivisions: 1024, xtol: 0.0 }
    }
}

/// All stationary states `μ = τ(ΛS(μ) + Ī)`, in increasing order.
pub fn stationary_state(params: &NetworkParams) -> Result<Vec<f64>> {
    stationary_state_with(params, RootOptions::default())
}

pub fn stationary_state_with(params: &NetworkParams, opts: RootOptions) -> Result<Vec<f64>> {
    params.validate()?;
    let (lo, hi) = params.stationary_bracket();
    if params.weight == 0.0 {
        return Ok(vec![params.tau * params.input]);
    }
    let g = |x: f64| params.stationary_residual(x);
    let n = opts.subdivisions.max(1);
    let grid: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&x| g(x)).collect();
    let mut roots = Vec::new();
    for k in 0..=n {
        if vals[k] == 0.0 {
            roots.push(grid[k]);
        } else if k < n && vals[k + 1] != 0.0 && (vals[k] < 0.0) != (vals[k + 1] < 0.0) {
            roots.push(refine(params, grid[k], grid[k + 1], vals[k], opts.xtol));
        }
    }
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + b.abs()));
    if roots.is_empty() {
        return Err(Error::NoRoot { lo, hi });
    }
    Ok(roots)
}

// Bisection down to `xtol` (or machine resolution), then a guarded Newton polish.
fn refine(params: &NetworkParams, mut a: f64, mut b: f64, mut ga: f64, xtol: f64) -> f64 {
    let g = |x: f64| params.stationary_residual(x);
    loop {
        let m = 0.5 * (a + b);
        if m <= a || m >= b || b - a <= xtol {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..4 {
        let d = 1.0 - params.tau * params.weight * params.sigmoid.d1(x);
        if d.abs() < 1e-8 {
            break;
        }
        let next = x - g(x) / d;
        if !(next >= a && next <= b) || g(next).abs() >= g(x).abs() {
            break;
        }
        x = next;
    }
    x
}

/// Pick one stationary state: the only one, or the one at `branch`.
pub fn select_branch(roots: &[f64], branch: Option<usize>) -> Result<f64> {
    match (roots.len(), branch) {
        (0, _) => Err(Error::NoSolution("no stationary state".into())),
        (_, Some(b)) => roots
            .get(b)
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("branch {b} out of range for {} roots", roots.len()))),
        (1, None) => Ok(roots[0]),
        (count, None) => Err(Error::AmbiguousBranch { count, roots: roots.to_vec() }),
    }
}

/// Linearized drift `A = -Id/τ + J̄ S'(μ)` together with `𝒥 = J̄ S'(μ)`.
#[derive(Debug, Clone)]
pub struct EffectiveMatrix {
    pub a: DMatrix<f64>,
    pub coupling: DMatrix<f64>,
}

pub fn effective_matrix(adj: &WeightedAdjacency, params: &NetworkParams, mu: f64) -> EffectiveMatrix {
    let coupling = &adj.matrix * params.sigmoid.d1(mu);
    let n = adj.n();
    let a = &coupling - DMatrix::<f64>::identity(n, n) / params.tau;
    EffectiveMatrix { a, coupling }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{realize, TopologySpec};

    #[test]
    fn sigmoid_basics() {
        let s = SigmoidParams { t_max: 3.0, slope: 2.0, threshold: 0.7 };
        assert_eq!(s.value(0.7), 1.5);
        assert_eq!(SigmoidParams::default().d1(0.0), 0.25);
        assert_eq!(s.value(1e4), 3.0);
        assert_eq!(s.value(-1e4), 0.0);
        assert!(s.d1(1e4).is_finite() && s.d2(-1e4).is_finite());
    }

    #[test]
    fn d1_identity() {
        let s = SigmoidParams { t_max: 2.0, slope: 1.5, threshold: -0.3 };
        for k in -20..=20 {
            let v = k as f64 * 0.37;
            let sv = s.value(v);
            let want = s.slope * (sv - sv * sv / s.t_max);
            assert!((s.d1(v) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn decoupled_root() {
        let p = NetworkParams { weight: 0.0, input: 1.3, tau: 2.0, ..NetworkParams::table1() };
        assert_eq!(stationary_state(&p).unwrap(), vec![2.6]);
    }

    #[test]
    fn sync_family_root_at_zero() {
        for input in [-2.0, -20.0, -7.0] {
            let p = NetworkParams { tau: -2.0 / input, weight: -2.0 * input, input, sigmoid: SigmoidParams::default() };
            let roots = stationary_state(&p).unwrap();
            assert!(roots.iter().any(|r| r.abs() < 1e-6), "{roots:?}");
        }
    }

    #[test]
    fn multiple_roots_need_branch() {
        // Steep sigmoid with strong self-excitation has three states.
        let p = NetworkParams { tau: 1.0, weight: 1.0, input: -0.5, sigmoid: SigmoidParams { slope: 10.0, ..Default::default() } };
        let roots = stationary_state(&p).unwrap();
        assert_eq!(roots.len(), 3);
        for &r in &roots {
            assert!(p.stationary_residual(r).abs() <= 1e-12);
        }
        assert!(matches!(select_branch(&roots, None), Err(Error::AmbiguousBranch { count: 3, .. })));
        assert_eq!(select_branch(&roots, Some(2)).unwrap(), roots[2]);
    }

    #[test]
    fn effective_matrix_fully_connected() {
        let p = NetworkParams::table1();
        let mu = stationary_state(&p).unwrap()[0];
        let adj = realize(&TopologySpec::complete(6).unwrap(), p.weight).unwrap();
        let e = effective_matrix(&adj, &p, mu);
        let sp = p.sigmoid.d1(mu);
        assert!((e.a.row(0).sum() - (-1.0 + sp)).abs() < 1e-14);
        assert_eq!(e.a[(0, 0)], -1.0);
        assert!((e.coupling[(0, 1)] - sp / 5.0).abs() < 1e-16);
    }
}
