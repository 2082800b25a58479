//! First-order analytic covariance, variance and correlation.
//!
//! Only the σ₁², σ₂², σ₃² contributions are closed form. Every double sum over
//! `k ≠ l` is rewritten as a product of row sums minus its diagonal, and row
//! sums of Φ are exact because every row of J̄ sums to Λ.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neuron::NetworkParams;
use crate::propagator::{exp_integral_re, Propagator};
use crate::spectral::circulant_band_eigenvalue;
use crate::topology::TopologySpec;

/// Noise intensities σ₁…σ₅ and the correlations C₁, C₂, C₃.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    /// σ₁ Brownian, σ₂ initial conditions, σ₃ weights, σ₄ Z(t), σ₅ H(t).
    pub sigma: [f64; 5],
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec { sigma: [0.0; 5], c1: 0.0, c2: 0.0, c3: 0.0 }
    }
}

impl NoiseSpec {
    /// Correlations C₁ = 0.3, C₂ = 0.4, C₃ = 0.5 with the given intensities.
    pub fn table1(sigma: [f64; 5]) -> Self {
        NoiseSpec { sigma, c1: 0.3, c2: 0.4, c3: 0.5 }
    }

    pub fn uncorrelated(sigma: [f64; 5]) -> Self {
        NoiseSpec { sigma, ..Default::default() }
    }

    /// Checks intensities and the equicorrelation range `1/(1-N) ≤ C ≤ 1` of C₁ and C₂.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.sigma.iter().any(|&s| !(s >= 0.0) || !s.is_finite()) {
            return Err(Error::InvalidParameter(format!("noise intensities must be >= 0, got {:?}", self.sigma)));
        }
        for c in [self.c1, self.c2] {
            check_equicorrelation(n, c)?;
        }
        if !(self.c3.is_finite() && self.c3 <= 1.0) {
            return Err(Error::NotPSD { c: self.c3, min_eig: 1.0 - self.c3 });
        }
        Ok(())
    }
}

/// Smallest eigenvalue of an `n`-dimensional equicorrelation matrix must be >= 0.
pub fn check_equicorrelation(n: usize, c: f64) -> Result<()> {
    if n < 2 {
        return Ok(());
    }
    let min_eig = (1.0 - c).min(1.0 + c * (n - 1) as f64);
    if !c.is_finite() || min_eig < -1e-10 {
        return Err(Error::NotPSD { c, min_eig });
    }
    Ok(())
}

/// One time point of a covariance report for the pair (i, j).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceRow {
    pub t: f64,
    pub i: usize,
    pub j: usize,
    pub cov: f64,
    pub var_i: f64,
    pub var_j: f64,
    /// NaN when both variances vanish.
    pub corr: f64,
    /// σ₁²T₁, σ₂²T₂, σ₃²T₃.
    pub terms: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CovarianceReport {
    pub rows: Vec<CovarianceRow>,
}

/// Analytic first-order statistics of a regular network linearized at μ.
#[derive(Debug, Clone)]
pub struct AnalyticModel {
    prop: Propagator,
    rate: f64,
    in_degree: usize,
    noise: NoiseSpec,
    fully_connected: bool,
}

impl AnalyticModel {
    pub fn new(spec: &TopologySpec, params: &NetworkParams, mu: f64, noise: NoiseSpec) -> Result<Self> {
        params.validate()?;
        noise.validate(spec.node_count())?;
        let in_degree = spec.in_degree().ok_or(Error::NonInvariantTopology)?;
        Ok(AnalyticModel {
            prop: Propagator::from_topology(spec, params, mu)?,
            rate: params.sigmoid.value(mu),
            in_degree,
            noise,
            fully_connected: spec.is_fully_connected(),
        })
    }

    /// Build from an existing propagator (for instance one with a dense basis).
    pub fn from_propagator(prop: Propagator, rate: f64, in_degree: usize, noise: NoiseSpec, fully_connected: bool) -> Self {
        AnalyticModel { prop, rate, in_degree, noise, fully_connected }
    }

    pub fn propagator(&self) -> &Propagator {
        &self.prop
    }

    pub fn noise(&self) -> &NoiseSpec {
        &self.noise
    }

    /// Cov(Y₁ⁱ, Y₁ʲ): Brownian contribution.
    pub fn cov_term_noise(&self, i: usize, j: usize, t: f64) -> Result<f64> {
        let c = self.noise.c1;
        let diag = self.prop.phi_phit_integral(i, j, t)?;
        let rows = exp_integral_re(2.0 * self.prop.row_rate(), t);
        Ok((1.0 - c) * diag + c * rows)
    }

    /// Cov(Y₂ⁱ, Y₂ʲ): initial-condition contribution.
    pub fn cov_term_initial(&self, i: usize, j: usize, t: f64) -> Result<f64> {
        let c = self.noise.c2;
        let diag = self.prop.phi_phit(i, j, t)?;
        let rows = (2.0 * self.prop.row_rate() * t).exp();
        Ok((1.0 - c) * diag + c * rows)
    }

    /// Cov(Y₃ⁱ, Y₃ʲ): synaptic-weight contribution.
    pub fn cov_term_weights(&self, i: usize, j: usize, t: f64) -> Result<f64> {
        if self.in_degree == 0 {
            return Err(Error::ZeroInDegree);
        }
        let c = self.noise.c3;
        let m = self.in_degree as f64;
        let diag = self.prop.integral_outer(i, j, t)?;
        let g = exp_integral_re(self.prop.row_rate(), t);
        Ok(self.rate * self.rate * ((1.0 - c) / m * diag + c * g * g))
    }

    /// σ-weighted terms; terms with zero intensity are skipped.
    pub fn terms(&self, i: usize, j: usize, t: f64) -> Result<[f64; 3]> {
        let (i, j) = (i.min(j), i.max(j));
        let s = &self.noise.sigma;
        let mut out = [0.0; 3];
        if s[0] > 0.0 {
            out[0] = s[0] * s[0] * self.cov_term_noise(i, j, t)?;
        }
        if s[1] > 0.0 {
            out[1] = s[1] * s[1] * self.cov_term_initial(i, j, t)?;
        }
        if s[2] > 0.0 {
            out[2] = s[2] * s[2] * self.cov_term_weights(i, j, t)?;
        }
        Ok(out)
    }

    pub fn covariance(&self, i: usize, j: usize, t: f64) -> Result<f64> {
        let [a, b, c] = self.terms(i, j, t)?;
        Ok(a + b + c)
    }

    pub fn variance(&self, i: usize, t: f64) -> Result<f64> {
        self.covariance(i, i, t)
    }

    /// Pearson correlation of V_i and V_j.
    pub fn correlation(&self, i: usize, j: usize, t: f64) -> Result<f64> {
        let (vi, vj) = (self.variance(i, t)?, self.variance(j, t)?);
        pearson(self.covariance(i, j, t)?, vi, vj)
    }

    /// Correlation of `n` distinct nodes of a fully connected network:
    /// 0 for odd `n`, `Corr₂^{n/2}` for even `n`.
    pub fn higher_order_correlation_fc(&self, n: usize, t: f64) -> Result<f64> {
        if !self.fully_connected {
            return Err(Error::NotFullyConnected);
        }
        if n % 2 == 1 {
            return Ok(0.0);
        }
        Ok(self.correlation(0, 1, t)?.powi((n / 2) as i32))
    }

    /// Covariance, variances and correlation for every pair at every time.
    pub fn report(&self, pairs: &[(usize, usize)], times: &[f64]) -> Result<CovarianceReport> {
        let mut rows = Vec::with_capacity(pairs.len() * times.len());
        for &t in times {
            for &(i, j) in pairs {
                let terms = self.terms(i, j, t)?;
                let cov = terms.iter().sum();
                let (var_i, var_j) = (self.variance(i, t)?, self.variance(j, t)?);
                let corr = pearson(cov, var_i, var_j).unwrap_or(f64::NAN);
                rows.push(CovarianceRow { t, i, j, cov, var_i, var_j, corr, terms });
            }
        }
        Ok(CovarianceReport { rows })
    }
}

/// `cov / √(var_i var_j)`.
pub fn pearson(cov: f64, var_i: f64, var_j: f64) -> Result<f64> {
    if var_i < 1e-300 || var_j < 1e-300 {
        return Err(Error::DegenerateVariance { var_i, var_j });
    }
    Ok(cov / (var_i * var_j).sqrt())
}

/// Covariance of a circulant band network (half-width `nu`, `n` nodes) with all
/// correlations zero, as an explicit cosine sum over modes.
///
/// `sigma` holds σ₁, σ₂, σ₃ and `mu` is the stationary state.
pub fn circulant_chaos_covariance(n: usize, nu: usize, i: usize, j: usize, t: f64, params: &NetworkParams, mu: f64, sigma: [f64; 3]) -> f64 {
    let m = if nu == n / 2 { n - 1 } else { 2 * nu } as f64;
    let sp = params.sigmoid.d1(mu);
    let s = params.sigmoid.value(mu);
    let lag = (i + n - j) % n;
    let mut acc = [0.0; 3];
    for l in 0..n {
        let a = -1.0 / params.tau + sp * circulant_band_eigenvalue(n, nu, l, params.weight);
        let c = (2.0 * PI * ((l * lag) % n) as f64 / n as f64).cos();
        let g = exp_integral_re(a, t);
        acc[0] += c * exp_integral_re(2.0 * a, t);
        acc[1] += c * (2.0 * a * t).exp();
        acc[2] += c * g * g;
    }
    let nf = n as f64;
    sigma[0].powi(2) * acc[0] / nf + sigma[1].powi(2) * acc[1] / nf + sigma[2].powi(2) * s * s * acc[2] / (m * nf)
}

/// Pearson correlation built from [`circulant_chaos_covariance`].
pub fn circulant_chaos_correlation(n: usize, nu: usize, i: usize, j: usize, t: f64, params: &NetworkParams, mu: f64, sigma: [f64; 3]) -> Result<f64> {
    let c = circulant_chaos_covariance(n, nu, i, j, t, params, mu, sigma);
    let vi = circulant_chaos_covariance(n, nu, i, i, t, params, mu, sigma);
    let vj = circulant_chaos_covariance(n, nu, j, j, t, params, mu, sigma);
    pearson(c, vi, vj)
}
