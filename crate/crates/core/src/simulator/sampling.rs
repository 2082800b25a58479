//! Samplers for the three correlated randomness sources.
//!
//! All three share one structure: unit-variance normals with a common pairwise
//! correlation C over some set of slots. For C ≥ 0 a shared factor is added;
//! for C < 0 the symmetric square root of the equicorrelation matrix is applied.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::analytic::check_equicorrelation;
use crate::error::Result;
use crate::topology::WeightedAdjacency;

/// Draws `n` unit-variance normals with pairwise correlation `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquicorrelatedSampler {
    n: usize,
    c: f64,
    a: f64,
    b: f64,
}

impl EquicorrelatedSampler {
    /// Fails with `NotPSD` unless `1/(1-n) ≤ c ≤ 1`.
    pub fn new(n: usize, c: f64) -> Result<Self> {
        check_equicorrelation(n, c)?;
        let (a, b) = if c >= 0.0 {
            ((1.0 - c).sqrt(), c.sqrt())
        } else {
            ((1.0 - c).sqrt(), (1.0 + (n as f64 - 1.0) * c).max(0.0).sqrt())
        };
        Ok(EquicorrelatedSampler { n, c, a, b })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Fill `out` (length `n`). Draws `n` normals, plus one shared normal when `c ≥ 0`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        for x in out.iter_mut() {
            *x = rng.sample(StandardNormal);
        }
        if self.c >= 0.0 {
            let eta: f64 = rng.sample(StandardNormal);
            for x in out.iter_mut() {
                *x = self.a * *x + self.b * eta;
            }
        } else if self.n > 0 {
            let m = out.iter().sum::<f64>() / self.n as f64;
            for x in out.iter_mut() {
                *x = self.a * (*x - m) + self.b * m;
            }
        }
    }
}

/// Brownian increments with covariance Σ₁Δt.
pub fn sample_brownian_increments<R: Rng + ?Sized>(s: &EquicorrelatedSampler, dt: f64, rng: &mut R, out: &mut [f64]) {
    s.sample(rng, out);
    let h = dt.sqrt();
    for x in out.iter_mut() {
        *x *= h;
    }
}

/// Initial potentials drawn from N(μ, σ₂² C₂-equicorrelation).
pub fn sample_initial_conditions<R: Rng + ?Sized>(s: &EquicorrelatedSampler, mu: f64, sigma2: f64, rng: &mut R, out: &mut [f64]) {
    s.sample(rng, out);
    for x in out.iter_mut() {
        *x = mu + sigma2 * *x;
    }
}

/// Sampler over the nonzero slots of an adjacency, in row-major neighbour order.
pub fn weight_sampler(adj: &WeightedAdjacency, c3: f64) -> Result<EquicorrelatedSampler> {
    let slots = adj.neighbors.iter().map(Vec::len).sum();
    EquicorrelatedSampler::new(slots, c3)
}

/// Unit-variance weight perturbation W, zero off the support of J̄.
pub fn sample_weight_perturbation<R: Rng + ?Sized>(adj: &WeightedAdjacency, c3: f64, rng: &mut R) -> Result<DMatrix<f64>> {
    let s = weight_sampler(adj, c3)?;
    let mut flat = vec![0.0; s.len()];
    s.sample(rng, &mut flat);
    let n = adj.n();
    let mut w = DMatrix::zeros(n, n);
    let mut it = flat.into_iter();
    for (i, nbrs) in adj.neighbors.iter().enumerate() {
        for &j in nbrs {
            w[(i, j)] = it.next().unwrap();
        }
    }
    Ok(w)
}
