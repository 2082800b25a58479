//! One-pass ensemble statistics with an associative merge.

use crate::analytic::pearson;
use crate::error::{Error, Result};

/// A value with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// Running means, second moments and pair co-moments for every time step.
///
/// Values for the nodes that appear in higher-order tuples are also buffered
/// per trial, since those estimators need the joint samples.
#[derive(Debug, Clone)]
pub struct Accumulator {
    nodes: usize,
    steps: usize,
    pairs: Vec<(usize, usize)>,
    slots: Vec<usize>,
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
    co: Vec<f64>,
    samples: Vec<f64>,
    delta: Vec<f64>,
}

impl Accumulator {
    /// `slots` lists the nodes whose raw samples are kept.
    pub fn new(nodes: usize, steps: usize, pairs: Vec<(usize, usize)>, slots: Vec<usize>) -> Self {
        Accumulator {
            nodes,
            steps,
            mean: vec![0.0; nodes * steps],
            m2: vec![0.0; nodes * steps],
            co: vec![0.0; pairs.len() * steps],
            pairs,
            slots,
            count: 0,
            samples: Vec::new(),
            delta: vec![0.0; nodes],
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Start a new trial; every step must then be observed once, in order.
    pub fn begin_trial(&mut self) {
        self.count += 1;
        self.samples.reserve(self.steps * self.slots.len());
    }

    pub fn observe(&mut self, step: usize, v: &[f64]) {
        let n = self.count as f64;
        let base = step * self.nodes;
        for i in 0..self.nodes {
            let d = v[i] - self.mean[base + i];
            self.delta[i] = d;
            self.mean[base + i] += d / n;
            self.m2[base + i] += d * (v[i] - self.mean[base + i]);
        }
        let pbase = step * self.pairs.len();
        for (p, &(i, j)) in self.pairs.iter().enumerate() {
            self.co[pbase + p] += self.delta[i] * (v[j] - self.mean[base + j]);
        }
        for &s in &self.slots {
            self.samples.push(v[s]);
        }
    }

    /// Chan et al. pairwise combination; `other` holds the later trials.
    pub fn merge(&mut self, other: Accumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other;
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let f = na * nb / n;
        for s in 0..self.steps {
            let base = s * self.nodes;
            for i in 0..self.nodes {
                let d = other.mean[base + i] - self.mean[base + i];
                self.delta[i] = d;
                self.mean[base + i] += d * nb / n;
                self.m2[base + i] += other.m2[base + i] + d * d * f;
            }
            let pbase = s * self.pairs.len();
            for (p, &(i, j)) in self.pairs.iter().enumerate() {
                self.co[pbase + p] += other.co[pbase + p] + self.delta[i] * self.delta[j] * f;
            }
        }
        self.count += other.count;
        self.samples.extend(other.samples);
    }

    pub fn finish(self, times: Vec<f64>, tuples: Vec<Vec<usize>>, trajectory: Option<Vec<Vec<f64>>>) -> EnsembleStats {
        let k = self.count as f64;
        let var: Vec<f64> = self.m2.iter().map(|&m| if k > 1.0 { m / (k - 1.0) } else { 0.0 }).collect();
        let cov: Vec<f64> = self.co.iter().map(|&c| if k > 1.0 { c / (k - 1.0) } else { 0.0 }).collect();
        let np = self.pairs.len();
        let corr = (0..self.steps)
            .flat_map(|s| {
                let var = &var;
                let cov = &cov;
                let nodes = self.nodes;
                self.pairs.iter().enumerate().map(move |(p, &(i, j))| {
                    pearson(cov[s * np + p], var[s * nodes + i], var[s * nodes + j]).unwrap_or(f64::NAN)
                })
            })
            .collect();
        EnsembleStats {
            times,
            nodes: self.nodes,
            trials: self.count as usize,
            mean: self.mean,
            var,
            pairs: self.pairs,
            cov,
            corr,
            tuples,
            slots: self.slots,
            samples: self.samples,
            first_trajectory: trajectory,
        }
    }
}

/// Time-indexed sample statistics of an ensemble of trials.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub times: Vec<f64>,
    pub nodes: usize,
    pub trials: usize,
    mean: Vec<f64>,
    var: Vec<f64>,
    pub pairs: Vec<(usize, usize)>,
    cov: Vec<f64>,
    corr: Vec<f64>,
    pub tuples: Vec<Vec<usize>>,
    slots: Vec<usize>,
    samples: Vec<f64>,
    /// Potentials of trial 0 at every step, when requested.
    pub first_trajectory: Option<Vec<Vec<f64>>>,
}

impl EnsembleStats {
    /// Number of recorded time points, including t = 0.
    pub fn time_points(&self) -> usize {
        self.times.len()
    }

    pub fn mean(&self, step: usize, node: usize) -> f64 {
        self.mean[step * self.nodes + node]
    }

    /// Unbiased sample variance.
    pub fn var(&self, step: usize, node: usize) -> f64 {
        self.var[step * self.nodes + node]
    }

    pub fn cov(&self, step: usize, pair: usize) -> f64 {
        self.cov[step * self.pairs.len() + pair]
    }

    /// Sample Pearson correlation, NaN when a variance vanishes.
    pub fn corr(&self, step: usize, pair: usize) -> f64 {
        self.corr[step * self.pairs.len() + pair]
    }

    pub fn pair_index(&self, i: usize, j: usize) -> Option<usize> {
        self.pairs.iter().position(|&p| p == (i, j) || p == (j, i))
    }

    // Normal-theory standard errors below.

    pub fn mean_stderr(&self, step: usize, node: usize) -> f64 {
        (self.var(step, node) / self.trials as f64).sqrt()
    }

    pub fn var_stderr(&self, step: usize, node: usize) -> f64 {
        self.var(step, node) * (2.0 / (self.trials as f64 - 1.0)).sqrt()
    }

    pub fn cov_stderr(&self, step: usize, pair: usize) -> f64 {
        let (i, j) = self.pairs[pair];
        let c = self.cov(step, pair);
        ((self.var(step, i) * self.var(step, j) + c * c) / (self.trials as f64 - 1.0)).sqrt()
    }

    pub fn corr_stderr(&self, step: usize, pair: usize) -> f64 {
        let r = self.corr(step, pair);
        (1.0 - r * r) / (self.trials as f64 - 3.0).sqrt()
    }

    /// Buffered samples of `node` at `step`, one per trial.
    pub fn samples(&self, step: usize, node: usize) -> Option<Vec<f64>> {
        let slot = self.slots.iter().position(|&s| s == node)?;
        let width = self.slots.len();
        let per_trial = self.time_points() * width;
        Some((0..self.trials).map(|t| self.samples[t * per_trial + step * width + slot]).collect())
    }

    /// Higher-order correlation of tuple `tuple` at `step`, with a batch-means standard error.
    pub fn higher_order(&self, tuple: usize, step: usize) -> Result<Estimate> {
        let nodes = &self.tuples[tuple];
        let cols: Vec<Vec<f64>> = nodes.iter().map(|&n| self.samples(step, n).expect("tuple node buffered")).collect();
        let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
        estimate_higher_order_with_error(&refs, HIGHER_ORDER_BATCHES)
    }
}

/// Number of batches used for higher-order standard errors.
pub const HIGHER_ORDER_BATCHES: usize = 20;

/// Sample normalized joint central moment `E∏(x_m - x̄_m) / ∏(E|x_m - x̄_m|^n)^{1/n}`.
pub fn estimate_higher_order(samples: &[&[f64]]) -> Result<f64> {
    let n = samples.len();
    let k = samples.first().map_or(0, |s| s.len());
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter("empty sample".into()));
    }
    let means: Vec<f64> = samples.iter().map(|s| s.iter().sum::<f64>() / k as f64).collect();
    let mut joint = 0.0;
    for t in 0..k {
        joint += (0..n).map(|m| samples[m][t] - means[m]).product::<f64>();
    }
    joint /= k as f64;
    let mut denom = 1.0;
    for m in 0..n {
        let moment = samples[m].iter().map(|&x| (x - means[m]).abs().powi(n as i32)).sum::<f64>() / k as f64;
        if moment < 1e-300 {
            return Err(Error::DegenerateMoment { moment });
        }
        denom *= moment.powf(1.0 / n as f64);
    }
    Ok(joint / denom)
}

/// [`estimate_higher_order`] with the spread of `batches` contiguous batches as standard error.
pub fn estimate_higher_order_with_error(samples: &[&[f64]], batches: usize) -> Result<Estimate> {
    let value = estimate_higher_order(samples)?;
    let k = samples[0].len();
    let size = k / batches;
    if batches < 2 || size < 2 {
        return Ok(Estimate { value, stderr: f64::NAN });
    }
    let mut est = Vec::with_capacity(batches);
    for b in 0..batches {
        let part: Vec<&[f64]> = samples.iter().map(|s| &s[b * size..(b + 1) * size]).collect();
        est.push(estimate_higher_order(&part)?);
    }
    let m = est.iter().sum::<f64>() / batches as f64;
    let v = est.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (batches as f64 - 1.0);
    Ok(Estimate { value, stderr: (v / batches as f64).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_single_pass() {
        let data: Vec<[f64; 3]> = (0..50).map(|t| {
            let x = t as f64;
            [x.sin(), (0.3 * x).cos() + x * 0.01, (x * 1.7).sin() * 2.0]
        }).collect();
        let pairs = vec![(0, 1), (1, 2)];
        let mut whole = Accumulator::new(3, 1, pairs.clone(), vec![0, 2]);
        for v in &data {
            whole.begin_trial();
            whole.observe(0, v);
        }
        let mut a = Accumulator::new(3, 1, pairs.clone(), vec![0, 2]);
        let mut b = Accumulator::new(3, 1, pairs, vec![0, 2]);
        for (t, v) in data.iter().enumerate() {
            let acc = if t < 17 { &mut a } else { &mut b };
            acc.begin_trial();
            acc.observe(0, v);
        }
        a.merge(b);
        let (s1, s2) = (whole.finish(vec![0.0], vec![], None), a.finish(vec![0.0], vec![], None));
        for i in 0..3 {
            assert!((s1.mean(0, i) - s2.mean(0, i)).abs() < 1e-14);
            assert!((s1.var(0, i) - s2.var(0, i)).abs() < 1e-13);
        }
        for p in 0..2 {
            assert!((s1.cov(0, p) - s2.cov(0, p)).abs() < 1e-13);
        }
        assert_eq!(s1.samples(0, 2), s2.samples(0, 2));
        // Direct two-pass covariance for pair (0, 1).
        let mx = data.iter().map(|v| v[0]).sum::<f64>() / 50.0;
        let my = data.iter().map(|v| v[1]).sum::<f64>() / 50.0;
        let c = data.iter().map(|v| (v[0] - mx) * (v[1] - my)).sum::<f64>() / 49.0;
        assert!((s1.cov(0, 0) - c).abs() < 1e-14);
    }

    #[test]
    fn higher_order_basics() {
        let x: Vec<f64> = (0..200).map(|t| ((t * 7919) % 101) as f64 / 101.0).collect();
        let y: Vec<f64> = (0..200).map(|t| ((t * 104729) % 97) as f64 / 97.0 + x[t]).collect();
        // n = 2 is the Pearson coefficient.
        let mx = x.iter().sum::<f64>() / 200.0;
        let my = y.iter().sum::<f64>() / 200.0;
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
        let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
        let r = sxy / (sxx * syy).sqrt();
        assert!((estimate_higher_order(&[&x, &y]).unwrap() - r).abs() < 1e-14);
        for n in [2, 4] {
            let dup: Vec<&[f64]> = vec![&x; n];
            assert!((estimate_higher_order(&dup).unwrap() - 1.0).abs() < 1e-14);
        }
        let c = vec![1.0; 200];
        assert!(matches!(estimate_higher_order(&[&x, &c]), Err(Error::DegenerateMoment { .. })));
    }
}
