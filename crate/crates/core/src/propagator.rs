//! Fundamental matrix Φ(t) = e^{At} evaluated entry by entry from a spectrum.
//!
//! Nothing here exponentiates a matrix: every quantity is a weighted sum over
//! modes `a_k = -1/τ + S'(μ) e_k`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::neuron::NetworkParams;
use crate::spectral::{spectrum, Basis, Spectrum};
use crate::topology::TopologySpec;

/// Rates below this magnitude are treated as zero in time integrals.
pub const ZERO_RATE: f64 = 1e-12;

/// Allowed imaginary residue of a mode sum, relative to its magnitude scale.
pub const REALNESS_TOL: f64 = 1e-12;

/// `∫₀ᵗ e^{as} ds`, equal to `t` when `a` vanishes.
pub fn exp_integral(a: Complex64, t: f64) -> Complex64 {
    if a.norm() < ZERO_RATE {
        return Complex64::new(t, 0.0);
    }
    let (x, y) = (a.re * t, a.im * t);
    let half = (0.5 * y).sin();
    let em1 = Complex64::new(x.exp_m1() * y.cos() - 2.0 * half * half, x.exp() * y.sin());
    em1 / a
}

/// Real version of [`exp_integral`].
pub fn exp_integral_re(a: f64, t: f64) -> f64 {
    if a.abs() < ZERO_RATE {
        t
    } else {
        (a * t).exp_m1() / a
    }
}

#[derive(Debug, Clone)]
enum DenseExtra {
    None,
    // G = Q⁻¹ Q⁻ᵀ, needed for ΦΦᵀ when the basis is not unitary.
    Gram(DMatrix<Complex64>),
}

/// Immutable handle evaluating Φ-derived quantities.
#[derive(Debug, Clone)]
pub struct Propagator {
    spectrum: Spectrum,
    rates: Vec<Complex64>,
    tau: f64,
    slope: f64,
    row_rate: f64,
    extra: DenseExtra,
}

impl Propagator {
    /// `row_sum` is the common row sum of J̄ (Λ, or 0 without edges).
    pub fn new(spectrum: Spectrum, tau: f64, slope: f64, row_sum: f64) -> Self {
        let rates = spectrum
            .eigenvalues
            .iter()
            .map(|&e| e * slope - Complex64::new(1.0 / tau, 0.0))
            .collect();
        let extra = match &spectrum.basis {
            Basis::DenseNumeric { q_inv, .. } => DenseExtra::Gram(q_inv * q_inv.transpose()),
            _ => DenseExtra::None,
        };
        Propagator { spectrum, rates, tau, slope, row_rate: -1.0 / tau + slope * row_sum, extra }
    }

    /// Propagator of a regular topology linearized at `mu`.
    pub fn from_topology(spec: &TopologySpec, params: &NetworkParams, mu: f64) -> Result<Self> {
        let m = spec.in_degree().ok_or(Error::NonInvariantTopology)?;
        let s = spectrum(spec, params.weight)?;
        let row_sum = if m > 0 { params.weight } else { 0.0 };
        Ok(Self::new(s, params.tau, params.sigmoid.d1(mu), row_sum))
    }

    /// Same propagator with the basis replaced by dense Q, Q⁻¹.
    pub fn with_dense_basis(&self) -> Self {
        let mut p = Self::new(self.spectrum.to_dense_numeric(), self.tau, self.slope, 0.0);
        p.row_rate = self.row_rate;
        p
    }

    pub fn n(&self) -> usize {
        self.spectrum.n()
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Mode rates `a_k`, the eigenvalues of A.
    pub fn rates(&self) -> &[Complex64] {
        &self.rates
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    /// Rate of the uniform mode: every row of Φ(t) sums to `e^{row_rate t}`.
    pub fn row_rate(&self) -> f64 {
        self.row_rate
    }

    // Σ_k w_k Q_ik Q⁻¹_kj, with the realness check.
    fn mode_sum(&self, i: usize, j: usize, w: impl Fn(Complex64) -> Complex64) -> Result<f64> {
        let (sum, scale) = self.mode_sum_raw(i, j, w);
        check_real(sum, scale)
    }

    /// Imaginary part of the spectral sum for Φ_ij(t), relative to the size of its terms.
    pub fn phi_residue(&self, i: usize, j: usize, t: f64) -> f64 {
        let (sum, scale) = self.mode_sum_raw(i, j, |a| (a * t).exp());
        sum.im.abs() / scale.max(1.0)
    }

    fn mode_sum_raw(&self, i: usize, j: usize, w: impl Fn(Complex64) -> Complex64) -> (Complex64, f64) {
        match &self.spectrum.basis {
            Basis::FourierBlock { r, s } => {
                let (r, s) = (*r, *s);
                let dr = (i / s + r - j / s) % r;
                let ds = (i % s + s - j % s) % s;
                let mut sum = Complex64::new(0.0, 0.0);
                let mut scale = 0.0;
                for (k, &a) in self.rates.iter().enumerate() {
                    let (x, y) = (k / s, k % s);
                    let frac = ((x * dr) % r) as f64 / r as f64 + ((y * ds) % s) as f64 / s as f64;
                    let wk = w(a);
                    scale += wk.norm();
                    sum += wk * Complex64::from_polar(1.0, 2.0 * PI * frac);
                }
                let n = self.n() as f64;
                (sum / n, scale / n)
            }
            Basis::RealOrthogonal(q) => {
                let mut sum = 0.0;
                let mut scale = 0.0;
                for (k, &a) in self.rates.iter().enumerate() {
                    let term = w(a).re * q[(i, k)] * q[(j, k)];
                    sum += term;
                    scale += term.abs();
                }
                (Complex64::new(sum, 0.0), scale)
            }
            Basis::DenseNumeric { q, q_inv } => {
                let mut sum = Complex64::new(0.0, 0.0);
                let mut scale = 0.0;
                for (k, &a) in self.rates.iter().enumerate() {
                    let term = w(a) * q[(i, k)] * q_inv[(k, j)];
                    scale += term.norm();
                    sum += term;
                }
                (sum, scale)
            }
        }
    }

    // Σ_{k,l} Q_ik Q_jl G_kl w(a_k, a_l) for a non-unitary basis.
    fn pair_sum(&self, i: usize, j: usize, w: impl Fn(Complex64, Complex64) -> Complex64) -> Result<f64> {
        let (Basis::DenseNumeric { q, .. }, DenseExtra::Gram(g)) = (&self.spectrum.basis, &self.extra) else {
            unreachable!("pair sums only run on dense bases")
        };
        let mut sum = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (k, &ak) in self.rates.iter().enumerate() {
            let qik = q[(i, k)];
            for (l, &al) in self.rates.iter().enumerate() {
                let term = qik * q[(j, l)] * g[(k, l)] * w(ak, al);
                scale += term.norm();
                sum += term;
            }
        }
        check_real(sum, scale)
    }

    /// Φ_ij(t).
    pub fn phi(&self, i: usize, j: usize, t: f64) -> Result<f64> {
        self.mode_sum(i, j, |a| (a * t).exp())
    }

    /// [Φ(t)Φᵀ(t)]_ij.
    pub fn phi_phit(&self, i: usize, j: usize, t: f64) -> Result<f64> {
        match self.extra {
            DenseExtra::Gram(_) => self.pair_sum(i, j, |a, b| ((a + b) * t).exp()),
            DenseExtra::None => self.mode_sum(i, j, |a| Complex64::new((2.0 * a.re * t).exp(), 0.0)),
        }
    }

    /// `∫₀ᵗ Φ_ij(s) ds`.
    pub fn phi_integral(&self, i: usize, j: usize, t: f64) -> Result<f64> {
        self.mode_sum(i, j, |a| exp_integral(a, t))
    }

    /// `∫₀ᵗ [Φ(s)Φᵀ(s)]_ij ds`.
    pub fn phi_phit_integral(&self, i: usize, j: usize, t: f64) -> Result<f64> {
        match self.extra {
            DenseExtra::Gram(_) => self.pair_sum(i, j, |a, b| exp_integral(a + b, t)),
            DenseExtra::None => self.mode_sum(i, j, |a| Complex64::new(exp_integral_re(2.0 * a.re, t), 0.0)),
        }
    }

    /// `Σ_k I_ik I_jk` with `I = ∫₀ᵗ Φ`.
    pub fn integral_outer(&self, i: usize, j: usize, t: f64) -> Result<f64> {
        match self.extra {
            DenseExtra::Gram(_) => self.pair_sum(i, j, |a, b| exp_integral(a, t) * exp_integral(b, t)),
            DenseExtra::None => self.mode_sum(i, j, |a| Complex64::new(exp_integral(a, t).norm_sqr(), 0.0)),
        }
    }

    /// Dense Φ(t), built only on request.
    pub fn phi_matrix(&self, t: f64) -> Result<DMatrix<f64>> {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.phi(i, j, t)?;
            }
        }
        Ok(m)
    }
}

fn check_real(sum: Complex64, scale: f64) -> Result<f64> {
    let residue = sum.im.abs();
    if residue > REALNESS_TOL * scale.max(1.0) {
        return Err(Error::RealnessViolation { residue });
    }
    Ok(sum.re)
}
