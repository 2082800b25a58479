//! Closed-form spectra of block-circulant and graph-product adjacencies.
//!
//! Block-circulant eigenvalues are ordered `k = x*S + y` and obtained from a
//! two-dimensional DFT of the block first rows. Product eigenvalues follow the
//! lexicographic factor order.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::topology::{band_in_degree, BlockRows, GraphExpr, TopologySpec};

/// How eigenvectors are represented.
#[derive(Debug, Clone, PartialEq)]
pub enum Basis {
    /// Q = F_R ⊗ F_S, unitary, so Q⁻¹ = Q*.
    FourierBlock { r: usize, s: usize },
    /// Real orthogonal eigenvectors stored as columns.
    RealOrthogonal(DMatrix<f64>),
    /// General eigenvectors and their inverse.
    DenseNumeric { q: DMatrix<Complex64>, q_inv: DMatrix<Complex64> },
}

/// Eigenvalues of J̄ and the matching eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub basis: Basis,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Dense Q and Q⁻¹.
    pub fn basis_matrices(&self) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
        match &self.basis {
            Basis::FourierBlock { r, s } => {
                let q = fourier_block_matrix(*r, *s);
                let qi = q.adjoint();
                (q, qi)
            }
            Basis::RealOrthogonal(q) => {
                let qc = q.map(|x| Complex64::new(x, 0.0));
                let qi = qc.transpose();
                (qc, qi)
            }
            Basis::DenseNumeric { q, q_inv } => (q.clone(), q_inv.clone()),
        }
    }

    /// Same spectrum expressed with a dense numeric basis.
    pub fn to_dense_numeric(&self) -> Spectrum {
        let (q, q_inv) = self.basis_matrices();
        Spectrum { eigenvalues: self.eigenvalues.clone(), basis: Basis::DenseNumeric { q, q_inv } }
    }

    /// Q diag(e) Q⁻¹.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let (q, qi) = self.basis_matrices();
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.eigenvalues.clone()));
        q * d * qi
    }

    /// Real symmetric matrix, i.e. real eigenvalues with an orthogonal basis.
    pub fn is_symmetric(&self) -> bool {
        matches!(self.basis, Basis::RealOrthogonal(_))
    }
}

/// Dense F_R ⊗ F_S with entries `exp(2πι(x p_r/R + y p_s/S))/√N`.
pub fn fourier_block_matrix(r: usize, s: usize) -> DMatrix<Complex64> {
    let n = r * s;
    let norm = 1.0 / (n as f64).sqrt();
    DMatrix::from_fn(n, n, |p, k| {
        let (pr, ps) = (p / s, p % s);
        let (x, y) = (k / s, k % s);
        let frac = ((x * pr) % r) as f64 / r as f64 + ((y * ps) % s) as f64 / s as f64;
        Complex64::from_polar(norm, 2.0 * PI * frac)
    })
}

/// Spectrum of a topology with the cheapest available route.
pub fn spectrum(spec: &TopologySpec, scale: f64) -> Result<Spectrum> {
    match spec {
        TopologySpec::GraphProduct(e) => product_spectrum(e, scale),
        _ => block_circulant_spectrum(spec, scale),
    }
}

/// Eigenvalues of a circulant or band block-circulant J̄ by a 2-D DFT of the block first rows.
pub fn block_circulant_spectrum(spec: &TopologySpec, scale: f64) -> Result<Spectrum> {
    spec.validate()?;
    let rows = spec
        .block_rows()
        .ok_or_else(|| Error::InvalidTopology("not a block-circulant topology".into()))?;
    let m = rows.in_degree();
    let eigenvalues = block_dft(&rows, if m == 0 { 0.0 } else { scale / m as f64 });
    Ok(Spectrum { eigenvalues, basis: Basis::FourierBlock { r: rows.r, s: rows.s } })
}

fn block_dft(rows: &BlockRows, weight: f64) -> Vec<Complex64> {
    let (r, s) = (rows.r, rows.s);
    let mut planner = FftPlanner::<f64>::new();
    let fs = planner.plan_fft_inverse(s);
    let fr = planner.plan_fft_inverse(r);
    // ê[l][y] = Σ_m ω_S^{ym} b_m^(l)
    let hat: Vec<Vec<Complex64>> = rows
        .rows
        .iter()
        .map(|row| {
            let mut v: Vec<Complex64> = row.iter().map(|&b| Complex64::new(b as f64, 0.0)).collect();
            fs.process(&mut v);
            v
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); r * s];
    let mut col = vec![Complex64::new(0.0, 0.0); r];
    for y in 0..s {
        for l in 0..r {
            col[l] = hat[l][y];
        }
        fr.process(&mut col);
        for x in 0..r {
            out[x * s + y] = col[x] * weight;
        }
    }
    out
}

/// Piecewise band term `f(n, ν, S)`.
pub fn band_f(n: usize, nu: usize, s: usize) -> f64 {
    let parity: i64 = if s.is_multiple_of(2) { 1 } else { -1 };
    if n == 0 {
        (2 * nu) as f64 - ((nu as i64 - (s / 2) as i64 + parity) > 0) as u8 as f64
    } else if nu == s / 2 {
        -1.0
    } else {
        let x = PI * n as f64 / s as f64;
        (x * (2 * nu + 1) as f64).sin() / x.sin() - 1.0
    }
}

/// Band block-circulant eigenvalues from the piecewise closed form, ordered `m*S + n`.
pub fn banded_eigenvalues(r: usize, s: usize, bands: &[usize], scale: f64) -> Result<Vec<Complex64>> {
    TopologySpec::band(r, s, bands.to_vec())?;
    let w = scale / band_in_degree(r, s, bands) as f64;
    let mut out = Vec::with_capacity(r * s);
    for m in 0..r {
        for n in 0..s {
            let mut acc = Complex64::new(if m == 0 { (r - 1) as f64 } else { -1.0 }, 0.0);
            for (k, &nu) in bands.iter().enumerate() {
                let phase = 2.0 * PI * ((m * k) % r) as f64 / r as f64;
                acc += Complex64::from_polar(band_f(n, nu, s), phase);
            }
            out.push(acc * w);
        }
    }
    Ok(out)
}

/// Eigenvalue `e_k` of the circulant band with half-width `nu` on `n` nodes.
pub fn circulant_band_eigenvalue(n: usize, nu: usize, k: usize, scale: f64) -> f64 {
    if nu == n / 2 {
        return complete_eigenvalue(n, k, scale);
    }
    if k == 0 {
        return scale;
    }
    let x = PI * k as f64 / n as f64;
    scale / (2 * nu) as f64 * ((x * (2 * nu + 1) as f64).sin() / x.sin() - 1.0)
}

/// Eigenvalue `e_k` of the fully connected network: Λ for k = 0, -Λ/(N-1) otherwise.
pub fn complete_eigenvalue(n: usize, k: usize, scale: f64) -> f64 {
    if k == 0 {
        scale
    } else {
        -scale / (n - 1) as f64
    }
}

/// Unit-weight eigenvalues and real orthonormal eigenvectors of a product expression.
pub fn unit_product_eigen(expr: &GraphExpr) -> (Vec<f64>, DMatrix<f64>) {
    match expr {
        GraphExpr::Path(n) => {
            let n = *n;
            let h = PI / (n + 1) as f64;
            let norm = (2.0 / (n + 1) as f64).sqrt();
            let eig = (0..n).map(|i| 2.0 * ((i + 1) as f64 * h).cos()).collect();
            let q = DMatrix::from_fn(n, n, |j, i| norm * (((i + 1) * (j + 1)) as f64 * h).sin());
            (eig, q)
        }
        GraphExpr::Cycle(n) => {
            let n = *n;
            let h = 2.0 * PI / n as f64;
            let eig = (0..n).map(|i| 2.0 * (i as f64 * h).cos()).collect();
            let q = DMatrix::from_fn(n, n, |j, i| cycle_vector(n, i, j));
            (eig, q)
        }
        GraphExpr::Kronecker(a, b) | GraphExpr::Cartesian(a, b) => {
            let (ea, qa) = unit_product_eigen(a);
            let (eb, qb) = unit_product_eigen(b);
            let kron = matches!(expr, GraphExpr::Kronecker(..));
            let eig = ea
                .iter()
                .flat_map(|&x| eb.iter().map(move |&y| if kron { x * y } else { x + y }))
                .collect();
            (eig, qa.kronecker(&qb))
        }
    }
}

// Real cycle eigenvectors: constant and alternating modes as they are, cosines
// below N/2 and sines above.
fn cycle_vector(n: usize, i: usize, j: usize) -> f64 {
    let nf = n as f64;
    if i == 0 {
        return 1.0 / nf.sqrt();
    }
    if 2 * i == n {
        return if j.is_multiple_of(2) { 1.0 } else { -1.0 } / nf.sqrt();
    }
    let arg = 2.0 * PI * ((i * j) % n) as f64 / nf;
    let c = (2.0 / nf).sqrt();
    if 2 * i < n {
        c * arg.cos()
    } else {
        c * arg.sin()
    }
}

/// Spectrum of a regular graph product scaled by Λ/M, with a real orthogonal basis.
pub fn product_spectrum(expr: &GraphExpr, scale: f64) -> Result<Spectrum> {
    TopologySpec::product(expr.clone())?;
    let deg = expr.degrees();
    let m = deg[0];
    if deg.iter().any(|&d| d != m) {
        let rows = deg.iter().enumerate().filter(|(_, &d)| d != m).map(|(i, _)| i).collect();
        return Err(Error::IrregularDegree { expected: m, rows });
    }
    let w = if m == 0 { 0.0 } else { scale / m as f64 };
    let (eig, q) = unit_product_eigen(expr);
    Ok(Spectrum {
        eigenvalues: eig.into_iter().map(|e| Complex64::new(e * w, 0.0)).collect(),
        basis: Basis::RealOrthogonal(q),
    })
}

/// Eigenvalues of the equicorrelation matrix Σ₁: `1 + C₁(N-1)` once, `1 - C₁` otherwise.
pub fn sigma1_spectrum(n: usize, c: f64) -> Vec<f64> {
    let mut v = vec![1.0 - c; n];
    if n > 0 {
        v[0] = 1.0 + c * (n - 1) as f64;
    }
    v
}
