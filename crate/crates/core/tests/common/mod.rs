//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues from nalgebra's dense solvers.
///
/// Symmetric input uses the symmetric solver. Francis QR stalls on the cyclic
/// block structure of non-symmetric block-circulant matrices, but those are
/// normal: the symmetric part H and skew part K commute, and an eigenvector v
/// of the Hermitian H - iγK (γ irrational) gives the eigenvalue
/// v*Hv + i v*(-iK)v. Anything non-normal falls back to Schur.
pub fn dense_eigenvalues(m: &DMatrix<f64>) -> Vec<Complex64> {
    if m == &m.transpose() {
        return m.clone().symmetric_eigenvalues().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    }
    let commutator = m * m.transpose() - m.transpose() * m;
    if commutator.amax() > 1e-12 * m.amax().max(1.0) {
        let schur = nalgebra::linalg::Schur::try_new(m.clone(), f64::EPSILON, 100_000).expect("Schur iteration converges");
        return schur.complex_eigenvalues().iter().copied().collect();
    }
    let c = |x: f64| Complex64::new(x, 0.0);
    let h = ((m + m.transpose()) * 0.5).map(c);
    // -iK is Hermitian for real skew-symmetric K.
    let k = ((m - m.transpose()) * 0.5).map(|x| Complex64::new(0.0, -x));
    let gamma = std::f64::consts::SQRT_2 - 0.9;
    let g = &h + &k * c(gamma);
    let eig = g.symmetric_eigen();
    (0..m.nrows())
        .map(|j| {
            let v = eig.eigenvectors.column(j);
            let re = (v.adjoint() * &h * v)[(0, 0)].re;
            let im = (v.adjoint() * &k * v)[(0, 0)].re;
            Complex64::new(re, im)
        })
        .collect()
}

/// Largest distance in a greedy nearest-neighbour matching of two multisets.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    let key = |z: &Complex64| (z.re, z.im);
    sa.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
    sb.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
    let mut used = vec![false; sb.len()];
    let mut worst: f64 = 0.0;
    for x in &sa {
        let (k, d) = sb
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

/// e^{A} by Taylor series with scaling and squaring.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = a.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let b = a / 2f64.powi(s);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &b / k as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Composite trapezoid rule of `f` on [0, t] with `steps` intervals.
pub fn trapezoid(f: impl Fn(f64) -> f64, t: f64, steps: usize) -> f64 {
    let h = t / steps as f64;
    let mut acc = 0.5 * (f(0.0) + f(t));
    for k in 1..steps {
        acc += f(k as f64 * h);
    }
    acc * h
}

/// Trapezoid rule over matrix-valued integrands sampled on a uniform grid.
pub fn trapezoid_matrices(samples: &[DMatrix<f64>], h: f64) -> DMatrix<f64> {
    let last = samples.len() - 1;
    let mut acc = (&samples[0] + &samples[last]) * 0.5;
    for m in &samples[1..last] {
        acc += m;
    }
    acc * h
}

/// Derivatives of the unit logistic with slope λ from the polynomial recursion
/// d/dx P(S) = λ P'(S) S (1 - S); returns S^{(1)}..S^{(n)}.
pub fn logistic_derivatives_poly(x: f64, slope: f64, n: usize) -> Vec<f64> {
    let s = 1.0 / (1.0 + (-slope * x).exp());
    // Coefficients of P_k in powers of S.
    let mut p = vec![0.0, 1.0];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut next = vec![0.0; p.len() + 1];
        for (d, &c) in p.iter().enumerate().skip(1) {
            // c d S^{d-1} * λ (S - S²)
            next[d] += slope * c * d as f64;
            next[d + 1] -= slope * c * d as f64;
        }
        p = next;
        out.push(p.iter().rev().fold(0.0, |acc, &c| acc * s + c));
    }
    out
}
