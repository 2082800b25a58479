//! Taylor radius of convergence of the logistic sigmoid and the arctangent.
//!
//! Derivatives of the unit logistic `S(x) = 1/(1 + e^{-λx})` are
//! `(-λ)^n Li_{-n}(-e^{-λx})`, and the polylogarithm of negative order is a
//! finite Eulerian sum. The sums alternate in sign, so they are evaluated in
//! exact integer arithmetic and only the final magnitude is taken to log space.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Row `n` of the Eulerian triangle, `A(n, 0..n)`; row 0 is `[1]`.
pub fn eulerian_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for m in 1..=n {
        row = next_eulerian_row(&row, m);
    }
    row
}

// A(m, k) = (k+1) A(m-1, k) + (m-k) A(m-1, k-1)
fn next_eulerian_row(prev: &[BigUint], m: usize) -> Vec<BigUint> {
    (0..m)
        .map(|k| {
            let mut v = BigUint::zero();
            if k < prev.len() {
                v += &prev[k] * (k + 1);
            }
            if k >= 1 {
                v += &prev[k - 1] * (m - k);
            }
            v
        })
        .collect()
}

/// Eulerian number `A(n, k)`, zero outside `0 ≤ k < n` except `A(0, 0) = 1`.
pub fn eulerian(n: usize, k: usize) -> BigUint {
    eulerian_row(n).get(k).cloned().unwrap_or_default()
}

// Σ_{k=1}^{n} (-1)^{k-1} A(n, k-1)
fn alternating_sum(row: &[BigUint]) -> BigInt {
    row.iter().enumerate().fold(BigInt::zero(), |acc, (k, a)| {
        let a = BigInt::from(a.clone());
        if k % 2 == 0 {
            acc + a
        } else {
            acc - a
        }
    })
}

/// Bernoulli number `B_n` (with `B_1 = -1/2`) from the Eulerian identity
/// `Σ(-1)^{k-1}A(n,k-1) = 2^{n+1}(2^{n+1}-1)B_{n+1}/(n+1)`.
pub fn bernoulli(n: usize) -> BigRational {
    match n {
        0 => BigRational::one(),
        1 => BigRational::new(BigInt::from(-1), BigInt::from(2)),
        _ => {
            let s = alternating_sum(&eulerian_row(n - 1));
            let p = BigInt::one() << n;
            BigRational::new(s * BigInt::from(n), &p * (&p - 1))
        }
    }
}

/// Real number stored as a sign and the natural log of its magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    /// -1, 0 or 1.
    pub sign: i8,
    /// `ln|value|`, `-inf` when the value is zero.
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { sign: 0, ln_abs: f64::NEG_INFINITY };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            SignedLog { sign: if x > 0.0 { 1 } else { -1 }, ln_abs: x.abs().ln() }
        }
    }

    /// The value as `f64`, or `Overflow` when it does not fit.
    pub fn value(&self) -> Result<f64> {
        if self.sign == 0 {
            return Ok(0.0);
        }
        if self.ln_abs > f64::MAX.ln() {
            return Err(Error::Overflow(format!("e^{}", self.ln_abs)));
        }
        Ok(self.sign as f64 * self.ln_abs.exp())
    }
}

// ln|x| of a big integer via its leading 64 bits.
fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn rational_signed_log(r: &BigRational) -> SignedLog {
    if r.is_zero() {
        return SignedLog::ZERO;
    }
    let sign = if r.is_negative() { -1 } else { 1 };
    SignedLog { sign, ln_abs: big_ln(r.numer()) - big_ln(r.denom()) }
}

// Exact dyadic form of a positive finite f64: x = m / 2^s.
fn dyadic(x: f64) -> (BigInt, u64) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    if e >= 0 {
        (BigInt::from(mant) << e as usize, 0)
    } else {
        let tz = mant.trailing_zeros().min((-e) as u32) as i64;
        (BigInt::from(mant >> tz), (-e - tz) as u64)
    }
}

/// Derivatives `S^{(1)}(x₀)..S^{(n_max)}(x₀)` of the unit logistic with slope λ.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeTable {
    pub x0: f64,
    pub slope: f64,
    /// `values[n-1]` holds `S^{(n)}(x₀)`.
    pub values: Vec<SignedLog>,
}

impl DerivativeTable {
    pub fn new(x0: f64, slope: f64, n_max: usize) -> Result<Self> {
        if !(slope > 0.0) || !x0.is_finite() {
            return Err(Error::InvalidParameter(format!("need λ > 0 and finite x₀, got λ={slope}, x₀={x0}")));
        }
        let ln_slope = slope.ln();
        let mut values = Vec::with_capacity(n_max);
        let mut row = vec![BigUint::one()];
        let xa = x0.abs();
        let q = (-slope * xa).exp();
        let ln_1q = q.ln_1p();
        let (m, s) = if xa > 0.0 && q > 0.0 { dyadic(q) } else { (BigInt::one(), 0) };
        let neg_m = -m;
        for n in 1..=n_max {
            row = next_eulerian_row(&row, n);
            let v = if xa == 0.0 {
                // S^{(n)}(0) = λ^n / 2^{n+1} Σ(-1)^{k-1}A(n,k-1)
                let sum = alternating_sum(&row);
                if sum.is_zero() {
                    SignedLog::ZERO
                } else {
                    SignedLog {
                        sign: if sum.sign() == Sign::Minus { -1 } else { 1 },
                        ln_abs: n as f64 * ln_slope + big_ln(&sum) - (n + 1) as f64 * std::f64::consts::LN_2,
                    }
                }
            } else if q == 0.0 {
                // e^{-λx₀} underflows; derivatives are below any representable scale.
                return Err(Error::Overflow(format!("e^(-{slope}*{xa}) underflows")));
            } else {
                // 2^{sn} P(q) with P(q) = Σ_k A(n,k)(-q)^{n-k}, by homogeneous Horner.
                let mut acc = BigInt::from(row[0].clone());
                for (k, a) in row.iter().enumerate().skip(1) {
                    acc = acc * &neg_m + (BigInt::from(a.clone()) << (s as usize * k));
                }
                acc *= &neg_m;
                let mut sign: i8 = if acc.sign() == Sign::Minus { -1 } else { 1 };
                if n % 2 == 1 {
                    sign = -sign;
                }
                if x0 < 0.0 && n % 2 == 0 {
                    sign = -sign;
                }
                SignedLog {
                    sign,
                    ln_abs: n as f64 * ln_slope + big_ln(&acc)
                        - (s as f64) * n as f64 * std::f64::consts::LN_2
                        - (n + 1) as f64 * ln_1q,
                }
            };
            values.push(v);
        }
        Ok(DerivativeTable { x0, slope, values })
    }

    /// `S^{(n)}(x₀)`.
    pub fn get(&self, n: usize) -> SignedLog {
        self.values[n - 1]
    }
}

/// Single derivative `S^{(n)}(x₀)` of the unit logistic with slope λ.
pub fn sigmoid_derivative_at(x0: f64, slope: f64, n: usize) -> Result<SignedLog> {
    Ok(DerivativeTable::new(x0, slope, n)?.get(n))
}

/// `S^{(n)}(0) = λ^n (2^{n+1} - 1) B_{n+1} / (n + 1)` as an exact rational times λ^n.
pub fn sigmoid_derivative_at_zero(slope: f64, n: usize) -> SignedLog {
    let b = bernoulli(n + 1);
    let p = (BigInt::one() << (n + 1)) - 1;
    let r = b * BigRational::from_integer(p) / BigRational::from_integer(BigInt::from(n + 1));
    let mut v = rational_signed_log(&r);
    v.ln_abs += n as f64 * slope.ln();
    v
}

/// Relative disagreement between consecutive tail windows that is still accepted.
pub const RADIUS_WINDOW_TOL: f64 = 0.05;

/// Radius `1 / limsup (|S^{(n)}(x₀)|/n!)^{1/n}`, estimated as the largest
/// root-test value over the last quarter of the nonzero orders.
pub fn sigmoid_radius(x0: f64, slope: f64, n_max: usize) -> Result<f64> {
    if n_max < 64 {
        return Err(Error::InvalidParameter(format!("n_max must be at least 64, got {n_max}")));
    }
    let table = DerivativeTable::new(x0, slope, n_max)?;
    let mut ln_fact = 0.0;
    let mut roots = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        ln_fact += (n as f64).ln();
        let v = table.get(n);
        if v.sign != 0 {
            roots.push((n, (v.ln_abs - ln_fact) / n as f64));
        }
    }
    let window = |from: usize, to: usize| {
        roots
            .iter()
            .filter(|(n, _)| *n > from && *n <= to)
            .map(|(_, r)| *r)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let tail = window(n_max * 3 / 4, n_max);
    let before = window(n_max / 2, n_max * 3 / 4);
    if !tail.is_finite() || !before.is_finite() {
        return Err(Error::NonConvergent { spread: f64::INFINITY });
    }
    let (r_tail, r_before) = ((-tail).exp(), (-before).exp());
    let spread = (r_tail - r_before).abs() / r_tail;
    if spread > RADIUS_WINDOW_TOL {
        return Err(Error::NonConvergent { spread });
    }
    Ok(r_tail)
}

/// `√(1 + (λx₀)²) / λ`, the radius of `arctan(λx)` around x₀.
pub fn arctangent_radius(x0: f64, slope: f64) -> f64 {
    (1.0 + (slope * x0).powi(2)).sqrt() / slope
}
