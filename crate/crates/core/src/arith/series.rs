//! Truncated Laurent series at infinity, `F(λ) = c − Σ_{j<N} s_j λ^{-j-1}`.
//!
//! Internally many operations work in `z = 1/λ`, where the coefficients are
//! `a_0 = c` and `a_{j+1} = −s_j`, known for `0 <= k <= N`.

use serde::{Deserialize, Serialize};

use super::complex::Complex;
use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormalSeries {
    /// Constant term `c` (the `−𝔰_{−1}` slot); zero for N-class series.
    pub constant: Scalar,
    /// `s_0..s_{N−1}`.
    pub coeffs: Vec<Scalar>,
}

/// Power series inverse `1/g` through `n` terms (`g[0] != 0`).
pub fn z_inverse(g: &[Scalar], n: usize) -> Vec<Scalar> {
    let g0 = &g[0];
    let mut h: Vec<Scalar> = Vec::with_capacity(n);
    for k in 0..n {
        if k == 0 {
            h.push(g0.recip());
            continue;
        }
        let mut acc = Scalar::zero();
        for i in 1..=k.min(g.len() - 1) {
            if !g[i].is_zero() {
                acc = acc + &g[i] * &h[k - i];
            }
        }
        h.push(-(acc / g0));
    }
    h
}

/// Cauchy product of two coefficient slices truncated to `n` terms.
pub fn z_mul(a: &[Scalar], b: &[Scalar], n: usize) -> Vec<Scalar> {
    (0..n)
        .map(|k| {
            let mut acc = Scalar::zero();
            for i in 0..=k {
                if i < a.len() && k - i < b.len() && !a[i].is_zero() && !b[k - i].is_zero() {
                    acc = acc + &a[i] * &b[k - i];
                }
            }
            acc
        })
        .collect()
}

impl FormalSeries {
    pub fn new(constant: Scalar, coeffs: Vec<Scalar>) -> Self {
        FormalSeries { constant, coeffs }
    }

    /// N-class series `−Σ s_j λ^{-j-1}`.
    pub fn from_moments(s: Vec<Scalar>) -> Self {
        FormalSeries::new(Scalar::zero(), s)
    }

    pub fn zero(order: usize) -> Self {
        FormalSeries::new(Scalar::zero(), vec![Scalar::zero(); order])
    }

    /// Builds a series from `z`-coefficients `a_0..a_N`.
    pub fn from_z(z: &[Scalar]) -> Self {
        assert!(!z.is_empty());
        FormalSeries::new(z[0].clone(), z[1..].iter().map(|a| -a).collect())
    }

    /// Truncation order `N` (number of known `s` coefficients).
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `z`-coefficients `a_0..a_N`.
    pub fn z_coeffs(&self) -> Vec<Scalar> {
        std::iter::once(self.constant.clone()).chain(self.coeffs.iter().map(|s| -s)).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.constant.is_exact() && self.coeffs.iter().all(Scalar::is_exact)
    }

    pub fn max_abs(&self) -> Scalar {
        self.coeffs.iter().chain(std::iter::once(&self.constant)).map(Scalar::abs).fold(Scalar::zero(), Scalar::max)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(order);
        FormalSeries::new(self.constant.clone(), c)
    }

    /// Index of the first `z`-coefficient that is not negligible, if any.
    pub fn z_valuation(&self) -> Option<usize> {
        let z = self.z_coeffs();
        let scale = self.max_abs();
        z.iter().position(|a| !a.negligible(&scale))
    }

    fn exact_z_valuation(&self) -> usize {
        let z = self.z_coeffs();
        z.iter().position(|a| !a.is_zero()).unwrap_or(z.len())
    }

    pub fn add(&self, other: &FormalSeries) -> FormalSeries {
        let n = self.order().min(other.order());
        FormalSeries::new(&self.constant + &other.constant, (0..n).map(|j| &self.coeffs[j] + &other.coeffs[j]).collect())
    }

    pub fn sub(&self, other: &FormalSeries) -> FormalSeries {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> FormalSeries {
        FormalSeries::new(&self.constant * c, self.coeffs.iter().map(|s| s * c).collect())
    }

    /// Product; known through `min(N_a + v_b, N_b + v_a)` where `v` is the exact valuation.
    pub fn mul(&self, other: &FormalSeries) -> FormalSeries {
        let va = self.exact_z_valuation();
        let vb = other.exact_z_valuation();
        let n = (self.order() + vb).min(other.order() + va);
        let z = z_mul(&self.z_coeffs(), &other.z_coeffs(), n + 1);
        let z: Vec<Scalar> = (0..=n).map(|k| z.get(k).cloned().unwrap_or_default()).collect();
        FormalSeries::from_z(&z)
    }

    /// `F/λ`; one more coefficient becomes known.
    pub fn div_lambda(&self) -> FormalSeries {
        let mut c = vec![-&self.constant];
        c.extend(self.coeffs.iter().cloned());
        FormalSeries::new(Scalar::zero(), c)
    }

    /// `λ·F` for a series with zero constant term.
    pub fn mul_lambda(&self) -> FormalSeries {
        assert!(self.constant.is_zero(), "λ·F needs a zero constant term");
        assert!(self.order() >= 1);
        FormalSeries::new(-&self.coeffs[0], self.coeffs[1..].to_vec())
    }

    /// Splits `−1/F = polynomial_part + tail`.
    ///
    /// With `v` the `z`-valuation of `F`, the polynomial part has degree `v`
    /// and the tail keeps `N − 2v` coefficients.
    pub fn recip(&self) -> Result<(Poly, FormalSeries)> {
        let v = self.z_valuation().ok_or(Error::AllZero)?;
        let n = self.order();
        if 2 * v > n {
            return Err(Error::ExhaustedOrder { step: 0 });
        }
        let z = self.z_coeffs();
        let g = &z[v..];
        let h = z_inverse(g, n - v + 1);
        let poly = Poly::new((0..=v).map(|d| -&h[v - d]).collect());
        let tail = (1..=n - 2 * v).map(|m| h[m + v].clone()).collect();
        Ok((poly, FormalSeries::from_moments(tail)))
    }

    /// Laurent expansion of `num/den` at infinity through `order` coefficients.
    pub fn from_rational(num: &Poly, den: &Poly, order: usize) -> Result<FormalSeries> {
        if den.is_zero() {
            return Err(Error::DegreeViolation("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(FormalSeries::zero(order));
        }
        let (m, d) = (num.degree(), den.degree());
        if m > d {
            return Err(Error::DegreeViolation(format!("numerator degree {m} exceeds denominator degree {d}")));
        }
        let rn = num.reversed(m);
        let rd = den.reversed(d);
        let h = z_inverse(&rd, order + 1);
        let q = z_mul(&rn, &h, order + 1);
        let shift = d - m;
        let z: Vec<Scalar> = (0..=order).map(|k| if k < shift { Scalar::zero() } else { q[k - shift].clone() }).collect();
        Ok(FormalSeries::from_z(&z))
    }

    /// Evaluates the truncated series at `λ`.
    pub fn eval_truncated(&self, lambda: &Complex) -> Complex {
        let z = lambda.recip();
        let mut acc = Complex::zero();
        for s in self.coeffs.iter().rev() {
            acc = &(&acc + &Complex::real(-s)) * &z;
        }
        &acc + &Complex::real(self.constant.clone())
    }
}
