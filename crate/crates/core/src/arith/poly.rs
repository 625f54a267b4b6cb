//! Dense univariate polynomials with ascending coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::complex::Complex;
use super::intpoly::IntPoly;
use super::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(from = "Vec<Scalar>", into = "Vec<Scalar>")]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl From<Vec<Scalar>> for Poly {
    fn from(v: Vec<Scalar>) -> Self {
        Poly::new(v)
    }
}

impl From<Poly> for Vec<Scalar> {
    fn from(p: Poly) -> Self {
        p.coeffs
    }
}

impl Poly {
    /// Builds a polynomial, dropping trailing zero coefficients.
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    /// The identity polynomial `λ`.
    pub fn x() -> Self {
        Poly::new(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn monomial(c: Scalar, k: usize) -> Self {
        let mut v = vec![Scalar::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&v| Scalar::from_int(v)).collect())
    }

    /// Monic polynomial with the given real roots.
    pub fn from_roots(roots: &[Scalar]) -> Self {
        roots.iter().fold(Poly::one(), |acc, r| &acc * &Poly::new(vec![-r, Scalar::one()]))
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(Scalar::is_one)
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_exact)
    }

    pub fn max_abs_coeff(&self) -> Scalar {
        self.coeffs.iter().map(Scalar::abs).fold(Scalar::zero(), Scalar::max)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: &Complex) -> Complex {
        if z.is_real() {
            return Complex::real(self.eval(&z.re));
        }
        self.coeffs.iter().rev().fold(Complex::zero(), |acc, c| &acc * z + Complex::real(c.clone()))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        assert!(!self.is_zero(), "monic of the zero polynomial");
        let l = self.leading();
        let mut p = self.scale(&l.recip());
        if let Some(last) = p.coeffs.last_mut() {
            *last = Scalar::one();
        }
        p
    }

    pub fn derivative(&self) -> Self {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Scalar::from_int(i as i64)).collect())
    }

    /// Multiplies by `λ^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Scalar::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    /// Splits `p = λ·q + r` and returns `(q, r)`.
    pub fn div_x(&self) -> (Self, Scalar) {
        if self.is_zero() {
            return (Poly::zero(), Scalar::zero());
        }
        (Poly::new(self.coeffs[1..].to_vec()), self.coeffs[0].clone())
    }

    /// Coefficients of `λ^n p(1/λ)` (requires `n >= degree`).
    pub fn reversed(&self, n: usize) -> Vec<Scalar> {
        assert!(self.is_zero() || n >= self.degree());
        (0..=n).map(|i| self.coeff(n - i)).collect()
    }

    /// Euclidean division `self = q·d + r`.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let dl = d.leading();
        let dd = d.degree();
        let mut r = self.coeffs.clone();
        let mut q = vec![Scalar::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] / &dl;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] = &r[k + i] - &f * c;
            }
            r[k + dd] = Scalar::zero();
            q[k] = f;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Drops trailing coefficients that are negligible relative to `scale`.
    pub fn trim_negligible(&self, scale: &Scalar) -> Self {
        let mut v = self.coeffs.clone();
        while v.last().is_some_and(|c| c.negligible(scale)) {
            v.pop();
        }
        Poly { coeffs: v }
    }

    /// Monic greatest common divisor. On the float path remainders below the
    /// zero threshold (relative to the inputs) count as zero.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if let (Some(a), Some(b)) = (IntPoly::from_poly(self), IntPoly::from_poly(other)) {
            let g = a.gcd(&b).to_poly();
            return if g.is_zero() { g } else { g.monic() };
        }
        let scale = self.max_abs_coeff().max(other.max_abs_coeff());
        let (mut a, mut b) = (self.clone(), other.clone());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            let r = if r.is_exact() {
                r
            } else {
                let s = b.max_abs_coeff().max(scale.clone());
                r.trim_negligible(&s)
            };
            a = b.monic();
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(Scalar::to_f64).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})λ")?,
                _ => write!(f, "({c})λ^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + a * b;
            }
        }
        Poly::new(v)
    }
}

macro_rules! owned_ops {
    ($trait:ident, $method:ident) => {
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let z = Complex::zero();
        assert!(Poly::from_ints(&[0, 0, 1]).eval_complex(&z).is_zero());
        let one = Complex::one();
        assert!(Poly::from_ints(&[-1, 1]).eval_complex(&one).is_zero());
        let two = Complex::real(Scalar::from_int(2));
        assert_eq!(Poly::from_ints(&[1, 0, 1]).eval_complex(&two), Complex::real(Scalar::from_int(5)));
        let i = Complex::i();
        assert!(Poly::from_ints(&[1, 0, 1]).eval_complex(&i).is_zero());
    }

    #[test]
    fn divrem_and_gcd() {
        let a = Poly::from_roots(&[Scalar::from_int(1), Scalar::from_int(2), Scalar::ratio(1, 3)]);
        let b = Poly::from_roots(&[Scalar::from_int(2), Scalar::from_int(-5)]);
        let (q, r) = a.divrem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert_eq!(a.gcd(&b), Poly::from_ints(&[-2, 1]));
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = Poly::new(vec![Scalar::one(), Scalar::zero(), Scalar::zero()]);
        assert_eq!(p.degree(), 0);
        assert!((&p - &p).is_zero());
    }
}
