//! Primitive integer polynomials for exact gcd and Sturm sequences.
//!
//! Euclid over the rationals lets coefficient sizes explode; primitive
//! pseudo-remainder sequences keep them near the size of the inputs.

use rug::{Integer, Rational};

use super::poly::Poly;
use super::scalar::Scalar;

/// Ascending integer coefficients without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(pub Vec<Integer>);

impl IntPoly {
    /// Clears denominators and content; `None` on the float path.
    pub fn from_poly(p: &Poly) -> Option<IntPoly> {
        let rats: Vec<&Rational> = p.coeffs().iter().map(Scalar::as_rational).collect::<Option<_>>()?;
        let mut l = Integer::from(1);
        for r in &rats {
            l.lcm_mut(r.denom());
        }
        let v = rats.iter().map(|r| r.numer() * Integer::from(&l / r.denom())).collect();
        Some(IntPoly(v).primitive())
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.0.iter().map(|c| Scalar::Exact(Rational::from(c.clone()))).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.cmp0() == std::cmp::Ordering::Equal) {
            self.0.pop();
        }
        self
    }

    /// Divides by the positive content.
    pub fn primitive(self) -> Self {
        let mut s = self.trim();
        let mut g = Integer::new();
        for c in &s.0 {
            g.gcd_mut(c);
        }
        if g > 1 {
            for c in &mut s.0 {
                c.div_exact_mut(&g);
            }
        }
        s
    }

    pub fn derivative(&self) -> Self {
        IntPoly(self.0.iter().enumerate().skip(1).map(|(i, c)| Integer::from(c * i as u64)).collect()).trim()
    }

    /// `|lc(d)|^(deg a − deg d + 1)·a mod d`; the multiplier is positive so signs survive.
    pub fn prem(&self, d: &IntPoly) -> IntPoly {
        assert!(!d.is_zero(), "pseudo-division by zero");
        let dd = d.degree();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return self.clone();
        }
        let lc = d.0[dd].clone();
        let lc_abs = Integer::from(lc.abs_ref());
        let sign_neg = lc < 0;
        let steps = r.len() - dd;
        for _ in 0..steps {
            let top = r.len() - 1;
            let f = r[top].clone();
            for c in r.iter_mut() {
                *c *= &lc_abs;
            }
            if f.cmp0() != std::cmp::Ordering::Equal {
                let shift = top - dd;
                for (i, c) in d.0.iter().enumerate() {
                    let t = Integer::from(&f * c);
                    if sign_neg {
                        r[shift + i] += t;
                    } else {
                        r[shift + i] -= t;
                    }
                }
            }
            r.pop();
        }
        IntPoly(r).trim()
    }

    /// Greatest common divisor up to a constant factor.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        if a.degree() < b.degree() || a.is_zero() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    /// Sign of the value at an exact rational point.
    pub fn sign_at(&self, x: &Rational) -> i32 {
        // Σ c_i p^i q^(n−i) with q > 0 has the sign of p(x).
        let (p, q) = (x.numer(), x.denom());
        let n = self.degree();
        let mut acc = Integer::new();
        let mut qpow = Integer::from(1);
        let mut terms: Vec<Integer> = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            terms.push(qpow.clone());
            qpow *= q;
        }
        let mut ppow = Integer::from(1);
        for (i, c) in self.0.iter().enumerate() {
            acc += Integer::from(c * &ppow) * &terms[n - i];
            ppow *= p;
        }
        acc.cmp0() as i32
    }

    /// Sturm sequence `p, p', −prem, …` with primitive parts.
    pub fn sturm_chain(&self) -> Vec<IntPoly> {
        let mut chain = vec![self.clone(), self.derivative().primitive()];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[k - 2].prem(&chain[k - 1]).primitive();
            if r.is_zero() {
                break;
            }
            chain.push(IntPoly(r.0.into_iter().map(|c| -c).collect()));
        }
        chain
    }
}
