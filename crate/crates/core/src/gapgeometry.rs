//! Harmonic measure of `[−1, α]` relative to `ℂ ∖ ([−1, α] ∪ [β, 1])`
//! through Jacobi elliptic functions, and the rational/irrational dichotomy
//! that decides which approximant subsequences converge.
//!
//! With `k² = 2(β−α)/((1−α)(1+β))`, the point at infinity corresponds to
//! `u∞ ∈ (0, K)` with `sn²(u∞) = (1−α)/2` and the origin to `u₀` with
//! `sn²(u₀) = 2α/(k²(α−1))`; then `ω = 1 − u/K`. The `k/n` family test on
//! `ω(0)` is carried out literally; the source writes the harmonic measure
//! there as `ω_1` without defining the subscript.

use rug::Integer;
use serde::Serialize;

use crate::arith::{precision_bits, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapSpec {
    pub alpha: Scalar,
    pub beta: Scalar,
}

impl GapSpec {
    pub fn new(alpha: Scalar, beta: Scalar) -> Result<Self> {
        let one = Scalar::one();
        if !(alpha > -&one && alpha < Scalar::zero() && beta > Scalar::zero() && beta < one) {
            return Err(Error::InvalidGap { alpha: alpha.to_string(), beta: beta.to_string() });
        }
        Ok(GapSpec { alpha, beta })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EllipticData {
    pub k: Scalar,
    pub big_k: Scalar,
    pub big_k_prime: Scalar,
    pub e: Scalar,
    pub e_prime: Scalar,
    /// `e^{−πK/K′}`
    pub ring_r: Scalar,
}

impl EllipticData {
    pub fn new(k: &Scalar) -> Result<Self> {
        let (big_k, e) = complete_integrals(k)?;
        let kp = (Scalar::one() - k.square()).sqrt();
        let (big_k_prime, e_prime) = complete_integrals(&kp)?;
        let ring_r = (-(Scalar::pi() * &big_k / &big_k_prime)).exp();
        Ok(EllipticData { k: k.clone(), big_k, big_k_prime, e, e_prime, ring_r })
    }

    /// `E K′ + E′ K − K K′ − π/2`.
    pub fn legendre_residual(&self) -> Scalar {
        &self.e * &self.big_k_prime + &self.e_prime * &self.big_k - &self.big_k * &self.big_k_prime - Scalar::pi() / Scalar::from_int(2)
    }
}

/// `k² = 2(β−α)/((1−α)(1+β))`.
pub fn modulus(gap: &GapSpec) -> Result<Scalar> {
    let GapSpec { alpha, beta } = GapSpec::new(gap.alpha.clone(), gap.beta.clone())?;
    let one = Scalar::one();
    let k2 = Scalar::from_int(2) * (&beta - &alpha) / ((&one - &alpha) * (&one + &beta));
    Ok(k2.sqrt())
}

fn agm_limit() -> usize {
    10 + (precision_bits() as f64).log2().ceil() as usize
}

/// `(K, E)` by the arithmetic-geometric mean.
fn complete_integrals(k: &Scalar) -> Result<(Scalar, Scalar)> {
    let one = Scalar::one();
    if k.signum() < 0 || *k >= one {
        return Err(Error::ModulusOutOfRange(k.to_string()));
    }
    let k = k.to_real();
    let mut a = one.to_real();
    let mut b = (&one - k.square()).sqrt();
    let mut c = k.clone();
    let mut sum = c.square() / Scalar::from_int(2);
    let mut pow = Scalar::one().to_real();
    let tiny = Scalar::pow2(-(precision_bits() as i32) + 4);
    let mut it = 0;
    while c.abs() > tiny {
        if it >= agm_limit() {
            return Err(Error::NonConvergence { what: "agm".into(), iterations: it });
        }
        let an = (&a + &b) / Scalar::from_int(2);
        c = (&a - &b) / Scalar::from_int(2);
        b = (&a * &b).sqrt();
        a = an;
        sum = sum + &pow * c.square();
        pow = pow * Scalar::from_int(2);
        it += 1;
    }
    let big_k = Scalar::pi() / (Scalar::from_int(2) * &a);
    let e = &big_k * (one - sum);
    Ok((big_k, e))
}

/// `(K(k), K(√(1−k²)))`; `K′(0) = +∞`.
pub fn elliptic_k(k: &Scalar) -> Result<(Scalar, Scalar)> {
    if k.is_zero() {
        let inf = rug::Float::with_val(precision_bits(), rug::float::Special::Infinity);
        return Ok((complete_integrals(k)?.0, Scalar::real(inf)));
    }
    let d = EllipticData::new(k)?;
    Ok((d.big_k, d.big_k_prime))
}

fn asin(x: &Scalar) -> Scalar {
    let c = (Scalar::one() - x.square()).max(Scalar::zero()).sqrt();
    Scalar::atan2(x, &c)
}

/// Jacobi `sn(u, k)` for real `u` by the descending Landen chain.
pub fn jacobi_sn(u: &Scalar, k: &Scalar) -> Scalar {
    let one = Scalar::one();
    let u = u.to_real();
    let mut a = vec![one.to_real()];
    let mut c = vec![k.to_real()];
    let mut b = (&one - k.square()).sqrt().to_real();
    let tiny = Scalar::pow2(-(precision_bits() as i32) + 4);
    while c.last().unwrap().abs() > tiny && a.len() <= agm_limit() {
        let an = a.last().unwrap();
        let cn = (an - &b) / Scalar::from_int(2);
        let bn = (an * &b).sqrt();
        let next = (an + &b) / Scalar::from_int(2);
        a.push(next);
        c.push(cn);
        b = bn;
    }
    let n = a.len() - 1;
    let mut phi = Scalar::pow2(n as i32) * &a[n] * &u;
    for m in (1..=n).rev() {
        phi = (&phi + asin(&(&c[m] / &a[m] * phi.sin()))) / Scalar::from_int(2);
    }
    phi.sin()
}

/// `u ∈ (0, K)` with `sn²(u) = target`, by bisection.
fn invert_sn_sq(target: &Scalar, k: &Scalar, big_k: &Scalar) -> Result<Scalar> {
    if target.signum() <= 0 || *target >= Scalar::one() {
        return Err(Error::RootBracketFailure(format!("sn² target {} outside (0, 1)", target.to_decimal(20))));
    }
    let mut lo = Scalar::zero().to_real();
    let mut hi = big_k.clone();
    for _ in 0..precision_bits() + 8 {
        let mid = (&lo + &hi) / Scalar::from_int(2);
        if jacobi_sn(&mid, k).square() < *target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / Scalar::from_int(2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalWitness {
    pub p: i64,
    pub q: i64,
}

/// Smallest-denominator continued-fraction convergent `p/q` of `x` with
/// `q ≤ qmax` and `|x − p/q| < tol`.
pub fn classify_rational(x: &Scalar, qmax: i64, tol: &Scalar) -> Option<RationalWitness> {
    convergents(x, qmax).into_iter().find(|(p, q)| (x - Scalar::ratio(*p, *q)).abs() < *tol).map(|(p, q)| RationalWitness { p, q })
}

fn convergents(x: &Scalar, qmax: i64) -> Vec<(i64, i64)> {
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    let mut r = x.clone();
    let mut out = Vec::new();
    for _ in 0..64 {
        let a = r.floor_int();
        let h = Integer::from(&a * &h1) + &h0;
        let k = Integer::from(&a * &k1) + &k0;
        if k > qmax {
            break;
        }
        out.push((h.to_i64().unwrap_or(i64::MAX), k.to_i64().unwrap_or(i64::MAX)));
        let frac = &r - Scalar::Exact(a.into());
        if frac.is_zero() || frac.negligible(&Scalar::one()) {
            break;
        }
        r = frac.recip();
        (h0, h1) = (h1, h);
        (k0, k1) = (k1, k);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// `ω(∞)` has no rational witness: a diagonal subsequence converges.
    CaseI,
    /// `ω(∞) = m/n` and `ω(0)` avoids every `k/n`: the `[n−1/n−1]` sequence converges.
    CaseII,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarmonicMeasureReport {
    pub gap: GapSpec,
    pub elliptic: EllipticData,
    pub omega_inf: Scalar,
    pub omega_zero: Scalar,
    pub rational_inf: Option<RationalWitness>,
    pub rational_zero: Option<RationalWitness>,
    pub verdict: Verdict,
    pub tol: Scalar,
    pub qmax: i64,
}

pub const DEFAULT_QMAX: i64 = 50;

pub fn default_tol() -> Scalar {
    Scalar::from_f64(1e-15)
}

pub fn harmonic_measure(gap: &GapSpec) -> Result<HarmonicMeasureReport> {
    harmonic_measure_with(gap, DEFAULT_QMAX, &default_tol())
}

pub fn harmonic_measure_with(gap: &GapSpec, qmax: i64, tol: &Scalar) -> Result<HarmonicMeasureReport> {
    let k = modulus(gap)?;
    let el = EllipticData::new(&k)?;
    let one = Scalar::one();
    let alpha = &gap.alpha;
    let t_inf = (&one - alpha) / Scalar::from_int(2);
    let t_zero = Scalar::from_int(2) * alpha / (k.square() * (alpha - &one));
    let u_inf = invert_sn_sq(&t_inf, &k, &el.big_k)?;
    let u_zero = invert_sn_sq(&t_zero, &k, &el.big_k)?;
    let omega_inf = &one - &u_inf / &el.big_k;
    let omega_zero = &one - &u_zero / &el.big_k;
    let rational_inf = classify_rational(&omega_inf, qmax, tol);
    let rational_zero = classify_rational(&omega_zero, qmax, tol);
    let verdict = verdict(&omega_inf, &omega_zero, qmax, tol);
    Ok(HarmonicMeasureReport {
        gap: gap.clone(),
        elliptic: el,
        omega_inf,
        omega_zero,
        rational_inf,
        rational_zero,
        verdict,
        tol: tol.clone(),
        qmax,
    })
}

fn verdict(omega_inf: &Scalar, omega_zero: &Scalar, qmax: i64, tol: &Scalar) -> Verdict {
    let loose = tol * Scalar::from_int(10);
    let Some(w) = classify_rational(omega_inf, qmax, &loose) else {
        return Verdict::CaseI;
    };
    if (omega_inf - Scalar::ratio(w.p, w.q)).abs() >= *tol {
        return Verdict::Inconclusive;
    }
    let n = w.q;
    let nearest = (0..=n).map(|k| (omega_zero - Scalar::ratio(k, n)).abs()).reduce(Scalar::min).unwrap_or_default();
    if nearest > loose {
        Verdict::CaseII
    } else {
        Verdict::Inconclusive
    }
}

/// Which convergence statement applies to the gap.
pub fn prop59_verdict(gap: &GapSpec, qmax: i64, tol: &Scalar) -> Result<Verdict> {
    Ok(harmonic_measure_with(gap, qmax, tol)?.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Scalar {
        Scalar::ratio(p, q)
    }

    #[test]
    fn modulus_examples() {
        let k = modulus(&GapSpec::new(r(-1, 3), r(1, 3)).unwrap()).unwrap();
        assert!((k.square() - r(3, 4)).abs() < Scalar::pow2(-240));
        let k = modulus(&GapSpec::new(r(-2, 5), r(1, 2)).unwrap()).unwrap();
        assert!((k.square() - r(6, 7)).abs() < Scalar::pow2(-240));
        assert!(GapSpec::new(r(1, 5), r(1, 2)).is_err());
    }

    #[test]
    fn sn_special_values() {
        let k = r(3, 5);
        let (big_k, _) = elliptic_k(&k).unwrap();
        assert!(jacobi_sn(&Scalar::zero(), &k).abs() < Scalar::pow2(-250));
        assert!((jacobi_sn(&big_k, &k) - Scalar::one()).abs() < Scalar::pow2(-200));
        let kp = r(4, 5);
        let half = jacobi_sn(&(&big_k / Scalar::from_int(2)), &k).square();
        assert!((half - (Scalar::one() + kp).recip()).abs() < Scalar::pow2(-200));
        let x = r(7, 10);
        assert!((jacobi_sn(&x, &Scalar::zero()) - x.sin()).abs() < Scalar::pow2(-240));
    }

    #[test]
    fn rational_classifier() {
        assert_eq!(classify_rational(&r(1, 2), 10, &Scalar::from_f64(1e-30)), Some(RationalWitness { p: 1, q: 2 }));
        let x = r(1, 3).to_real() + Scalar::from_f64(1e-40);
        assert_eq!(classify_rational(&x, 100, &Scalar::from_f64(1e-20)), Some(RationalWitness { p: 1, q: 3 }));
        let golden = (Scalar::from_int(5).sqrt() - Scalar::one()) / Scalar::from_int(2);
        assert_eq!(classify_rational(&golden, 1000, &Scalar::from_f64(1e-12)), None);
    }

    #[test]
    fn symmetric_gap_is_half() {
        let rep = harmonic_measure(&GapSpec::new(r(-1, 3), r(1, 3)).unwrap()).unwrap();
        assert!((&rep.omega_inf - r(1, 2)).abs() < Scalar::pow2(-200));
        assert_eq!(rep.rational_inf, Some(RationalWitness { p: 1, q: 2 }));
        assert_eq!(rep.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn perturbed_symmetric_gap_is_case_one() {
        let gap = GapSpec::new(r(-1, 3), r(1, 3) + Scalar::from_f64(1e-3)).unwrap();
        assert_eq!(prop59_verdict(&gap, 50, &Scalar::from_f64(1e-15)).unwrap(), Verdict::CaseI);
    }
}
