//! Polynomial roots and real-root counting.

use nalgebra::DMatrix;

use super::complex::Complex;
use super::intpoly::IntPoly;
use super::poly::Poly;
use super::scalar::{precision_bits, Scalar};
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 500;

/// All complex roots of `p` with multiplicity.
///
/// Seeds come from the eigenvalues of the companion matrix in double
/// precision; they are then refined simultaneously (Aberth–Ehrlich) at the
/// working precision and finally polished by Newton steps.
pub fn poly_roots(p: &Poly) -> Result<Vec<Complex>> {
    if p.is_zero() || p.degree() == 0 {
        return Err(Error::DegreeViolation("root finding needs degree >= 1".into()));
    }
    let mut p = p.clone();
    let mut roots = Vec::new();
    while !p.is_zero() && p.degree() >= 1 && p.coeff(0).is_zero() {
        roots.push(Complex::zero());
        p = p.div_x().0;
    }
    if p.degree() == 0 {
        return Ok(roots);
    }
    let m = p.monic();
    if m.degree() == 1 {
        roots.push(Complex::real(-m.coeff(0)));
        return Ok(roots);
    }
    roots.extend(aberth(&m)?);
    Ok(roots)
}

fn seeds(p: &Poly) -> Vec<Complex> {
    let n = p.degree();
    let c: Vec<f64> = p.to_f64();
    if c.iter().all(|v| v.is_finite()) {
        let mut comp = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            comp[(i, n - 1)] = -c[i];
        }
        let ev = comp.complex_eigenvalues();
        if ev.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return ev.iter().map(|z| Complex::from_f64(z.re, z.im)).collect();
        }
    }
    // Cauchy-radius circle with an irrational angular offset.
    let r = 1.0 + c[..n].iter().fold(0.0f64, |a, v| a.max(v.abs())).min(1e300);
    (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex::from_f64(r * t.cos(), r * t.sin())
        })
        .collect()
}

fn abs_poly(p: &Poly) -> Poly {
    Poly::new(p.coeffs().iter().map(Scalar::abs).collect())
}

fn aberth(p: &Poly) -> Result<Vec<Complex>> {
    let dp = p.derivative();
    let ap = abs_poly(p);
    let mut z: Vec<Complex> = seeds(p).into_iter().map(|c| Complex::new(c.re.to_real(), c.im.to_real())).collect();
    let n = z.len();
    let step_tol = Scalar::pow2(-(precision_bits() as i32) + 8);
    let residual_tol = Scalar::pow2(-(precision_bits() as i32) / 2);
    let mut converged = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        let mut all = true;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let pv = p.eval_complex(&z[i]);
            if pv.is_zero() {
                converged[i] = true;
                continue;
            }
            let dv = dp.eval_complex(&z[i]);
            let newton = &pv / &dv;
            let mut sum = Complex::zero();
            for j in 0..n {
                if j != i {
                    sum = &sum + &(&z[i] - &z[j]).recip();
                }
            }
            let denom = &Complex::one() - &(&newton * &sum);
            let w = if denom.is_zero() { newton } else { &newton / &denom };
            z[i] = &z[i] - &w;
            let scale = Scalar::one().max(z[i].abs());
            if w.abs() <= &step_tol * &scale {
                converged[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            return Ok(z);
        }
    }
    // Clustered roots converge only linearly; accept them if the residual is small.
    let ok = z.iter().all(|r| {
        let res = p.eval_complex(r).abs();
        let bound = ap.eval(&r.abs());
        res <= &residual_tol * &bound
    });
    if ok {
        Ok(z)
    } else {
        Err(Error::NonConvergence { what: "polynomial roots".into(), iterations: MAX_ITERATIONS })
    }
}

/// Sturm sequence of an exact polynomial.
fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let k = chain.len();
        if chain[k - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[k - 2].divrem(&chain[k - 1]).1;
        if r.is_zero() {
            break;
        }
        chain.push(-r);
    }
    chain
}

fn sign_changes(chain: &[Poly], x: &Scalar) -> usize {
    let signs: Vec<i32> = chain.iter().map(|q| q.eval(x).signum()).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` in the open interval `(a, b)`.
pub fn sturm_count(p: &Poly, a: &Scalar, b: &Scalar) -> usize {
    if p.is_zero() || p.degree() == 0 {
        return 0;
    }
    if let (Some(ip), Some(ra), Some(rb)) = (IntPoly::from_poly(p), a.as_rational(), b.as_rational()) {
        let chain = ip.sturm_chain();
        let changes = |x| {
            let s: Vec<i32> = chain.iter().map(|q| q.sign_at(x)).filter(|&s| s != 0).collect();
            s.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let count = changes(ra).saturating_sub(changes(rb));
        return if ip.sign_at(rb) == 0 { count - 1 } else { count };
    }
    let chain = sturm_chain(p);
    let count = sign_changes(&chain, a).saturating_sub(sign_changes(&chain, b));
    if p.eval(b).is_zero() {
        count - 1
    } else {
        count
    }
}
