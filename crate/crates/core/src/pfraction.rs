//! Schur–Magnus algorithm: formal series to P-fraction and generalized Jacobi matrix.
//!
//! Every stage is kept normalized: the first nonzero coefficient of the
//! current series has modulus one. One step reads
//! `−1/F_j = ε_j p_j + b_j² F_{j+1}` with `p_j` monic.

use serde::Serialize;

use crate::arith::linalg::{self, Matrix};
use crate::arith::{FormalSeries, Poly, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PFractionStep {
    pub eps: i32,
    /// `b_j²`; zero marks the last step of a terminating fraction.
    pub b_sq: Scalar,
    pub p: Poly,
}

impl PFractionStep {
    pub fn k(&self) -> usize {
        self.p.degree()
    }

    pub fn b(&self) -> Scalar {
        self.b_sq.sqrt()
    }

    pub fn eps_scalar(&self) -> Scalar {
        Scalar::from_int(self.eps as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PFraction {
    /// `|s_{n_1−1}|` of the original series; the fraction describes `F/scale`.
    pub scale: Scalar,
    pub steps: Vec<PFractionStep>,
    /// The remainder vanished after the last step.
    pub finite: bool,
}

impl PFraction {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `n_1, …, n_J` with `n_{j+1} = n_j + k_j`.
    pub fn normal_indices(&self) -> Vec<usize> {
        self.steps
            .iter()
            .scan(0, |n, s| {
                *n += s.k();
                Some(*n)
            })
            .collect()
    }

    pub fn is_exact(&self) -> bool {
        self.scale.is_exact() && self.steps.iter().all(|s| s.b_sq.is_exact() && s.p.is_exact())
    }

    /// All blocks `1×1` with `ε = 1`.
    pub fn is_classical(&self) -> bool {
        self.steps.iter().all(|s| s.k() == 1 && s.eps == 1)
    }
}

/// Splits `F = scale · F̃` with `F̃` normalized.
pub fn normalize(f: &FormalSeries) -> Result<(Scalar, FormalSeries)> {
    if !f.constant.is_zero() {
        return Err(Error::NotNormalized("constant term must vanish".into()));
    }
    let v = f.z_valuation().ok_or(Error::AllZero)?;
    let scale = f.coeffs[v - 1].abs();
    Ok((scale.clone(), f.scale(&scale.recip())))
}

fn check_normalized(f: &FormalSeries) -> Result<usize> {
    if !f.constant.is_zero() {
        return Err(Error::NotNormalized("constant term must vanish".into()));
    }
    let v = f.z_valuation().ok_or(Error::AllZero)?;
    let lead = f.coeffs[v - 1].abs();
    let off = &lead - Scalar::one();
    let ok = if lead.is_exact() { off.is_zero() } else { off.negligible(&Scalar::one()) };
    if !ok {
        return Err(Error::NotNormalized(format!("leading coefficient has modulus {lead}")));
    }
    Ok(v)
}

/// One Schur step; `next` is `None` when the remainder vanishes.
pub fn schur_step(f: &FormalSeries) -> Result<(PFractionStep, Option<FormalSeries>)> {
    check_normalized(f)?;
    let (poly, tail) = f.recip()?;
    if tail.order() == 0 {
        return Err(Error::ExhaustedOrder { step: 0 });
    }
    let eps = poly.leading().signum();
    let mut p = poly.scale(&Scalar::from_int(eps as i64));
    p = Poly::new(p.coeffs().iter().enumerate().map(|(i, c)| if i == p.degree() { Scalar::one() } else { c.clone() }).collect());
    let scale = poly.max_abs_coeff().max(tail.max_abs());
    match tail.coeffs.iter().position(|c| !c.negligible(&scale)) {
        None => Ok((PFractionStep { eps, b_sq: Scalar::zero(), p }, None)),
        Some(i) => {
            let b_sq = tail.coeffs[i].abs();
            let mut next = tail.scale(&b_sq.recip());
            for c in next.coeffs[..i].iter_mut() {
                *c = Scalar::zero();
            }
            Ok((PFractionStep { eps, b_sq, p }, Some(next)))
        }
    }
}

/// Longest safe expansion with at most `depth` steps.
pub fn expand_pfraction_prefix(f: &FormalSeries, depth: usize) -> Result<PFraction> {
    let (scale, mut cur) = normalize(f)?;
    let mut steps = Vec::new();
    let mut finite = false;
    while steps.len() < depth {
        match schur_step(&cur) {
            Ok((step, next)) => {
                steps.push(step);
                match next {
                    Some(n) => cur = n,
                    None => {
                        finite = true;
                        break;
                    }
                }
            }
            Err(Error::ExhaustedOrder { .. }) | Err(Error::AllZero) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(PFraction { scale, steps, finite })
}

/// Expansion to exactly `depth` steps unless the fraction terminates earlier.
pub fn expand_pfraction(f: &FormalSeries, depth: usize) -> Result<PFraction> {
    let pf = expand_pfraction_prefix(f, depth)?;
    if pf.len() < depth && !pf.finite {
        return Err(Error::OrderBudgetExceeded { completed: pf.len() });
    }
    Ok(pf)
}

/// Companion matrix and symmetrizator of a monic polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct CompanionPair {
    pub c: Matrix,
    pub e: Matrix,
}

pub fn companion(p: &Poly) -> Result<CompanionPair> {
    if !p.is_monic() || p.degree() == 0 {
        return Err(Error::NotMonic);
    }
    let k = p.degree();
    let mut c = vec![vec![Scalar::zero(); k]; k];
    for i in 0..k {
        if i > 0 {
            c[i][i - 1] = Scalar::one();
        }
        c[i][k - 1] = -p.coeff(i);
    }
    let e = (0..k).map(|i| (0..k).map(|j| if i + j < k { p.coeff(i + j + 1) } else { Scalar::zero() }).collect()).collect();
    Ok(CompanionPair { c, e })
}

/// Inverse of the symmetrizator.
fn invert(m: &Matrix) -> Matrix {
    let n = m.len();
    let cols: Vec<Vec<Scalar>> = (0..n)
        .map(|j| {
            let e: Vec<Scalar> = (0..n).map(|i| if i == j { Scalar::one() } else { Scalar::zero() }).collect();
            linalg::solve(m, &e).expect("symmetrizator is invertible")
        })
        .collect();
    linalg::transpose(&cols)
}

/// Blocks `G_j = ε_j E_{p_j}^{−1}`.
pub fn gram(pf: &PFraction) -> Vec<Matrix> {
    pf.steps
        .iter()
        .map(|s| {
            let e = companion(&s.p).expect("P-fraction polynomials are monic").e;
            invert(&e).into_iter().map(|r| r.into_iter().map(|x| x * s.eps_scalar()).collect()).collect()
        })
        .collect()
}

/// Block-tridiagonal generalized Jacobi matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Gjm {
    /// `A_j = C_{p_j}`.
    pub a: Vec<Matrix>,
    /// `b_j`, the single entry of `B_j` at `(0, k_j − 1)`.
    pub b: Vec<Scalar>,
    /// `b̃_j = ε_j ε_{j+1} b_j`, the single entry of `B̃_j` at `(0, k_{j+1} − 1)`.
    pub b_tilde: Vec<Scalar>,
    pub gram: Vec<Matrix>,
}

pub fn build_gjm(pf: &PFraction) -> Gjm {
    let a = pf.steps.iter().map(|s| companion(&s.p).expect("monic").c).collect();
    let mut b = Vec::new();
    let mut b_tilde = Vec::new();
    for j in 0..pf.len().saturating_sub(1) {
        let bj = pf.steps[j].b();
        let sign = pf.steps[j].eps * pf.steps[j + 1].eps;
        b_tilde.push(&bj * Scalar::from_int(sign as i64));
        b.push(bj);
    }
    Gjm { a, b, b_tilde, gram: gram(pf) }
}

impl Gjm {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.a.iter().map(Vec::len).collect()
    }

    /// Dense `J_{[from, to]}`.
    pub fn dense(&self, from: usize, to: usize) -> Matrix {
        let sizes = self.block_sizes();
        let offs: Vec<usize> = sizes[from..=to]
            .iter()
            .scan(0, |o, k| {
                let r = *o;
                *o += k;
                Some(r)
            })
            .collect();
        let n: usize = sizes[from..=to].iter().sum();
        let mut m = vec![vec![Scalar::zero(); n]; n];
        for (bi, j) in (from..=to).enumerate() {
            let o = offs[bi];
            for (r, row) in self.a[j].iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    m[o + r][o + c] = x.clone();
                }
            }
            if j < to {
                let o2 = offs[bi + 1];
                // B_j sits below the diagonal, B̃_j above it.
                m[o2][o + sizes[j] - 1] = self.b[j].clone();
                m[o][o2 + sizes[j + 1] - 1] = self.b_tilde[j].clone();
            }
        }
        m
    }

    /// Dense `G_{[0, to]}`.
    pub fn dense_gram(&self, to: usize) -> Matrix {
        let n: usize = self.block_sizes()[..=to].iter().sum();
        let mut m = vec![vec![Scalar::zero(); n]; n];
        let mut o = 0;
        for g in &self.gram[..=to] {
            for (r, row) in g.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    m[o + r][o + c] = x.clone();
                }
            }
            o += g.len();
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{FunctionSpec, MeasureSpec};

    fn arcsine_series(n: usize) -> FormalSeries {
        FunctionSpec::markov(MeasureSpec::arcsine()).assemble_series(n).unwrap()
    }

    #[test]
    fn arcsine_first_step() {
        let (step, next) = schur_step(&arcsine_series(12)).unwrap();
        assert_eq!(step.eps, 1);
        assert_eq!(step.p, Poly::x());
        assert_eq!(step.b_sq, Scalar::ratio(1, 2));
        assert_eq!(next.unwrap().order(), 10);
    }

    #[test]
    fn atom_at_zero_terminates() {
        let f = FormalSeries::from_moments(vec![Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::zero()]);
        let (step, next) = schur_step(&f).unwrap();
        assert_eq!(step.p, Poly::x());
        assert!(next.is_none());
    }

    #[test]
    fn two_periodic_first_step() {
        let f = FunctionSpec::markov(MeasureSpec::jacobi_periodic(vec![Scalar::one(), Scalar::zero()], vec![Scalar::one()]))
            .assemble_series(8)
            .unwrap();
        let (step, _) = schur_step(&f).unwrap();
        assert_eq!((step.eps, step.p, step.b_sq), (1, Poly::from_ints(&[-1, 1]), Scalar::one()));
    }

    #[test]
    fn arcsine_expansion() {
        let pf = expand_pfraction(&arcsine_series(12), 4).unwrap();
        let bsq: Vec<Scalar> = pf.steps.iter().map(|s| s.b_sq.clone()).collect();
        assert_eq!(bsq, vec![Scalar::ratio(1, 2), Scalar::ratio(1, 4), Scalar::ratio(1, 4), Scalar::ratio(1, 4)]);
        assert!(pf.is_classical());
        assert!(matches!(expand_pfraction(&arcsine_series(6), 5), Err(Error::OrderBudgetExceeded { completed: 2 })));
    }

    #[test]
    fn atom_pair_terminates_after_two_steps() {
        let h = Scalar::ratio(1, 2);
        let f = FunctionSpec::markov(MeasureSpec::atoms(vec![(h.clone(), h.clone()), (-&h, h.clone())])).assemble_series(12).unwrap();
        let pf = expand_pfraction(&f, 6).unwrap();
        assert!(pf.finite);
        assert_eq!(pf.len(), 2);
    }

    #[test]
    fn shifted_arcsine_has_a_quadratic_first_block() {
        let f = FunctionSpec::t_weighted(MeasureSpec::arcsine()).assemble_series(30).unwrap();
        let pf = expand_pfraction(&f, 5).unwrap();
        assert_eq!(pf.steps[0].k(), 2);
        assert!(pf.steps.iter().all(|s| s.k() == 1 || s.k() == 2));
    }

    #[test]
    fn companion_identities() {
        assert_eq!(companion(&Poly::x()).unwrap(), CompanionPair { c: vec![vec![Scalar::zero()]], e: vec![vec![Scalar::one()]] });
        let p = Poly::from_ints(&[5, 3, 1]);
        let cp = companion(&p).unwrap();
        let s = |v: i64| Scalar::from_int(v);
        assert_eq!(cp.c, vec![vec![s(0), s(-5)], vec![s(1), s(-3)]]);
        assert_eq!(cp.e, vec![vec![s(3), s(1)], vec![s(1), s(0)]]);
        let q = Poly::from_ints(&[2, -7, 4, 1]);
        let cq = companion(&q).unwrap();
        let lhs = linalg::mat_mul(&cq.c, &cq.e);
        let rhs = linalg::mat_mul(&cq.e, &linalg::transpose(&cq.c));
        assert_eq!(lhs, rhs);
        assert_eq!(companion(&Poly::from_ints(&[1, 2])), Err(Error::NotMonic));
    }

    #[test]
    fn gram_blocks() {
        let pf = PFraction {
            scale: Scalar::one(),
            steps: vec![
                PFractionStep { eps: 1, b_sq: Scalar::one(), p: Poly::x() },
                PFractionStep { eps: -1, b_sq: Scalar::one(), p: Poly::from_ints(&[5, 3, 1]) },
            ],
            finite: false,
        };
        let g = gram(&pf);
        let s = |v: i64| Scalar::from_int(v);
        assert_eq!(g[0], vec![vec![s(1)]]);
        assert_eq!(g[1], vec![vec![s(0), s(-1)], vec![s(-1), s(3)]]);
    }

    #[test]
    fn arcsine_gjm_is_classical_jacobi() {
        let pf = expand_pfraction(&arcsine_series(12), 4).unwrap();
        let g = build_gjm(&pf);
        let d = g.dense(0, 3);
        for i in 0..4 {
            assert!(d[i][i].is_zero());
        }
        assert!((&d[1][0] - Scalar::ratio(1, 2).sqrt()).abs() < Scalar::pow2(-250));
        assert_eq!(d[2][1], Scalar::ratio(1, 2));
        assert_eq!(d[1][2], Scalar::ratio(1, 2));
    }
}
