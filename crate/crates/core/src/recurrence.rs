//! Polynomials of the first and second kind, m-functions, the τ-sequence and
//! the Christoffel transform.
//!
//! The monic forms are stored:
//! `P̂_{j+1} = p_j P̂_j − ε_{j−1}ε_j b_{j−1}² P̂_{j−1}`, `P̂_0 = 1`, `P̂_1 = p_0`,
//! and `Q̂` follows the same recurrence from `Q̂_0 = 0`, `Q̂_1 = ε_0`.
//! The b-scaled `P_j = P̂_j/(b_0⋯b_{j−1})` are built on demand.

use serde::Serialize;

use crate::arith::{poly_roots, Complex, Poly, Scalar};
use crate::error::{Error, Result};
use crate::pfraction::PFraction;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolySequencePair {
    pub p_hat: Vec<Poly>,
    pub q_hat: Vec<Poly>,
    pub eps: Vec<i32>,
    pub b_sq: Vec<Scalar>,
    /// Multiplier of the normalized fraction (see [`PFraction::scale`]).
    pub scale: Scalar,
    /// The fraction terminates at `depth`.
    pub finite: bool,
}

pub fn poly_pair(pf: &PFraction, depth: usize) -> Result<PolySequencePair> {
    if depth > pf.len() {
        return Err(Error::OrderBudgetExceeded { completed: pf.len() });
    }
    let mut p_hat = vec![Poly::one()];
    let mut q_hat = vec![Poly::zero()];
    if depth >= 1 {
        p_hat.push(pf.steps[0].p.clone());
        q_hat.push(Poly::constant(pf.steps[0].eps_scalar()));
    }
    for j in 1..depth {
        let pj = &pf.steps[j].p;
        let c = Scalar::from_int((pf.steps[j - 1].eps * pf.steps[j].eps) as i64) * &pf.steps[j - 1].b_sq;
        let next_p = &(pj * &p_hat[j]) - &p_hat[j - 1].scale(&c);
        let next_q = &(pj * &q_hat[j]) - &q_hat[j - 1].scale(&c);
        p_hat.push(next_p);
        q_hat.push(next_q);
    }
    Ok(PolySequencePair {
        p_hat,
        q_hat,
        eps: pf.steps.iter().map(|s| s.eps).collect(),
        b_sq: pf.steps.iter().map(|s| s.b_sq.clone()).collect(),
        scale: pf.scale.clone(),
        finite: pf.finite && depth == pf.len(),
    })
}

/// One entry of the τ-sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauEntry {
    pub j: usize,
    /// `None` when `P_j(0) = 0` (index not admissible).
    pub tau: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauSequence {
    pub entries: Vec<TauEntry>,
    pub sup_abs: Scalar,
    pub horizon: usize,
    /// Least-squares slope of `|τ_j|` against `j` over admissible entries.
    pub slope: f64,
    pub finite: bool,
}

impl TauSequence {
    pub fn admissible(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().filter_map(|e| e.tau.as_ref().map(|t| (e.j, t)))
    }
}

impl PolySequencePair {
    /// Largest `j` with `P̂_j` available.
    pub fn depth(&self) -> usize {
        self.p_hat.len() - 1
    }

    /// `n_j = deg P_j`.
    pub fn n(&self, j: usize) -> usize {
        self.p_hat[j].degree()
    }

    pub fn is_exact(&self) -> bool {
        self.scale.is_exact() && self.p_hat.iter().all(Poly::is_exact) && self.q_hat.iter().all(Poly::is_exact)
    }

    /// `b_0⋯b_{j−1}`.
    pub fn b_product(&self, j: usize) -> Scalar {
        self.b_sq[..j].iter().fold(Scalar::one(), |a, b| a * b).sqrt()
    }

    /// `P_j = P̂_j/(b_0⋯b_{j−1})`.
    pub fn p(&self, j: usize) -> Poly {
        self.p_hat[j].scale(&self.b_product(j).recip())
    }

    /// `Q_j = Q̂_j/(b_0⋯b_{j−1})`.
    pub fn q(&self, j: usize) -> Poly {
        self.q_hat[j].scale(&self.b_product(j).recip())
    }

    /// Zero verdict for `P̂_j(0)` under the threshold policy.
    pub fn vanishes_at_zero(&self, j: usize) -> bool {
        let c = self.p_hat[j].coeff(0);
        c.negligible(&self.p_hat[j].max_abs_coeff())
    }

    /// `m_{[0,j−1]}(λ) = −Q_j(λ)/P_j(λ)` of the normalized function.
    pub fn m_function(&self, j: usize, lambda: &Complex) -> Result<Complex> {
        let den = self.p_hat[j].eval_complex(lambda);
        let scale = self.p_hat[j].max_abs_coeff() * Scalar::one().max(lambda.abs()).powi(self.n(j) as i32);
        if den.abs().negligible(&scale) {
            return Err(Error::PoleHit(lambda.to_string()));
        }
        Ok(-(&self.q_hat[j].eval_complex(lambda) / &den))
    }

    /// `τ_j = b_j P_{j+1}(0)/P_j(0) = P̂_{j+1}(0)/P̂_j(0)`.
    pub fn tau(&self, j: usize) -> Result<Scalar> {
        if j + 1 > self.depth() {
            return Err(Error::OrderBudgetExceeded { completed: self.depth() });
        }
        if self.vanishes_at_zero(j) {
            return Err(Error::NotAdmissible(j));
        }
        Ok(self.p_hat[j + 1].coeff(0) / self.p_hat[j].coeff(0))
    }

    /// τ-data for `j < horizon`.
    pub fn tau_sequence(&self, horizon: usize) -> Result<TauSequence> {
        let horizon = horizon.min(self.depth());
        let mut entries = Vec::with_capacity(horizon);
        for j in 0..horizon {
            let tau = match self.tau(j) {
                Ok(t) => Some(t),
                Err(Error::NotAdmissible(_)) => None,
                Err(e) => return Err(e),
            };
            entries.push(TauEntry { j, tau });
        }
        let adm: Vec<(f64, f64)> = entries.iter().filter_map(|e| e.tau.as_ref().map(|t| (e.j as f64, t.abs().to_f64()))).collect();
        let sup_abs = entries.iter().filter_map(|e| e.tau.as_ref().map(Scalar::abs)).fold(Scalar::zero(), Scalar::max);
        Ok(TauSequence { entries, sup_abs, horizon, slope: slope(&adm), finite: self.finite })
    }

    /// Christoffel transform `(P̂_j P̂_{j−1}(0) − P̂_{j−1} P̂_j(0))/(P̂_{j−1}(0) λ)`.
    pub fn christoffel(&self, j: usize) -> Result<Poly> {
        if j == 0 || self.vanishes_at_zero(j - 1) {
            return Err(Error::NotAdmissible(j));
        }
        let a = self.p_hat[j - 1].coeff(0);
        let c = self.p_hat[j].coeff(0);
        let num = &self.p_hat[j].scale(&a) - &self.p_hat[j - 1].scale(&c);
        let (quot, rem) = num.div_x();
        if !rem.negligible(&num.max_abs_coeff()) {
            return Err(Error::NonDivisible(j));
        }
        Ok(quot.scale(&a.recip()))
    }

    /// `min |z|` over the zeros of `P̂_j`.
    pub fn zero_distance(&self, j: usize) -> Result<Scalar> {
        let roots = poly_roots(&self.p_hat[j])?;
        Ok(roots.iter().map(Complex::abs).reduce(Scalar::min).unwrap_or_default())
    }

    /// Residual of `b̃_{j−1}P_{j−1} − p_j P_j + b_j P_{j+1}` in monic form.
    pub fn three_term_residual(&self, pf: &PFraction, j: usize) -> Poly {
        let c =
            if j == 0 { Scalar::zero() } else { Scalar::from_int((pf.steps[j - 1].eps * pf.steps[j].eps) as i64) * &pf.steps[j - 1].b_sq };
        let prev = if j == 0 { Poly::zero() } else { self.p_hat[j - 1].clone() };
        &(&self.p_hat[j + 1] - &(&pf.steps[j].p * &self.p_hat[j])) + &prev.scale(&c)
    }
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return 0.0;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}
