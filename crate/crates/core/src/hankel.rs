//! Hankel determinants, normal indices and negative inertia.

use serde::Serialize;

use crate::arith::linalg::{self, Matrix};
use crate::arith::Scalar;
use crate::error::{Error, Result};

/// Moment coefficients `s_0, s_1, …` with an exactness flag.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentSequence {
    pub coeffs: Vec<Scalar>,
    pub exact: bool,
}

impl MomentSequence {
    pub fn new(coeffs: Vec<Scalar>, exact: bool) -> Self {
        let exact = exact && coeffs.iter().all(Scalar::is_exact);
        MomentSequence { coeffs, exact }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `𝔰_j = s_{j+1}`.
    pub fn shifted(&self) -> MomentSequence {
        MomentSequence::new(self.coeffs.iter().skip(1).cloned().collect(), self.exact)
    }

    /// `S_{n−1} = (s_{i+k})_{i,k<n}`.
    pub fn hankel_matrix(&self, n: usize) -> Result<Matrix> {
        self.require(n)?;
        Ok((0..n).map(|i| (0..n).map(|k| self.coeffs[i + k].clone()).collect()).collect())
    }

    fn require(&self, n: usize) -> Result<()> {
        let needed = (2 * n).saturating_sub(1);
        if needed > self.len() {
            return Err(Error::InsufficientMoments { needed, available: self.len() });
        }
        Ok(())
    }
}

/// Normal indices found within a horizon.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalIndexSet {
    pub indices: Vec<usize>,
    pub horizon: usize,
    /// `None` on the exact path; the relative zero threshold otherwise.
    pub threshold: Option<Scalar>,
}

impl NormalIndexSet {
    pub fn contains(&self, n: usize) -> bool {
        self.indices.binary_search(&n).is_ok()
    }

    /// `true` when every index from the first one up to the horizon is normal.
    pub fn cofinite_within_horizon(&self) -> bool {
        match self.indices.first() {
            Some(&first) => self.indices.len() == self.horizon + 1 - first,
            None => false,
        }
    }

    pub fn intersect(&self, other: &NormalIndexSet) -> NormalIndexSet {
        NormalIndexSet {
            indices: self.indices.iter().copied().filter(|&n| other.contains(n)).collect(),
            horizon: self.horizon.min(other.horizon),
            threshold: self.threshold.clone().or_else(|| other.threshold.clone()),
        }
    }
}

/// `det S_{n−1}`; `det S_{−1} = 1`.
pub fn hankel_det(s: &MomentSequence, n: usize) -> Result<Scalar> {
    if n == 0 {
        return Ok(Scalar::one());
    }
    Ok(linalg::det(&s.hankel_matrix(n)?))
}

/// Zero verdict for `det S_{n−1}` under the threshold policy.
fn det_is_zero(s: &MomentSequence, n: usize) -> Result<(bool, Scalar)> {
    let m = s.hankel_matrix(n)?;
    let d = linalg::det(&m);
    if s.exact {
        return Ok((d.is_zero(), d));
    }
    Ok((d.abs() < linalg::det_threshold(&m), d))
}

pub fn normal_indices(s: &MomentSequence, horizon: usize) -> Result<NormalIndexSet> {
    s.require(horizon)?;
    let mut indices = Vec::new();
    for n in 1..=horizon {
        if !det_is_zero(s, n)?.0 {
            indices.push(n);
        }
    }
    let threshold = (!s.exact).then(crate::arith::zero_threshold);
    Ok(NormalIndexSet { indices, horizon, threshold })
}

/// Number of negative eigenvalues of `S_{n−1}`.
///
/// Exact input uses Jacobi's sign rule on the leading principal minors and
/// falls back to a symmetric congruence when a minor vanishes; float input
/// uses the congruence directly.
pub fn negative_inertia(s: &MomentSequence, n: usize) -> Result<usize> {
    let m = s.hankel_matrix(n)?;
    if s.exact {
        let minors: Vec<Scalar> = (1..=n).map(|k| hankel_det(s, k)).collect::<Result<_>>()?;
        if let Some(v) = linalg::negative_inertia_minors(&minors) {
            return Ok(v);
        }
    }
    Ok(linalg::inertia_congruence(&m).negative)
}

/// Negative inertia tracked over `n = 1..=horizon`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KappaReport {
    pub per_n: Vec<usize>,
    pub stabilized: usize,
    pub monotone: bool,
    /// Set when the last increase happened within two steps of the horizon.
    pub caveat: bool,
}

pub fn kappa_report(s: &MomentSequence, horizon: usize) -> Result<KappaReport> {
    let per_n: Vec<usize> = (1..=horizon).map(|n| negative_inertia(s, n)).collect::<Result<_>>()?;
    let stabilized = per_n.last().copied().unwrap_or(0);
    let monotone = per_n.windows(2).all(|w| w[0] <= w[1]);
    let last_change = per_n.windows(2).rposition(|w| w[0] != w[1]).map(|i| i + 2);
    let caveat = last_change.is_some_and(|n| n + 2 >= horizon);
    Ok(KappaReport { per_n, stabilized, monotone, caveat })
}
