//! Definitizable functions `𝔉(λ) ~ c − Σ 𝔰_j λ^{−j−1}`: moment shift,
//! class diagnostics, the D-Schur transform and its inverse, and the
//! admissible-index intersection.
//!
//! The reported `κ` is the stabilized negative inertia of the Hankel
//! matrices of `F = 𝔉/λ`, whose moments are `(−c, 𝔰_0, 𝔰_1, …)`. This
//! matches the Nevanlinna index on the shipped function classes and is a
//! heuristic in general.

use serde::Serialize;

use crate::arith::linalg::{self, Matrix};
use crate::arith::series::{z_inverse, z_mul};
use crate::arith::{FormalSeries, Poly, Scalar};
use crate::error::{Error, Result};
use crate::hankel::{hankel_det, kappa_report, normal_indices, KappaReport, MomentSequence, NormalIndexSet};
use crate::pfraction::{expand_pfraction_prefix, normalize, schur_step, PFraction};
use crate::recurrence::poly_pair;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DSeries {
    pub constant: Scalar,
    /// `𝔰_0, 𝔰_1, …`
    pub coeffs: Vec<Scalar>,
    pub normalized: bool,
}

impl DSeries {
    pub fn new(constant: Scalar, coeffs: Vec<Scalar>) -> Self {
        DSeries { constant, coeffs, normalized: false }
    }

    pub fn from_series(f: &FormalSeries) -> Self {
        DSeries::new(f.constant.clone(), f.coeffs.clone())
    }

    pub fn to_series(&self) -> FormalSeries {
        FormalSeries::new(self.constant.clone(), self.coeffs.clone())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_exact(&self) -> bool {
        self.constant.is_exact() && self.coeffs.iter().all(Scalar::is_exact)
    }

    pub fn moments(&self) -> MomentSequence {
        MomentSequence::new(self.coeffs.clone(), true)
    }

    /// `(−c, 𝔰_0, 𝔰_1, …)`, the moments of `𝔉/λ`.
    pub fn over_lambda_moments(&self) -> MomentSequence {
        let mut v = vec![-&self.constant];
        v.extend(self.coeffs.iter().cloned());
        MomentSequence::new(v, true)
    }

    /// Rescales by `|𝔰_{𝔫_1−1}|^{−1}` and returns the factor.
    pub fn normalize(&self) -> Result<(Scalar, DSeries)> {
        let (scale, f) = normalize(&self.to_series())?;
        let mut d = DSeries::from_series(&f);
        d.normalized = true;
        Ok((scale, d))
    }
}

/// `𝔰_j = s_{j+1}` with zero constant term (the t-weighted function).
pub fn shift_moments(s: &MomentSequence) -> DSeries {
    DSeries::new(Scalar::zero(), s.coeffs.iter().skip(1).cloned().collect())
}

/// `s = (γ, 𝔰_0, 𝔰_1, …)`.
pub fn unshift(d: &DSeries, gamma: &Scalar) -> MomentSequence {
    let mut v = vec![gamma.clone()];
    v.extend(d.coeffs.iter().cloned());
    MomentSequence::new(v, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FunctionClass {
    #[serde(rename = "D")]
    D,
    #[serde(rename = "D0")]
    DZero,
    #[serde(rename = "outside")]
    Outside,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub kappa: usize,
    pub kappa_detail: KappaReport,
    /// First normal index of `𝔰` within the horizon.
    pub frak_n1: Option<usize>,
    pub class: FunctionClass,
    pub checks: Vec<Check>,
}

impl ClassificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn classify(d: &DSeries, horizon: usize) -> Result<ClassificationReport> {
    let sf = d.over_lambda_moments();
    let kappa_detail = kappa_report(&sf, horizon)?;
    let kappa = kappa_detail.stabilized;
    let frak = d.moments();
    let frak_n1 = normal_indices(&frak, horizon.min(frak.len().div_ceil(2)))?.indices.first().copied();
    let mut checks = Vec::new();
    match frak_n1 {
        Some(n1) => {
            checks.push(Check { name: "n1_le_2kappa", pass: n1 <= 2 * kappa, detail: format!("n1={n1}, kappa={kappa}") });
            let lead = &d.coeffs[n1 - 1];
            let side = n1 != 2 * kappa || lead.signum() > 0;
            checks.push(Check {
                name: "leading_moment_sign",
                pass: side,
                detail: if n1 == 2 * kappa { format!("s[{}]={}", n1 - 1, lead.to_decimal(12)) } else { "not required".into() },
            });
        }
        None => checks.push(Check { name: "normal_index_found", pass: false, detail: format!("none up to {horizon}") }),
    }
    checks.push(Check { name: "kappa_settled", pass: !kappa_detail.caveat, detail: format!("{:?}", kappa_detail.per_n) });
    let structural = checks.iter().filter(|c| c.name != "kappa_settled").all(|c| c.pass);
    let class = if !structural {
        FunctionClass::Outside
    } else if d.constant.is_zero() {
        FunctionClass::DZero
    } else {
        FunctionClass::D
    };
    Ok(ClassificationReport { kappa, kappa_detail, frak_n1, class, checks })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DSchurStep {
    pub eps0: i32,
    pub frak_p0: Poly,
    /// `𝔟_0²`; zero when the transform terminates.
    pub frak_b0_sq: Scalar,
}

impl DSchurStep {
    pub fn frak_b0(&self) -> Scalar {
        self.frak_b0_sq.sqrt()
    }
}

/// Monic orthogonal polynomial of degree `n` from the determinant formula
/// `det[(𝔰_{i+k})_{i<n, k≤n}; (λ^k)] / det 𝔖_{n−1}`.
pub fn determinant_polynomial(frak: &[Scalar], n: usize) -> Result<Poly> {
    if frak.len() < 2 * n {
        return Err(Error::InsufficientMoments { needed: 2 * n, available: frak.len() });
    }
    let ms = MomentSequence::new(frak.to_vec(), true);
    let d = hankel_det(&ms, n)?;
    if d.is_zero() {
        return Err(Error::NotAdmissible(n));
    }
    // Cofactor expansion along the last row.
    let coeffs = (0..=n)
        .map(|k| {
            let minor: Matrix = (0..n).map(|i| (0..=n).filter(|&c| c != k).map(|c| frak[i + c].clone()).collect()).collect();
            let sign = if (n + k).is_multiple_of(2) { Scalar::one() } else { Scalar::from_int(-1) };
            sign * linalg::det(&minor) / &d
        })
        .collect();
    Ok(Poly::new(coeffs))
}

/// `−1/𝔉 = ε̂_0 𝔭_0 + 𝔟_0² 𝔉̂` on a normalized D° series.
///
/// The polynomial part from series division is compared with the
/// determinant formula; disagreement raises `Inconsistent`.
pub fn d_schur_transform(d: &DSeries) -> Result<(DSchurStep, Option<DSeries>)> {
    if !d.normalized {
        return Err(Error::NotNormalized("series must be normalized first".into()));
    }
    if !d.constant.is_zero() {
        return Err(Error::NotNormalized("constant term must vanish".into()));
    }
    let (step, next) = schur_step(&d.to_series())?;
    let n1 = step.p.degree();
    let det_p = determinant_polynomial(&d.coeffs, n1)?;
    let diff = (&det_p - &step.p).max_abs_coeff();
    let agree = if d.is_exact() { diff.is_zero() } else { diff.negligible(&step.p.max_abs_coeff()) };
    if !agree {
        return Err(Error::Inconsistent(format!("determinant formula and series division disagree by {diff}")));
    }
    let out = DSchurStep { eps0: step.eps, frak_p0: step.p, frak_b0_sq: step.b_sq };
    Ok((
        out,
        next.map(|n| {
            let mut d = DSeries::from_series(&n);
            d.normalized = true;
            d
        }),
    ))
}

/// `𝔉 = −ε̂_0/(𝔭_0 + ε̂_0 𝔟_0² 𝔉̂)` as a series; `next = None` means `𝔉̂ = 0`.
pub fn d_inverse_schur(step: &DSchurStep, next: Option<&DSeries>, order: usize) -> DSeries {
    let n1 = step.frak_p0.degree();
    let eps = Scalar::from_int(step.eps0 as i64);
    // In z = 1/λ: 𝔉 = −ε z^{n1} / g(z), g = rev 𝔭_0 + ε𝔟² z^{n1} ẑ.
    let len = order + 1;
    let mut g: Vec<Scalar> = (0..len).map(|k| if k <= n1 { step.frak_p0.coeff(n1 - k) } else { Scalar::zero() }).collect();
    if let Some(nx) = next {
        let c = &eps * &step.frak_b0_sq;
        for (j, s) in nx.coeffs.iter().enumerate() {
            let k = n1 + j + 1;
            if k < len {
                g[k] = &g[k] - &c * s;
            }
        }
    }
    let h = z_inverse(&g, len);
    let lead: Vec<Scalar> = (0..len).map(|k| if k == n1 { -&eps } else { Scalar::zero() }).collect();
    let z = z_mul(&lead, &h, len);
    let f = FormalSeries::from_z(&z);
    let mut d = DSeries::from_series(&f);
    d.normalized = true;
    d
}

/// P-fraction of a D° series (normalized internally; the factor is kept in `scale`).
pub fn d_pfraction(d: &DSeries, depth: usize) -> Result<PFraction> {
    if !d.constant.is_zero() {
        return Err(Error::NotNormalized("constant term must vanish".into()));
    }
    let pf = expand_pfraction_prefix(&d.to_series(), depth)?;
    if pf.len() < depth && !pf.finite {
        return Err(Error::OrderBudgetExceeded { completed: pf.len() });
    }
    Ok(pf)
}

/// Normal indices `n` of `F` (moments `s`) at which the subdiagonal
/// approximant exists, up to `horizon`.
///
/// Route one intersects `𝒩(s)` with `{n : n − 1 ∈ 𝒩(𝔰)} ∪ {1}`; route two
/// collects `n_j` with `P_{j−1}(0) ≠ 0` from the recurrence. The routes must
/// agree.
pub fn admissible_indices(s: &MomentSequence, d: &DSeries, horizon: usize) -> Result<NormalIndexSet> {
    let overlap = d.coeffs.len().min(s.len().saturating_sub(1));
    for j in 0..overlap {
        let diff = (&d.coeffs[j] - &s.coeffs[j + 1]).abs();
        if !diff.negligible(&s.coeffs[j + 1].abs().max(Scalar::one())) {
            return Err(Error::Inconsistent(format!("shifted coefficient {j} does not match")));
        }
    }
    let ns = normal_indices(s, horizon)?;
    let frak = MomentSequence::new(s.coeffs[1..].to_vec(), s.exact);
    let nf = normal_indices(&frak, horizon.saturating_sub(1))?;
    let route_a: Vec<usize> = ns.indices.iter().copied().filter(|&n| n == 1 || nf.contains(n - 1)).collect();

    let series = FormalSeries::from_moments(s.coeffs.clone());
    let pf = expand_pfraction_prefix(&series, horizon)?;
    let pair = poly_pair(&pf, pf.len())?;
    let mut route_b = Vec::new();
    for j in 1..=pair.depth() {
        let n = pair.n(j);
        if n > horizon {
            break;
        }
        if !pair.vanishes_at_zero(j - 1) {
            route_b.push(n);
        }
    }
    let reach = pf.normal_indices().last().copied().unwrap_or(0);
    let route_a_cut: Vec<usize> = if pf.finite { route_a.clone() } else { route_a.iter().copied().filter(|&n| n <= reach).collect() };
    if route_a_cut != route_b {
        return Err(Error::Inconsistent(format!("determinant route {route_a_cut:?} vs recurrence route {route_b:?}")));
    }
    Ok(NormalIndexSet { indices: route_a, horizon, threshold: ns.threshold })
}
