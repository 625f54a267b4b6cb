//! Padé approximants built from the recurrence data, plus the brute-force
//! oracle, pole diagnostics and condition-(B) reporting.

mod oracle;
pub mod strategy;

pub use oracle::pade_oracle;
pub use strategy::{registry, ApproximantStrategy, Registry, StrategyContext};

use serde::Serialize;

use crate::arith::{poly_roots, sturm_count, Complex, FormalSeries, Poly, Scalar};
use crate::error::{Error, Result};
use crate::recurrence::{PolySequencePair, TauSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproxKind {
    /// `[n/n]`
    Diagonal,
    /// `[n/n−1]`
    Subdiagonal,
    /// `[n−1/n−1]` of the definitizable function
    Definitizable,
    /// `(P_n − λQ_n)/P_n`
    Modified,
    /// Linear-solve `[L/M]`
    Oracle,
}

/// `num/den` with the order `n` it was built for.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalApproximant {
    pub num: Poly,
    pub den: Poly,
    pub kind: ApproxKind,
    /// Number of leading series coefficients `s_0..` reproduced.
    pub contact_order: usize,
    pub n: usize,
}

impl RationalApproximant {
    pub fn eval(&self, lambda: &Complex) -> Result<Complex> {
        let d = self.den.eval_complex(lambda);
        let scale = self.den.max_abs_coeff() * Scalar::one().max(lambda.abs()).powi(self.den.degree() as i32);
        if d.abs().negligible(&scale) {
            return Err(Error::PoleHit(lambda.to_string()));
        }
        Ok(&self.num.eval_complex(lambda) / &d)
    }

    pub fn is_exact(&self) -> bool {
        self.num.is_exact() && self.den.is_exact()
    }

    /// Coprime form with a monic denominator.
    pub fn reduced(&self) -> (Poly, Poly) {
        let g = self.num.gcd(&self.den);
        let (num, den) = if g.degree() > 0 { (self.num.divrem(&g).0, self.den.divrem(&g).0) } else { (self.num.clone(), self.den.clone()) };
        let l = den.leading().recip();
        (num.scale(&l), den.monic())
    }

    /// Expansion at infinity through `order` coefficients.
    pub fn series(&self, order: usize) -> Result<FormalSeries> {
        FormalSeries::from_rational(&self.num, &self.den, order)
    }

    /// Largest deviation from `source` over the constant and `s_0..s_{contact_order−1}`.
    ///
    /// Exact approximants are re-expanded at infinity and compared coefficient by
    /// coefficient, relative to the largest source coefficient in the window. Rounded
    /// ones use the linearized residual `den·f − num` instead, relative to
    /// `|den|·|f| + |num|`: a pole of modulus `R` amplifies re-expansion rounding by
    /// `R^k`, and escaping poles are common here.
    pub fn contact_defect(&self, source: &FormalSeries) -> Result<Scalar> {
        let k = self.contact_order;
        if source.order() < k {
            return Err(Error::InsufficientMoments { needed: k, available: source.order() });
        }
        if self.is_exact() && source.is_exact() {
            return self.expansion_defect(source);
        }
        Ok(self.linearized_defect(source))
    }

    /// Coefficient-wise re-expansion defect.
    pub fn expansion_defect(&self, source: &FormalSeries) -> Result<Scalar> {
        let k = self.contact_order;
        let mine = self.series(k)?;
        let mut scale = source.constant.abs();
        let mut worst = (&mine.constant - &source.constant).abs();
        for i in 0..k {
            scale = scale.max(source.coeffs[i].abs());
            worst = worst.max((&mine.coeffs[i] - &source.coeffs[i]).abs());
        }
        if scale.is_zero() {
            return Ok(worst);
        }
        Ok(worst / scale)
    }

    /// Coefficients of `λ^m`, `deg den − k ≤ m ≤ deg den`, in `den·f − num`.
    pub fn linearized_defect(&self, source: &FormalSeries) -> Scalar {
        let k = self.contact_order as i64;
        let d = self.den.degree() as i64;
        let den = self.den.coeffs();
        let mut fmax = source.constant.abs();
        for i in 0..k as usize {
            fmax = fmax.max(source.coeffs[i].abs());
        }
        let mut worst = Scalar::zero();
        let mut m = d;
        while m >= d - k {
            let mut acc = if m >= 0 { -self.num.coeff(m as usize) } else { Scalar::zero() };
            for (i, c) in den.iter().enumerate() {
                let t = i as i64 - m - 1;
                if i as i64 == m {
                    acc = acc + c * &source.constant;
                } else if t >= 0 && t < k {
                    acc = acc - c * &source.coeffs[t as usize];
                }
            }
            worst = worst.max(acc.abs());
            m -= 1;
        }
        let scale = self.den.max_abs_coeff() * fmax + self.num.max_abs_coeff();
        if scale.is_zero() {
            return worst;
        }
        worst / scale
    }

    /// Relative size of `num_a·den_b − num_b·den_a`; zero iff the two agree as rational functions.
    pub fn cross_defect(&self, other: &RationalApproximant) -> Scalar {
        let l = &self.num * &other.den;
        let r = &other.num * &self.den;
        let diff = &l - &r;
        let scale = l.max_abs_coeff().max(r.max_abs_coeff());
        if diff.is_zero() || scale.is_zero() {
            return diff.max_abs_coeff();
        }
        diff.max_abs_coeff() / scale
    }
}

/// `F^{[n_j/n_j]} = −Q_j/P_j`.
pub fn diagonal(pair: &PolySequencePair, j: usize) -> Result<RationalApproximant> {
    if j == 0 || j > pair.depth() {
        return Err(Error::NotAdmissible(j));
    }
    let n = pair.n(j);
    Ok(RationalApproximant {
        num: -pair.q_hat[j].scale(&pair.scale),
        den: pair.p_hat[j].clone(),
        kind: ApproxKind::Diagonal,
        contact_order: 2 * n,
        n,
    })
}

/// `P^{(K)}_j = P̂_j − τ_{j−1}P̂_{j−1}` and the matching `Q^{(K)}_j`, monic form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerturbedTruncation {
    pub j: usize,
    pub tau: Scalar,
    pub pk: Poly,
    pub qk: Poly,
}

pub fn perturbed_truncation(pair: &PolySequencePair, j: usize) -> Result<PerturbedTruncation> {
    if j == 0 || j > pair.depth() || pair.vanishes_at_zero(j - 1) {
        return Err(Error::NotAdmissible(j));
    }
    let tau = pair.p_hat[j].coeff(0) / pair.p_hat[j - 1].coeff(0);
    let mut pk = &pair.p_hat[j] - &pair.p_hat[j - 1].scale(&tau);
    if !pk.is_exact() {
        // The constant term cancels by construction.
        let mut c = pk.coeffs().to_vec();
        if let Some(c0) = c.first_mut() {
            *c0 = Scalar::zero();
        }
        pk = Poly::new(c);
    }
    let qk = &pair.q_hat[j] - &pair.q_hat[j - 1].scale(&tau);
    Ok(PerturbedTruncation { j, tau, pk, qk })
}

/// `F^{[n_j/n_j−1]} = −Q^{(K)}_j/P^{(K)}_j`.
pub fn subdiagonal(pair: &PolySequencePair, j: usize) -> Result<RationalApproximant> {
    let pt = perturbed_truncation(pair, j)?;
    let n = pair.n(j);
    Ok(RationalApproximant { num: -pt.qk.scale(&pair.scale), den: pt.pk, kind: ApproxKind::Subdiagonal, contact_order: 2 * n - 1, n })
}

/// `𝔉^{[n_j−1/n_j−1]} = γ + λ·F^{[n_j/n_j−1]}` for `𝔉 = γ + λF`.
///
/// The factor `λ` cancels against `P^{(K)}_j(0) = 0`.
pub fn definitizable_diagonal(pair: &PolySequencePair, gamma: &Scalar, j: usize) -> Result<RationalApproximant> {
    let pt = perturbed_truncation(pair, j)?;
    let n = pair.n(j);
    if n < 2 {
        return Err(Error::NotAdmissible(j));
    }
    let (r, _) = pt.pk.div_x();
    let num = &r.scale(gamma) - &pt.qk.scale(&pair.scale);
    Ok(RationalApproximant { num, den: r, kind: ApproxKind::Definitizable, contact_order: 2 * (n - 1), n: n - 1 })
}

/// Modified approximant `γ + λ·F^{[n/n]} = γ(P̂_n − λQ̂_n)/P̂_n` (classical case, `γ = s_0`).
pub fn modified_diagonal(pair: &PolySequencePair, j: usize) -> Result<RationalApproximant> {
    if j == 0 || j > pair.depth() {
        return Err(Error::NotAdmissible(j));
    }
    if pair.eps[..j].iter().any(|&e| e != 1) || (1..=j).any(|i| pair.n(i) != i) {
        return Err(Error::NotClassical);
    }
    let gamma = &pair.scale;
    let num = (&pair.p_hat[j] - &pair.q_hat[j].shift(1)).scale(gamma);
    Ok(RationalApproximant { num, den: pair.p_hat[j].clone(), kind: ApproxKind::Modified, contact_order: 2 * j - 1, n: j })
}

/// Poles of an approximant (roots of the unreduced denominator).
pub fn poles(r: &RationalApproximant) -> Result<Vec<Complex>> {
    if r.den.degree() == 0 {
        return Ok(vec![]);
    }
    poly_roots(&r.den)
}

/// Pole count inside the gap shrunk by `delta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapVerdict {
    pub count: usize,
    pub method: &'static str,
    pub delta: Scalar,
}

pub fn gap_pole_count(r: &RationalApproximant, alpha: &Scalar, beta: &Scalar, delta: &Scalar) -> Result<GapVerdict> {
    let (lo, hi) = (alpha + delta, beta - delta);
    if r.den.is_exact() {
        let (_, den) = r.reduced();
        let count = sturm_count(&den, &lo, &hi);
        return Ok(GapVerdict { count, method: "sturm", delta: delta.clone() });
    }
    let tol = Scalar::pow2(-(crate::arith::precision_bits() as i32) / 3);
    let count = poles(r)?.iter().filter(|z| z.im.abs() <= &tol * &Scalar::one().max(z.abs()) && z.re > lo && z.re < hi).count();
    Ok(GapVerdict { count, method: "roots", delta: delta.clone() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Bounded,
    TendsToZero,
    LinearGrowth,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionBReport {
    pub sup_abs: Scalar,
    pub admissible: usize,
    pub trend: Trend,
    pub horizon: usize,
}

/// Summarizes `|τ_j|` over admissible `j`.
///
/// With `head`/`tail` the maxima over the first and last thirds: all zeros,
/// a finite fraction or `tail ≤ 1.5·head` give `bounded`; `tail ≤ head/4`
/// with nonzero values gives `tends-to-zero`; `tail ≥ 1.5·head` together with
/// a rising running maximum (slope > 0.05 per index) gives `linear-growth`.
pub fn condition_b_report(tau: &TauSequence) -> ConditionBReport {
    let vals: Vec<(usize, f64)> = tau.admissible().map(|(j, t)| (j, t.abs().to_f64())).collect();
    let sup_abs = tau.sup_abs.clone();
    let trend = classify_trend(&vals, tau.finite);
    ConditionBReport { sup_abs, admissible: vals.len(), trend, horizon: tau.horizon }
}

fn classify_trend(vals: &[(usize, f64)], finite: bool) -> Trend {
    if vals.iter().all(|v| v.1 == 0.0) {
        return if vals.is_empty() && !finite { Trend::Inconclusive } else { Trend::Bounded };
    }
    if vals.len() < 6 {
        return if finite { Trend::Bounded } else { Trend::Inconclusive };
    }
    let third = vals.len() / 3;
    let head = vals[..third].iter().map(|v| v.1).fold(0.0, f64::max);
    let tail = vals[vals.len() - third..].iter().map(|v| v.1).fold(0.0, f64::max);
    let running: Vec<(f64, f64)> = vals
        .iter()
        .scan(0.0f64, |m, v| {
            *m = m.max(v.1);
            Some((v.0 as f64, *m))
        })
        .collect();
    let slope = {
        let n = running.len() as f64;
        let mx = running.iter().map(|p| p.0).sum::<f64>() / n;
        let my = running.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = running.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = running.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    };
    if tail >= 1.5 * head && slope > 0.05 {
        Trend::LinearGrowth
    } else if head > 0.0 && tail <= 0.25 * head {
        Trend::TendsToZero
    } else if tail <= 1.5 * head || finite {
        Trend::Bounded
    } else {
        Trend::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{FunctionSpec, MeasureSpec};
    use crate::pfraction::expand_pfraction;
    use crate::recurrence::poly_pair;

    fn setup(spec: &FunctionSpec, depth: usize) -> (FormalSeries, PolySequencePair) {
        let f = spec.assemble_series(4 * depth + 4).unwrap();
        let pf = expand_pfraction(&f, depth).unwrap();
        let pair = poly_pair(&pf, pf.len().min(depth)).unwrap();
        (f, pair)
    }

    #[test]
    fn arcsine_first_diagonal_is_minus_one_over_lambda() {
        let (f, pair) = setup(&FunctionSpec::markov(MeasureSpec::arcsine()), 6);
        let d = diagonal(&pair, 1).unwrap();
        assert_eq!(d.reduced(), (Poly::constant(Scalar::from_int(-1)), Poly::x()));
        assert!(d.contact_defect(&f).unwrap().is_zero());
        for j in 1..=6 {
            let r = diagonal(&pair, j).unwrap();
            assert!(r.linearized_defect(&f).is_zero(), "j={j}: {}", r.linearized_defect(&f));
            let mut bad = r.clone();
            bad.contact_order += 1;
            assert!(!bad.linearized_defect(&f).is_zero());
        }
        let d3 = diagonal(&pair, 3).unwrap();
        let v = d3.eval(&Complex::real(Scalar::from_int(2))).unwrap();
        assert!((v.re + Scalar::from_int(3).sqrt().recip()).abs() < Scalar::ratio(1, 100));
    }

    #[test]
    fn two_periodic_perturbed_truncation() {
        let m = MeasureSpec::jacobi_periodic(vec![Scalar::one(), Scalar::zero()], vec![Scalar::one()]);
        let (f, pair) = setup(&FunctionSpec::markov(m), 8);
        let pt = perturbed_truncation(&pair, 1).unwrap();
        assert_eq!(pt.tau, Scalar::from_int(-1));
        assert_eq!(pt.pk, Poly::x());
        for j in 1..=8 {
            let s = subdiagonal(&pair, j).unwrap();
            assert!(s.contact_defect(&f).unwrap().is_zero(), "j={j}");
            assert!(perturbed_truncation(&pair, j).unwrap().pk.coeff(0).is_zero());
        }
    }

    #[test]
    fn oracle_agrees_with_recurrence_on_arcsine() {
        let (f, pair) = setup(&FunctionSpec::markov(MeasureSpec::arcsine()), 6);
        for j in 1..=6 {
            let n = pair.n(j);
            let o = pade_oracle(&f, n, n).unwrap();
            assert!(diagonal(&pair, j).unwrap().cross_defect(&o).is_zero());
        }
        let s2 = subdiagonal(&pair, 3).unwrap();
        assert!(s2.cross_defect(&pade_oracle(&f, 3, 2).unwrap()).is_zero());
        assert!(matches!(pade_oracle(&f, 2, 1), Err(Error::SystemSingular { .. })));
    }

    #[test]
    fn modified_is_one_plus_lambda_times_diagonal() {
        let (_, pair) = setup(&FunctionSpec::markov(MeasureSpec::arcsine()), 5);
        let z = Complex::from_f64(0.4, 0.9);
        for j in 1..=5 {
            let m = modified_diagonal(&pair, j).unwrap().eval(&z).unwrap();
            let d = diagonal(&pair, j).unwrap().eval(&z).unwrap();
            let want = &Complex::one() + &(&z * &d);
            assert!((&m - &want).abs() < Scalar::pow2(-200));
        }
        let m1 = modified_diagonal(&pair, 1).unwrap();
        assert!(m1.reduced().0.is_zero());
    }

    #[test]
    fn arcsine_poles() {
        let (_, pair) = setup(&FunctionSpec::markov(MeasureSpec::arcsine()), 3);
        let mut p: Vec<f64> = poles(&diagonal(&pair, 2).unwrap()).unwrap().iter().map(|z| z.re.to_f64()).collect();
        p.sort_by(f64::total_cmp);
        let r = 0.5f64.sqrt();
        assert!((p[0] + r).abs() < 1e-15 && (p[1] - r).abs() < 1e-15);
    }

    #[test]
    fn trend_classification() {
        let lin: Vec<(usize, f64)> = (0..30).map(|j| (j, if j % 2 == 0 { (j / 2 + 1) as f64 } else { 1.0 / (j / 2 + 1) as f64 })).collect();
        assert_eq!(classify_trend(&lin, false), Trend::LinearGrowth);
        let bounded: Vec<(usize, f64)> = (0..30).map(|j| (j, 0.5 + 0.1 * ((j % 3) as f64))).collect();
        assert_eq!(classify_trend(&bounded, false), Trend::Bounded);
        let decay: Vec<(usize, f64)> = (0..30).map(|j| (j, 0.5f64.powi(j as i32))).collect();
        assert_eq!(classify_trend(&decay, false), Trend::TendsToZero);
        assert_eq!(classify_trend(&[(0, 0.0)], true), Trend::Bounded);
        assert_eq!(classify_trend(&[(0, 0.0), (2, 0.0), (4, 0.0)], false), Trend::Bounded);
    }
}
