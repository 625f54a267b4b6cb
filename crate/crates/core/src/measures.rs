//! Measure and function specifications, moments, series assembly and
//! reference evaluation of `F` and `𝔉`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use log::warn;

use crate::arith::{precision_bits, Complex, FormalSeries, Poly, Scalar};
use crate::error::{Error, Result};
use crate::hankel::MomentSequence;

/// Density of the absolutely continuous part.
#[derive(Clone, Debug, PartialEq)]
pub enum Density {
    /// `dt/(π√(1−t²))`.
    Arcsine,
    /// `dt/(π√(1−(t−c)²))` on `[c−1, c+1]`.
    ArcsineShifted(Scalar),
    /// `dt`.
    Lebesgue,
    /// Piecewise-linear interpolation of the table `(t_k, ρ_k)`, zero outside it.
    Custom(Vec<(Scalar, Scalar)>),
    /// Spectral measure at `e_0` of the Jacobi matrix with periodically
    /// repeated diagonal and off-diagonal entries.
    JacobiPeriodic { diag: Vec<Scalar>, off: Vec<Scalar> },
    /// No continuous part.
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpec {
    pub intervals: Vec<(Scalar, Scalar)>,
    pub density: Density,
    pub atoms: Vec<(Scalar, Scalar)>,
    pub normalize: bool,
}

/// `r1 = q1/w1`, `r2 = q2/w2`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPerturbation {
    pub q1: Poly,
    pub w1: Poly,
    pub q2: Poly,
    pub w2: Poly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionSpec {
    pub measure: MeasureSpec,
    pub perturbation: Option<RationalPerturbation>,
    /// `true` selects `𝔉(λ) = ∫ t dσ(t)/(t−λ)`, `false` selects `F(λ) = ∫ dσ(t)/(t−λ)`.
    pub t_weight: bool,
}

impl MeasureSpec {
    pub fn arcsine() -> Self {
        MeasureSpec { intervals: vec![(Scalar::from_int(-1), Scalar::one())], density: Density::Arcsine, atoms: vec![], normalize: false }
    }

    pub fn arcsine_shifted(c: Scalar) -> Self {
        MeasureSpec {
            intervals: vec![(&c - Scalar::one(), &c + Scalar::one())],
            density: Density::ArcsineShifted(c),
            atoms: vec![],
            normalize: false,
        }
    }

    pub fn lebesgue(intervals: Vec<(Scalar, Scalar)>, normalize: bool) -> Self {
        MeasureSpec { intervals, density: Density::Lebesgue, atoms: vec![], normalize }
    }

    pub fn atoms(atoms: Vec<(Scalar, Scalar)>) -> Self {
        MeasureSpec { intervals: vec![], density: Density::None, atoms, normalize: false }
    }

    pub fn jacobi_periodic(diag: Vec<Scalar>, off: Vec<Scalar>) -> Self {
        MeasureSpec { intervals: vec![], density: Density::JacobiPeriodic { diag, off }, atoms: vec![], normalize: false }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidMeasure(m));
        for w in self.intervals.windows(2) {
            if w[0].1 > w[1].0 {
                return bad("intervals must be disjoint and ordered".into());
            }
        }
        for (lo, hi) in &self.intervals {
            if lo >= hi {
                return bad(format!("empty interval [{lo}, {hi}]"));
            }
        }
        if self.atoms.iter().any(|(_, w)| w.signum() < 0) {
            return bad("atom weights must be nonnegative".into());
        }
        match &self.density {
            Density::ArcsineShifted(c) => {
                let (lo, hi) = (c - Scalar::one(), c + Scalar::one());
                if self.intervals.iter().any(|(a, b)| *a < lo || *b > hi) {
                    return bad("intervals leave the shifted arcsine support".into());
                }
            }
            Density::Arcsine => {
                if self.intervals.iter().any(|(a, b)| *a < Scalar::from_int(-1) || *b > Scalar::one()) {
                    return bad("arcsine intervals must lie in [-1, 1]".into());
                }
            }
            Density::Custom(table) => {
                if table.len() < 2 || table.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return bad("custom table needs at least two increasing abscissae".into());
                }
                if table.iter().any(|(_, y)| y.signum() < 0) {
                    return bad("custom density must be nonnegative".into());
                }
            }
            Density::JacobiPeriodic { diag, off } => {
                if diag.is_empty() || off.is_empty() || off.iter().any(|b| b.signum() <= 0) {
                    return bad("Jacobi data needs nonempty diagonals and positive off-diagonals".into());
                }
            }
            Density::Lebesgue | Density::None => {}
        }
        let has_continuous = !matches!(self.density, Density::None | Density::JacobiPeriodic { .. });
        if has_continuous && self.intervals.is_empty() {
            return bad("a density needs at least one interval".into());
        }
        Ok(())
    }

    /// Raw moments `∫ t^j dσ(t)` before normalization, plus whether they are exact.
    fn raw_moments(&self, count: usize) -> Result<(Vec<Scalar>, bool)> {
        self.validate()?;
        let mut s = vec![Scalar::zero(); count];
        let mut exact = true;
        match &self.density {
            Density::Arcsine | Density::ArcsineShifted(_) => {
                let c = match &self.density {
                    Density::ArcsineShifted(c) => c.clone(),
                    _ => Scalar::zero(),
                };
                for (lo, hi) in &self.intervals {
                    let x = arcsine_power_integrals(&(lo - &c), &(hi - &c), count);
                    let shifted = binomial_shift(&x, &c);
                    for (a, b) in s.iter_mut().zip(shifted) {
                        *a = &*a + b;
                    }
                }
                exact = s.iter().all(Scalar::is_exact);
            }
            Density::Lebesgue => {
                for (lo, hi) in &self.intervals {
                    let (mut pl, mut ph) = (lo.clone(), hi.clone());
                    for (j, a) in s.iter_mut().enumerate() {
                        *a = &*a + (&ph - &pl) / Scalar::from_int(j as i64 + 1);
                        pl = pl * lo;
                        ph = ph * hi;
                    }
                }
                exact = s.iter().all(Scalar::is_exact);
            }
            Density::Custom(table) => {
                for (lo, hi) in &self.intervals {
                    for (x0, x1, a, b) in clipped_segments(table, lo, hi) {
                        for (j, m) in s.iter_mut().enumerate() {
                            let k = j as i64;
                            let t1 = (x1.powi(k as i32 + 1) - x0.powi(k as i32 + 1)) / Scalar::from_int(k + 1);
                            let t2 = (x1.powi(k as i32 + 2) - x0.powi(k as i32 + 2)) / Scalar::from_int(k + 2);
                            *m = &*m + &a * t1 + &b * t2;
                        }
                    }
                }
                s = s.iter().map(Scalar::to_real).collect();
                exact = false;
            }
            Density::JacobiPeriodic { diag, off } => {
                s = jacobi_moments(diag, off, count);
                exact = s.iter().all(Scalar::is_exact);
            }
            Density::None => {}
        }
        for (t, w) in &self.atoms {
            let mut p = w.clone();
            for a in s.iter_mut() {
                *a = &*a + &p;
                p = p * t;
            }
            exact &= t.is_exact() && w.is_exact();
        }
        Ok((s, exact))
    }

    /// Moments `s_0..s_{count−1}`, scaled so `s_0 = 1` when `normalize` is set.
    pub fn moments(&self, count: usize) -> Result<MomentSequence> {
        if count == 0 {
            return Err(Error::InsufficientMoments { needed: 1, available: 0 });
        }
        let (mut s, exact) = self.raw_moments(count)?;
        if s[0].signum() <= 0 {
            return Err(Error::InvalidMeasure("total mass must be positive".into()));
        }
        if self.normalize {
            let m = s[0].clone();
            s = s.iter().map(|x| x / &m).collect();
        }
        Ok(MomentSequence::new(s, exact))
    }

    /// Total mass after normalization.
    pub fn mass(&self) -> Result<Scalar> {
        Ok(self.moments(1)?.coeffs[0].clone())
    }

    fn mass_factor(&self) -> Result<Scalar> {
        if self.normalize {
            Ok(self.raw_moments(1)?.0[0].recip())
        } else {
            Ok(Scalar::one())
        }
    }

    /// Endpoints of the support (intervals and atoms) sorted as closed pieces.
    pub fn support(&self) -> Vec<(Scalar, Scalar)> {
        let mut pieces: Vec<(Scalar, Scalar)> = self.intervals.clone();
        pieces.extend(self.atoms.iter().map(|(t, _)| (t.clone(), t.clone())));
        pieces.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        pieces
    }

    /// Cauchy transform `∫ dσ(t)/(t−λ)`.
    pub fn cauchy_transform(&self, lambda: &Complex) -> Result<Complex> {
        self.validate()?;
        if lambda.is_real() {
            for (lo, hi) in self.support() {
                if lambda.re >= lo && lambda.re <= hi {
                    return Err(Error::TooCloseToSupport(lambda.to_string()));
                }
            }
        }
        let mut acc = Complex::zero();
        match &self.density {
            Density::Arcsine | Density::ArcsineShifted(_) => {
                let c = match &self.density {
                    Density::ArcsineShifted(c) => c.clone(),
                    _ => Scalar::zero(),
                };
                let mu = lambda - &Complex::real(c.clone());
                for (lo, hi) in &self.intervals {
                    let (xl, xh) = (lo - &c, hi - &c);
                    if xl == Scalar::from_int(-1) && xh == Scalar::one() {
                        acc = &acc + &arcsine_full(&mu);
                    } else {
                        acc = &acc + &arcsine_partial(&xl, &xh, &mu)?;
                    }
                }
            }
            Density::Lebesgue => {
                for (lo, hi) in &self.intervals {
                    acc = &acc + &log_ratio(lo, hi, lambda);
                }
            }
            Density::Custom(table) => {
                for (lo, hi) in &self.intervals {
                    for (x0, x1, a, b) in clipped_segments(table, lo, hi) {
                        let lin = Complex::real(&b * (&x1 - &x0));
                        let coef = &Complex::real(a) + &lambda.scale(&b);
                        acc = &acc + &(&lin + &(&coef * &log_ratio(&x0, &x1, lambda)));
                    }
                }
            }
            Density::JacobiPeriodic { diag, off } => {
                acc = jacobi_m_function(diag, off, lambda)?;
            }
            Density::None => {}
        }
        for (t, w) in &self.atoms {
            let d = &Complex::real(t.clone()) - lambda;
            acc = &acc + &(&Complex::real(w.clone()) / &d);
        }
        Ok(acc.scale(&self.mass_factor()?))
    }
}

impl RationalPerturbation {
    pub fn r1(&self) -> (Poly, Poly) {
        (self.q1.clone(), self.w1.clone())
    }

    pub fn validate(&self, t_weight: bool) -> Result<()> {
        if self.w1.is_zero() || self.w2.is_zero() {
            return Err(Error::DegreeViolation("zero denominator in perturbation".into()));
        }
        if !self.q1.is_zero() && self.q1.degree() > self.w1.degree() {
            return Err(Error::DegreeViolation("deg q1 > deg w1".into()));
        }
        if !self.q2.is_zero() {
            let (dq, dw) = (self.q2.degree(), self.w2.degree());
            if dq > dw || (!t_weight && dq == dw) {
                return Err(Error::DegreeViolation(format!("deg q2 = {dq} too large for deg w2 = {dw}")));
            }
        }
        self.check_r1_nonnegative();
        Ok(())
    }

    /// Samples `r1` on a 1024-point grid of `[−1, 1]` and warns about negative values.
    fn check_r1_nonnegative(&self) -> bool {
        let mut ok = true;
        for i in 0..=1024 {
            let x = Scalar::ratio(2 * i - 1024, 1024);
            let w = self.w1.eval(&x);
            if w.is_zero() {
                continue;
            }
            if (self.q1.eval(&x) / w).signum() < 0 {
                ok = false;
                break;
            }
        }
        if !ok {
            warn!("r1 takes negative values on [-1, 1]");
        }
        ok
    }
}

impl FunctionSpec {
    pub fn markov(measure: MeasureSpec) -> Self {
        FunctionSpec { measure, perturbation: None, t_weight: false }
    }

    pub fn t_weighted(measure: MeasureSpec) -> Self {
        FunctionSpec { measure, perturbation: None, t_weight: true }
    }

    /// Gap `(α, β)` around 0 when the function is t-weighted and 0 lies outside the support.
    pub fn gap(&self) -> Option<(Scalar, Scalar)> {
        if !self.t_weight {
            return None;
        }
        let support = self.measure.support();
        let alpha = support.iter().filter(|(_, hi)| hi.signum() < 0).map(|(_, hi)| hi.clone()).reduce(Scalar::max)?;
        let beta = support.iter().filter(|(lo, _)| lo.signum() > 0).map(|(lo, _)| lo.clone()).reduce(Scalar::min)?;
        if support.iter().any(|(lo, hi)| lo.signum() <= 0 && hi.signum() >= 0) {
            return None;
        }
        Some((alpha, beta))
    }

    /// Series coefficients of the function (`s_j` of `F`, or `𝔰_j` of `𝔉`).
    pub fn moments(&self, count: usize) -> Result<MomentSequence> {
        let series = self.assemble_series(count)?;
        let exact = series.is_exact();
        Ok(MomentSequence::new(series.coeffs, exact))
    }

    /// Laurent series at infinity through `order` coefficients.
    pub fn assemble_series(&self, order: usize) -> Result<FormalSeries> {
        let base = if self.t_weight {
            let s = self.measure.moments(order + 1)?;
            FormalSeries::from_moments(s.coeffs[1..].to_vec())
        } else {
            FormalSeries::from_moments(self.measure.moments(order)?.coeffs)
        };
        let Some(p) = &self.perturbation else {
            return Ok(base);
        };
        p.validate(self.t_weight)?;
        let r1 = FormalSeries::from_rational(&p.q1, &p.w1, order)?;
        let r2 = FormalSeries::from_rational(&p.q2, &p.w2, order)?;
        Ok(r1.mul(&base).truncate(order).add(&r2))
    }

    /// Reference value `F(λ)` (or `𝔉(λ)`), including the perturbation.
    pub fn eval_exact(&self, lambda: &Complex) -> Result<Complex> {
        let base = self.measure.cauchy_transform(lambda)?;
        let base = if self.t_weight {
            let gamma = self.measure.mass()?;
            &Complex::real(gamma) + &(lambda * &base)
        } else {
            base
        };
        let Some(p) = &self.perturbation else {
            return Ok(base);
        };
        let w1 = p.w1.eval_complex(lambda);
        let w2 = p.w2.eval_complex(lambda);
        let scale = Scalar::one().max(lambda.abs());
        if w1.abs().negligible(&scale) || w2.abs().negligible(&scale) {
            return Err(Error::PoleOfPerturbation(lambda.to_string()));
        }
        let r1 = &p.q1.eval_complex(lambda) / &w1;
        let r2 = &p.q2.eval_complex(lambda) / &w2;
        Ok(&(&r1 * &base) + &r2)
    }
}

/// Affine shift: `Σ_i C(j,i) c^{j−i} x_i` for `j < len`.
fn binomial_shift(x: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    if c.is_zero() {
        return x.to_vec();
    }
    let n = x.len();
    let mut out = Vec::with_capacity(n);
    let mut row: Vec<Scalar> = vec![Scalar::one()];
    for j in 0..n {
        if j > 0 {
            let mut next = vec![Scalar::one(); j + 1];
            for i in 1..j {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        let mut acc = Scalar::zero();
        let mut cp = Scalar::one();
        for i in (0..=j).rev() {
            acc = acc + &row[i] * &cp * &x[i];
            cp = cp * c;
        }
        out.push(acc);
    }
    out
}

/// `∫_lo^hi x^j dx/(π√(1−x²))` for `[lo, hi] ⊂ [−1, 1]`, `j < n`.
fn arcsine_power_integrals(lo: &Scalar, hi: &Scalar, n: usize) -> Vec<Scalar> {
    if *lo == Scalar::from_int(-1) && *hi == Scalar::one() {
        let mut out = Vec::with_capacity(n);
        let mut c = Scalar::one();
        for j in 0..n {
            if j % 2 == 0 {
                out.push(c.clone());
                let m = (j / 2 + 1) as i64;
                c = c * Scalar::ratio(2 * m - 1, 2 * m);
            } else {
                out.push(Scalar::zero());
            }
        }
        return out;
    }
    // With x = cos θ: (1/π)∫ cos^j θ dθ over [acos hi, acos lo], using
    // I_j = cos^{j−1}θ sinθ / j + (j−1)/j I_{j−2}.
    let (t0, t1) = (hi.acos(), lo.acos());
    let (c0, s0, c1, s1) = (t0.cos(), t0.sin(), t1.cos(), t1.sin());
    let pi = Scalar::pi();
    let mut out: Vec<Scalar> = Vec::with_capacity(n);
    let mut cp0 = Scalar::one();
    let mut cp1 = Scalar::one();
    for j in 0..n {
        let v = match j {
            0 => &t1 - &t0,
            1 => &s1 - &s0,
            _ => {
                let jj = Scalar::from_int(j as i64);
                (&cp1 * &s1 - &cp0 * &s0) / &jj + Scalar::ratio(j as i64 - 1, j as i64) * &out[j - 2]
            }
        };
        out.push(v);
        if j >= 1 {
            cp0 = cp0 * &c0;
            cp1 = cp1 * &c1;
        }
    }
    out.into_iter().map(|v| v / &pi).collect()
}

/// `−1/(λ√(1−λ^{−2}))`, the Cauchy transform of the arcsine distribution.
fn arcsine_full(lambda: &Complex) -> Complex {
    let inv2 = (lambda * lambda).recip();
    let root = (&Complex::one() - &inv2).sqrt();
    -(lambda * &root).recip()
}

/// Arcsine density restricted to `[lo, hi]`, by Gauss–Legendre in `θ = acos x`.
fn arcsine_partial(lo: &Scalar, hi: &Scalar, lambda: &Complex) -> Result<Complex> {
    let (t0, t1) = (hi.acos(), lo.acos());
    let pi = Scalar::pi();
    let f = |theta: &Scalar| {
        let d = &Complex::real(theta.cos()) - lambda;
        d.recip().scale(&pi.recip())
    };
    gauss_legendre_adaptive(&t0, &t1, f)
}

/// `log((hi−λ)/(lo−λ)) = ∫_lo^hi dt/(t−λ)`.
fn log_ratio(lo: &Scalar, hi: &Scalar, lambda: &Complex) -> Complex {
    let a = &Complex::real(hi.clone()) - lambda;
    let b = &Complex::real(lo.clone()) - lambda;
    (&a / &b).ln()
}

/// Segments `(x0, x1, a, b)` of the table clipped to `[lo, hi]`, with density `a + b t`.
fn clipped_segments(table: &[(Scalar, Scalar)], lo: &Scalar, hi: &Scalar) -> Vec<(Scalar, Scalar, Scalar, Scalar)> {
    let mut out = Vec::new();
    for w in table.windows(2) {
        let ((xa, ya), (xb, yb)) = (&w[0], &w[1]);
        let x0 = xa.clone().max(lo.clone());
        let x1 = xb.clone().min(hi.clone());
        if x0 >= x1 {
            continue;
        }
        let b = (yb - ya) / (xb - xa);
        let a = ya - &b * xa;
        out.push((x0, x1, a, b));
    }
    out
}

fn jacobi_entry(v: &[Scalar], i: usize) -> Scalar {
    v[i % v.len()].clone()
}

/// `s_i = (J^i e_0, e_0)` for the periodic Jacobi matrix.
fn jacobi_moments(diag: &[Scalar], off: &[Scalar], count: usize) -> Vec<Scalar> {
    let size = count / 2 + 2;
    let mut v = vec![Scalar::zero(); size];
    v[0] = Scalar::one();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(v[0].clone());
        let mut w = vec![Scalar::zero(); size];
        for i in 0..size {
            let mut acc = jacobi_entry(diag, i) * &v[i];
            if i > 0 {
                acc = acc + jacobi_entry(off, i - 1) * &v[i - 1];
            }
            if i + 1 < size {
                acc = acc + jacobi_entry(off, i) * &v[i + 1];
            }
            w[i] = acc;
        }
        v = w;
    }
    out
}

/// m-function `((J−λ)^{−1}e_0, e_0)` by the backward continued fraction with depth doubling.
fn jacobi_m_function(diag: &[Scalar], off: &[Scalar], lambda: &Complex) -> Result<Complex> {
    // m_i = 1/(a_i − λ − b_i² m_{i+1}), truncated at `depth`.
    let eval = |depth: usize| {
        let mut m = Complex::zero();
        for i in (0..depth).rev() {
            let b2 = jacobi_entry(off, i).square();
            let d = &(&Complex::real(jacobi_entry(diag, i)) - lambda) - &m.scale(&b2);
            m = d.recip();
        }
        m
    };
    let tol = Scalar::pow2(-(precision_bits() as i32) * 2 / 5);
    let mut depth = 64;
    let mut prev = eval(depth);
    for _ in 0..12 {
        depth *= 2;
        let cur = eval(depth);
        let scale = Scalar::one().max(cur.abs());
        if (&cur - &prev).abs() <= &tol * &scale {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureNonConvergence { doublings: 12 })
}

type NodeCache = Mutex<HashMap<(usize, u32), Arc<Vec<(Scalar, Scalar)>>>>;

/// Gauss–Legendre nodes and weights on `[−1, 1]` at the working precision.
pub fn gauss_legendre(n: usize) -> Arc<Vec<(Scalar, Scalar)>> {
    static CACHE: OnceLock<NodeCache> = OnceLock::new();
    let key = (n, precision_bits());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return v.clone();
    }
    let pi = std::f64::consts::PI;
    let tol = Scalar::pow2(-(precision_bits() as i32) + 4);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let guess = ((i as f64 + 0.75) / (n as f64 + 0.5) * pi).cos();
        let mut x = Scalar::from_f64(guess);
        let mut dp = Scalar::one();
        for _ in 0..100 {
            let (p, d) = legendre(n, &x);
            dp = d.clone();
            let dx = p / d;
            x = &x - &dx;
            if dx.abs() <= tol {
                let (_, d) = legendre(n, &x);
                dp = d;
                break;
            }
        }
        let w = Scalar::from_int(2) / ((Scalar::one() - x.square()) * dp.square());
        out.push((x, w));
    }
    let v = Arc::new(out);
    cache.lock().unwrap().insert(key, v.clone());
    v
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: &Scalar) -> (Scalar, Scalar) {
    let mut p0 = Scalar::one();
    let mut p1 = x.clone();
    for k in 2..=n {
        let kk = k as i64;
        let p2 = (Scalar::from_int(2 * kk - 1) * x * &p1 - Scalar::from_int(kk - 1) * &p0) / Scalar::from_int(kk);
        p0 = p1;
        p1 = p2;
    }
    let d = Scalar::from_int(n as i64) * (x * &p1 - &p0) / (x.square() - Scalar::one());
    (p1, d)
}

/// Gauss–Legendre on `[a, b]`, doubling nodes until two passes agree to `2^{−bits/2}` relative.
pub fn gauss_legendre_adaptive(a: &Scalar, b: &Scalar, f: impl Fn(&Scalar) -> Complex) -> Result<Complex> {
    let half = (b - a) / Scalar::from_int(2);
    let mid = (b + a) / Scalar::from_int(2);
    let run = |n: usize| {
        let nodes = gauss_legendre(n);
        let mut acc = Complex::zero();
        for (x, w) in nodes.iter() {
            let t = &mid + &half * x;
            acc = &acc + &f(&t).scale(w);
        }
        acc.scale(&half)
    };
    let tol = Scalar::pow2(-(precision_bits() as i32) / 2);
    const DOUBLINGS: usize = 4;
    let mut n = 64;
    let mut prev = run(n);
    for _ in 0..DOUBLINGS {
        n *= 2;
        let cur = run(n);
        let scale = cur.abs().max(Scalar::one());
        if (&cur - &prev).abs() <= &tol * &scale {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureNonConvergence { doublings: DOUBLINGS })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
        (a - b).abs().to_f64() < tol
    }

    #[test]
    fn arcsine_moments_are_central_binomials() {
        let s = MeasureSpec::arcsine().moments(5).unwrap();
        assert!(s.exact);
        let want: Vec<Scalar> = [(1, 1), (0, 1), (1, 2), (0, 1), (3, 8)].iter().map(|&(p, q)| Scalar::ratio(p, q)).collect();
        assert_eq!(s.coeffs, want);
    }

    #[test]
    fn arcsine_moments_match_theta_quadrature() {
        let s = MeasureSpec::arcsine().moments(9).unwrap();
        for (j, sj) in s.coeffs.iter().enumerate() {
            let q =
                gauss_legendre_adaptive(&Scalar::zero(), &Scalar::pi(), |t| Complex::real(t.cos().powi(j as i32) / Scalar::pi())).unwrap();
            assert!((q.re - sj).abs() < Scalar::pow2(-120));
        }
    }

    #[test]
    fn partial_arcsine_integrals_add_up() {
        let full = arcsine_power_integrals(&Scalar::from_int(-1), &Scalar::one(), 7);
        let a = arcsine_power_integrals(&Scalar::from_int(-1), &Scalar::ratio(1, 3), 7);
        let b = arcsine_power_integrals(&Scalar::ratio(1, 3), &Scalar::one(), 7);
        for j in 0..7 {
            assert!((&a[j] + &b[j] - &full[j]).abs() < Scalar::pow2(-240));
        }
    }

    #[test]
    fn atom_moments_and_value() {
        let c = Scalar::ratio(1, 2);
        let m = MeasureSpec::atoms(vec![(c.clone(), Scalar::one())]);
        let s = m.moments(4).unwrap();
        assert_eq!(s.coeffs[3], Scalar::ratio(1, 8));
        let v = FunctionSpec::markov(m).eval_exact(&Complex::one()).unwrap();
        assert_eq!(v, Complex::real(Scalar::from_int(-2)));
    }

    #[test]
    fn two_periodic_jacobi_moments() {
        let m = MeasureSpec::jacobi_periodic(vec![Scalar::one(), Scalar::zero()], vec![Scalar::one()]);
        let s = m.moments(4).unwrap();
        assert_eq!(s.coeffs, [1, 1, 2, 3].iter().map(|&v| Scalar::from_int(v)).collect::<Vec<_>>());
    }

    #[test]
    fn arcsine_reference_values() {
        let f = FunctionSpec::markov(MeasureSpec::arcsine());
        let two = Complex::real(Scalar::from_int(2));
        let want = Complex::real(-Scalar::from_int(3).sqrt().recip());
        assert!(close(&f.eval_exact(&two).unwrap(), &want, 1e-70));
        let t = FunctionSpec::t_weighted(MeasureSpec::arcsine());
        let want_t = Complex::real(Scalar::one() - Scalar::from_int(2) / Scalar::from_int(3).sqrt());
        assert!(close(&t.eval_exact(&two).unwrap(), &want_t, 1e-70));
        assert!(matches!(f.eval_exact(&Complex::real(Scalar::ratio(1, 2))), Err(Error::TooCloseToSupport(_))));
    }

    #[test]
    fn closed_forms_agree_with_quadrature() {
        let lam = Complex::from_f64(0.3, 0.7);
        let m = MeasureSpec::arcsine();
        let direct = m.cauchy_transform(&lam).unwrap();
        let quad = arcsine_partial(&Scalar::from_int(-1), &Scalar::one(), &lam).unwrap();
        assert!(close(&direct, &quad, 1e-60));
        let leb = MeasureSpec::lebesgue(vec![(Scalar::from_int(-1), Scalar::ratio(-1, 3)), (Scalar::ratio(1, 2), Scalar::one())], true);
        let v = leb.cauchy_transform(&lam).unwrap();
        let mass = Scalar::ratio(7, 6);
        let q1 =
            gauss_legendre_adaptive(&Scalar::from_int(-1), &Scalar::ratio(-1, 3), |t| (&Complex::real(t.clone()) - &lam).recip()).unwrap();
        let q2 = gauss_legendre_adaptive(&Scalar::ratio(1, 2), &Scalar::one(), |t| (&Complex::real(t.clone()) - &lam).recip()).unwrap();
        let q = (&q1 + &q2).scale(&mass.recip());
        assert!(close(&v, &q, 1e-60));
    }

    #[test]
    fn custom_table_matches_lebesgue() {
        let table = vec![(Scalar::from_int(-1), Scalar::one()), (Scalar::one(), Scalar::one())];
        let m = MeasureSpec {
            intervals: vec![(Scalar::ratio(-1, 2), Scalar::one())],
            density: Density::Custom(table),
            atoms: vec![],
            normalize: false,
        };
        let l = MeasureSpec::lebesgue(vec![(Scalar::ratio(-1, 2), Scalar::one())], false);
        let (a, b) = (m.moments(6).unwrap(), l.moments(6).unwrap());
        assert!(!a.exact && b.exact);
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            assert!((x - y).abs() < Scalar::pow2(-240));
        }
        let lam = Complex::from_f64(2.0, 0.5);
        assert!(close(&m.cauchy_transform(&lam).unwrap(), &l.cauchy_transform(&lam).unwrap(), 1e-60));
    }

    #[test]
    fn perturbed_series_matches_evaluation() {
        let spec = FunctionSpec {
            measure: MeasureSpec::arcsine(),
            perturbation: Some(RationalPerturbation { q1: Poly::one(), w1: Poly::one(), q2: Poly::one(), w2: Poly::x() }),
            t_weight: false,
        };
        let s = spec.assemble_series(30).unwrap();
        let plain = FunctionSpec::markov(MeasureSpec::arcsine()).assemble_series(30).unwrap();
        assert_eq!(&s.coeffs[0] - &plain.coeffs[0], Scalar::from_int(-1));
        let lam = Complex::real(Scalar::from_int(3));
        let v = spec.eval_exact(&lam).unwrap();
        assert!(close(&s.eval_truncated(&lam), &v, 1e-12));
        assert!(spec.eval_exact(&Complex::from_f64(0.0, 0.0)).is_err());
    }

    #[test]
    fn shift_identity() {
        let m = MeasureSpec::lebesgue(vec![(Scalar::from_int(-1), Scalar::ratio(-1, 2)), (Scalar::ratio(1, 2), Scalar::one())], true);
        let f = FunctionSpec::markov(m.clone()).moments(10).unwrap();
        let t = FunctionSpec::t_weighted(m).moments(9).unwrap();
        assert_eq!(&f.coeffs[1..], &t.coeffs[..]);
    }
}
