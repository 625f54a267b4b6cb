//! Dense matrices over [`Scalar`]: determinants, solves and inertia.

use rug::{Integer, Rational};

use super::scalar::{zero_threshold, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

/// Hadamard bound `Π ‖row_i‖₂` on `|det m|`.
pub fn hadamard_bound(m: &Matrix) -> Scalar {
    m.iter().fold(Scalar::one(), |acc, row| {
        let norm = row.iter().fold(Scalar::zero(), |a, x| a + x.square());
        acc * norm.sqrt()
    })
}

fn is_exact(m: &Matrix) -> bool {
    m.iter().all(|r| r.iter().all(Scalar::is_exact))
}

fn max_abs(m: &Matrix) -> Scalar {
    m.iter().flat_map(|r| r.iter()).map(Scalar::abs).fold(Scalar::zero(), Scalar::max)
}

/// Determinant; fraction-free Bareiss for exact input, partial-pivot elimination otherwise.
pub fn det(m: &Matrix) -> Scalar {
    let n = m.len();
    if n == 0 {
        return Scalar::one();
    }
    if is_exact(m) {
        det_bareiss(m)
    } else {
        det_float(m)
    }
}

fn det_bareiss(m: &Matrix) -> Scalar {
    let n = m.len();
    let mut scale = Integer::from(1);
    let mut a: Vec<Vec<Integer>> = Vec::with_capacity(n);
    for row in m {
        let l = row.iter().fold(Integer::from(1), |acc, x| acc.lcm(x.as_rational().expect("exact").denom()));
        scale *= &l;
        a.push(
            row.iter()
                .map(|x| {
                    let r = Rational::from(x.as_rational().unwrap() * &l);
                    r.numer().clone()
                })
                .collect(),
        );
    }
    let mut sign = 1;
    let mut prev = Integer::from(1);
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Scalar::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = Integer::from(&a[i][j] * &a[k][k]) - Integer::from(&a[i][k] * &a[k][j]);
                a[i][j] = v.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = Rational::from((a[n - 1][n - 1].clone() * sign, scale));
    Scalar::Exact(d)
}

fn det_float(m: &Matrix) -> Scalar {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Scalar::one();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap()).unwrap();
        if a[p][k].is_zero() {
            return Scalar::zero();
        }
        if p != k {
            a.swap(p, k);
            d = -d;
        }
        d = d * &a[k][k];
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                a[i][j] = &a[i][j] - &f * &a[k][j];
            }
        }
    }
    d
}

/// Solves `m x = b`; `None` when the matrix is singular (exactly, or below
/// the zero threshold relative to its largest entry on the float path).
pub fn solve(m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = m.len();
    let exact = is_exact(m) && b.iter().all(Scalar::is_exact);
    let scale = max_abs(m);
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for k in 0..n {
        let p = if exact {
            (k..n).find(|&i| !a[i][k].is_zero())?
        } else {
            (k..n).max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())?
        };
        if a[p][k].negligible(&scale) {
            return None;
        }
        a.swap(p, k);
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &a[k][k];
            for j in k..=n {
                a[i][j] = &a[i][j] - &f * &a[k][j];
            }
        }
    }
    let mut x = vec![Scalar::zero(); n];
    for k in (0..n).rev() {
        let mut acc = a[k][n].clone();
        for j in k + 1..n {
            acc = acc - &a[k][j] * &x[j];
        }
        x[k] = acc / &a[k][k];
    }
    Some(x)
}

/// Signature of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Inertia by symmetric congruence with 1×1 and 2×2 pivots (Sylvester's law).
///
/// On the float path entries below the zero threshold relative to the
/// largest entry of the input count as zero.
pub fn inertia_congruence(m: &Matrix) -> Inertia {
    let mut a = m.clone();
    let scale = max_abs(m);
    let mut idx: Vec<usize> = (0..m.len()).collect();
    let mut res = Inertia { positive: 0, negative: 0, zero: 0 };
    let tiny = |x: &Scalar| x.negligible(&scale);
    while !idx.is_empty() {
        let diag = idx.iter().copied().max_by(|&i, &j| a[i][i].abs().partial_cmp(&a[j][j].abs()).unwrap()).unwrap();
        let mut off: Option<(usize, usize)> = None;
        for (pi, &i) in idx.iter().enumerate() {
            for &j in &idx[pi + 1..] {
                if off.is_none_or(|(p, q)| a[i][j].abs() > a[p][q].abs()) {
                    off = Some((i, j));
                }
            }
        }
        let dmax = a[diag][diag].abs();
        let omax = off.map(|(i, j)| a[i][j].abs()).unwrap_or_default();
        if tiny(&dmax) && tiny(&omax) {
            res.zero += idx.len();
            break;
        }
        // Bunch–Kaufman style choice between a 1×1 and a 2×2 pivot.
        if dmax >= Scalar::ratio(16, 25) * &omax {
            let k = diag;
            if a[k][k].signum() > 0 {
                res.positive += 1;
            } else {
                res.negative += 1;
            }
            idx.retain(|&i| i != k);
            for &i in &idx {
                let f = &a[i][k] / &a[k][k];
                for &j in &idx {
                    a[i][j] = &a[i][j] - &f * &a[k][j];
                }
            }
        } else {
            let (p, q) = off.unwrap();
            let (app, apq, aqq) = (a[p][p].clone(), a[p][q].clone(), a[q][q].clone());
            let d = &app * &aqq - apq.square();
            // d < 0 here: |apq|² dominates the diagonal.
            res.positive += 1;
            res.negative += 1;
            idx.retain(|&i| i != p && i != q);
            let rows: Vec<(usize, Scalar, Scalar)> = idx
                .iter()
                .map(|&i| {
                    let (u, v) = (a[i][p].clone(), a[i][q].clone());
                    let x = (&u * &aqq - &v * &apq) / &d;
                    let y = (&v * &app - &u * &apq) / &d;
                    (i, x, y)
                })
                .collect();
            for (i, x, y) in &rows {
                for &j in &idx {
                    a[*i][j] = &a[*i][j] - x * &a[p][j] - y * &a[q][j];
                }
            }
        }
    }
    res
}

/// Negative inertia from leading principal minors (Jacobi's rule) when they
/// are all nonzero; `None` otherwise.
pub fn negative_inertia_minors(minors: &[Scalar]) -> Option<usize> {
    if minors.iter().any(Scalar::is_zero) {
        return None;
    }
    let mut prev = 1;
    let mut changes = 0;
    for d in minors {
        let s = d.signum();
        if s != prev {
            changes += 1;
        }
        prev = s;
    }
    Some(changes)
}

/// Zero threshold used for determinant verdicts: `2^{-bits/2}·HadamardBound`.
pub fn det_threshold(m: &Matrix) -> Scalar {
    zero_threshold() * hadamard_bound(m)
}

pub fn mat_vec(m: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    m.iter().map(|r| r.iter().zip(v).fold(Scalar::zero(), |a, (x, y)| a + x * y)).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter().map(|r| (0..n).map(|j| r.iter().enumerate().fold(Scalar::zero(), |acc, (k, x)| acc + x * &b[k][j])).collect()).collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let n = a.first().map_or(0, Vec::len);
    (0..n).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}
