use crate::arith::linalg::{solve, Matrix};
use crate::arith::{FormalSeries, Poly, Scalar};
use crate::error::{Error, Result};

use super::{ApproxKind, RationalApproximant};

/// `[L/M]` by the Toeplitz linear system in `z = 1/λ` with `B(0) = 1`.
///
/// Needs `L + M` series coefficients. Returned in `λ` as
/// `λ^N A(1/λ) / λ^N B(1/λ)` with `N = max(L, M)`.
pub fn pade_oracle(f: &FormalSeries, l: usize, m: usize) -> Result<RationalApproximant> {
    if f.order() < l + m {
        return Err(Error::InsufficientMoments { needed: l + m, available: f.order() });
    }
    let a = f.z_coeffs();
    let at = |k: isize| -> Scalar {
        if k < 0 {
            Scalar::zero()
        } else {
            a[k as usize].clone()
        }
    };
    let b = if m == 0 {
        vec![Scalar::one()]
    } else {
        // Σ_{i=1}^M b_i a_{k−i} = −a_k for k = L+1..L+M
        let sys: Matrix = (l + 1..=l + m).map(|k| (1..=m).map(|i| at(k as isize - i as isize)).collect()).collect();
        let rhs: Vec<Scalar> = (l + 1..=l + m).map(|k| -at(k as isize)).collect();
        let x = solve(&sys, &rhs).ok_or(Error::SystemSingular { l, m })?;
        std::iter::once(Scalar::one()).chain(x).collect()
    };
    let num_z: Vec<Scalar> = (0..=l).map(|k| (0..=k.min(m)).fold(Scalar::zero(), |acc, i| acc + &b[i] * &at((k - i) as isize))).collect();
    let n = l.max(m);
    let rev = |c: &[Scalar]| -> Poly { Poly::new((0..=n).map(|d| c.get(n - d).cloned().unwrap_or_default()).collect()) };
    Ok(RationalApproximant { num: rev(&num_z), den: rev(&b), kind: ApproxKind::Oracle, contact_order: l + m, n: l })
}
