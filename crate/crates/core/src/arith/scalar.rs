//! Scalar kernel: exact rationals and fixed-precision big reals.
//!
//! A [`Scalar`] is either an exact rational in lowest terms or an MPFR float.
//! Any operation that touches a float produces a float at the current
//! working precision, so exactness is lost exactly when it must be.

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 256;

static DEFAULT_PRECISION: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION_BITS);

thread_local! {
    static LOCAL_PRECISION: Cell<Option<u32>> = const { Cell::new(None) };
}

/// Working precision in bits for big-real arithmetic on this thread.
pub fn precision_bits() -> u32 {
    LOCAL_PRECISION.with(|p| p.get()).unwrap_or_else(|| DEFAULT_PRECISION.load(AtomicOrdering::Relaxed))
}

/// Sets the process-wide default precision used by threads without an override.
pub fn set_default_precision_bits(bits: u32) {
    assert!(bits >= 32, "precision must be at least 32 bits");
    DEFAULT_PRECISION.store(bits, AtomicOrdering::Relaxed);
}

/// Runs `f` with the working precision of the current thread set to `bits`.
pub fn with_precision<R>(bits: u32, f: impl FnOnce() -> R) -> R {
    assert!(bits >= 32, "precision must be at least 32 bits");
    struct Restore(Option<u32>);
    impl Drop for Restore {
        fn drop(&mut self) {
            LOCAL_PRECISION.with(|p| p.set(self.0));
        }
    }
    let _restore = Restore(LOCAL_PRECISION.with(|p| p.replace(Some(bits))));
    f()
}

/// Relative zero threshold `2^(-bits/2)` of the float path.
pub fn zero_threshold() -> Scalar {
    let e = precision_bits() / 2;
    Scalar::Exact(Rational::from((Integer::from(1), Integer::from(1) << e)))
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Rational),
    Real(Float),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rational::new())
    }

    pub fn one() -> Self {
        Scalar::Exact(Rational::from(1))
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::Exact(Rational::from(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Exact(Rational::from((num, den)))
    }

    pub fn from_f64(v: f64) -> Self {
        Scalar::Real(Float::with_val(precision_bits(), v))
    }

    pub fn real(v: Float) -> Self {
        Scalar::Real(v)
    }

    pub fn pi() -> Self {
        Scalar::Real(Float::with_val(precision_bits(), Constant::Pi))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.cmp0() == Ordering::Equal,
            Scalar::Real(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(r) => *r == 1,
            Scalar::Real(f) => *f == 1,
        }
    }

    /// Sign as -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let ord = match self {
            Scalar::Exact(r) => r.cmp0(),
            Scalar::Real(f) => f.cmp0().unwrap_or(Ordering::Equal),
        };
        match ord {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.clone().abs()),
            Scalar::Real(f) => Scalar::Real(f.clone().abs()),
        }
    }

    /// `true` when `|self| <= zero_threshold() * scale`; exact values must be exactly zero.
    pub fn negligible(&self, scale: &Scalar) -> bool {
        match self {
            Scalar::Exact(r) => r.cmp0() == Ordering::Equal,
            Scalar::Real(f) => {
                if f.is_zero() {
                    return true;
                }
                let bound = zero_threshold() * scale.abs();
                self.abs() <= bound
            }
        }
    }

    /// Value as an MPFR float at the current precision.
    pub fn to_float(&self) -> Float {
        let p = precision_bits();
        match self {
            Scalar::Exact(r) => Float::with_val(p, r),
            Scalar::Real(f) => Float::with_val(p, f),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Real(f) => f.to_f64(),
        }
    }

    /// Exact value, if this scalar is exact.
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Real(_) => None,
        }
    }

    /// Forces the float representation.
    pub fn to_real(&self) -> Self {
        Scalar::Real(self.to_float())
    }

    pub fn recip(&self) -> Self {
        Scalar::one() / self
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powi(&self, n: i32) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.clone().pow(n)),
            Scalar::Real(f) => Scalar::Real(Float::with_val(precision_bits(), f.pow(n))),
        }
    }

    /// Square root; stays exact when numerator and denominator are perfect squares.
    pub fn sqrt(&self) -> Self {
        assert!(self.signum() >= 0, "square root of a negative scalar");
        if let Scalar::Exact(r) = self {
            let (n, d) = (r.numer(), r.denom());
            if n.is_perfect_square() && d.is_perfect_square() {
                let rn = n.clone().sqrt();
                let rd = d.clone().sqrt();
                return Scalar::Exact(Rational::from((rn, rd)));
            }
        }
        Scalar::Real(self.to_float().sqrt())
    }

    pub fn cos(&self) -> Self {
        Scalar::Real(self.to_float().cos())
    }

    pub fn sin(&self) -> Self {
        Scalar::Real(self.to_float().sin())
    }

    pub fn tan(&self) -> Self {
        Scalar::Real(self.to_float().tan())
    }

    pub fn ln(&self) -> Self {
        Scalar::Real(self.to_float().ln())
    }

    pub fn exp(&self) -> Self {
        Scalar::Real(self.to_float().exp())
    }

    pub fn acos(&self) -> Self {
        Scalar::Real(self.to_float().acos())
    }

    pub fn atan2(y: &Scalar, x: &Scalar) -> Self {
        Scalar::Real(y.to_float().atan2(&x.to_float()))
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `2^e` as an exact scalar.
    pub fn pow2(e: i32) -> Self {
        let one = Integer::from(1);
        if e >= 0 {
            Scalar::Exact(Rational::from(one << e as u32))
        } else {
            Scalar::Exact(Rational::from((one.clone(), one << (-e) as u32)))
        }
    }

    /// Floor of an exact or float value as an integer.
    pub fn floor_int(&self) -> Integer {
        match self {
            Scalar::Exact(r) => r.clone().floor().numer().clone(),
            Scalar::Real(f) => f.clone().floor().to_integer().unwrap_or_default(),
        }
    }

    /// Decimal string with `digits` significant digits (exact values render as `p/q`).
    pub fn to_decimal(&self, digits: usize) -> String {
        match self {
            Scalar::Exact(_) => self.to_float().to_string_radix(10, Some(digits)),
            Scalar::Real(f) => f.to_string_radix(10, Some(digits)),
        }
    }

    /// Digits needed to render a float at the current precision without loss.
    pub fn full_digits() -> usize {
        (precision_bits() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
    }

    fn binary(
        &self,
        rhs: &Scalar,
        exact: impl FnOnce(&Rational, &Rational) -> Rational,
        real: impl FnOnce(Float, Float) -> Float,
    ) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact(a, b)),
            _ => Scalar::Real(real(self.to_float(), rhs.to_float())),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<i32> for Scalar {
    fn from(v: i32) -> Self {
        Scalar::from_int(v as i64)
    }
}

impl From<Rational> for Scalar {
    fn from(v: Rational) -> Self {
        Scalar::Exact(v)
    }
}

impl From<Integer> for Scalar {
    fn from(v: Integer) -> Self {
        Scalar::Exact(Rational::from(v))
    }
}

impl From<Float> for Scalar {
    fn from(v: Float) -> Self {
        Scalar::Real(v)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $exact:expr, $real:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.binary(rhs, $exact, $real)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, |a, b| Rational::from(a + b), |a, b| a + b);
impl_binop!(Sub, sub, |a, b| Rational::from(a - b), |a, b| a - b);
impl_binop!(Mul, mul, |a, b| Rational::from(a * b), |a, b| a * b);
impl_binop!(
    Div,
    div,
    |a, b| {
        assert!(b.cmp0() != Ordering::Equal, "exact division by zero");
        Rational::from(a / b)
    },
    |a, b| a / b
);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Real(f) => Scalar::Real(-f),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            (Scalar::Real(a), Scalar::Exact(b)) => a.partial_cmp(b),
            (Scalar::Exact(a), Scalar::Real(b)) => b.partial_cmp(a).map(Ordering::reverse),
            (Scalar::Real(a), Scalar::Real(b)) => a.partial_cmp(b),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Real(x) => write!(f, "{}", x.to_string_radix(10, Some(Scalar::full_digits()))),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Parses `p/q`, integers and decimal/scientific literals exactly.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse(format!("not a numeric literal: {s:?}"));
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: Integer = n.trim().parse().map_err(|_| bad())?;
            let d: Integer = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(Scalar::Exact(Rational::from((n, d))));
        }
        let (mantissa, exponent) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (neg, mantissa) = match mantissa.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut value = Rational::from(digits.parse::<Integer>().map_err(|_| bad())?);
        let shift = exponent - frac_part.len() as i32;
        let ten = Rational::from(10);
        value *= ten.pow(shift);
        if neg {
            value = -value;
        }
        Ok(Scalar::Exact(value))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(if self.is_exact() { 1 } else { 2 }))?;
        match self {
            Scalar::Exact(r) => map.serialize_entry("exact", &r.to_string())?,
            Scalar::Real(f) => {
                let digits = (f.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
                map.serialize_entry("float", &f.to_string_radix(10, Some(digits)))?;
                map.serialize_entry("bits", &f.prec())?;
            }
        }
        map.end()
    }
}

#[derive(Deserialize)]
struct TaggedScalar {
    exact: Option<String>,
    float: Option<String>,
    bits: Option<u32>,
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let tagged = TaggedScalar::deserialize(deserializer)?;
        match (tagged.exact, tagged.float) {
            (Some(e), None) => e.parse::<Scalar>().map_err(D::Error::custom),
            (None, Some(v)) => {
                let bits = tagged.bits.unwrap_or_else(precision_bits);
                let parsed = Float::parse(&v).map_err(D::Error::custom)?;
                Ok(Scalar::Real(Float::with_val(bits, parsed)))
            }
            _ => Err(D::Error::custom("scalar must carry exactly one of `exact` or `float`")),
        }
    }
}
