//! Scalar abstraction shared by the exact (rational) and floating code paths.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub trait Scalar:
    Clone + fmt::Debug + PartialOrd + Num + Signed + Send + Sync + 'static
{
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    fn as_f64(&self) -> f64;

    /// Exact zero test for rationals, `== 0.0` for floats.
    fn is_exactly_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn as_f64(&self) -> f64 {
        *self
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Exact binary-to-rational conversion; `None` for NaN or infinities.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_f64(v)
}

/// Parses `"p"`, `"p/q"` or a `(p, q)` pair of integer strings.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str_radix(n.trim(), 10).ok()?;
        let d = BigInt::from_str_radix(d.trim(), 10).ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        BigInt::from_str_radix(s, 10).ok().map(Rational::from_integer)
    }
}

pub fn parse_rational_pair(num: &str, den: &str) -> Option<Rational> {
    let n = BigInt::from_str_radix(num.trim(), 10).ok()?;
    let d = BigInt::from_str_radix(den.trim(), 10).ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot3<T: Scalar>(a: &[T; 3], b: &[T; 3]) -> T {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

pub fn sub3<T: Scalar>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    [
        a[0].clone() - b[0].clone(),
        a[1].clone() - b[1].clone(),
        a[2].clone() - b[2].clone(),
    ]
}

pub fn add3<T: Scalar>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    [
        a[0].clone() + b[0].clone(),
        a[1].clone() + b[1].clone(),
        a[2].clone() + b[2].clone(),
    ]
}

pub fn scale3<T: Scalar>(s: &T, a: &[T; 3]) -> [T; 3] {
    [s.clone() * a[0].clone(), s.clone() * a[1].clone(), s.clone() * a[2].clone()]
}

pub fn cross3<T: Scalar>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn det3<T: Scalar>(a: &[T; 3], b: &[T; 3], c: &[T; 3]) -> T {
    dot3(a, &cross3(b, c))
}

pub fn norm2<T: Scalar>(a: &[T; 3]) -> T {
    dot3(a, a)
}

pub fn zero3<T: Scalar>() -> [T; 3] {
    [T::zero(), T::zero(), T::zero()]
}

pub fn to_f64_3<T: Scalar>(a: &[T; 3]) -> [f64; 3] {
    [a[0].as_f64(), a[1].as_f64(), a[2].as_f64()]
}

pub fn bigint_gcd_content(values: &[BigInt]) -> BigInt {
    use num_integer::Integer;
    values.iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}
