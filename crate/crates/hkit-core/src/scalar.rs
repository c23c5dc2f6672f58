//! Scalar coefficients: a generic field-scalar trait plus the two concrete
//! instantiations used throughout the crate, exact Gaussian rationals and
//! `Complex64` for the numeric fallback.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// Bundle of operations a coefficient field must provide. Polynomials,
/// matrices and the evaluation kernels are generic over this trait, so the
/// same code runs over [`GaussRat`] exactly and over `Complex64` when a
/// witness has to be verified in floating point.
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
    + fmt::Debug
    + fmt::Display
    + 'static
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + Div<Output = T>
        + fmt::Debug
        + fmt::Display
        + 'static
{
}

/// Complex conjugation, needed wherever adjoints show up.
pub trait Conjugate {
    fn conj(&self) -> Self;
}

impl Conjugate for Complex64 {
    fn conj(&self) -> Self {
        Complex64::new(self.re, -self.im)
    }
}

/// A Gaussian rational: a complex number whose real and imaginary parts are
/// arbitrary-precision rationals. All arithmetic is exact; zero tests are
/// decidable, which is what the exact splitting pipeline relies on.
///
/// The derived ordering is lexicographic on `(re, im)`. It has no numeric
/// meaning and exists only to make iteration and witness selection
/// deterministic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// Builds `num/den` as a real Gaussian rational.
    ///
    /// # Panics
    /// Panics if `den` is zero.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussRat::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|^2 = re^2 + im^2`, an exact nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Exact multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussRat::new(&self.re / &n, -&self.im / &n))
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// One exact square root in Q(i) if the number has one, else `None`.
    /// The other root is the negation.
    pub fn sqrt_exact(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        let a = &self.re;
        let b = &self.im;
        if b.is_zero() {
            return if a.is_positive() {
                rational_sqrt(a).map(|u| GaussRat::new(u, BigRational::zero()))
            } else {
                rational_sqrt(&-a).map(|v| GaussRat::new(BigRational::zero(), v))
            };
        }
        // (u + vi)^2 = a + bi forces u^2 - v^2 = a, 2uv = b, and taking norms
        // (u^2 + v^2)^2 = a^2 + b^2, so both a^2 + b^2 and (a + q)/2 must be
        // rational squares, with q the nonnegative square root of the former.
        let q = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let u = rational_sqrt(&((a + &q) / &two))?;
        if u.is_zero() {
            return None;
        }
        let v = b / (&two * &u);
        Some(GaussRat::new(u, v))
    }
}

/// Exact nonnegative rational square root, if one exists.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let ns = num_integer::Roots::sqrt(&r.numer().clone());
    let ds = num_integer::Roots::sqrt(&r.denom().clone());
    if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
        Some(BigRational::new(ns, ds))
    } else {
        None
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat::new(BigRational::one(), BigRational::zero())
    }

    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: GaussRat) -> GaussRat {
        GaussRat::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: GaussRat) -> GaussRat {
        GaussRat::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: GaussRat) -> GaussRat {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        GaussRat::new(re, im)
    }
}

impl Div for GaussRat {
    type Output = GaussRat;

    /// # Panics
    /// Panics when dividing by zero.
    fn div(self, rhs: GaussRat) -> GaussRat {
        let inv = rhs.inv().expect("division by zero Gaussian rational");
        self * inv
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

impl AddAssign for GaussRat {
    fn add_assign(&mut self, rhs: GaussRat) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign for GaussRat {
    fn sub_assign(&mut self, rhs: GaussRat) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl MulAssign for GaussRat {
    fn mul_assign(&mut self, rhs: GaussRat) {
        *self = self.clone() * rhs;
    }
}

impl Conjugate for GaussRat {
    fn conj(&self) -> Self {
        GaussRat::conj(self)
    }
}

impl From<i64> for GaussRat {
    fn from(n: i64) -> Self {
        GaussRat::from_int(n)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_imag_abs(im: &BigRational) -> String {
    let abs = im.abs();
    if abs.is_one() {
        "i".to_string()
    } else {
        format!("{}*i", fmt_rational(&abs))
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            return write!(f, "{}{}", sign, fmt_imag_abs(&self.im));
        }
        let sign = if self.im.is_negative() { "-" } else { "+" };
        write!(f, "{}{}{}", fmt_rational(&self.re), sign, fmt_imag_abs(&self.im))
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GaussRat {
    type Err = crate::poly::ParseError;

    /// Parses the scalar grammar: `"a/b"`, `"a/b+c/d*i"`, `"a/b-c/d*i"`,
    /// integer shorthand, and bare `i`. Anything involving a variable is
    /// rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let p = crate::poly::parse_poly(s)?;
        p.constant_value().ok_or(crate::poly::ParseError {
            offset: 0,
            message: "expected a scalar, found a variable term".to_string(),
        })
    }
}

impl Serialize for GaussRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

struct GaussRatVisitor;

impl Visitor<'_> for GaussRatVisitor {
    type Value = GaussRat;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a scalar string like \"3/4-1/2*i\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<GaussRat, E> {
        v.parse().map_err(|e| E::custom(format!("bad scalar {v:?}: {e}")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<GaussRat, E> {
        Ok(GaussRat::from_int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<GaussRat, E> {
        i64::try_from(v)
            .map(GaussRat::from_int)
            .map_err(|_| E::custom("integer scalar out of range"))
    }
}

impl<'de> Deserialize<'de> for GaussRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(GaussRatVisitor)
    }
}
