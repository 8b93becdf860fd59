//! Scalar fields used throughout the crate.
//!
//! Three fields are in play: exact rationals (structural identities), the
//! quadratic extension `Q(sqrt(-2))` (the smallest field over which the
//! normalized form on `sl_2` admits an orthonormal basis), and complex doubles
//! (transport and general float mode).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;
pub type C64 = Complex64;

/// A field element that the dense matrix kernels can work over.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(q: &Rational) -> Self;
    /// Size used for residual reporting and pivot selection.
    fn magnitude(&self) -> f64;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }
}

/// Lossy conversion of a rational to `f64`.
pub fn rational_to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        // fall back to scaled division for huge operands
        _ => {
            let bits = q.numer().bits().max(q.denom().bits()) as i64;
            let shift = (bits - 900).max(0) as usize;
            let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }
}

impl Scalar for C64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_rational(q: &Rational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// An element `a + b*sqrt(-2)` of the quadratic field `Q(sqrt(-2))`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadNum {
    pub a: Rational,
    pub b: Rational,
}

impl QuadNum {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a, b }
    }

    /// The generator `sqrt(-2)`.
    pub fn sqrt_neg2() -> Self {
        Self::new(Zero::zero(), One::one())
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.b)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a^2 + 2 b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a + int(2) * &self.b * &self.b
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(
            rational_to_f64(&self.a),
            rational_to_f64(&self.b) * std::f64::consts::SQRT_2,
        )
    }
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt(-2)", self.a, self.b)
        }
    }
}

impl Add for QuadNum {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for QuadNum {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

impl Mul for QuadNum {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        // (a + b s)(c + d s) with s^2 = -2
        let a = &self.a * &o.a - int(2) * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        Self::new(a, b)
    }
}

impl Div for QuadNum {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm();
        assert!(!Zero::is_zero(&n), "division by zero in Q(sqrt(-2))");
        let num = self * o.conj();
        Self::new(num.a / &n, num.b / n)
    }
}

impl Neg for QuadNum {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl Scalar for QuadNum {
    fn zero() -> Self {
        Self::new(Zero::zero(), Zero::zero())
    }
    fn one() -> Self {
        Self::new(One::one(), Zero::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn from_rational(q: &Rational) -> Self {
        Self::new(q.clone(), Zero::zero())
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_neg2_squares_to_minus_two() {
        let s = QuadNum::sqrt_neg2();
        assert_eq!(s.clone() * s, QuadNum::from_i64(-2));
    }

    #[test]
    fn quad_division_inverts_multiplication() {
        let x = QuadNum::new(rat(3, 4), rat(-5, 7));
        let y = QuadNum::new(rat(1, 3), rat(2, 1));
        assert_eq!((x.clone() * y.clone()) / y, x);
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigInt::from(10).pow(400);
        let q = Rational::new(big.clone() * 3, big);
        assert!((rational_to_f64(&q) - 3.0).abs() < 1e-12);
    }
}
