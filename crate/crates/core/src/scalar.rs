//! Exact rational scalars and the coefficient abstraction shared by
//! numeric and symbolic (parameter-polynomial) computations.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Arbitrary-precision rational number in lowest terms.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Formats as `"p/q"` (the denominator is always written).
pub fn to_pq(x: &Scalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"p/q"` or a bare integer.
pub fn parse_pq(s: &str) -> Result<Scalar, Error> {
    let s = s.trim();
    let bad = || Error::Format(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(p, q))
        }
        None => Ok(Scalar::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Ring of coefficients for algebra elements and cochains.
///
/// Implemented by [`Scalar`] and by [`crate::poly::Poly`] (used when model
/// parameters are carried symbolically).
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn from_scalar(s: Scalar) -> Self;
    fn mul_scalar(&self, s: &Scalar) -> Self;

    fn one() -> Self {
        Self::from_scalar(<Scalar as One>::one())
    }

    fn mul_int(&self, k: i64) -> Self {
        self.mul_scalar(&int(k))
    }
}

impl Coefficient for Scalar {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
    fn mul_scalar(&self, s: &Scalar) -> Self {
        self * s
    }
    fn mul_int(&self, k: i64) -> Self {
        self * BigInt::from(k)
    }
}

/// n! as a rational.
pub fn factorial(n: u64) -> Scalar {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Scalar::from_integer(acc)
}

/// Least common multiple of the denominators of `xs`.
pub fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> BigInt {
    use num_integer::Integer;
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn abs(x: &Scalar) -> Scalar {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pq_roundtrip() {
        for x in [frac(-6, 5), int(0), int(7), frac(3, 12)] {
            assert_eq!(parse_pq(&to_pq(&x)).unwrap(), x);
        }
        assert_eq!(to_pq(&frac(2, -4)), "-1/2");
        assert!(parse_pq("1/0").is_err());
        assert_eq!(parse_pq("5").unwrap(), int(5));
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(5), int(120));
    }
}
