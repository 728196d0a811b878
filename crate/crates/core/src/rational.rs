//! Exact rational scalars and their `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn pow2(n: u32) -> Rational {
    Rational::from_integer(BigInt::one() << n)
}

/// `sign(0) := 1`.
pub fn sign(q: &Rational) -> i8 {
    if q.is_negative() {
        -1
    } else {
        1
    }
}

pub fn signed(s: i8, q: Rational) -> Rational {
    if s < 0 {
        -q
    } else {
        q
    }
}

pub fn positive_part(q: &Rational) -> Rational {
    if q.is_positive() {
        q.clone()
    } else {
        Rational::zero()
    }
}

/// Always `numer/denom`, including integers (`"1/1"`).
pub fn format(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Malformed(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}
