//! Exact rational scalars and their text renderings.

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Renders as `num/den`, always with an explicit denominator.
pub fn to_exact(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Shortest round-trip decimal of the nearest `f64`.
pub fn to_decimal(r: &Rational) -> String {
    match r.to_f64() {
        Some(x) => format!("{x}"),
        None => "nan".to_string(),
    }
}

/// Parses `n`, `-n` or `n/d`.
pub fn parse_exact(s: &str) -> crate::Result<Rational> {
    let s = s.trim();
    let bad = || crate::Error::Input(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
