//! Arbitrary-precision rationals.
//!
//! [`Rational`] is `num_rational::BigRational`, which already keeps values
//! reduced with a positive denominator. This module adds the small amount of
//! glue the rest of the crate needs: constructors from machine integers and a
//! lossless `p/q` text form.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::str::FromStr;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den` reduced. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Integer power with possibly negative exponent.
pub fn pow_i(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

/// Formats as `p` for integers and `p/q` otherwise.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `p`, `-p`, or `p/q` (whitespace around the slash is tolerated).
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        None => BigInt::from_str(s).map(Rational::from_integer).map_err(|_| err()),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Floating-point approximation, adequate for diagnostics.
pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/-4").unwrap(), ratio(-3, 2));
        assert_eq!(format_rational(&ratio(-3, 2)), "-3/2");
        assert_eq!(format_rational(&rat(191025)), "191025");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn negative_powers() {
        assert_eq!(pow_i(&rat(3), -2), ratio(1, 9));
        assert_eq!(pow_i(&ratio(2, 3), 3), ratio(8, 27));
    }
}
