//! Exact rationals and their `"p/q"` text encoding.

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

/// Parses `"p/q"`, `"p"` or `"-p/q"`. The denominator must be nonzero.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Schema(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Schema(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"p/q"` form, always with an explicit denominator.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Smallest integer `n` with `n >= r`.
pub fn ceil_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Smallest integer strictly greater than `r`.
pub fn next_int_above(r: &Rational) -> BigInt {
    r.floor().to_integer() + BigInt::one()
}

/// Cost used by the pivot heuristic: bit sizes of denominator then numerator.
pub(crate) fn pivot_cost(r: &Rational) -> (u64, u64) {
    (r.denom().bits(), r.numer().abs().bits())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("7/3").unwrap(), ratio(7, 3));
        assert_eq!(parse("-4/6").unwrap(), ratio(-2, 3));
        assert_eq!(parse("5").unwrap(), int(5));
        assert_eq!(format(&ratio(4, 2)), "2/1");
        assert_eq!(format(&ratio(-1, 3)), "-1/3");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn integer_rounding() {
        assert_eq!(ceil_int(&ratio(17, 14)), BigInt::from(2));
        assert_eq!(ceil_int(&int(2)), BigInt::from(2));
        assert_eq!(next_int_above(&int(2)), BigInt::from(3));
        assert_eq!(next_int_above(&ratio(7, 3)), BigInt::from(3));
    }
}
