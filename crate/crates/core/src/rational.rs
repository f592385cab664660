//! Exact rational scalars and their text forms.

use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `p/q`, an integer, or a finite decimal such as `-2.25`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: `{text}`"));
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::InvalidArgument(format!("zero denominator in `{text}`")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, fraction)) = text.split_once('.') {
        if fraction.is_empty() || !fraction.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), fraction);
        let mut numer: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10), fraction.len());
        return Ok(Rational::new(numer, denom));
    }
    let p: BigInt = text.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// `p/q` or the bare integer.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Exact decimal expansion if the denominator has no prime factors other
/// than 2 and 5, otherwise `None`.
pub fn to_terminating_decimal(value: &Rational) -> Option<String> {
    if value.is_integer() {
        return Some(value.numer().to_string());
    }
    let (twos, fives, rest) = split_2_5(value.denom());
    if !rest.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = value.numer() * &scale / value.denom();
    let digits = scaled.abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let mut out = String::new();
    if value.is_negative() {
        out.push('-');
    }
    write!(out, "{int_part}.{}", frac_part.trim_end_matches('0')).unwrap();
    Some(out)
}

/// Part of the denominator that prevents a terminating decimal expansion.
pub fn non_terminating_factor(value: &Rational) -> BigInt {
    split_2_5(value.denom()).2
}

fn split_2_5(denom: &BigInt) -> (usize, usize, BigInt) {
    let mut rest = denom.clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0;
    while rest.is_multiple_of(&two) {
        rest /= &two;
        twos += 1;
    }
    let mut fives = 0;
    while rest.is_multiple_of(&five) {
        rest /= &five;
        fives += 1;
    }
    (twos, fives, rest)
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Integer value if `value` is integral and fits in an `i64`.
pub fn to_i64(value: &Rational) -> Option<i64> {
    if value.is_integer() {
        value.numer().to_i64()
    } else {
        None
    }
}

pub fn is_zero(value: &Rational) -> bool {
    value.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse_rational("-2.5").unwrap(), frac(-5, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_terminating_decimal(&frac(1, 2)).unwrap(), "0.5");
        assert_eq!(to_terminating_decimal(&frac(-9, 4)).unwrap(), "-2.25");
        assert_eq!(to_terminating_decimal(&frac(1, 80)).unwrap(), "0.0125");
        assert_eq!(to_terminating_decimal(&int(-7)).unwrap(), "-7");
        assert!(to_terminating_decimal(&frac(1, 3)).is_none());
        assert_eq!(non_terminating_factor(&frac(1, 30)), BigInt::from(3));
    }

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format_rational(&frac(4, -6)), "-2/3");
        assert_eq!(format_rational(&int(0)), "0");
    }
}
