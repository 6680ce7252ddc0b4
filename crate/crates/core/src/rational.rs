//! Exact rational scalars and their text forms.
//!
//! Every value the crate computes with is a [`Rational`]. Text input accepts
//! three shapes, all parsed exactly: fractions `"p/q"`, integers `"-3"`, and
//! decimals `"5.99"` (read as `p/10^k`, never through floating point).

use alloc::string::{String, ToString};
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Rational from an integer pair. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, an integer string, or a decimal string into an exact value.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let err = || Error::InvalidNumber(text.to_string());

    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }

    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    if digits.is_empty() {
        return Err(err());
    }

    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(err());
    }

    let mut numer = if int_part.is_empty() {
        BigInt::zero()
    } else {
        BigInt::from_str(int_part).map_err(|_| err())?
    };
    let mut denom = BigInt::from(1);
    if !frac_part.is_empty() {
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        numer = numer * &scale + BigInt::from_str(frac_part).map_err(|_| err())?;
        denom = scale;
    }
    if sign < 0 {
        numer = -numer;
    }
    Ok(Rational::new(numer, denom))
}

/// Canonical text form: `"p/q"`, or just `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Nearest double, safe for arbitrarily large numerators and denominators.
pub fn rational_to_f64(r: &Rational) -> f64 {
    let numer = r.numer();
    let denom = r.denom();
    let nb = numer.bits();
    let db = denom.bits();
    if nb <= 900 && db <= 900 {
        let n = numer.to_f64().unwrap_or(f64::NAN);
        let d = denom.to_f64().unwrap_or(f64::NAN);
        return n / d;
    }
    // Shift both parts down so each fits a double; the relative error of the
    // truncation is below 2^-800.
    let shift = nb.max(db) - 100;
    let n = (numer >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (denom >> shift).to_f64().unwrap_or(f64::NAN);
    if d == 0.0 {
        if numer.is_negative() {
            return f64::NEG_INFINITY;
        }
        return f64::INFINITY;
    }
    n / d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-3/4").unwrap(), ratio(-3, 4));
        assert_eq!(parse_rational("3/-4").unwrap(), ratio(-3, 4));
        assert_eq!(parse_rational("17").unwrap(), int(17));
        assert_eq!(parse_rational("-17").unwrap(), int(-17));
        assert_eq!(parse_rational("+2").unwrap(), int(2));
        assert_eq!(parse_rational("5.99").unwrap(), ratio(599, 100));
        assert_eq!(parse_rational("-0.01").unwrap(), ratio(-1, 100));
        assert_eq!(parse_rational("0.5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("835.999984").unwrap(), ratio(835_999_984, 1_000_000));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "x", "1/0", "1.2.3", "1e5", "--2", "."] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&ratio(-6, 3)), "-2");
        assert_eq!(format_rational(&int(0)), "0");
    }

    #[test]
    fn f64_conversion_handles_huge_values() {
        let huge = Rational::new(BigInt::from(3) << 2000, BigInt::from(2) << 2000);
        let v = rational_to_f64(&huge);
        assert!((v - 1.5).abs() < 1e-12);
    }
}
