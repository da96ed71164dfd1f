//! Exact parsing and printing of rational weights.
//!
//! Weights travel as text: either decimal literals (`"0.3"` means exactly
//! 3/10, exponents allowed) or explicit fractions (`"3/10"`). Printing is the
//! inverse: a terminating decimal when the reduced denominator only has
//! factors 2 and 5, the `p/q` form otherwise. Either way the printed string
//! parses back to the identical rational.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Parse a decimal literal or a `p/q` fraction into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let err = || Error::InvalidNumber {
        text: text.to_string(),
    };
    if s.is_empty() {
        return Err(err());
    }

    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err())?;
        let den: BigInt = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(num, den));
    }

    // Decimal form: [+-] digits [. digits] [(e|E) [+-] digits]
    let (mantissa_text, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e.parse().map_err(|_| err())?;
            (m, exp)
        }
        None => (s, 0),
    };

    let (sign, digits_text) = match mantissa_text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa_text.strip_prefix('+').unwrap_or(mantissa_text)),
    };

    let (int_part, frac_part) = match digits_text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits_text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }

    let mantissa: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .unwrap_or_else(|_| BigInt::zero());
    let mantissa = BigInt::from(sign) * mantissa;
    let scale = exp - frac_part.len() as i64;

    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(mantissa * ten.pow(scale as u32))
    } else {
        BigRational::new(mantissa, ten.pow((-scale) as u32))
    })
}

/// Print a rational exactly: terminating decimal when possible, `p/q` otherwise.
pub fn format_rational(value: &BigRational) -> String {
    let numer = value.numer();
    let denom = value.denom();
    if denom.is_one() {
        return numer.to_string();
    }

    // Count factors of 2 and 5 in the (reduced) denominator.
    let mut rest = denom.clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while (&rest % &two).is_zero() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{numer}/{denom}");
    }

    let digits = twos.max(fives);
    let scaled = numer.abs() * two.pow(digits - twos) * five.pow(digits - fives);
    let text = scaled.to_string();
    let sign = if numer.is_negative() { "-" } else { "" };
    let (int_text, frac_text) = if text.len() > digits as usize {
        let split = text.len() - digits as usize;
        (text[..split].to_string(), text[split..].to_string())
    } else {
        (
            "0".to_string(),
            format!("{:0>width$}", text, width = digits as usize),
        )
    };
    let frac_text = frac_text.trim_end_matches('0');
    if frac_text.is_empty() {
        format!("{sign}{int_text}")
    } else {
        format!("{sign}{int_text}.{frac_text}")
    }
}
