//! Exact rational scalars.
//!
//! `Rational` is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator after every operation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical text form `num/den`, always with an explicit denominator.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `num/den` or a bare integer. The result is normalized.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("invalid numerator {num:?}"))?;
    let den: BigInt = den.parse().map_err(|_| format!("invalid denominator {den:?}"))?;
    if den.is_zero() {
        return Err("zero denominator".to_string());
    }
    Ok(Rational::new(num, den))
}

/// Least common multiple of the denominators of `values` (1 for empty input).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn sign(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_after_arithmetic() {
        let a = frac(2, 4);
        let b = frac(-1, -6);
        let s = &a + &b;
        assert_eq!(s, frac(2, 3));
        assert_eq!(format_rational(&s), "2/3");
        assert_eq!(format_rational(&frac(3, -9)), "-1/3");
        assert_eq!(format_rational(&int(5)), "5/1");
    }

    #[test]
    fn parse_accepts_both_forms() {
        assert_eq!(parse_rational("6/8").unwrap(), frac(3, 4));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [frac(1, 4), frac(1, 6), int(3)];
        assert_eq!(common_denominator(&v), BigInt::from(12));
    }
}
