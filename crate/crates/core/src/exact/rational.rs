//! Arbitrary-precision rationals and the `p/q` text format.

use num_bigint::BigInt;
use num_traits::Zero;

use super::ExactError;

/// The coefficient field of everything in this crate: arbitrary-precision
/// rationals, always stored in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// `n/d` as a [`Rational`]. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a [`Rational`].
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse the text format `p/q` or `p`. Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let s = s.trim();
    let bad = || ExactError::BadRational(s.to_string());
    let parse_int = |t: &str| -> Result<BigInt, ExactError> {
        if t.is_empty() {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(ExactError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Render as `p/q`, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Largest integer `<= r`.
pub fn rational_floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// Smallest integer `>= r`.
pub fn rational_ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Fractional part `r - floor(r)`, always in `[0, 1)`.
pub fn rational_frac(r: &Rational) -> Rational {
    r - Rational::from_integer(rational_floor(r))
}

/// Checked conversion to `i64`, for quantities proved integral.
pub fn rational_to_i64(r: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    if !r.is_integer() {
        return None;
    }
    r.numer().to_i64()
}
