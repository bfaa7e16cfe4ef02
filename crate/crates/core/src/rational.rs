//! Exact rationals and their text renderings.
//!
//! [`Rational`] is `num_rational::BigRational`, which is always kept in lowest
//! terms with a positive denominator, so `==` and `Hash` are structural.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Rational {
    Rational::new(numer.into(), denom.into())
}

pub fn from_int(value: impl Into<BigInt>) -> Rational {
    Rational::from_integer(value.into())
}

/// Renders `q` as `"num/den"`. Integers keep the `/1` so every exact value has
/// the same shape.
pub fn to_fraction_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"num/den"` or a bare integer. The result is reduced.
pub fn parse_fraction(text: &str) -> Result<Rational, num_rational::ParseRatioError> {
    text.trim().parse::<Rational>()
}

/// Decimal approximation of `q` with exactly `digits` fractional digits,
/// rounded half away from zero.
pub fn to_decimal_string(q: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = q.abs() * Rational::from_integer(scale.clone());
    let (whole, rem) = scaled.numer().div_rem(scaled.denom());
    let rounded = if rem * 2u32 >= *scaled.denom() {
        whole + 1u32
    } else {
        whole
    };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let negative = q.is_negative() && !rounded_is_zero(&int_part, &frac_part);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if digits > 0 {
        let frac = frac_part.to_string();
        out.push('.');
        out.extend(std::iter::repeat_n('0', digits - frac.len()));
        out.push_str(&frac);
    }
    out
}

fn rounded_is_zero(int_part: &BigInt, frac_part: &BigInt) -> bool {
    int_part.is_zero() && frac_part.is_zero()
}

/// Lossy conversion for the floating-point side of the crate.
pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        if q.numer().sign() == Sign::Minus {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}
