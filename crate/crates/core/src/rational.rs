//! Exact rational arithmetic helpers.
//!
//! All quantities in this crate are `num_rational::BigRational` values kept
//! in canonical form (reduced, positive denominator) by the `Ratio`
//! constructors. Nothing in the crate ever rounds; floating point appears
//! only in advisory decimal renderings and SVG coordinates.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always canonical.
pub type Rational = num_rational::BigRational;

/// Error raised when a rational string cannot be parsed.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Shorthand for small rationals in code and tests.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse a rational from a string.
///
/// Accepted forms: `p/q`, integers (`-3`), decimal literals (`0.25`) and
/// scientific notation (`1e-12`, `2.5e-3`). Everything is converted exactly;
/// decimals become `digits / 10^k`.
pub fn parse_rational(input: &str) -> Result<Rational, ParseRationalError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| ParseRationalError::Invalid(input.to_string()))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| ParseRationalError::Invalid(input.to_string()))?;
        if d.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(input.to_string()));
        }
        return Ok(Rational::new(n, d));
    }
    // mantissa [eE exponent]
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e
                .parse()
                .map_err(|_| ParseRationalError::Invalid(input.to_string()))?;
            (m, exp)
        }
        None => (s, 0i64),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(ParseRationalError::Invalid(input.to_string()));
    }
    let digits = format!(
        "{}{}",
        if int_part.is_empty() { "0" } else { int_part },
        frac_part
    );
    let n: BigInt = digits
        .parse()
        .map_err(|_| ParseRationalError::Invalid(input.to_string()))?;
    let scale = frac_part.len() as i64 - exp;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::new(n, ten.pow(scale as u32))
    } else {
        Rational::from_integer(n * ten.pow((-scale) as u32))
    })
}

/// Canonical string form: `p/q`, or just `p` for integers.
pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

/// Advisory decimal rendering with `digits` places after the point,
/// rounded to nearest (ties away from zero). Exact integer arithmetic.
pub fn decimal_string(r: &Rational, digits: u32) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs: Rational = r.abs();
    let scale = BigInt::from(10).pow(digits);
    // round(abs * 10^digits)
    let scaled: BigInt = (abs.numer() * &scale * 2 + abs.denom()) / (abs.denom() * 2);
    let (int_part, frac_part) = scaled.div_rem(&scale);
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
    format!("{sign}{int_part}.{frac}")
}

/// Approximate `f64` value, for rendering only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Floor of the integer square root helper: largest `a` with `a*a <= n`.
/// `n` must be non-negative.
fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    if n.is_zero() {
        return BigInt::zero();
    }
    // num-integer's sqrt works on unsigned magnitudes via Roots.
    num_integer::Roots::sqrt(n)
}

/// Certified enclosure of `sqrt(d)` for `d >= 0`.
///
/// Returns `(lo, hi)` with `lo <= sqrt(d) <= hi` and `hi - lo <= tol`;
/// `lo == hi` exactly when `d` is the square of a rational. Denominators stay
/// bounded: both endpoints are `a / (q * 2^k)` for integers.
pub fn sqrt_enclosure(d: &Rational, tol: &Rational) -> (Rational, Rational) {
    assert!(!d.is_negative(), "sqrt of negative rational");
    assert!(tol.is_positive(), "tolerance must be positive");
    if d.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let p = d.numer();
    let q = d.denom();
    // sqrt(p/q) = sqrt(p*q) / q
    let n = p * q;
    let mut k: u32 = 0;
    loop {
        let shifted = &n << (2 * k as usize);
        let a = isqrt(&shifted);
        let den = q.clone() << (k as usize);
        if &a * &a == shifted {
            let v = Rational::new(a, den);
            return (v.clone(), v);
        }
        let lo = Rational::new(a.clone(), den.clone());
        let hi = Rational::new(a + BigInt::one(), den);
        if &hi - &lo <= *tol {
            return (lo, hi);
        }
        k += 1;
    }
}

/// Serde helpers: rationals travel as canonical `p/q` strings in JSON.
pub mod rat_str {
    use super::{parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(de::Error::custom)
    }
}

/// Serde helper for `Vec<Rational>`.
pub mod rat_vec {
    use super::{parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(de::Error::custom))
            .collect()
    }
}

/// Serde helper for `Option<Rational>`.
pub mod rat_opt {
    use super::{parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_some(&r.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        raw.map(|s| parse_rational(&s).map_err(de::Error::custom))
            .transpose()
    }
}

/// True when `r` is an integer.
pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Sign of a rational as -1, 0, 1.
pub fn sign(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("2655/2744").unwrap(), rat(2655, 2744));
        assert_eq!(parse_rational("-3").unwrap(), rat_int(-3));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("1e-12").unwrap(), rat(1, 1_000_000_000_000));
        assert_eq!(parse_rational("2.5e-3").unwrap(), rat(1, 400));
        assert_eq!(parse_rational(" 17/100 ").unwrap(), rat(17, 100));
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&rat(1, 4), 5), "0.25000");
        assert_eq!(decimal_string(&rat(2, 3), 4), "0.6667");
        assert_eq!(decimal_string(&rat(-1, 3), 3), "-0.333");
        assert_eq!(decimal_string(&rat_int(12), 2), "12.00");
    }

    #[test]
    fn sqrt_enclosures() {
        let (lo, hi) = sqrt_enclosure(&rat(1, 9), &rat(1, 1000));
        assert_eq!(lo, rat(1, 3));
        assert_eq!(hi, rat(1, 3));

        let tol = rat(1, 1_000_000);
        let (lo, hi) = sqrt_enclosure(&rat_int(2), &tol);
        assert!(&hi - &lo <= tol);
        assert!(&lo * &lo <= rat_int(2) && rat_int(2) <= &hi * &hi);
    }
}
