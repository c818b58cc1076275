//! Exact rational scalars.
//!
//! Every weight, distance and mass in the crate is a [`Q`]. Irrational
//! quantities (square roots from volume formulas) are rounded down onto the
//! dyadic grid `2^-QUANTUM_BITS`, so all downstream sums and comparisons stay
//! exact and deterministic.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number used for weights, distances and masses.
pub type Q = BigRational;

/// Bits of the dyadic grid used when a value has no exact rational form.
pub const QUANTUM_BITS: u32 = 32;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Rounds a float to the nearest point of the dyadic grid.
///
/// Non-finite input maps to zero.
pub fn q_from_f64(x: f64) -> Q {
    if !x.is_finite() {
        return Q::zero();
    }
    let scale = (1u64 << QUANTUM_BITS) as f64;
    let scaled = (x * scale).round();
    let num = Q::from_float(scaled).unwrap_or_else(Q::zero);
    num / Q::from_integer(BigInt::one() << QUANTUM_BITS)
}

pub fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Square root of a nonnegative rational.
///
/// Exact when numerator and denominator are perfect squares, otherwise the
/// floor on the dyadic grid. Negative input is an error.
pub fn q_sqrt(q: &Q) -> Result<Q> {
    if q.is_negative() {
        return Err(Error::Numeric(format!("square root of negative value {q}")));
    }
    if q.is_zero() {
        return Ok(Q::zero());
    }
    if let (Some(n), Some(d)) = (perfect_square(q.numer()), perfect_square(q.denom())) {
        return Ok(Q::new(n, d));
    }
    let scaled = (q.numer() << (2 * QUANTUM_BITS)) / q.denom();
    let root = scaled.sqrt();
    Ok(Q::new(root, BigInt::one() << QUANTUM_BITS))
}

/// Integer power of a rational.
pub fn q_pow(q: &Q, exp: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..exp {
        acc *= q;
    }
    acc
}

/// Parses `"3"`, `"-7/2"` or a decimal literal such as `"0.25"` exactly.
pub fn parse_q(text: &str) -> Result<Q> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {t:?}")))?;
        let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {t:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {t:?}")));
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..].parse().map_err(|_| Error::Parse(format!("bad exponent in {t:?}")))?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (Sign::Minus, rest),
        None => (Sign::Plus, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("not a number: {t:?}")));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a number: {t:?}")));
    }
    let all: String = format!("{int_part}{frac_part}");
    let magnitude: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().unwrap() };
    let mut value = Q::new(
        BigInt::from_biguint(Sign::Plus, magnitude.magnitude().clone()),
        num_traits::pow(BigInt::from(10), frac_part.len()),
    );
    if exponent > 0 {
        value *= Q::from_integer(num_traits::pow(BigInt::from(10), exponent as usize));
    } else if exponent < 0 {
        value /= Q::from_integer(num_traits::pow(BigInt::from(10), (-exponent) as usize));
    }
    if sign == Sign::Minus {
        value = -value;
    }
    Ok(value)
}

/// Renders `a/b` (or `a` for integers).
pub fn format_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact value plus a decimal rendering, the serialization used in reports.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ExactReal {
    pub exact: String,
    pub decimal: f64,
}

impl From<&Q> for ExactReal {
    fn from(q: &Q) -> Self {
        ExactReal { exact: format_q(q), decimal: q_to_f64(q) }
    }
}

impl From<Q> for ExactReal {
    fn from(q: Q) -> Self {
        ExactReal::from(&q)
    }
}

impl ExactReal {
    pub fn to_q(&self) -> Result<Q> {
        parse_q(&self.exact)
    }
}

/// Least integer not smaller than `q`.
pub fn q_ceil(q: &Q) -> BigInt {
    q.ceil().to_integer()
}

/// Greatest integer not larger than `q`.
pub fn q_floor(q: &Q) -> BigInt {
    q.floor().to_integer()
}

pub fn q_max(a: Q, b: Q) -> Q {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn q_min(a: Q, b: Q) -> Q {
    if a <= b {
        a
    } else {
        b
    }
}
