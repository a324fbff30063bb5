//! Non-negative scalar weights: exact rationals parsed from decimal strings,
//! or plain doubles when the caller only has a float.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scaled::Scaled;

#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Exact(BigRational),
    Real(f64),
}

/// Parses `"12"`, `"-0.5"`, `"1.25e-3"`, `".5"` or `"3/8"` into an exact rational.
pub fn parse_decimal(text: &str) -> Result<BigRational> {
    let err = || Error::ParseDecimal(text.to_string());
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    if exponent.unsigned_abs() > 100_000 {
        return Err(err());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(&all_digits).map_err(|_| err())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Magnitude of an exact non-negative rational as a [`Scaled`].
pub fn rational_to_scaled(q: &BigRational) -> Scaled {
    Scaled::from_bigint(q.numer()) / Scaled::from_bigint(q.denom())
}

pub fn rational_ln(q: &BigRational) -> f64 {
    rational_to_scaled(q).ln()
}

impl Weight {
    pub fn zero() -> Weight {
        Weight::Exact(BigRational::zero())
    }

    pub fn one() -> Weight {
        Weight::Exact(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Weight {
        Weight::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(numer: i64, denom: i64) -> Weight {
        Weight::Exact(BigRational::new(numer.into(), denom.into()))
    }

    /// Parses a decimal string exactly and rejects negative values.
    pub fn parse(text: &str) -> Result<Weight> {
        Weight::Exact(parse_decimal(text)?).validated()
    }

    pub fn validated(self) -> Result<Weight> {
        let ok = match &self {
            Weight::Exact(q) => !q.is_negative(),
            Weight::Real(x) => x.is_finite() && *x >= 0.0,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidWeight(self.to_string()))
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Weight::Exact(q) => q.is_zero(),
            Weight::Real(x) => *x == 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Weight::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Weight::Exact(q) => Some(q),
            Weight::Real(_) => None,
        }
    }

    pub fn to_scaled(&self) -> Scaled {
        match self {
            Weight::Exact(q) => rational_to_scaled(q),
            Weight::Real(x) => Scaled::from_f64(*x),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Weight::Exact(q) => q.to_f64().unwrap_or_else(|| rational_to_scaled(q).to_f64()),
            Weight::Real(x) => *x,
        }
    }

    pub fn ln(&self) -> f64 {
        self.to_scaled().ln()
    }

    pub fn mul(&self, other: &Weight) -> Weight {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => Weight::Exact(a * b),
            _ => Weight::Real(self.to_f64() * other.to_f64()),
        }
    }

    pub fn add(&self, other: &Weight) -> Weight {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => Weight::Exact(a + b),
            _ => Weight::Real(self.to_f64() + other.to_f64()),
        }
    }

    /// `self^n`; exact weights stay exact.
    pub fn pow(&self, n: usize) -> Weight {
        match self {
            Weight::Exact(q) => Weight::Exact(num_traits::pow(q.clone(), n)),
            Weight::Real(x) => Weight::Real(x.powi(n as i32)),
        }
    }

    /// Pointwise order; compares exactly when both sides are exact.
    pub fn le(&self, other: &Weight) -> bool {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => a <= b,
            _ => self.to_f64() <= other.to_f64(),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Exact(q) => write!(f, "{q}"),
            Weight::Real(x) => write!(f, "{x:?}"),
        }
    }
}

impl From<BigRational> for Weight {
    fn from(q: BigRational) -> Weight {
        Weight::Exact(q)
    }
}
