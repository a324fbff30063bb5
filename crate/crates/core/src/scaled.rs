//! Non-negative reals with an unbounded binary exponent.
//!
//! Walk counts on trees grow like `d^r`; for `r` in the thousands they leave
//! the `f64` range long before the recurrences stop being interesting. All
//! the long-range engines only ever add and multiply non-negative values, so
//! a mantissa/exponent pair keeps full double precision without cancellation
//! concerns.

use std::cmp::Ordering;
use std::f64::consts::LN_2;
use std::ops::{Add, AddAssign, Div, Mul};

use num_bigint::{BigInt, BigUint, Sign};

/// `mantissa * 2^exponent` with `mantissa` in `[1, 2)`, or zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    mantissa: f64,
    exponent: i64,
}

const MANTISSA_MASK: u64 = (1u64 << 52) - 1;

fn pow2(e: i64) -> f64 {
    debug_assert!((-1022..=1023).contains(&e));
    f64::from_bits(((e + 1023) as u64) << 52)
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        mantissa: 0.0,
        exponent: 0,
    };
    pub const ONE: Scaled = Scaled {
        mantissa: 1.0,
        exponent: 0,
    };

    fn normalized(mantissa: f64, exponent: i64) -> Scaled {
        if mantissa == 0.0 {
            return Scaled::ZERO;
        }
        debug_assert!(mantissa > 0.0 && mantissa.is_finite());
        let (m, extra) = if mantissa < f64::MIN_POSITIVE {
            (mantissa * pow2(64), -64)
        } else {
            (mantissa, 0)
        };
        let bits = m.to_bits();
        let e = ((bits >> 52) & 0x7ff) as i64 - 1023;
        let m = f64::from_bits((bits & MANTISSA_MASK) | (1023u64 << 52));
        Scaled {
            mantissa: m,
            exponent: exponent + e + extra,
        }
    }

    pub fn from_f64(x: f64) -> Scaled {
        assert!(
            x >= 0.0 && x.is_finite(),
            "Scaled holds finite non-negative values, got {x}"
        );
        Scaled::normalized(x, 0)
    }

    pub fn from_u64(x: u64) -> Scaled {
        Scaled::normalized(x as f64, 0)
    }

    pub fn from_biguint(x: &BigUint) -> Scaled {
        let bits = x.bits();
        if bits <= 64 {
            let v = x.iter_u64_digits().next().unwrap_or(0);
            return Scaled::from_u64(v);
        }
        let shift = bits - 64;
        let top: BigUint = x >> shift;
        let v = top.iter_u64_digits().next().unwrap_or(0);
        Scaled::normalized(v as f64, shift as i64)
    }

    /// Panics on negative input.
    pub fn from_bigint(x: &BigInt) -> Scaled {
        assert!(x.sign() != Sign::Minus, "negative value {x}");
        Scaled::from_biguint(x.magnitude())
    }

    /// Inverse of [`Scaled::ln`]; `NEG_INFINITY` maps to zero.
    pub fn from_ln(l: f64) -> Scaled {
        if l == f64::NEG_INFINITY {
            return Scaled::ZERO;
        }
        assert!(l.is_finite(), "non-finite log {l}");
        let e = (l / LN_2).floor();
        let m = (l - e * LN_2).exp();
        Scaled::normalized(m, e as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    /// Natural logarithm; zero maps to `NEG_INFINITY`.
    pub fn ln(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.ln() + self.exponent as f64 * LN_2
        }
    }

    /// Nearest `f64`, saturating to infinity or zero out of range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else if self.exponent > 1023 {
            f64::INFINITY
        } else if self.exponent < -1074 {
            0.0
        } else if self.exponent < -1022 {
            self.mantissa * pow2(self.exponent + 64) / pow2(64)
        } else {
            self.mantissa * pow2(self.exponent)
        }
    }

    pub fn sqrt(&self) -> Scaled {
        if self.is_zero() {
            return Scaled::ZERO;
        }
        let (m, e) = if self.exponent % 2 != 0 {
            (self.mantissa * 2.0, self.exponent - 1)
        } else {
            (self.mantissa, self.exponent)
        };
        Scaled::normalized(m.sqrt(), e / 2)
    }

    pub fn scale(&self, factor: f64) -> Scaled {
        assert!(factor >= 0.0 && factor.is_finite());
        Scaled::normalized(self.mantissa * factor, self.exponent)
    }

    pub fn powi(&self, mut n: u64) -> Scaled {
        let mut base = *self;
        let mut acc = Scaled::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }
}

impl Add for Scaled {
    type Output = Scaled;

    fn add(self, rhs: Scaled) -> Scaled {
        if rhs.is_zero() {
            return self;
        }
        if self.is_zero() {
            return rhs;
        }
        let (hi, lo) = if self.exponent >= rhs.exponent {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let gap = hi.exponent - lo.exponent;
        if gap > 64 {
            return hi;
        }
        Scaled::normalized(hi.mantissa + lo.mantissa * pow2(-gap), hi.exponent)
    }
}

impl AddAssign for Scaled {
    fn add_assign(&mut self, rhs: Scaled) {
        *self = *self + rhs;
    }
}

impl Mul for Scaled {
    type Output = Scaled;

    fn mul(self, rhs: Scaled) -> Scaled {
        if self.is_zero() || rhs.is_zero() {
            return Scaled::ZERO;
        }
        Scaled::normalized(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Div for Scaled {
    type Output = Scaled;

    fn div(self, rhs: Scaled) -> Scaled {
        assert!(!rhs.is_zero(), "division by zero");
        if self.is_zero() {
            return Scaled::ZERO;
        }
        Scaled::normalized(self.mantissa / rhs.mantissa, self.exponent - rhs.exponent)
    }
}

impl PartialOrd for Scaled {
    fn partial_cmp(&self, other: &Scaled) -> Option<Ordering> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            _ => match self.exponent.cmp(&other.exponent) {
                Ordering::Equal => self.mantissa.partial_cmp(&other.mantissa),
                o => Some(o),
            },
        }
    }
}

impl std::iter::Sum for Scaled {
    fn sum<I: Iterator<Item = Scaled>>(iter: I) -> Scaled {
        iter.fold(Scaled::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_ordinary_values() {
        for x in [0.0, 1.0, 0.75, 3.0e-300, 1.0e300, 123456.789] {
            assert_eq!(Scaled::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn big_integers_keep_relative_precision() {
        let big = BigUint::from(3u32).pow(5000);
        let s = Scaled::from_biguint(&big);
        let expected = 5000.0 * 3f64.ln();
        assert!((s.ln() - expected).abs() / expected < 1e-15);
        assert_eq!(Scaled::from_u64(15).to_f64(), 15.0);
    }

    #[test]
    fn arithmetic_beyond_f64_range() {
        let a = Scaled::from_ln(2000.0);
        let b = a + a;
        assert!((b.ln() - (2000.0 + LN_2)).abs() < 1e-12);
        assert!(((a * a).ln() - 4000.0).abs() < 1e-12);
        assert!(((a / a).to_f64() - 1.0).abs() < 1e-15);
        assert!((a.sqrt().ln() - 1000.0).abs() < 1e-12);
        assert!(a > Scaled::ONE);
        assert_eq!(a + Scaled::ONE, a);
        assert_eq!(Scaled::from_u64(3).powi(4).to_f64(), 81.0);
    }

    #[test]
    fn zero_behaves() {
        assert_eq!(Scaled::ZERO.ln(), f64::NEG_INFINITY);
        assert_eq!(Scaled::from_ln(f64::NEG_INFINITY), Scaled::ZERO);
        assert_eq!((Scaled::ZERO + Scaled::ONE).to_f64(), 1.0);
        assert!(Scaled::ZERO.sqrt().is_zero());
    }
}
