//! Exact rational helpers shared by every module.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

pub use num_rational::BigRational;

/// Exact rational scalar used for every breakpoint, probability and measure.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

pub fn pow(base: &Q, exp: u64) -> Q {
    Pow::pow(base, BigInt::from(exp))
}

/// `2^-k` as an exact rational.
pub fn dyadic_eps(k: u32) -> Q {
    Q::new(BigInt::one(), BigInt::one() << k)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

/// Parses `p/q`, an integer, or a finite decimal such as `0.25`.
pub fn parse_rational(text: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let t = text.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = whole.trim_start().starts_with('-');
        let w = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            BigInt::from_str(whole).map_err(|_| err())?
        };
        let f = BigInt::from_str(frac).map_err(|_| err())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Q::new(w.abs() * &scale + f, scale);
        return Ok(if negative { -mag } else { mag });
    }
    BigInt::from_str(t).map(Q::from_integer).map_err(|_| err())
}

/// `p/q` or a bare integer, matching what [`parse_rational`] accepts.
pub fn fmt_exact(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Decimal rendering rounded half-up to `digits` fractional digits, with
/// trailing zeros trimmed.
pub fn fmt_decimal(v: &Q, digits: usize) -> String {
    let negative = v.is_negative();
    let mag = v.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = mag.numer() * &scale;
    let (mut units, rem) = scaled.div_rem(mag.denom());
    if rem * 2 >= *mag.denom() {
        units += 1;
    }
    let (whole, frac) = units.div_rem(&scale);
    let mut frac_s = format!("{:0>width$}", frac.to_string(), width = digits);
    while frac_s.ends_with('0') {
        frac_s.pop();
    }
    let sign = if negative && !(whole.is_zero() && frac_s.is_empty()) {
        "-"
    } else {
        ""
    };
    if frac_s.is_empty() {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac_s}")
    }
}

/// An exact measure value with a presentation-only decimal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeasureValue {
    pub exact: Q,
}

impl MeasureValue {
    pub fn new(exact: Q) -> Self {
        Self { exact }
    }

    pub fn decimal(&self) -> String {
        fmt_decimal(&self.exact, 12)
    }
}

impl From<Q> for MeasureValue {
    fn from(exact: Q) -> Self {
        Self { exact }
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", fmt_exact(&self.exact), self.decimal())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("1/2").unwrap(), q(1, 2));
        assert_eq!(parse_rational(" 3 ").unwrap(), int(3));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), q(-3, 2));
        assert_eq!(parse_rational("2/4").unwrap(), q(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(fmt_decimal(&q(1, 2), 12), "0.5");
        assert_eq!(fmt_decimal(&q(1, 3), 12), "0.333333333333");
        assert_eq!(fmt_decimal(&q(2, 3), 4), "0.6667");
        assert_eq!(fmt_decimal(&int(1), 12), "1");
        assert_eq!(fmt_decimal(&zero(), 12), "0");
        assert_eq!(fmt_decimal(&q(-1, 4), 12), "-0.25");
    }

    #[test]
    fn measure_value_display() {
        assert_eq!(MeasureValue::new(q(1, 2)).to_string(), "1/2 (0.5)");
        assert_eq!(MeasureValue::new(zero()).to_string(), "0 (0)");
    }

    #[test]
    fn exact_round_trip() {
        for v in [q(7, 9), int(-4), q(1, 1 << 40)] {
            assert_eq!(parse_rational(&fmt_exact(&v)).unwrap(), v);
        }
    }
}
