//! Exact scalar types: arbitrary-precision rationals, the extended line with
//! `TOP`/`BOTTOM`, and two-level lexicographic scalars carrying an
//! infinitesimal part.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair. Panics on zero denominator;
/// use [`parse_rational`] for untrusted input.
pub fn ratio(p: i64, q: i64) -> Rational {
    assert!(q != 0, "zero denominator");
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parse `"p/q"` or `"p"` into an exact rational.
///
/// This is the only accepted textual form; floating literals are rejected so
/// exactness can never be silently lost.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidRational(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// Render a rational in lowest terms as `"p/q"`, or `"p"` when integral.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering with `digits` fractional digits (round toward zero).
/// Used only for plot-data output, never for decisions.
pub fn decimal_string(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (r * Rational::from_integer(scale.clone())).trunc();
    let scaled = scaled.numer();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let abs = scaled.abs();
    let (int_part, frac_part) = (abs.clone() / &scale, abs % &scale);
    let frac = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
    format!("{sign}{int_part}.{frac}")
}

/// Extended rational line with least element `BOTTOM` and greatest `TOP`.
///
/// The order is total. Addition is partial: `TOP + BOTTOM` has no value and
/// surfaces as [`Error::UndefinedSum`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtScalar {
    Bottom,
    Finite(Rational),
    Top,
}

impl ExtScalar {
    pub fn finite(r: Rational) -> Self {
        ExtScalar::Finite(r)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtScalar::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtScalar::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// Partial addition; `TOP + BOTTOM` (in either order) is undefined.
    pub fn checked_add(&self, other: &ExtScalar) -> Result<ExtScalar> {
        use ExtScalar::*;
        Ok(match (self, other) {
            (Top, Bottom) | (Bottom, Top) => return Err(Error::UndefinedSum),
            (Top, _) | (_, Top) => Top,
            (Bottom, _) | (_, Bottom) => Bottom,
            (Finite(a), Finite(b)) => Finite(a + b),
        })
    }

    pub fn neg(&self) -> ExtScalar {
        match self {
            ExtScalar::Bottom => ExtScalar::Top,
            ExtScalar::Top => ExtScalar::Bottom,
            ExtScalar::Finite(r) => ExtScalar::Finite(-r),
        }
    }

    /// Supremum of an iterator; `BOTTOM` when empty.
    pub fn sup<I: IntoIterator<Item = ExtScalar>>(vals: I) -> ExtScalar {
        vals.into_iter()
            .fold(ExtScalar::Bottom, |acc, v| if v > acc { v } else { acc })
    }

    /// Infimum of an iterator; `TOP` when empty.
    pub fn inf<I: IntoIterator<Item = ExtScalar>>(vals: I) -> ExtScalar {
        vals.into_iter()
            .fold(ExtScalar::Top, |acc, v| if v < acc { v } else { acc })
    }
}

impl PartialOrd for ExtScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtScalar::*;
        match (self, other) {
            (Bottom, Bottom) | (Top, Top) => Ordering::Equal,
            (Bottom, _) => Ordering::Less,
            (_, Bottom) => Ordering::Greater,
            (Top, _) => Ordering::Greater,
            (_, Top) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtScalar::Bottom => write!(f, "BOTTOM"),
            ExtScalar::Top => write!(f, "TOP"),
            ExtScalar::Finite(r) => write!(f, "{}", format_rational(r)),
        }
    }
}

/// Two-level lexicographic scalar `std + inf·ε` with `ε` a positive
/// infinitesimal: ordered by standard part first, infinitesimal part second.
///
/// The monad of infinitesimals is `{(0, b) : b ≥ 0}`; two scalars are
/// infinitely close when their standard parts coincide.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LexScalar {
    pub std: Rational,
    pub inf: Rational,
}

impl LexScalar {
    pub fn new(std: Rational, inf: Rational) -> Self {
        LexScalar { std, inf }
    }

    pub fn from_std(std: Rational) -> Self {
        LexScalar { std, inf: Rational::zero() }
    }

    pub fn zero() -> Self {
        LexScalar::from_std(Rational::zero())
    }

    /// Membership in the monad: infinitesimal (possibly zero) values.
    pub fn is_infinitesimal(&self) -> bool {
        self.std.is_zero() && !self.inf.is_negative()
    }

    /// Infinite proximity: equality of standard parts.
    pub fn approx_eq(&self, other: &LexScalar) -> bool {
        self.std == other.std
    }

    pub fn scale(&self, c: &Rational) -> LexScalar {
        LexScalar::new(c * &self.std, c * &self.inf)
    }
}

impl Add for LexScalar {
    type Output = LexScalar;
    fn add(self, rhs: LexScalar) -> LexScalar {
        LexScalar::new(self.std + rhs.std, self.inf + rhs.inf)
    }
}

impl<'a> Add<&'a LexScalar> for &'a LexScalar {
    type Output = LexScalar;
    fn add(self, rhs: &LexScalar) -> LexScalar {
        LexScalar::new(&self.std + &rhs.std, &self.inf + &rhs.inf)
    }
}

impl Sub for LexScalar {
    type Output = LexScalar;
    fn sub(self, rhs: LexScalar) -> LexScalar {
        LexScalar::new(self.std - rhs.std, self.inf - rhs.inf)
    }
}

impl<'a> Sub<&'a LexScalar> for &'a LexScalar {
    type Output = LexScalar;
    fn sub(self, rhs: &LexScalar) -> LexScalar {
        LexScalar::new(&self.std - &rhs.std, &self.inf - &rhs.inf)
    }
}

impl Neg for LexScalar {
    type Output = LexScalar;
    fn neg(self) -> LexScalar {
        LexScalar::new(-self.std, -self.inf)
    }
}

impl fmt::Display for LexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inf.is_zero() {
            write!(f, "{}", format_rational(&self.std))
        } else {
            write!(f, "{} + {}·eps", format_rational(&self.std), format_rational(&self.inf))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for s in ["3/4", "-7/2", "5", "0", "-12"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        // non-lowest terms normalize
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn ext_scalar_total_order() {
        let vals = [
            ExtScalar::Bottom,
            ExtScalar::finite(ratio(-1, 2)),
            ExtScalar::finite(rat(0)),
            ExtScalar::finite(rat(3)),
            ExtScalar::Top,
        ];
        for w in vals.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn ext_scalar_partial_addition() {
        let t = ExtScalar::Top;
        let b = ExtScalar::Bottom;
        let f = ExtScalar::finite(rat(2));
        assert_eq!(t.checked_add(&f).unwrap(), ExtScalar::Top);
        assert_eq!(b.checked_add(&f).unwrap(), ExtScalar::Bottom);
        assert_eq!(t.checked_add(&b), Err(Error::UndefinedSum));
        assert_eq!(b.checked_add(&t), Err(Error::UndefinedSum));
        assert_eq!(
            f.checked_add(&ExtScalar::finite(rat(5))).unwrap(),
            ExtScalar::finite(rat(7))
        );
    }

    #[test]
    fn lex_scalar_order_is_lexicographic() {
        // (std, inf) pairs: standard part dominates.
        let a = LexScalar::new(rat(0), rat(100));
        let b = LexScalar::new(rat(1), rat(-100));
        assert!(a < b);
        let c = LexScalar::new(rat(0), rat(1));
        assert!(a > c);
        // monad membership
        assert!(LexScalar::new(rat(0), rat(3)).is_infinitesimal());
        assert!(LexScalar::zero().is_infinitesimal());
        assert!(!LexScalar::new(rat(0), rat(-1)).is_infinitesimal());
        assert!(!LexScalar::new(ratio(1, 10), rat(0)).is_infinitesimal());
        // infinite proximity ignores the infinitesimal part
        assert!(a.approx_eq(&c));
        assert!(!a.approx_eq(&b));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&ratio(1, 3), 6), "0.333333");
        assert_eq!(decimal_string(&ratio(-1, 2), 4), "-0.5000");
        assert_eq!(decimal_string(&rat(7), 2), "7.00");
    }
}
