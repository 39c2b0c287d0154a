use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
///
/// Displays and serializes as `num/den`, including integers (`7/1`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den` in lowest terms.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> BigInt {
        -((-self.numer()).div_floor(self.denom()))
    }

    pub fn fract(&self) -> Rational {
        self - &Rational::from_integer(self.floor())
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Rational> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // Only reached for magnitudes outside the f64 range.
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    /// Exact value of a finite float (every finite f64 is a dyadic rational).
    pub fn from_f64_exact(v: f64) -> Option<Rational> {
        BigRational::from_float(v).map(Rational)
    }

    /// Parses a finite decimal literal such as `-0.415`, `1e-3` or `2.5E+2`
    /// into its exact value.
    pub fn from_decimal_str(s: &str) -> Result<Rational> {
        let bad = || Error::parse(format!("malformed decimal literal {s:?}"));
        let t = s.trim();
        let (mantissa, exponent) = match t.find(['e', 'E']) {
            Some(i) => {
                let e: i64 = t[i + 1..].parse().map_err(|_| bad())?;
                (&t[..i], e)
            }
            None => (t, 0),
        };
        let (negative, digits) = match mantissa.as_bytes().first() {
            Some(b'-') => (true, &mantissa[1..]),
            Some(b'+') => (false, &mantissa[1..]),
            _ => (false, mantissa),
        };
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((a, b)) => (a, b),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if exponent.unsigned_abs() > 10_000 {
            return Err(Error::parse(format!("exponent out of range in {s:?}")));
        }
        let all_digits = format!("{int_part}{frac_part}");
        let mut num: BigInt = if all_digits.is_empty() {
            BigInt::zero()
        } else {
            all_digits.parse().map_err(|_| bad())?
        };
        if negative {
            num = -num;
        }
        let scale = exponent - frac_part.len() as i64;
        let ten = BigInt::from(10u32);
        let value = if scale >= 0 {
            Rational::from_integer(num * num_traits::pow(ten, scale as usize))
        } else {
            Rational::new(num, num_traits::pow(ten, (-scale) as usize))?
        };
        Ok(value)
    }

    /// Parses either `num/den` (integers) or a decimal literal.
    pub fn parse(s: &str) -> Result<Rational> {
        let t = s.trim();
        match t.split_once('/') {
            Some((a, b)) => {
                let num: BigInt = a
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(format!("bad numerator in {s:?}")))?;
                let den: BigInt = b
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(format!("bad denominator in {s:?}")))?;
                Rational::new(num, den)
            }
            None => Rational::from_decimal_str(t),
        }
    }

    pub fn pow(&self, e: i32) -> Rational {
        Rational(num_traits::Pow::pow(&self.0, e))
    }
}

/// `rat_normalize`: lowest-terms value of `num/den` with positive denominator.
pub fn rat_normalize(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rational> {
    Rational::new(num, den)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rational::parse(s)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
            Float(f64),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => Rational::parse(&s).map_err(serde::de::Error::custom),
            Repr::Int(i) => Ok(Rational::from_integer(i)),
            // JSON numbers are read through their shortest decimal form.
            Repr::Float(v) => Rational::from_decimal_str(&format!("{v:e}"))
                .map_err(serde::de::Error::custom),
        }
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational(v)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division panics on a zero divisor, like the integer types; use `recip` to
// get an error instead.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Compares `a/b` with `c/d` (positive denominators) by cross multiplication.
pub fn cmp_fractions(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Ordering {
    (a * d).cmp(&(c * b))
}
