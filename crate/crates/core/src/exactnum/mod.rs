//! Exact integer and rational arithmetic.

pub mod int;
mod rational;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub use rational::{cmp_fractions, rat_normalize, Rational};

/// Greatest common divisor of all entries; `0` for an empty or all-zero input.
pub fn gcd_many(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Canonical continued fraction `[a0; a1, ..., ak]` of `x`.
///
/// `a0` may be any integer, later terms are positive, and the last term is at
/// least 2 whenever `k >= 1`.
pub fn cf_expansion(x: &Rational) -> Vec<BigInt> {
    let mut terms = Vec::new();
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    loop {
        let (a, r) = num.div_mod_floor(&den);
        terms.push(a);
        if r.is_zero() {
            break;
        }
        num = std::mem::replace(&mut den, r);
    }
    terms
}

/// Rebuilds the rational from its continued-fraction terms.
pub fn cf_reconstruct(terms: &[BigInt]) -> Result<Rational> {
    let (p, q) = convergent(terms).ok_or(Error::ZeroDenominator)?;
    Rational::new(p, q)
}

/// Last convergent `(p, q)` of `[a0; a1, ...]`, already coprime.
pub(crate) fn convergent(terms: &[BigInt]) -> Option<(BigInt, BigInt)> {
    let (mut p0, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q0, mut q1) = (BigInt::one(), BigInt::zero());
    for a in terms {
        let p2 = a * &p1 + &p0;
        let q2 = a * &q1 + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    if q1.is_zero() {
        return None;
    }
    if q1.is_negative() {
        Some((-p1, -q1))
    } else {
        Some((p1, q1))
    }
}

/// Primitive lattice point `(p, q)` with `q >= 1` and `gcd(p1, ..., pn, q) = 1`,
/// standing for the rational vector `p / q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimitivePoint {
    p: Vec<BigInt>,
    q: BigInt,
}

impl PrimitivePoint {
    pub fn new(p: Vec<BigInt>, q: BigInt) -> Result<Self> {
        if q < BigInt::one() {
            return Err(Error::invalid(format!("denominator {q} must be at least 1")));
        }
        let mut all = p.clone();
        all.push(q.clone());
        let g = gcd_many(&all);
        if !g.is_one() {
            return Err(Error::invalid(format!("point is not primitive (gcd {g})")));
        }
        Ok(PrimitivePoint { p, q })
    }

    /// Reduces `(p, q)` by the common gcd; `q` must be positive.
    pub fn reduced(mut p: Vec<BigInt>, mut q: BigInt) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::invalid(format!("denominator {q} must be positive")));
        }
        let mut all = p.clone();
        all.push(q.clone());
        let g = gcd_many(&all);
        if !g.is_one() {
            for x in &mut p {
                *x /= &g;
            }
            q /= &g;
        }
        Ok(PrimitivePoint { p, q })
    }

    pub fn p(&self) -> &[BigInt] {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn coords(&self) -> Vec<Rational> {
        self.p
            .iter()
            .map(|pi| Rational::new(pi.clone(), self.q.clone()).expect("q >= 1"))
            .collect()
    }
}

/// `p/q` in one dimension, `(p1,p2,...)/q` otherwise.
impl fmt::Display for PrimitivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.len() == 1 {
            write!(f, "{}/{}", self.p[0], self.q)
        } else {
            let parts: Vec<String> = self.p.iter().map(|x| x.to_string()).collect();
            write!(f, "({})/{}", parts.join(","), self.q)
        }
    }
}

impl Serialize for PrimitivePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Integers as JSON numbers when they fit in 64 bits, strings otherwise.
pub fn serialize_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    use num_traits::ToPrimitive;
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.collect_str(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn gcd_many_examples() {
        assert_eq!(gcd_many(&big(&[6, 10, 15])), BigInt::from(1));
        assert_eq!(gcd_many(&big(&[4, 8, 12])), BigInt::from(4));
        assert_eq!(gcd_many(&big(&[0, 0])), BigInt::from(0));
        assert_eq!(gcd_many(&big(&[-4, 6])), BigInt::from(2));
        assert_eq!(gcd_many(&[]), BigInt::from(0));
    }

    #[test]
    fn cf_examples() {
        assert_eq!(cf_expansion(&r(5, 12)), big(&[0, 2, 2, 2]));
        assert_eq!(cf_expansion(&r(7, 1)), big(&[7]));
        assert_eq!(cf_expansion(&r(355, 113)), big(&[3, 7, 16]));
        assert_eq!(cf_expansion(&r(-1, 3)), big(&[-1, 1, 2]));
        assert_eq!(cf_reconstruct(&big(&[0, 2, 2, 2])).unwrap(), r(5, 12));
    }

    #[test]
    fn primitive_point_checks() {
        assert!(PrimitivePoint::new(big(&[1, 1]), BigInt::from(2)).is_ok());
        assert!(PrimitivePoint::new(big(&[2, 4]), BigInt::from(2)).is_err());
        assert!(PrimitivePoint::new(big(&[1]), BigInt::from(0)).is_err());
        let p = PrimitivePoint::reduced(big(&[2, 4]), BigInt::from(6)).unwrap();
        assert_eq!(p.to_string(), "(1,2)/3");
        let p = PrimitivePoint::reduced(big(&[10]), BigInt::from(24)).unwrap();
        assert_eq!(p.to_string(), "5/12");
    }
}
