//! Integer backends for the hot search kernels.
//!
//! Every kernel is written once against [`ExactInt`] and run first on `i128`
//! with checked arithmetic. Any overflow aborts that attempt with
//! [`Overflow`] and the caller reruns the same kernel on `BigInt`, so results
//! never depend on which backend produced them.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Marker for an arithmetic overflow in a fixed-width backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

pub type Checked<T> = std::result::Result<T, Overflow>;

pub trait ExactInt: Clone + Ord + Hash + Debug + Send + Sync + Sized + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_u64(v: u64) -> Checked<Self>;
    fn from_big(v: &BigInt) -> Checked<Self>;
    fn to_big(&self) -> BigInt;
    fn to_f64(&self) -> f64;
    fn to_u64(&self) -> Option<u64>;

    fn add(&self, o: &Self) -> Checked<Self>;
    fn sub(&self, o: &Self) -> Checked<Self>;
    fn mul(&self, o: &Self) -> Checked<Self>;
    fn neg(&self) -> Checked<Self>;
    /// Floor division; `o` must be positive.
    fn div_floor(&self, o: &Self) -> Self;
    fn gcd(&self, o: &Self) -> Self;

    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;

    fn abs(&self) -> Checked<Self> {
        if self.is_negative() {
            self.neg()
        } else {
            Ok(self.clone())
        }
    }

    /// Ceiling division; `o` must be positive.
    fn div_ceil(&self, o: &Self) -> Checked<Self> {
        self.neg()?.div_floor(o).neg()
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl ExactInt for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn from_u64(v: u64) -> Checked<Self> {
        Ok(v as i128)
    }
    fn from_big(v: &BigInt) -> Checked<Self> {
        // Keep headroom so that `neg` and `abs` can never wrap.
        v.to_i128().filter(|x| *x != i128::MIN).ok_or(Overflow)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
    fn to_u64(&self) -> Option<u64> {
        u64::try_from(*self).ok()
    }
    fn add(&self, o: &Self) -> Checked<Self> {
        self.checked_add(*o).ok_or(Overflow)
    }
    fn sub(&self, o: &Self) -> Checked<Self> {
        self.checked_sub(*o).ok_or(Overflow)
    }
    fn mul(&self, o: &Self) -> Checked<Self> {
        self.checked_mul(*o).ok_or(Overflow)
    }
    fn neg(&self) -> Checked<Self> {
        self.checked_neg().ok_or(Overflow)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
}

impl ExactInt for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_u64(v: u64) -> Checked<Self> {
        Ok(BigInt::from(v))
    }
    fn from_big(v: &BigInt) -> Checked<Self> {
        Ok(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_u64(&self) -> Option<u64> {
        ToPrimitive::to_u64(self)
    }
    fn add(&self, o: &Self) -> Checked<Self> {
        Ok(self + o)
    }
    fn sub(&self, o: &Self) -> Checked<Self> {
        Ok(self - o)
    }
    fn mul(&self, o: &Self) -> Checked<Self> {
        Ok(self * o)
    }
    fn neg(&self) -> Checked<Self> {
        Ok(-self)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// Fraction `num/den` with `den > 0`, not necessarily reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frac<T> {
    pub num: T,
    pub den: T,
}

impl<T: ExactInt> Frac<T> {
    pub fn from_rational(r: &crate::exactnum::Rational) -> Checked<Self> {
        Ok(Frac {
            num: T::from_big(r.numer())?,
            den: T::from_big(r.denom())?,
        })
    }

    pub fn integer(v: T) -> Self {
        Frac { num: v, den: T::one() }
    }

    pub fn floor(&self) -> T {
        self.num.div_floor(&self.den)
    }

    pub fn is_integer(&self) -> bool {
        self.num.div_floor(&self.den).mul(&self.den).ok() == Some(self.num.clone())
    }

    pub fn cmp_frac(&self, o: &Frac<T>) -> Checked<Ordering> {
        Ok(self.num.mul(&o.den)?.cmp(&o.num.mul(&self.den)?))
    }

    pub fn cmp_int(&self, v: &T) -> Checked<Ordering> {
        Ok(self.num.cmp(&v.mul(&self.den)?))
    }

    pub fn sub_int(&self, v: &T) -> Checked<Frac<T>> {
        Ok(Frac {
            num: self.num.sub(&v.mul(&self.den)?)?,
            den: self.den.clone(),
        })
    }

    /// Reciprocal of a positive fraction.
    pub fn recip_positive(&self) -> Frac<T> {
        Frac {
            num: self.den.clone(),
            den: self.num.clone(),
        }
    }

    /// `floor(k * self)`.
    pub fn scaled_floor(&self, k: &T) -> Checked<T> {
        Ok(k.mul(&self.num)?.div_floor(&self.den))
    }

    /// `ceil(k * self)`.
    pub fn scaled_ceil(&self, k: &T) -> Checked<T> {
        k.mul(&self.num)?.div_ceil(&self.den)
    }
}

/// Runs `kernel` on `i128`, falling back to `BigInt` on overflow.
pub fn with_fallback<R>(
    fast: impl FnOnce() -> Checked<R>,
    exact: impl FnOnce() -> Checked<R>,
) -> R {
    match fast() {
        Ok(r) => r,
        Err(Overflow) => exact().expect("BigInt arithmetic cannot overflow"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i128_overflow_is_reported() {
        let big = i128::MAX / 2 + 1;
        assert_eq!(ExactInt::mul(&big, &2), Err(Overflow));
        assert_eq!(ExactInt::add(&i128::MAX, &1), Err(Overflow));
        let huge = BigInt::from(1) << 130;
        assert_eq!(<i128 as ExactInt>::from_big(&huge), Err(Overflow));
    }

    #[test]
    fn floor_and_ceil_division_match() {
        for a in -20i64..=20 {
            for b in 1i64..=7 {
                let fa = ExactInt::div_floor(&(a as i128), &(b as i128));
                let ca = ExactInt::div_ceil(&(a as i128), &(b as i128)).unwrap();
                let bf = ExactInt::div_floor(&BigInt::from(a), &BigInt::from(b));
                assert_eq!(BigInt::from(fa), bf);
                assert_eq!(fa as f64, (a as f64 / b as f64).floor());
                assert_eq!(ca as f64, (a as f64 / b as f64).ceil());
            }
        }
    }

    #[test]
    fn fallback_runs_exact_on_overflow() {
        let r = with_fallback(|| Err(Overflow), || Ok(5));
        assert_eq!(r, 5);
        let r = with_fallback(|| Ok(1), || Ok(5));
        assert_eq!(r, 1);
    }
}
