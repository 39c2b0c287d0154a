//! Smallest denominator `q_min(x, delta, A)` of a rational point in
//! `x + delta * A`.
//!
//! Three routes:
//! - [`qmin_1d_fast`]: simplest-fraction descent through the continued
//!   fraction of the endpoints (one dimension).
//! - [`qmin_nd_search`]: ascending-denominator search in any dimension.
//! - [`qmin_bruteforce_oracle`]: exhaustive enumeration for tests.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::int::{with_fallback, Checked, ExactInt, Frac};
use crate::exactnum::{gcd_many, PrimitivePoint, Rational};
use crate::regions::{AxisBounds, Norm, Placed, QueryRegion};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QminAnswer {
    #[serde(serialize_with = "crate::exactnum::serialize_bigint")]
    pub q: BigInt,
    pub witness: PrimitivePoint,
}

impl QminAnswer {
    fn from_parts(p: Vec<BigInt>, q: BigInt) -> QminAnswer {
        let witness = PrimitivePoint::new(p, q.clone()).expect("search yields primitive points");
        QminAnswer { q, witness }
    }

    /// The denominator as `u64`, for statistics.
    pub fn q_u64(&self) -> u64 {
        ToPrimitive::to_u64(&self.q).expect("denominator fits in u64")
    }
}

/// Minimal denominator through the fastest applicable route.
pub fn qmin(r: &QueryRegion) -> Result<QminAnswer> {
    if r.dim() == 1 {
        qmin_1d_fast(r)
    } else {
        qmin_nd_search(r)
    }
}

/// Minimal-denominator fraction in a one-dimensional query region.
///
/// Among several integers the smallest is returned; for `q >= 2` the minimal
/// fraction is unique.
pub fn qmin_1d_fast(r: &QueryRegion) -> Result<QminAnswer> {
    if r.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: r.dim() });
    }
    // In one dimension every ball is an interval, so the bounding box is exact.
    let axis = r.bounding_box().remove(0);
    if axis.lo >= axis.hi {
        return Err(Error::EmptyInterior { axis: 0 });
    }
    let (p, q) = with_fallback(
        || simplest_in_interval::<i128>(&axis).map(|(p, q)| (p.to_big(), q.to_big())),
        || simplest_in_interval::<BigInt>(&axis),
    );
    Ok(QminAnswer::from_parts(vec![p], q))
}

/// Stern–Brocot descent: peel off the integer part, then recurse on the
/// reciprocal interval `(1/hi, 1/lo)` with the endpoint flags swapped.
fn simplest_in_interval<T: ExactInt>(axis: &AxisBounds) -> Checked<(T, T)> {
    let mut lo = Frac::<T>::from_rational(&axis.lo)?;
    let mut hi = Some(Frac::<T>::from_rational(&axis.hi)?);
    let mut lo_closed = !axis.lo_open;
    let mut hi_closed = !axis.hi_open;
    let mut terms: Vec<T> = Vec::new();
    loop {
        let fl = lo.floor();
        let candidate = if lo_closed && lo.is_integer() { fl.clone() } else { fl.add(&T::one())? };
        let fits = match &hi {
            None => true,
            Some(h) => match h.cmp_int(&candidate)? {
                Ordering::Greater => true,
                Ordering::Equal => hi_closed,
                Ordering::Less => false,
            },
        };
        if fits {
            terms.push(candidate);
            break;
        }
        // Here fl <= lo < hi <= fl + 1.
        let h = hi.take().expect("finite while no integer fits");
        let lo_frac = lo.sub_int(&fl)?;
        let hi_frac = h.sub_int(&fl)?;
        terms.push(fl);
        lo = hi_frac.recip_positive();
        hi = if lo_frac.num.is_zero() { None } else { Some(lo_frac.recip_positive()) };
        std::mem::swap(&mut lo_closed, &mut hi_closed);
    }
    convergent(&terms)
}

fn convergent<T: ExactInt>(terms: &[T]) -> Checked<(T, T)> {
    let (mut p0, mut p1) = (T::zero(), T::one());
    let (mut q0, mut q1) = (T::one(), T::zero());
    for a in terms {
        let p2 = a.mul(&p1)?.add(&p0)?;
        let q2 = a.mul(&q1)?.add(&q0)?;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    Ok((p1, q1))
}

/// Search cap `4 * ceil(1 / (delta * w)) + 4`, where `w` is the side of the
/// largest cube inside `A`. A cube of side `1/q` always holds a point of
/// `(1/q) Z^n`, so a hit below the cap is guaranteed.
pub fn search_cap(r: &QueryRegion) -> u64 {
    let w = r.base().inscribed_cube_width() * r.scale().to_f64();
    let inv = (1.0 / w).ceil();
    if !inv.is_finite() || inv > (u64::MAX / 8) as f64 {
        return u64::MAX / 2;
    }
    4 * (inv as u64) + 4
}

/// A query region in kernel-ready form.
#[derive(Debug, Clone)]
pub(crate) enum Prepared {
    Boxed(Vec<AxisBounds>),
    Ball {
        center_num: Vec<BigInt>,
        center_den: BigInt,
        radius: Rational,
        norm: Norm,
        open: bool,
        hull: Vec<AxisBounds>,
    },
}

impl Prepared {
    pub(crate) fn new(r: &QueryRegion) -> Prepared {
        match r.placed() {
            Placed::Boxed(axes) => Prepared::Boxed(axes),
            Placed::Ball { center, radius, norm, open } => {
                let den = center
                    .iter()
                    .fold(<BigInt as One>::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
                let center_num = center
                    .iter()
                    .map(|c| c.numer() * (&den / c.denom()))
                    .collect();
                let hull = r.bounding_box();
                Prepared::Ball { center_num, center_den: den, radius, norm, open, hull }
            }
        }
    }

    pub(crate) fn hull(&self) -> &[AxisBounds] {
        match self {
            Prepared::Boxed(axes) => axes,
            Prepared::Ball { hull, .. } => hull,
        }
    }
}

/// Kernel-side copy of [`Prepared`] over a concrete integer backend.
pub(crate) struct KernelRegion<T> {
    axes: Vec<(Frac<T>, bool, Frac<T>, bool)>,
    ball: Option<KernelBall<T>>,
}

struct KernelBall<T> {
    center_num: Vec<T>,
    center_den: T,
    radius: Frac<T>,
    norm: Norm,
    open: bool,
}

impl<T: ExactInt> KernelRegion<T> {
    pub(crate) fn new(p: &Prepared) -> Checked<Self> {
        let axes = p
            .hull()
            .iter()
            .map(|a| {
                Ok((
                    Frac::from_rational(&a.lo)?,
                    a.lo_open,
                    Frac::from_rational(&a.hi)?,
                    a.hi_open,
                ))
            })
            .collect::<Checked<Vec<_>>>()?;
        let ball = match p {
            Prepared::Boxed(_) => None,
            Prepared::Ball { center_num, center_den, radius, norm, open, .. } => Some(KernelBall {
                center_num: center_num.iter().map(T::from_big).collect::<Checked<_>>()?,
                center_den: T::from_big(center_den)?,
                radius: Frac::from_rational(radius)?,
                norm: *norm,
                open: *open,
            }),
        };
        Ok(KernelRegion { axes, ball })
    }

    pub(crate) fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Integer range of `p_i` with `p_i / q` inside axis `i` of the hull.
    pub(crate) fn axis_range(&self, i: usize, q: &T) -> Checked<(T, T)> {
        let (lo, lo_open, hi, hi_open) = &self.axes[i];
        let start = if *lo_open {
            lo.scaled_floor(q)?.add(&T::one())?
        } else {
            lo.scaled_ceil(q)?
        };
        let end = if *hi_open {
            hi.scaled_ceil(q)?.sub(&T::one())?
        } else {
            hi.scaled_floor(q)?
        };
        Ok((start, end))
    }

    /// Whether `p / q` lies in the region, given that it lies in the hull.
    pub(crate) fn member_in_hull(&self, p: &[T], q: &T) -> Checked<bool> {
        let Some(b) = &self.ball else {
            return Ok(true);
        };
        let qd = q.mul(&b.center_den)?;
        let mut diffs = Vec::with_capacity(p.len());
        for (pi, ci) in p.iter().zip(&b.center_num) {
            diffs.push(pi.mul(&b.center_den)?.sub(&q.mul(ci)?)?);
        }
        // |d| / (q D) against rn / rd.
        let (lhs, rhs) = match b.norm {
            Norm::Sup | Norm::L1 => {
                let mut acc = T::zero();
                for d in &diffs {
                    let a = d.abs()?;
                    acc = if b.norm == Norm::Sup { acc.max(a) } else { acc.add(&a)? };
                }
                (acc.mul(&b.radius.den)?, b.radius.num.mul(&qd)?)
            }
            Norm::L2 => {
                let mut acc = T::zero();
                for d in &diffs {
                    acc = acc.add(&d.mul(d)?)?;
                }
                let rd2 = b.radius.den.mul(&b.radius.den)?;
                let rn2 = b.radius.num.mul(&b.radius.num)?;
                (acc.mul(&rd2)?, rn2.mul(&qd.mul(&qd)?)?)
            }
        };
        Ok(if b.open { lhs < rhs } else { lhs <= rhs })
    }
}

/// Calls `visit(p)` for the lattice points `p` with `p / q` in the region, in
/// lexicographic order, until it returns `true`. Returns whether it stopped.
pub(crate) fn scan_denominator<T: ExactInt>(
    region: &KernelRegion<T>,
    q: &T,
    mut visit: impl FnMut(&[T]) -> Checked<bool>,
) -> Checked<bool> {
    let n = region.dim();
    let mut ranges = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = region.axis_range(i, q)?;
        if a > b {
            return Ok(false);
        }
        ranges.push((a, b));
    }
    let mut p: Vec<T> = ranges.iter().map(|(a, _)| a.clone()).collect();
    loop {
        if region.member_in_hull(&p, q)? && visit(&p)? {
            return Ok(true);
        }
        // Odometer, last axis fastest.
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
            if p[i] < ranges[i].1 {
                p[i] = p[i].add(&T::one())?;
                break;
            }
            p[i] = ranges[i].0.clone();
        }
    }
}

pub(crate) fn is_primitive<T: ExactInt>(p: &[T], q: &T) -> bool {
    let mut g = q.clone();
    for x in p {
        if g.is_one() {
            return true;
        }
        g = g.gcd(x);
    }
    g.is_one()
}

fn nd_kernel<T: ExactInt>(prepared: &Prepared, cap: u64) -> Checked<Option<(Vec<BigInt>, u64)>> {
    let region = KernelRegion::<T>::new(prepared)?;
    for q in 1..=cap {
        let qt = T::from_u64(q)?;
        let mut hit = None;
        scan_denominator(&region, &qt, |p| {
            if is_primitive(p, &qt) {
                hit = Some(p.iter().map(T::to_big).collect::<Vec<_>>());
                Ok(true)
            } else {
                Ok(false)
            }
        })?;
        if let Some(p) = hit {
            return Ok(Some((p, q)));
        }
    }
    Ok(None)
}

/// Ascending-denominator search: for `q = 1, 2, ...` scan the lattice points
/// of `q` times the bounding box, lexicographically, and return the first
/// primitive member.
pub fn qmin_nd_search(r: &QueryRegion) -> Result<QminAnswer> {
    let cap = search_cap(r);
    let prepared = Prepared::new(r);
    let found = with_fallback(
        || nd_kernel::<i128>(&prepared, cap),
        || nd_kernel::<BigInt>(&prepared, cap),
    );
    match found {
        Some((p, q)) => Ok(QminAnswer::from_parts(p, BigInt::from(q))),
        None => Err(Error::CapExceeded(format!(
            "no rational point with denominator <= {cap} in region {} shifted by [{}] scaled by {}",
            r.base(),
            r.shift().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "),
            r.scale()
        ))),
    }
}

/// Exhaustive reference search over every `q <= q_max`, testing each lattice
/// point of the integer hull of `q` times the bounding box through
/// [`QueryRegion::contains`] and [`gcd_many`].
pub fn qmin_bruteforce_oracle(r: &QueryRegion, q_max: u64) -> Option<QminAnswer> {
    let bbox = r.bounding_box();
    for q in 1..=q_max {
        let qr = Rational::from_integer(q);
        let ranges: Vec<(BigInt, BigInt)> = bbox
            .iter()
            .map(|a| ((&qr * &a.lo).floor(), (&qr * &a.hi).ceil()))
            .collect();
        let mut p: Vec<BigInt> = ranges.iter().map(|(a, _)| a.clone()).collect();
        'odometer: loop {
            let pt: Vec<Rational> = p
                .iter()
                .map(|x| Rational::new(x.clone(), q).expect("q >= 1"))
                .collect();
            let mut all = p.clone();
            all.push(BigInt::from(q));
            if r.contains(&pt).expect("dimension checked") && One::is_one(&gcd_many(&all)) {
                return Some(QminAnswer::from_parts(p, BigInt::from(q)));
            }
            let mut i = p.len();
            loop {
                if i == 0 {
                    break 'odometer;
                }
                i -= 1;
                if p[i] < ranges[i].1 {
                    p[i] += 1;
                    break;
                }
                p[i] = ranges[i].0.clone();
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::RegionSpec;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn open_unit() -> RegionSpec {
        RegionSpec::parse("interval:-1/2,1/2:oo").unwrap()
    }

    /// Interval `(lo, hi)` written as a shifted open unit interval.
    fn interval(lo: Rational, hi: Rational) -> QueryRegion {
        let mid = (&lo + &hi) / Rational::from_integer(2);
        QueryRegion::new(&open_unit(), vec![mid], &hi - &lo).unwrap()
    }

    #[test]
    fn fast_1d_examples() {
        let a = qmin_1d_fast(&interval(r(9, 20), r(11, 20))).unwrap();
        assert_eq!((a.q_u64(), a.witness.to_string()), (2, "1/2".to_string()));
        let a = qmin_1d_fast(&interval(r(41, 100), r(21, 50))).unwrap();
        assert_eq!((a.q_u64(), a.witness.to_string()), (12, "5/12".to_string()));
        let a = qmin_1d_fast(&interval(r(-1, 10), r(1, 10))).unwrap();
        assert_eq!((a.q_u64(), a.witness.to_string()), (1, "0/1".to_string()));
    }

    #[test]
    fn fast_1d_honours_endpoint_flags() {
        let closed = RegionSpec::parse("interval:0,1/4:cc").unwrap();
        let open = RegionSpec::parse("interval:0,1/4:oo").unwrap();
        // [1/2, 3/4] contains 1/2; (1/2, 3/4) does not, and the answer is 2/3.
        let a = qmin_1d_fast(&QueryRegion::new(&closed, vec![r(1, 2)], r(1, 1)).unwrap()).unwrap();
        assert_eq!(a.witness.to_string(), "1/2");
        let a = qmin_1d_fast(&QueryRegion::new(&open, vec![r(1, 2)], r(1, 1)).unwrap()).unwrap();
        assert_eq!(a.witness.to_string(), "2/3");
        // (1, 2]: the integer 2 sits on the closed right end.
        let oc = RegionSpec::parse("interval:1,2:oc").unwrap();
        let a = qmin_1d_fast(&QueryRegion::new(&oc, vec![r(0, 1)], r(1, 1)).unwrap()).unwrap();
        assert_eq!(a.witness.to_string(), "2/1");
        // (1, 2): 3/2.
        let a = qmin_1d_fast(&QueryRegion::new(&open, vec![r(1, 1)], r(4, 1)).unwrap()).unwrap();
        assert_eq!(a.witness.to_string(), "3/2");
    }

    #[test]
    fn fast_1d_smallest_integer_and_negatives() {
        let a = qmin_1d_fast(&interval(r(-7, 2), r(3, 1))).unwrap();
        assert_eq!(a.witness.to_string(), "-3/1");
        let a = qmin_1d_fast(&interval(r(-21, 50), r(-41, 100))).unwrap();
        assert_eq!(a.witness.to_string(), "-5/12");
    }

    #[test]
    fn fast_1d_overflow_falls_back_to_bigint() {
        let tiny = Rational::new(BigInt::from(1), BigInt::from(1) << 140).unwrap();
        let x = Rational::new(BigInt::from(1u32), BigInt::from(3u32)).unwrap()
            + &tiny * &Rational::new(1, 4).unwrap();
        let q = QueryRegion::new(&open_unit(), vec![x], tiny).unwrap();
        let a = qmin_1d_fast(&q).unwrap();
        assert_eq!(a.witness.to_string(), "1/3");
    }

    #[test]
    fn nd_examples() {
        let b = RegionSpec::parse("box:-1/2,1/2;-1/2,1/2:oo").unwrap();
        let q = QueryRegion::new(&b, vec![r(1, 2), r(1, 2)], r(1, 5)).unwrap();
        let a = qmin_nd_search(&q).unwrap();
        assert_eq!(a.witness.to_string(), "(1,1)/2");
        let q = QueryRegion::new(&b, vec![r(33, 100), r(67, 100)], r(1, 50)).unwrap();
        let a = qmin_nd_search(&q).unwrap();
        assert_eq!(a.witness.to_string(), "(1,2)/3");
        let q = QueryRegion::new(&b, vec![r(3, 1), r(-2, 1)], r(1, 50)).unwrap();
        assert_eq!(qmin_nd_search(&q).unwrap().q_u64(), 1);
    }

    #[test]
    fn nd_ball_search() {
        let ball = RegionSpec::parse("ball:1/10").unwrap();
        let q = QueryRegion::new(&ball, vec![r(1, 3), r(1, 3)], r(1, 1)).unwrap();
        assert_eq!(qmin_nd_search(&q).unwrap().witness.to_string(), "(1,1)/3");
        // (1/2, 1/2) sits on the boundary of this open l1 ball.
        let l1 = RegionSpec::parse("ball:1/10:l1:o").unwrap();
        let q = QueryRegion::new(&l1, vec![r(45, 100), r(45, 100)], r(1, 1)).unwrap();
        let a = qmin_nd_search(&q).unwrap();
        let oracle = qmin_bruteforce_oracle(&q, 100).unwrap();
        assert_eq!(a, oracle);
        assert!(a.q_u64() > 2);
    }

    #[test]
    fn oracle_examples() {
        assert!(qmin_bruteforce_oracle(&interval(r(9, 20), r(11, 20)), 1).is_none());
        let a = qmin_bruteforce_oracle(&interval(r(9, 20), r(11, 20)), 5).unwrap();
        assert_eq!(a.witness.to_string(), "1/2");
        assert!(qmin_bruteforce_oracle(&interval(r(41, 100), r(21, 50)), 11).is_none());
        let a = qmin_bruteforce_oracle(&interval(r(41, 100), r(21, 50)), 12).unwrap();
        assert_eq!(a.witness.to_string(), "5/12");
    }

    #[test]
    fn search_cap_is_generous() {
        let b = RegionSpec::unit_box(2);
        let q = QueryRegion::new(&b, vec![r(0, 1), r(0, 1)], r(1, 1000)).unwrap();
        assert_eq!(search_cap(&q), 4004);
    }
}
