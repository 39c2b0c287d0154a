//! Multidimensional Farey fractions `F_Q`: the points `p/q` in `[0,1)^n`
//! with `(p, q)` primitive and `1 <= q <= Q`.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::analytic::zeta;
use crate::error::{Error, Result};
use crate::exactnum::int::{with_fallback, Checked, ExactInt};
use crate::exactnum::{PrimitivePoint, Rational};
use crate::par;
use crate::qmin::{is_primitive, scan_denominator, KernelRegion, Prepared};
use crate::regions::{Norm, QueryRegion};

/// Dimension and level `Q >= 1` (not necessarily an integer).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FareyLevel {
    pub dim: usize,
    pub level: Rational,
}

impl FareyLevel {
    pub fn new(dim: usize, level: Rational) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        if level < Rational::one() {
            return Err(Error::invalid(format!("level {level} must be at least 1")));
        }
        Ok(FareyLevel { dim, level })
    }

    pub fn integer(dim: usize, q: u64) -> Result<Self> {
        FareyLevel::new(dim, Rational::from_integer(q))
    }

    /// `floor(Q)`, the largest admissible denominator.
    pub fn max_denominator(&self) -> u64 {
        ToPrimitive::to_u64(&self.level.floor()).expect("level fits in u64")
    }

    pub fn normalization(&self) -> NormalizationConstants {
        NormalizationConstants::new(self.dim, self.level.to_f64())
    }
}

/// `sigma_Q = Q^(n+1) / ((n+1) zeta(n+1))`, the asymptotic size of `F_Q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizationConstants {
    pub sigma_q: f64,
    pub sigma_1: f64,
}

impl NormalizationConstants {
    pub fn new(dim: usize, level: f64) -> Self {
        let s1 = sigma_1(dim);
        NormalizationConstants { sigma_q: s1 * level.powi(dim as i32 + 1), sigma_1: s1 }
    }
}

/// `1 / ((n+1) zeta(n+1))`.
pub fn sigma_1(dim: usize) -> f64 {
    1.0 / ((dim as f64 + 1.0) * zeta(dim as u32 + 1))
}

/// Level `Q` with `sigma_Q = target`.
pub fn level_for_sigma(dim: usize, target: f64) -> f64 {
    (target / sigma_1(dim)).powf(1.0 / (dim as f64 + 1.0))
}

fn visit_denominator(q: u64, n: usize, visitor: &mut impl FnMut(&[u64], u64)) {
    fn rec(q: u64, depth: usize, g: u64, p: &mut Vec<u64>, visitor: &mut impl FnMut(&[u64], u64)) {
        if depth == p.len() {
            if g == 1 {
                visitor(p, q);
            }
            return;
        }
        for v in 0..q {
            p[depth] = v;
            // Once the running gcd hits 1 every completion is primitive.
            let g2 = if g == 1 { 1 } else { g.gcd(&v) };
            rec(q, depth + 1, g2, p, visitor);
        }
    }
    let mut p = vec![0u64; n];
    rec(q, 0, q, &mut p, visitor);
}

/// Visits every point of `F_Q` once, by ascending `q` and then
/// lexicographic `p`. Returns the number of points visited.
pub fn farey_stream_nd(level: &FareyLevel, mut visitor: impl FnMut(&[u64], u64)) -> u64 {
    let mut count = 0;
    for q in 1..=level.max_denominator() {
        visit_denominator(q, level.dim, &mut |p, q| {
            count += 1;
            visitor(p, q)
        });
    }
    count
}

/// Sharded variant of [`farey_stream_nd`]: denominators are processed in
/// parallel, each shard in order. The visitor must tolerate concurrent calls.
pub fn farey_stream_par(level: &FareyLevel, visitor: impl Fn(&[u64], u64) + Sync) -> u64 {
    let counts = par::map_indexed(level.max_denominator() as usize, |i| {
        let mut c = 0u64;
        visit_denominator(i as u64 + 1, level.dim, &mut |p, q| {
            c += 1;
            visitor(p, q)
        });
        c
    });
    counts.iter().sum()
}

/// Next term of the sorted one-dimensional Farey sequence of level `q_max`
/// after the consecutive pair `prev`, `cur` (as `(p, q)`).
pub fn farey_next_1d(prev: (u64, u64), cur: (u64, u64), q_max: u64) -> Result<(u64, u64)> {
    if cur.0 >= cur.1 {
        return Err(Error::EndOfSequence);
    }
    let k = (q_max + prev.1) / cur.1;
    Ok((k * cur.0 - prev.0, k * cur.1 - prev.1))
}

/// The one-dimensional Farey fractions of level `q_max` in increasing order.
pub fn farey_sorted_1d(q_max: u64) -> Vec<(u64, u64)> {
    let mut out = vec![(0, 1)];
    if q_max < 2 {
        return out;
    }
    let (mut prev, mut cur) = ((0, 1), (1, q_max));
    while cur.0 < cur.1 {
        out.push(cur);
        let next = farey_next_1d(prev, cur, q_max).expect("cur < 1");
        prev = cur;
        cur = next;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FareyCount {
    pub count: u128,
    pub sigma_q: f64,
    pub ratio: f64,
}

/// Exact `#F_Q` through Jordan's totient, `#F_Q = sum_{q <= Q} J_n(q)`,
/// and its ratio to `sigma_Q`.
pub fn farey_count(level: &FareyLevel) -> Result<FareyCount> {
    let m = level.max_denominator() as usize;
    let n = level.dim as u32;
    let overflow = || Error::invalid(format!("#F_Q exceeds u128 for n = {n}, Q = {m}"));
    // Smallest prime factor sieve.
    let mut spf = vec![0u32; m + 1];
    for i in 2..=m {
        if spf[i] == 0 {
            let mut j = i;
            while j <= m {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut total: u128 = 0;
    for q in 1..=m {
        let mut rest = q;
        let mut jordan: u128 = 1;
        while rest > 1 {
            let p = spf[rest] as u128;
            let mut pk: u128 = 1;
            while rest > 1 && spf[rest] as u128 == p {
                rest /= p as usize;
                pk *= p;
            }
            // J_n(p^k) = p^(kn) - p^((k-1)n)
            let hi = pk.checked_pow(n).ok_or_else(overflow)?;
            let lo = (pk / p).checked_pow(n).ok_or_else(overflow)?;
            jordan = jordan.checked_mul(hi - lo).ok_or_else(overflow)?;
        }
        total = total.checked_add(jordan).ok_or_else(overflow)?;
    }
    let sigma_q = level.normalization().sigma_q;
    Ok(FareyCount { count: total, sigma_q, ratio: total as f64 / sigma_q })
}

/// Distance from `x` to `F_Q + Z^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareyDistance {
    /// The norm itself for `sup`/`l1`, its square for `l2`.
    pub exact: Rational,
    pub norm: Norm,
    /// The nearest Farey point, reduced into `[0,1)^n`.
    pub nearest: PrimitivePoint,
}

impl FareyDistance {
    pub fn value(&self) -> f64 {
        match self.norm {
            Norm::L2 => self.exact.to_f64().sqrt(),
            _ => self.exact.to_f64(),
        }
    }

    /// `dist > r`, decided exactly.
    pub fn exceeds(&self, r: &Rational) -> bool {
        match self.norm {
            Norm::L2 => self.exact > r * r,
            _ => &self.exact > r,
        }
    }
}

/// Candidate ordering key: exact value `num/den`, then `q`, then `p mod q`.
struct Candidate<T> {
    num: T,
    den: T,
    q: u64,
    p: Vec<i64>,
}

fn reduce_mod(p: &[i64], q: u64) -> Vec<i64> {
    p.iter().map(|x| x.rem_euclid(q as i64)).collect()
}

impl<T: ExactInt> Candidate<T> {
    fn better_than(&self, o: &Candidate<T>) -> Checked<bool> {
        let ord = self.num.mul(&o.den)?.cmp(&o.num.mul(&self.den)?);
        Ok(match ord {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => (self.q, reduce_mod(&self.p, self.q)) < (o.q, reduce_mod(&o.p, o.q)),
        })
    }
}

fn distance_kernel<T: ExactInt>(
    xn: &[BigInt],
    xd: &BigInt,
    q_max: u64,
    norm: Norm,
) -> Checked<(BigInt, BigInt, u64, Vec<i64>)> {
    let xn_t: Vec<T> = xn.iter().map(T::from_big).collect::<Checked<_>>()?;
    let xd_t = T::from_big(xd)?;
    let xf: Vec<f64> = xn.iter().map(|v| Rational::new(v.clone(), xd.clone()).unwrap().to_f64()).collect();

    let evaluate = |p: &[i64], q: u64| -> Checked<Candidate<T>> {
        let qt = T::from_u64(q)?;
        let den = qt.mul(&xd_t)?;
        let mut acc = T::zero();
        for (pi, xi) in p.iter().zip(&xn_t) {
            let d = T::from_i64(*pi).mul(&xd_t)?.sub(&qt.mul(xi)?)?;
            acc = match norm {
                Norm::Sup => acc.max(d.abs()?),
                Norm::L1 => acc.add(&d.abs()?)?,
                Norm::L2 => acc.add(&d.mul(&d)?)?,
            };
        }
        let den = if norm == Norm::L2 { den.mul(&den)? } else { den };
        Ok(Candidate { num: acc, den, q, p: p.to_vec() })
    };
    let as_f64 = |c: &Candidate<T>| {
        let v = c.num.to_f64() / c.den.to_f64();
        if norm == Norm::L2 {
            v.sqrt()
        } else {
            v
        }
    };

    // (1/Q) Z^n is contained in F_Q, which gives the starting bound.
    let grid: Vec<i64> = xf.iter().map(|x| (x * q_max as f64).round() as i64).collect();
    let mut best = evaluate(&grid, q_max)?;
    for q in 1..=q_max {
        let radius = as_f64(&best) * (1.0 + 1e-9) + 1e-300;
        let ranges: Vec<(i64, i64)> = xf
            .iter()
            .map(|x| {
                let qf = q as f64;
                (((x - radius) * qf).floor() as i64 - 1, ((x + radius) * qf).ceil() as i64 + 1)
            })
            .collect();
        let mut p: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        'odometer: loop {
            let primitive = p.iter().fold(q, |g, &v| g.gcd(&v.unsigned_abs())) == 1;
            if primitive {
                let c = evaluate(&p, q)?;
                if c.better_than(&best)? {
                    best = c;
                }
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
                p[i] = ranges[i].0;
            }
        }
    }
    Ok((best.num.to_big(), best.den.to_big(), best.q, best.p))
}

fn finish_distance(num: BigInt, den: BigInt, q: u64, p: &[i64], norm: Norm) -> FareyDistance {
    let p = p.iter().map(|v| BigInt::from(v.rem_euclid(q as i64))).collect();
    FareyDistance {
        exact: Rational::new(num, den).expect("positive denominator"),
        norm,
        nearest: PrimitivePoint::reduced(p, BigInt::from(q)).expect("q >= 1"),
    }
}

/// `min { |x - r - m| : r in F_Q, m in Z^n }` under the given norm, computed
/// exactly by a bounded scan over every denominator.
pub fn farey_distance(x: &[Rational], level: &FareyLevel, norm: Norm) -> Result<FareyDistance> {
    if x.len() != level.dim {
        return Err(Error::DimensionMismatch { expected: level.dim, got: x.len() });
    }
    let xd = x.iter().fold(<BigInt as One>::one(), |acc, v| acc.lcm(v.denom()));
    let xn: Vec<BigInt> = x.iter().map(|v| v.numer() * (&xd / v.denom())).collect();
    let q_max = level.max_denominator();
    let (num, den, q, p) = with_fallback(
        || distance_kernel::<i128>(&xn, &xd, q_max, norm),
        || distance_kernel::<BigInt>(&xn, &xd, q_max, norm),
    );
    Ok(finish_distance(num, den, q, &p, norm))
}

/// Sorted one-dimensional `F_Q` for repeated nearest-point queries.
#[derive(Debug, Clone)]
pub struct FareyTable1d {
    points: Vec<(u64, u64)>,
}

impl FareyTable1d {
    pub fn new(q_max: u64) -> Self {
        FareyTable1d { points: farey_sorted_1d(q_max) }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same result as [`farey_distance`] with `n = 1`, by binary search.
    pub fn distance(&self, x: &Rational) -> FareyDistance {
        let frac = x.fract();
        let (xn, xd) = (frac.numer().clone(), frac.denom().clone());
        let below = |&(p, q): &(u64, u64)| BigInt::from(p) * &xd < &xn * BigInt::from(q);
        let idx = self.points.partition_point(below);
        let m = self.points.len();
        // Upper neighbour, with 0/1 + 1 closing the circle.
        let (up, up_shift) = if idx == m { (self.points[0], 1) } else { (self.points[idx], 0) };
        let mut best: Option<(Rational, u64, u64)> = None;
        let lower = if idx == 0 { None } else { Some(self.points[idx - 1]) };
        for (p, q, shift) in [Some((up.0, up.1, up_shift)), lower.map(|(p, q)| (p, q, 0))]
            .into_iter()
            .flatten()
        {
            let point = Rational::new(BigInt::from(p + shift * q), BigInt::from(q)).unwrap();
            let d = (&point - &frac).abs();
            let better = match &best {
                None => true,
                Some((bd, bq, bp)) => (&d, q, p) < (bd, *bq, *bp),
            };
            if better {
                best = Some((d, q, p));
            }
        }
        let (d, q, p) = best.expect("table is never empty");
        FareyDistance {
            exact: d,
            norm: Norm::Sup,
            nearest: PrimitivePoint::new(vec![BigInt::from(p)], BigInt::from(q)).unwrap(),
        }
    }
}

fn count_kernel<T: ExactInt>(prepared: &Prepared, q_max: u64) -> Checked<u64> {
    let region = KernelRegion::<T>::new(prepared)?;
    let mut total = 0u64;
    for q in 1..=q_max {
        let qt = T::from_u64(q)?;
        let mut wraps = false;
        for i in 0..region.dim() {
            let (a, b) = region.axis_range(i, &qt)?;
            if a <= b && b.sub(&a)? >= qt {
                wraps = true;
            }
        }
        if wraps {
            // Several translates of one Farey point: count residues once.
            let mut seen: HashSet<Vec<T>> = HashSet::new();
            scan_denominator(&region, &qt, |p| {
                if is_primitive(p, &qt) {
                    let r: Vec<T> = p
                        .iter()
                        .map(|v| v.sub(&v.div_floor(&qt).mul(&qt)?))
                        .collect::<Checked<_>>()?;
                    seen.insert(r);
                }
                Ok(false)
            })?;
            total += seen.len() as u64;
        } else {
            scan_denominator(&region, &qt, |p| {
                if is_primitive(p, &qt) {
                    total += 1;
                }
                Ok(false)
            })?;
        }
    }
    Ok(total)
}

/// `#(F_Q ∩ (x + delta A + Z^n))`, exactly.
pub fn count_in_query(level: &FareyLevel, r: &QueryRegion) -> Result<u64> {
    if r.dim() != level.dim {
        return Err(Error::DimensionMismatch { expected: level.dim, got: r.dim() });
    }
    let prepared = Prepared::new(r);
    let q_max = level.max_denominator();
    Ok(with_fallback(
        || count_kernel::<i128>(&prepared, q_max),
        || count_kernel::<BigInt>(&prepared, q_max),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::RegionSpec;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn collect(n: usize, q: u64) -> Vec<(Vec<u64>, u64)> {
        let mut out = Vec::new();
        let level = FareyLevel::integer(n, q).unwrap();
        let c = farey_stream_nd(&level, |p, q| out.push((p.to_vec(), q)));
        assert_eq!(c as usize, out.len());
        out
    }

    #[test]
    fn stream_examples() {
        let pts = collect(1, 3);
        assert_eq!(
            pts,
            vec![(vec![0], 1), (vec![1], 2), (vec![1], 3), (vec![2], 3)]
        );
        assert_eq!(collect(1, 5).len(), 10);
        let pts = collect(2, 2);
        assert_eq!(
            pts,
            vec![(vec![0, 0], 1), (vec![0, 1], 2), (vec![1, 0], 2), (vec![1, 1], 2)]
        );
    }

    #[test]
    fn parallel_stream_counts_match() {
        let level = FareyLevel::integer(2, 30).unwrap();
        let seq = farey_stream_nd(&level, |_, _| {});
        let par = farey_stream_par(&level, |_, _| {});
        assert_eq!(seq, par);
        assert_eq!(seq as u128, farey_count(&level).unwrap().count);
    }

    #[test]
    fn next_term_examples() {
        assert_eq!(farey_next_1d((1, 5), (1, 4), 5).unwrap(), (1, 3));
        assert_eq!(farey_next_1d((0, 1), (1, 5), 5).unwrap(), (1, 4));
        assert_eq!(farey_next_1d((0, 1), (1, 2), 2).unwrap(), (1, 1));
        assert_eq!(farey_next_1d((1, 2), (1, 1), 2), Err(Error::EndOfSequence));
    }

    #[test]
    fn count_examples() {
        let c = farey_count(&FareyLevel::integer(1, 3).unwrap()).unwrap();
        assert_eq!(c.count, 4);
        let c = farey_count(&FareyLevel::integer(2, 2).unwrap()).unwrap();
        assert_eq!(c.count, 4);
        let c = farey_count(&FareyLevel::integer(1, 1000).unwrap()).unwrap();
        assert!((0.98..=1.02).contains(&c.ratio), "{}", c.ratio);
        // Non-integer level uses floor(Q).
        let c = farey_count(&FareyLevel::new(1, r(7, 2)).unwrap()).unwrap();
        assert_eq!(c.count, 4);
    }

    #[test]
    fn distance_examples() {
        let l1 = FareyLevel::integer(1, 1).unwrap();
        let d = farey_distance(&[r(3, 10)], &l1, Norm::Sup).unwrap();
        assert_eq!(d.exact, r(3, 10));
        let d = farey_distance(&[r(7, 10)], &l1, Norm::Sup).unwrap();
        assert_eq!(d.exact, r(3, 10));
        assert_eq!(d.nearest.to_string(), "0/1");
        let l3 = FareyLevel::integer(1, 3).unwrap();
        let d = farey_distance(&[r(2, 5)], &l3, Norm::L2).unwrap();
        assert_eq!(d.exact, r(1, 225));
        assert_eq!(d.nearest.to_string(), "1/3");
        assert!((d.value() - 1.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn table_matches_scan() {
        let level = FareyLevel::integer(1, 13).unwrap();
        let table = FareyTable1d::new(13);
        for j in 0..200 {
            let x = r(j * 7 + 3, 1403);
            let a = farey_distance(std::slice::from_ref(&x), &level, Norm::Sup).unwrap();
            let b = table.distance(&x);
            assert_eq!(a.exact, b.exact, "x = {x}");
            assert_eq!(a.nearest, b.nearest, "x = {x}");
        }
    }

    #[test]
    fn sorted_sequence_matches_stream() {
        for q in 1..=40 {
            let mut pts: Vec<(u64, u64)> = collect(1, q).into_iter().map(|(p, q)| (p[0], q)).collect();
            pts.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
            assert_eq!(farey_sorted_1d(q), pts, "Q = {q}");
        }
    }

    #[test]
    fn count_in_query_handles_wrapping() {
        let level = FareyLevel::integer(1, 3).unwrap();
        // The region covers the whole circle twice; each point counts once.
        let big = RegionSpec::parse("interval:0,2").unwrap();
        let q = QueryRegion::new(&big, vec![r(0, 1)], r(1, 1)).unwrap();
        assert_eq!(count_in_query(&level, &q).unwrap(), 4);
        let small = RegionSpec::parse("interval:0,1").unwrap();
        let q = QueryRegion::new(&small, vec![r(1, 4)], r(1, 4)).unwrap();
        // [1/4, 1/2) holds 1/3.
        assert_eq!(count_in_query(&level, &q).unwrap(), 1);
    }

    #[test]
    fn sigma_constants() {
        let c = NormalizationConstants::new(1, 10.0);
        assert!((c.sigma_1 - 3.0 / std::f64::consts::PI.powi(2)).abs() < 1e-14);
        assert!((c.sigma_q - c.sigma_1 * 100.0).abs() < 1e-12);
        let q = level_for_sigma(2, 50.0);
        assert!((NormalizationConstants::new(2, q).sigma_q - 50.0).abs() < 1e-9);
    }
}
