//! Minimal resonance orders
//! `M(ω, ρ) = min { |p|_1 : p ∈ Z^n \ {0}, |p·ω - q| <= ρ |p|_2 for some q ∈ Z }`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::par;
use crate::stats::rng::{prng_index, DYADIC_BITS};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResonanceAnswer {
    pub order: u64,
    pub p: Vec<i64>,
    #[serde(serialize_with = "crate::exactnum::serialize_bigint")]
    pub q: BigInt,
}

/// Nearest integer to `num/den` (`den > 0`), ties to even.
fn round_half_even(num: &BigInt, den: &BigInt) -> BigInt {
    let (f, r) = num.div_mod_floor(den);
    let twice: BigInt = r * 2;
    match twice.cmp(den) {
        std::cmp::Ordering::Less => f,
        std::cmp::Ordering::Greater => f + 1,
        std::cmp::Ordering::Equal => {
            if f.is_even() {
                f
            } else {
                f + 1
            }
        }
    }
}

fn round_half_even_i128(num: i128, den: i128) -> i128 {
    let f = num.div_euclid(den);
    let r = num - f * den;
    match (2 * r).cmp(&den) {
        std::cmp::Ordering::Less => f,
        std::cmp::Ordering::Greater => f + 1,
        std::cmp::Ordering::Equal => f + (f & 1),
    }
}

/// A frequency vector and threshold in common-denominator form.
#[derive(Debug, Clone)]
pub struct ResonanceQuery {
    omega: Vec<Rational>,
    rho: Rational,
    num: Vec<BigInt>,
    den: BigInt,
    small: Option<(Vec<i128>, i128)>,
    rho_f: f64,
}

impl ResonanceQuery {
    pub fn new(omega: Vec<Rational>, rho: Rational) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::invalid("empty frequency vector"));
        }
        if !rho.is_positive() {
            return Err(Error::invalid(format!("threshold {rho} must be positive")));
        }
        let den = omega.iter().fold(BigInt::from(1), |acc, w| acc.lcm(w.denom()));
        let num: Vec<BigInt> = omega.iter().map(|w| w.numer() * (&den / w.denom())).collect();
        // Keep 2^40 of headroom for the products p_i * num_i.
        let limit = BigInt::from(1u128 << 86);
        let small = if den < limit && num.iter().all(|v| v.abs() < limit) {
            Some((num.iter().map(|v| v.to_i128().unwrap()).collect(), den.to_i128().unwrap()))
        } else {
            None
        };
        let rho_f = rho.to_f64();
        Ok(ResonanceQuery { omega, rho, num, den, small, rho_f })
    }

    pub fn omega(&self) -> &[Rational] {
        &self.omega
    }

    pub fn rho(&self) -> &Rational {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    fn exact_test(&self, p: &[i64]) -> (BigInt, bool) {
        let s: BigInt = p.iter().zip(&self.num).map(|(&pi, w)| w * pi).sum();
        let q = round_half_even(&s, &self.den);
        let d = &s - &q * &self.den;
        let norm2: i128 = p.iter().map(|&v| (v as i128) * (v as i128)).sum();
        // (d/den)^2 <= rho^2 |p|^2  <=>  d^2 rd^2 <= rn^2 den^2 |p|^2
        let (rn, rd) = (self.rho.numer(), self.rho.denom());
        let lhs = &d * &d * rd * rd;
        let rhs = rn * rn * &self.den * &self.den * BigInt::from(norm2);
        (q, lhs <= rhs)
    }

    /// Nearest `q` to `p·ω` and whether `|p·ω - q| <= ρ |p|_2`.
    pub fn test(&self, p: &[i64]) -> (BigInt, bool) {
        if let Some((num, den)) = &self.small {
            let mut s: i128 = 0;
            for (&pi, &w) in p.iter().zip(num) {
                s += pi as i128 * w;
            }
            let q = round_half_even_i128(s, *den);
            let d = (s - q * den) as f64 / *den as f64;
            let norm = p.iter().map(|&v| (v as f64) * (v as f64)).sum::<f64>().sqrt();
            let bound = self.rho_f * norm;
            let lhs = d.abs();
            if lhs < bound * (1.0 - 1e-9) {
                return (BigInt::from(q), true);
            }
            if lhs > bound * (1.0 + 1e-9) {
                return (BigInt::from(q), false);
            }
        }
        self.exact_test(p)
    }
}

/// `q` nearest to `p·ω` (ties to even) and whether `Δ_{p,q} <= ρ`.
pub fn delta_pq(omega: &[Rational], p: &[i64], rho: &Rational) -> Result<(BigInt, bool)> {
    if p.iter().all(|&v| v == 0) {
        return Err(Error::invalid("p must be nonzero"));
    }
    if p.len() != omega.len() {
        return Err(Error::DimensionMismatch { expected: omega.len(), got: p.len() });
    }
    Ok(ResonanceQuery::new(omega.to_vec(), rho.clone())?.test(p))
}

/// Largest order searched: `10 ⌈ρ^{-1/(n+1)}⌉ + 10`.
pub fn order_cap(rho: &Rational, n: usize) -> u64 {
    let v = rho.to_f64().powf(-1.0 / (n as f64 + 1.0)).ceil();
    if !v.is_finite() || v > 1e15 {
        return u64::MAX / 16;
    }
    10 * v as u64 + 10
}

/// Calls `visit` on the vectors with `|p|_1 = k` whose first nonzero entry is
/// positive, in lexicographic order, until it returns `true`.
pub fn visit_canonical_shell(n: usize, k: u64, mut visit: impl FnMut(&[i64]) -> bool) -> bool {
    fn rec(p: &mut Vec<i64>, i: usize, rem: i64, seen: bool, visit: &mut impl FnMut(&[i64]) -> bool) -> bool {
        let n = p.len();
        if i == n - 1 {
            let choices: &[i64] = if rem == 0 {
                &[0]
            } else if seen {
                &[-1, 1]
            } else {
                &[1]
            };
            for &sgn in choices {
                p[i] = sgn * rem;
                if (seen || rem != 0) && visit(p) {
                    return true;
                }
            }
            return false;
        }
        let start = if seen { -rem } else { 0 };
        for v in start..=rem {
            p[i] = v;
            if rec(p, i + 1, rem - v.abs(), seen || v != 0, visit) {
                return true;
            }
        }
        false
    }
    let mut p = vec![0i64; n];
    rec(&mut p, 0, k as i64, false, &mut visit)
}

/// Shell-by-shell search for `M(ω, ρ)`; canonical `±p` representatives only.
pub fn min_resonance_order(query: &ResonanceQuery) -> Result<ResonanceAnswer> {
    let n = query.dim();
    let cap = order_cap(query.rho(), n);
    for k in 1..=cap {
        let mut hit = None;
        visit_canonical_shell(n, k, |p| {
            let (q, ok) = query.test(p);
            if ok {
                hit = Some((p.to_vec(), q));
            }
            ok
        });
        if let Some((p, q)) = hit {
            return Ok(ResonanceAnswer { order: k, p, q });
        }
    }
    Err(Error::CapExceeded(format!(
        "no resonance with |p|_1 <= {cap} for ω = ({}), ρ = {}",
        query.omega().iter().map(|w| w.to_string()).collect::<Vec<_>>().join(","),
        query.rho()
    )))
}

/// Oracle: every nonzero `p` in `[-k_max, k_max]^n` and both neighbouring
/// integers `q`, in plain rational arithmetic.
pub fn min_resonance_order_naive(omega: &[Rational], rho: &Rational, k_max: i64) -> Option<u64> {
    let n = omega.len();
    let mut best: Option<u64> = None;
    let mut p = vec![-k_max; n];
    loop {
        let l1: i64 = p.iter().map(|v| v.abs()).sum();
        if l1 > 0 && l1 <= k_max && best.is_none_or(|b| (l1 as u64) < b) {
            let dot = p
                .iter()
                .zip(omega)
                .fold(Rational::zero(), |acc, (&pi, w)| acc + w * &Rational::from_integer(pi));
            let norm2 = Rational::from_integer(p.iter().map(|v| v * v).sum::<i64>());
            let bound = rho * rho * norm2;
            for q in [dot.floor(), dot.ceil()] {
                let d = &dot - &Rational::from_integer(q);
                if &d * &d <= bound {
                    best = Some(l1 as u64);
                }
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if p[i] < k_max {
                p[i] += 1;
                break;
            }
            p[i] = -k_max;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceRow {
    pub rho: Rational,
    /// Quantiles of `ρ^{1/(n+1)} M`; censored samples count as `+∞`.
    pub q10: f64,
    pub q50: f64,
    pub q90: f64,
    pub median_order: f64,
    /// Log-log slope of the median order over the rows so far.
    pub slope_running: Option<f64>,
    pub censored: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceScaling {
    pub n: usize,
    pub samples: u64,
    pub rows: Vec<ResonanceRow>,
    /// Orders per row; `None` marks a censored sample (cap reached).
    #[serde(skip)]
    pub orders: Vec<Vec<Option<u64>>>,
}

impl ResonanceScaling {
    pub fn slope(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.slope_running)
    }

    /// Rescaled values `ρ^{1/(n+1)} M` of row `i`, censored ones as `+∞`.
    pub fn rescaled(&self, i: usize) -> Vec<f64> {
        let f = self.rows[i].rho.to_f64().powf(1.0 / (self.n as f64 + 1.0));
        self.orders[i]
            .iter()
            .map(|o| o.map_or(f64::INFINITY, |v| v as f64 * f))
            .collect()
    }
}

/// The dyadic frequency vector of sample `i`.
pub fn sample_omega(n: usize, seed: u64, i: u64) -> Vec<Rational> {
    let g = BigInt::from(1u64) << DYADIC_BITS;
    (0..n as u64)
        .map(|k| {
            let j = prng_index(seed, i * n as u64 + k, 1 << DYADIC_BITS);
            Rational::new(BigInt::from(j), g.clone()).expect("g > 0")
        })
        .collect()
}

fn median(sorted: &[f64]) -> f64 {
    let m = sorted.len();
    if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    }
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let k = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[k - 1]
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 {
        return None;
    }
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// For each `ρ`, the law of `ρ^{1/(n+1)} M(ω, ρ)` over the same `samples`
/// uniform frequency vectors, and the log-log slope of the median of `M`.
pub fn resonance_scaling_experiment(
    n: usize,
    rhos: &[Rational],
    samples: u64,
    seed: u64,
) -> Result<ResonanceScaling> {
    resonance_scaling_with(n, rhos, samples, |i| sample_omega(n, seed, i))
}

/// [`resonance_scaling_experiment`] with caller-chosen frequency vectors.
pub fn resonance_scaling_with(
    n: usize,
    rhos: &[Rational],
    samples: u64,
    omega: impl Fn(u64) -> Vec<Rational> + Sync + Send,
) -> Result<ResonanceScaling> {
    if n == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let mut rows = Vec::new();
    let mut all = Vec::new();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for rho in rhos {
        let orders: Vec<Option<u64>> = par::try_map_indexed(samples as usize, |i| {
            let q = ResonanceQuery::new(omega(i as u64), rho.clone())?;
            match min_resonance_order(&q) {
                Ok(a) => Ok(Some(a.order)),
                Err(Error::CapExceeded(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })?;
        let censored = orders.iter().filter(|o| o.is_none()).count() as u64;
        let mut raw: Vec<f64> = orders.iter().map(|o| o.map_or(f64::INFINITY, |v| v as f64)).collect();
        raw.sort_by(f64::total_cmp);
        let f = rho.to_f64().powf(1.0 / (n as f64 + 1.0));
        let med = median(&raw);
        xs.push(rho.to_f64().ln());
        ys.push(med.ln());
        rows.push(ResonanceRow {
            rho: rho.clone(),
            q10: quantile(&raw, 0.1) * f,
            q50: med * f,
            q90: quantile(&raw, 0.9) * f,
            median_order: med,
            slope_running: ls_slope(&xs, &ys),
            censored,
        });
        all.push(orders);
    }
    Ok(ResonanceScaling { n, samples, rows, orders: all })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn delta_examples() {
        let half = vec![r(1, 2), r(1, 2)];
        assert_eq!(delta_pq(&half, &[1, 1], &r(1, 1000)).unwrap(), (BigInt::from(1), true));
        assert!(!delta_pq(&half, &[1, 0], &r(1, 10)).unwrap().1);
        let zero = vec![r(0, 1), r(0, 1)];
        assert_eq!(delta_pq(&zero, &[1, 0], &r(1, 10)).unwrap(), (BigInt::zero(), true));
        assert!(delta_pq(&zero, &[0, 0], &r(1, 10)).is_err());
        // 1/2 rounds to the even neighbour 0.
        assert_eq!(delta_pq(&half, &[1, 0], &r(1, 2)).unwrap(), (BigInt::zero(), true));
    }

    #[test]
    fn order_examples() {
        let q = ResonanceQuery::new(vec![r(0, 1), r(0, 1)], r(1, 1000)).unwrap();
        let a = min_resonance_order(&q).unwrap();
        assert_eq!((a.order, a.p.clone(), a.q.clone()), (1, vec![0, 1], BigInt::zero()));
        let omega = vec![r(1, 2), r(1, 2)];
        let q = ResonanceQuery::new(omega.clone(), r(1, 10)).unwrap();
        let a = min_resonance_order(&q).unwrap();
        assert_eq!(a.order, 2);
        assert_eq!((a.p.clone(), a.q.clone()), (vec![0, 2], BigInt::from(1)));
        assert_eq!(delta_pq(&omega, &[1, 1], &r(1, 10)).unwrap(), (BigInt::from(1), true));
        let q = ResonanceQuery::new(vec![r(1, 2), r(1, 2)], r(3, 5)).unwrap();
        assert_eq!(min_resonance_order(&q).unwrap().order, 1);
    }

    #[test]
    fn shells_are_canonical_and_complete() {
        for n in 1..=3 {
            for k in 1..=5u64 {
                let mut seen = Vec::new();
                visit_canonical_shell(n, k, |p| {
                    seen.push(p.to_vec());
                    false
                });
                let mut sorted = seen.clone();
                sorted.sort();
                assert_eq!(seen, sorted, "lexicographic order");
                for p in &seen {
                    assert_eq!(p.iter().map(|v| v.unsigned_abs()).sum::<u64>(), k);
                    assert!(*p.iter().find(|&&v| v != 0).unwrap() > 0);
                }
                // Together with their negatives they form the whole shell.
                let full = count_shell(n, k);
                assert_eq!(2 * seen.len() as u64, full, "n = {n}, k = {k}");
            }
        }
    }

    fn count_shell(n: usize, k: u64) -> u64 {
        let k = k as i64;
        let mut c = 0;
        let mut p = vec![-k; n];
        loop {
            if p.iter().map(|v| v.abs()).sum::<i64>() == k {
                c += 1;
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return c;
                }
                i -= 1;
                if p[i] < k {
                    p[i] += 1;
                    break;
                }
                p[i] = -k;
            }
        }
    }

    #[test]
    fn cap_formula() {
        assert_eq!(order_cap(&r(1, 1000), 2), 110);
        assert_eq!(order_cap(&r(1, 100_000), 2), 10 * 47 + 10);
    }

    #[test]
    fn constant_zero_samples() {
        let s = resonance_scaling_with(2, &[r(1, 100)], 20, |_| vec![r(0, 1), r(0, 1)]).unwrap();
        assert!(s.orders[0].iter().all(|o| *o == Some(1)));
        assert_eq!(s.rows[0].censored, 0);
        assert!(s.slope().is_none());
    }
}
