//! Empirical distribution functions and Kolmogorov–Smirnov distances.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NoSamples);
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::invalid("sample contains NaN"));
        }
        values.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf { sorted: values })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    /// Fraction of samples `> x`.
    pub fn survival(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }

    /// Lower empirical quantile `inf { x : cdf(x) >= p }`.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.len();
        let k = ((p * n as f64).ceil() as usize).clamp(1, n);
        self.sorted[k - 1]
    }

    /// Distinct sample values with the cdf just below and at each.
    fn steps(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n = self.len() as f64;
        let mut i = 0;
        std::iter::from_fn(move || {
            if i >= self.sorted.len() {
                return None;
            }
            let x = self.sorted[i];
            let before = i as f64 / n;
            while i < self.sorted.len() && self.sorted[i] == x {
                i += 1;
            }
            Some((x, before, i as f64 / n))
        })
    }
}

/// `sup_x |F_emp(x) - F(x)|` for a continuous model `F`, checked on both
/// sides of every jump.
pub fn ks_distance(emp: &EmpiricalCdf, model: impl Fn(f64) -> f64) -> f64 {
    emp.steps()
        .map(|(x, before, after)| {
            let f = model(x);
            (f - before).abs().max((after - f).abs())
        })
        .fold(0.0, f64::max)
}

/// `sup_x |F_a(x) - F_b(x)|`.
pub fn ks_two_sample(a: &EmpiricalCdf, b: &EmpiricalCdf) -> f64 {
    let mut d: f64 = 0.0;
    for x in a.values().iter().chain(b.values()) {
        d = d.max((a.cdf(*x) - b.cdf(*x)).abs());
    }
    d
}
