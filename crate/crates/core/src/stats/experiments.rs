//! Drivers for the smallest-denominator, void, pigeonhole and distance
//! experiments. Points are processed in parallel and reduced in index order,
//! so every result is independent of the thread count.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::Serialize;

use super::ecdf::EmpiricalCdf;
use super::plan::{DistancePlan, ExperimentPlan, PigeonholePlan, PointSource, VoidPlan};
use crate::analytic::eta_survival;
use crate::analytic::hall::eta_unchecked;
use crate::error::{Error, Result};
use crate::exactnum::int::{with_fallback, Checked, ExactInt, Frac};
use crate::exactnum::Rational;
use crate::farey::{count_in_query, farey_count, farey_distance, farey_stream_par, FareyLevel, FareyTable1d};
use crate::par;
use crate::qmin::qmin;
use crate::regions::{QueryRegion, RegionSpec};

/// `q_min(x, delta, A)` at every plan point, in point order.
pub fn qmin_values(plan: &ExperimentPlan) -> Result<Vec<u64>> {
    par::try_map_indexed(plan.points.len(), |i| {
        let q = QueryRegion::new(&plan.region, plan.points.point(i), plan.delta.clone())?;
        Ok(qmin(&q)?.q_u64())
    })
}

/// `delta^{n/(n+1)}`.
pub fn rescale_factor(delta: &Rational, n: usize) -> f64 {
    delta.to_f64().powf(n as f64 / (n as f64 + 1.0))
}

/// Limiting survival function of `delta^{1/2} q_min` for a one-dimensional
/// region of length `ℓ`: `E(L sqrt(ℓ))`.
pub fn model_survival_1d(region: &RegionSpec) -> Option<impl Fn(f64) -> f64> {
    let root = region_length_1d(region)?.sqrt();
    Some(move |l: f64| eta_survival(l * root))
}

/// Length of a one-dimensional region; `None` in higher dimensions.
pub fn region_length_1d(region: &RegionSpec) -> Option<f64> {
    match region {
        RegionSpec::Interval(a) => Some(a.width().to_f64()),
        RegionSpec::Box(axes) if axes.len() == 1 => Some(axes[0].width().to_f64()),
        RegionSpec::Ball { radius, center, .. } if center.len() <= 1 => Some(2.0 * radius.to_f64()),
        _ => None,
    }
}

/// Limiting density of `delta^{1/2} q_min` for a one-dimensional region.
pub fn model_density_1d(region: &RegionSpec) -> Option<impl Fn(f64) -> f64> {
    let root = region_length_1d(region)?.sqrt();
    Some(move |l: f64| root * eta_unchecked(l * root))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalRow {
    #[serde(rename = "L")]
    pub l: f64,
    pub empirical_survival: f64,
    pub model_survival: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QminDistribution {
    /// Raw `q_min` values in point order.
    pub q: Vec<u64>,
    /// Empirical law of `delta^{n/(n+1)} q_min`.
    pub scaled: EmpiricalCdf,
    pub rows: Vec<SurvivalRow>,
}

pub fn qmin_distribution_experiment(plan: &ExperimentPlan, l_grid: &[f64]) -> Result<QminDistribution> {
    let q = qmin_values(plan)?;
    let f = rescale_factor(&plan.delta, plan.n);
    let scaled = EmpiricalCdf::new(q.iter().map(|&v| v as f64 * f).collect())?;
    let model = if plan.n == 1 { model_survival_1d(&plan.region) } else { None };
    let rows = l_grid
        .iter()
        .map(|&l| SurvivalRow {
            l,
            empirical_survival: scaled.survival(l),
            model_survival: model.as_ref().map(|m| m(l)),
        })
        .collect();
    Ok(QminDistribution { q, scaled, rows })
}

/// Mean of `(delta^{n/(n+1)} q)^α`, summed in order.
pub fn moment_from_values(q: &[u64], delta: &Rational, n: usize, alpha: Complex64) -> Complex64 {
    let f = rescale_factor(delta, n);
    let total: Complex64 = q.iter().map(|&v| (alpha * (v as f64 * f).ln()).exp()).sum();
    total / q.len() as f64
}

pub fn qmin_moment_experiment(plan: &ExperimentPlan, alpha: Complex64) -> Result<Complex64> {
    let bound = plan.n as f64 + 1.0;
    if !(alpha.re.abs() < bound) {
        return Err(Error::Domain(format!("moment diverges: need |Re α| < {bound}")));
    }
    let q = qmin_values(plan)?;
    if q.is_empty() {
        return Err(Error::NoSamples);
    }
    Ok(moment_from_values(&q, &plan.delta, plan.n, alpha))
}

/// Histogram of an integer statistic over samples or cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountHistogram {
    /// `k -> number of samples (or cells) with count k`.
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
}

impl CountHistogram {
    pub fn from_values(values: &[u64]) -> Self {
        let mut counts = BTreeMap::new();
        for &v in values {
            *counts.entry(v).or_insert(0) += 1;
        }
        CountHistogram { counts, total: values.len() as u64 }
    }

    pub fn frequency(&self, k: u64) -> f64 {
        self.counts.get(&k).copied().unwrap_or(0) as f64 / self.total as f64
    }

    /// Binomial standard error of [`Self::frequency`].
    pub fn stderr(&self, k: u64) -> f64 {
        let f = self.frequency(k);
        (f * (1.0 - f) / self.total as f64).sqrt()
    }

    /// `Σ k · count(k)`.
    pub fn weighted_total(&self) -> u128 {
        self.counts.iter().map(|(&k, &c)| k as u128 * c as u128).sum()
    }

    /// Rows `(k, count, frequency, stderr)` for `k = 0 ..= max k`.
    pub fn rows(&self) -> Vec<(u64, u64, f64, f64)> {
        let max = self.counts.keys().next_back().copied().unwrap_or(0);
        (0..=max)
            .map(|k| (k, self.counts.get(&k).copied().unwrap_or(0), self.frequency(k), self.stderr(k)))
            .collect()
    }
}

/// `#(F_Q ∩ (x + scale·A + Z^n))` at every point.
pub fn void_counts(
    level: &FareyLevel,
    region: &RegionSpec,
    scale: &Rational,
    points: &PointSource,
) -> Result<Vec<u64>> {
    par::try_map_indexed(points.len(), |i| {
        let q = QueryRegion::new(region, points.point(i), scale.clone())?;
        count_in_query(level, &q)
    })
}

/// Frequencies of `k` Farey points in the randomly placed region
/// `x + σ_Q^{-1/n} s A`; the `k = 0` entry estimates the void probability.
pub fn void_statistic_experiment(plan: &VoidPlan) -> Result<CountHistogram> {
    let v = void_counts(&plan.level, &plan.region, &plan.scale, &plan.points)?;
    if v.is_empty() {
        return Err(Error::NoSamples);
    }
    Ok(CountHistogram::from_values(&v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PigeonholeHistogram {
    pub cells: CountHistogram,
    pub farey_total: u128,
    pub tiles: bool,
}

impl PigeonholeHistogram {
    /// `Σ k · count(k) = #F_Q`, which must hold whenever the cells tile.
    pub fn tiling_identity_holds(&self) -> bool {
        self.cells.weighted_total() == self.farey_total
    }
}

/// Indices `j mod N` of the cells `x0 + j/N + [0, w)` containing `p/q`.
fn cells_on_axis<T: ExactInt>(
    p: u64,
    q: u64,
    x0: &Frac<T>,
    grid_n: &T,
    side: &Frac<T>,
    out: &mut Vec<u64>,
) -> Checked<()> {
    out.clear();
    // t = N (p/q - x0) = num / den; cells are the integers in (t - N w, t].
    let qt = T::from_u64(q)?;
    let num = grid_n.mul(&T::from_u64(p)?.mul(&x0.den)?.sub(&x0.num.mul(&qt)?)?)?;
    let den = qt.mul(&x0.den)?;
    let hi = num.div_floor(&den);
    let lo_num = num.mul(&side.den)?.sub(&grid_n.mul(&side.num)?.mul(&den)?)?;
    let lo = lo_num.div_floor(&den.mul(&side.den)?).add(&T::one())?;
    let mut j = lo;
    while j <= hi {
        let r = j.sub(&j.div_floor(grid_n).mul(grid_n)?)?;
        out.push(r.to_u64().expect("0 <= r < N"));
        j = j.add(&T::one())?;
    }
    Ok(())
}

fn visit_cells<T: ExactInt>(
    p: &[u64],
    q: u64,
    x0: &[Rational],
    grid_n: u64,
    side: &Rational,
    mut visit: impl FnMut(usize),
) -> Checked<()> {
    let gn = T::from_u64(grid_n)?;
    let w = Frac::<T>::from_rational(side)?;
    let mut per_axis = Vec::with_capacity(p.len());
    for (pi, xi) in p.iter().zip(x0) {
        let mut js = Vec::new();
        cells_on_axis(*pi, q, &Frac::<T>::from_rational(xi)?, &gn, &w, &mut js)?;
        if js.is_empty() {
            return Ok(());
        }
        per_axis.push(js);
    }
    let mut idx = vec![0usize; per_axis.len()];
    loop {
        let cell = idx
            .iter()
            .zip(&per_axis)
            .fold(0usize, |acc, (&k, js)| acc * grid_n as usize + js[k] as usize);
        visit(cell);
        let mut a = idx.len();
        loop {
            if a == 0 {
                return Ok(());
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < per_axis[a].len() {
                break;
            }
            idx[a] = 0;
        }
    }
}

/// One streaming pass over `F_Q`, counting the points in every cell
/// `x0 + j/N + [0, w)^n` of the torus, then a histogram over the counts.
pub fn pigeonhole_experiment(plan: &PigeonholePlan) -> Result<PigeonholeHistogram> {
    let n = plan.level.dim;
    let cells = (plan.grid_n as u128)
        .checked_pow(n as u32)
        .filter(|&c| c <= 1 << 30)
        .ok_or_else(|| Error::invalid(format!("N^n = {}^{n} cells is too many", plan.grid_n)))?
        as usize;
    let counts: Vec<AtomicU32> = (0..cells).map(|_| AtomicU32::new(0)).collect();
    let bump = |c: usize| {
        counts[c].fetch_add(1, Ordering::Relaxed);
    };
    farey_stream_par(&plan.level, |p, q| {
        with_fallback(
            || visit_cells::<i128>(p, q, &plan.x0, plan.grid_n, &plan.side, bump),
            || visit_cells::<BigInt>(p, q, &plan.x0, plan.grid_n, &plan.side, bump),
        )
    });
    let values: Vec<u64> = counts.into_iter().map(|a| a.into_inner() as u64).collect();
    Ok(PigeonholeHistogram {
        cells: CountHistogram::from_values(&values),
        farey_total: farey_count(&plan.level)?.count,
        tiles: plan.tiles(),
    })
}

/// `dist(x, F_Q)` at every plan point.
pub fn distance_values(plan: &DistancePlan) -> Result<Vec<f64>> {
    let points = &plan.points;
    if plan.level.dim == 1 {
        // All norms agree in one dimension.
        let table = FareyTable1d::new(plan.level.max_denominator());
        return Ok(par::map_indexed(points.len(), |i| table.distance(&points.point(i)[0]).value()));
    }
    par::try_map_indexed(points.len(), |i| {
        Ok(farey_distance(&points.point(i), &plan.level, plan.norm)?.value())
    })
}

/// Whether the normalised distance moment has a limit as `Q → ∞`.
pub fn distance_moment_has_limit(beta: Complex64, n: usize) -> bool {
    beta.re.abs() < n as f64
}

/// `σ_Q^{β/n}` times the mean of `dist(x, F_Q)^β`. The average is finite
/// for every `Re β > -n`; it converges as `Q → ∞` only for `|Re β| < n`.
pub fn distance_moment_experiment(plan: &DistancePlan) -> Result<Complex64> {
    let n = plan.level.dim as f64;
    let beta = plan.beta;
    if !(beta.re > -n) {
        return Err(Error::Domain(format!("moment diverges: need Re β > -{n}")));
    }
    let d = distance_values(plan)?;
    if d.is_empty() {
        return Err(Error::NoSamples);
    }
    let sigma = plan.level.normalization().sigma_q;
    let norm = (beta / n * sigma.ln()).exp();
    let total: Complex64 = d
        .iter()
        .map(|&v| {
            if beta == Complex64::new(0.0, 0.0) {
                Complex64::new(1.0, 0.0)
            } else {
                (beta * v.ln()).exp()
            }
        })
        .sum();
    if beta == Complex64::new(0.0, 0.0) {
        return Ok(total / d.len() as f64);
    }
    Ok(norm * total / d.len() as f64)
}
