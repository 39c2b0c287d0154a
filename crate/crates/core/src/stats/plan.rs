//! Experiment plans: fully deterministic descriptions of one run.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::rng::{prng_index, DYADIC_BITS};
use crate::analytic::{parse_complex, scale_l_to_s};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::farey::FareyLevel;
use crate::regions::{AxisBounds, Norm, RegionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    ContinuousMc,
    GridDiscrete,
}

impl std::str::FromStr for SamplingMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "continuous-mc" | "continuous" | "mc" => Ok(SamplingMode::ContinuousMc),
            "grid-discrete" | "grid" => Ok(SamplingMode::GridDiscrete),
            _ => Err(Error::parse(format!("unknown sampling mode {s:?}"))),
        }
    }
}

/// The sample points of an experiment: `x = x0 + j/N` for the integer
/// vectors `j` with `j/N ∈ D`, or `samples` seeded uniform draws from `D`.
#[derive(Debug, Clone, PartialEq)]
pub enum PointSource {
    Grid { grid_n: u64, x0: Vec<Rational>, ranges: Vec<(i64, i64)> },
    Continuous { domain: Vec<AxisBounds>, samples: u64, seed: u64 },
}

impl PointSource {
    pub fn grid(grid_n: u64, x0: Vec<Rational>, domain: &[AxisBounds]) -> Result<Self> {
        if grid_n == 0 {
            return Err(Error::invalid("grid size N must be positive"));
        }
        if x0.len() != domain.len() {
            return Err(Error::DimensionMismatch { expected: domain.len(), got: x0.len() });
        }
        let nr = Rational::from_integer(grid_n);
        let ranges = domain
            .iter()
            .map(|a| {
                let lo = &a.lo * &nr;
                let hi = &a.hi * &nr;
                let start = if a.lo_open { lo.floor() + 1 } else { lo.ceil() };
                let end = if a.hi_open { hi.ceil() - 1 } else { hi.floor() };
                let conv = |v: BigInt| v.to_i64().ok_or_else(|| Error::invalid("grid too large"));
                Ok((conv(start)?, conv(end)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PointSource::Grid { grid_n, x0, ranges })
    }

    pub fn continuous(domain: Vec<AxisBounds>, samples: u64, seed: u64) -> Self {
        PointSource::Continuous { domain, samples, seed }
    }

    pub fn dim(&self) -> usize {
        match self {
            PointSource::Grid { x0, .. } => x0.len(),
            PointSource::Continuous { domain, .. } => domain.len(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            PointSource::Grid { ranges, .. } => ranges
                .iter()
                .map(|&(a, b)| (b - a + 1).max(0) as usize)
                .product(),
            PointSource::Continuous { samples, .. } => *samples as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point number `i`; grid points run with the last axis fastest.
    pub fn point(&self, i: usize) -> Vec<Rational> {
        match self {
            PointSource::Grid { grid_n, x0, ranges } => {
                let mut rest = i;
                let mut j = vec![0i64; ranges.len()];
                for (k, &(a, b)) in ranges.iter().enumerate().rev() {
                    let len = (b - a + 1) as usize;
                    j[k] = a + (rest % len) as i64;
                    rest /= len;
                }
                x0.iter()
                    .zip(j)
                    .map(|(x, jk)| x + &Rational::new(jk, *grid_n).expect("N > 0"))
                    .collect()
            }
            PointSource::Continuous { domain, seed, .. } => {
                let n = domain.len() as u64;
                let g = BigInt::from(1u64 << DYADIC_BITS);
                domain
                    .iter()
                    .enumerate()
                    .map(|(k, a)| {
                        let j = prng_index(*seed, i as u64 * n + k as u64, 1 << DYADIC_BITS);
                        let u = Rational::new(BigInt::from(j), g.clone()).expect("g > 0");
                        &a.lo + &(&a.width() * &u)
                    })
                    .collect()
            }
        }
    }

    /// Lebesgue measure of the sampling box (grid: number of points / N^n).
    pub fn volume(&self) -> f64 {
        match self {
            PointSource::Grid { grid_n, .. } => {
                self.len() as f64 / (*grid_n as f64).powi(self.dim() as i32)
            }
            PointSource::Continuous { domain, .. } => {
                domain.iter().map(|a| a.width().to_f64()).product()
            }
        }
    }
}

/// Plan for the smallest-denominator experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub n: usize,
    pub mode: SamplingMode,
    pub delta: Rational,
    pub region: RegionSpec,
    pub points: PointSource,
    pub c: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoidPlan {
    pub level: FareyLevel,
    pub s: f64,
    /// `σ_Q^{-1/n} s` as an exact binary fraction.
    pub scale: Rational,
    pub region: RegionSpec,
    pub points: PointSource,
}

impl VoidPlan {
    pub fn new(level: FareyLevel, s: f64, region: RegionSpec, points: PointSource) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::invalid(format!("void size s = {s} must be positive")));
        }
        let n = level.dim;
        let region = region.resolve_dim(n)?;
        let sigma = level.normalization().sigma_q;
        let scale = Rational::from_f64_exact(sigma.powf(-1.0 / n as f64) * s)
            .ok_or_else(|| Error::invalid("scale is not finite"))?;
        Ok(VoidPlan { level, s, scale, region, points })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PigeonholePlan {
    pub level: FareyLevel,
    pub grid_n: u64,
    pub x0: Vec<Rational>,
    /// Cell side `w`; the cells `x0 + j/N + [0, w)^n` tile the torus when `w = 1/N`.
    pub side: Rational,
}

impl PigeonholePlan {
    pub fn new(level: FareyLevel, grid_n: u64, x0: Vec<Rational>, side: Rational) -> Result<Self> {
        if grid_n == 0 {
            return Err(Error::invalid("grid size N must be positive"));
        }
        if x0.len() != level.dim {
            return Err(Error::DimensionMismatch { expected: level.dim, got: x0.len() });
        }
        if !side.is_positive() || side > Rational::one() {
            return Err(Error::invalid(format!("cell side {side} must lie in (0, 1]")));
        }
        Ok(PigeonholePlan { level, grid_n, x0, side })
    }

    pub fn tiling(level: FareyLevel, grid_n: u64, x0: Vec<Rational>) -> Result<Self> {
        let side = Rational::new(1, grid_n).map_err(|_| Error::invalid("N must be positive"))?;
        Self::new(level, grid_n, x0, side)
    }

    /// Cells of side `σ_Q^{-1/n} s`.
    pub fn from_s(level: FareyLevel, grid_n: u64, x0: Vec<Rational>, s: f64) -> Result<Self> {
        let sigma = level.normalization().sigma_q;
        let side = Rational::from_f64_exact(sigma.powf(-1.0 / level.dim as f64) * s)
            .ok_or_else(|| Error::invalid("cell side is not finite"))?;
        Self::new(level, grid_n, x0, side)
    }

    pub fn tiles(&self) -> bool {
        self.side == Rational::new(1, self.grid_n).expect("N > 0")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistancePlan {
    pub level: FareyLevel,
    pub beta: Complex64,
    pub norm: Norm,
    pub points: PointSource,
}

/// Loosely typed plan, as read from JSON or assembled from flags. Every
/// field is optional; the `*_plan` builders apply defaults and report all
/// problems together.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSpec {
    pub n: Option<usize>,
    pub mode: Option<SamplingMode>,
    pub delta: Option<Rational>,
    #[serde(rename = "N")]
    pub grid_n: Option<u64>,
    pub x0: Option<Vec<Rational>>,
    pub region: Option<RegionSpec>,
    #[serde(rename = "D", alias = "domain")]
    pub domain: Option<RegionSpec>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub c: Option<Rational>,
    #[serde(rename = "Q")]
    pub level: Option<Rational>,
    pub s: Option<f64>,
    /// Void size given as a threshold `L` for the rescaled smallest denominator.
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub side: Option<Rational>,
    pub alpha: Option<NumOrText>,
    pub beta: Option<NumOrText>,
    pub norm: Option<Norm>,
    #[serde(rename = "L_grid")]
    pub l_grid: Option<Vec<f64>>,
}

/// A number given either as a JSON number or as text such as `"0.5+1i"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumOrText {
    Num(f64),
    Text(String),
}

impl NumOrText {
    pub fn to_complex(&self) -> Result<Complex64> {
        match self {
            NumOrText::Num(v) => Ok(Complex64::new(*v, 0.0)),
            NumOrText::Text(t) => parse_complex(t),
        }
    }
}

pub const DEFAULT_SAMPLES: u64 = 10_000;

/// Accumulates errors so that a single report lists every problem.
#[derive(Default)]
struct Check {
    errors: Vec<String>,
}

impl Check {
    fn take<T>(&mut self, field: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.errors.push(format!("{field}: {e}"));
                None
            }
        }
    }

    fn fail(&mut self, msg: String) {
        self.errors.push(msg);
    }

    fn finish<T>(self, v: Option<T>) -> Result<T> {
        match v {
            Some(v) if self.errors.is_empty() => Ok(v),
            _ => Err(Error::Plan(self.errors)),
        }
    }
}

impl PlanSpec {
    pub fn from_json(text: &str) -> Result<PlanSpec> {
        serde_json::from_str(text).map_err(|e| Error::parse(format!("plan JSON: {e}")))
    }

    fn dim(&self) -> usize {
        self.n
            .or_else(|| self.x0.as_ref().map(Vec::len))
            .or_else(|| self.region.as_ref().and_then(RegionSpec::dim))
            .unwrap_or(1)
    }

    fn domain_axes(&self, ck: &mut Check, n: usize) -> Option<Vec<AxisBounds>> {
        let d = self.domain.clone().unwrap_or_else(|| RegionSpec::unit_box(n));
        let d = ck.take("D", d.resolve_dim(n))?;
        let Some(axes) = d.axes() else {
            ck.fail("D: the sampling domain must be an interval or box".into());
            return None;
        };
        let (zero, one) = (Rational::zero(), Rational::one());
        if axes.iter().any(|a| a.lo < zero || a.hi > one) {
            ck.fail(format!("D: {d} is not contained in [0,1]^{n}"));
            return None;
        }
        Some(axes.to_vec())
    }

    fn x0(&self, ck: &mut Check, n: usize) -> Option<Vec<Rational>> {
        let x0 = self.x0.clone().unwrap_or_else(|| vec![Rational::zero(); n]);
        if x0.len() != n {
            ck.fail(format!("x0: expected {n} coordinates, got {}", x0.len()));
            return None;
        }
        Some(x0)
    }

    fn level(&self, ck: &mut Check, n: usize) -> Option<FareyLevel> {
        match &self.level {
            None => {
                ck.fail("Q: required".into());
                None
            }
            Some(q) => ck.take("Q", FareyLevel::new(n, q.clone())),
        }
    }

    fn points(&self, ck: &mut Check, n: usize, mode: SamplingMode) -> Option<PointSource> {
        let axes = self.domain_axes(ck, n);
        match mode {
            SamplingMode::ContinuousMc => {
                let samples = self.samples.unwrap_or(DEFAULT_SAMPLES);
                if samples == 0 {
                    ck.fail("samples: must be positive".into());
                    return None;
                }
                Some(PointSource::continuous(axes?, samples, self.seed.unwrap_or(0)))
            }
            SamplingMode::GridDiscrete => {
                let grid_n = self.grid_n;
                if grid_n.is_none() {
                    ck.fail("N: required in grid-discrete mode".into());
                }
                let x0 = self.x0(ck, n);
                let (axes, grid_n, x0) = (axes?, grid_n?, x0?);
                ck.take("N", PointSource::grid(grid_n, x0, &axes))
            }
        }
    }

    /// Plan for the smallest-denominator experiments, with warnings.
    pub fn experiment_plan(&self) -> Result<(ExperimentPlan, Vec<String>)> {
        let mut ck = Check::default();
        let n = self.dim();
        if n == 0 {
            ck.fail("n: must be positive".into());
        }
        let mode = self.mode.unwrap_or(if self.grid_n.is_some() {
            SamplingMode::GridDiscrete
        } else {
            SamplingMode::ContinuousMc
        });
        let delta = match (&self.delta, mode, self.grid_n) {
            (Some(d), _, _) => Some(d.clone()),
            (None, SamplingMode::GridDiscrete, Some(nn)) if nn > 0 => Rational::new(1, nn).ok(),
            _ => {
                ck.fail("delta: required".into());
                None
            }
        };
        if let Some(d) = &delta {
            if !d.is_positive() {
                ck.fail(format!("delta: {d} must be positive"));
            }
        }
        let region = self.region.clone().unwrap_or_else(|| RegionSpec::unit_box(n.max(1)));
        let region = ck.take("region", region.resolve_dim(n.max(1)));
        let c = self.c.clone().unwrap_or_else(Rational::one);
        if !c.is_positive() {
            ck.fail(format!("c: {c} must be positive"));
        }
        let points = if n > 0 { self.points(&mut ck, n, mode) } else { None };

        let mut warnings = Vec::new();
        if let (Some(d), Some(nn), SamplingMode::GridDiscrete) = (&delta, self.grid_n, mode) {
            if d.is_positive() && &c / d > Rational::from_integer(nn) {
                warnings.push(format!(
                    "grid size N = {nn} is below c/delta = {}; the discrete limit law needs c/delta <= N",
                    (&c / d)
                ));
            }
        }
        let plan = match (delta, region, points) {
            (Some(delta), Some(region), Some(points)) => {
                Some(ExperimentPlan { n, mode, delta, region, points, c })
            }
            _ => None,
        };
        ck.finish(plan).map(|p| (p, warnings))
    }

    pub fn void_plan(&self) -> Result<VoidPlan> {
        let mut ck = Check::default();
        let n = self.dim();
        let level = self.level(&mut ck, n);
        let s = match (self.s, self.l) {
            (Some(_), Some(_)) => {
                ck.fail("s, L: give at most one".into());
                None
            }
            (Some(s), None) => Some(s),
            (None, Some(l)) => Some(scale_l_to_s(l, n)),
            (None, None) => {
                ck.fail("s: required (or L)".into());
                None
            }
        };
        if self.mode == Some(SamplingMode::GridDiscrete) {
            ck.fail("mode: the void experiment samples continuously".into());
        }
        let region = self.region.clone().unwrap_or_else(|| RegionSpec::unit_box(n));
        let points = self.points(&mut ck, n, SamplingMode::ContinuousMc);
        let plan = match (level, s, points) {
            (Some(level), Some(s), Some(points)) => {
                ck.take("plan", VoidPlan::new(level, s, region, points))
            }
            _ => None,
        };
        ck.finish(plan)
    }

    pub fn pigeonhole_plan(&self) -> Result<PigeonholePlan> {
        let mut ck = Check::default();
        let n = self.dim();
        let level = self.level(&mut ck, n);
        let x0 = self.x0(&mut ck, n);
        let grid_n = self.grid_n.or_else(|| {
            ck.fail("N: required".into());
            None
        });
        if self.side.is_some() && self.s.is_some() {
            ck.fail("side, s: give at most one".into());
        }
        let plan = match (level, x0, grid_n) {
            (Some(level), Some(x0), Some(nn)) => {
                let r = match (&self.side, self.s) {
                    (Some(w), _) => PigeonholePlan::new(level, nn, x0, w.clone()),
                    (None, Some(s)) => PigeonholePlan::from_s(level, nn, x0, s),
                    (None, None) => PigeonholePlan::tiling(level, nn, x0),
                };
                ck.take("plan", r)
            }
            _ => None,
        };
        ck.finish(plan)
    }

    pub fn distance_plan(&self) -> Result<DistancePlan> {
        let mut ck = Check::default();
        let n = self.dim();
        let level = self.level(&mut ck, n);
        let beta = match &self.beta {
            None => Some(Complex64::new(1.0, 0.0)),
            Some(b) => ck.take("beta", b.to_complex()),
        };
        let mode = self.mode.unwrap_or(if self.grid_n.is_some() {
            SamplingMode::GridDiscrete
        } else {
            SamplingMode::ContinuousMc
        });
        let points = self.points(&mut ck, n, mode);
        let plan = match (level, beta, points) {
            (Some(level), Some(beta), Some(points)) => {
                Some(DistancePlan { level, beta, norm: self.norm.unwrap_or(Norm::L2), points })
            }
            _ => None,
        };
        ck.finish(plan)
    }

    pub fn alpha(&self) -> Result<Complex64> {
        self.alpha.as_ref().map_or(Ok(Complex64::new(1.0, 0.0)), NumOrText::to_complex)
    }
}
