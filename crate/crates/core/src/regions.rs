//! Regions `A` and query sets `x + delta * A` with exact membership.
//!
//! Grammar (stable CLI/config syntax):
//!
//! ```text
//! interval:lo,hi[:oo|oc|co|cc]
//! box:lo1,hi1;lo2,hi2;...[:flags]      flags = one pair for every axis, or pairs joined by ';'
//! ball:r[@c1,c2,...][:l2|sup|l1][:o|c]
//! ```
//!
//! Endpoint flags read left to right (`o` open, `c` closed); the default is
//! `co`, i.e. `[lo, hi)`. Balls default to the closed Euclidean ball. A ball
//! written without a center is centered at the origin and takes its dimension
//! from the query point.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactnum::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    /// Compared through squared norms, never square roots.
    #[serde(alias = "euclidean")]
    L2,
    Sup,
    L1,
}

impl Norm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Norm::L2 => "l2",
            Norm::Sup => "sup",
            Norm::L1 => "l1",
        }
    }
}

impl FromStr for Norm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Norm> {
        match s {
            "l2" | "euclidean" => Ok(Norm::L2),
            "sup" | "linf" | "max" => Ok(Norm::Sup),
            "l1" => Ok(Norm::L1),
            _ => Err(Error::parse(format!("unknown norm {s:?}"))),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One axis `lo..hi` with per-endpoint openness.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AxisBounds {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl AxisBounds {
    pub fn new(lo: Rational, hi: Rational, lo_open: bool, hi_open: bool) -> Self {
        AxisBounds { lo, hi, lo_open, hi_open }
    }

    /// `[lo, hi)`.
    pub fn half_open(lo: Rational, hi: Rational) -> Self {
        AxisBounds::new(lo, hi, false, true)
    }

    pub fn contains(&self, v: &Rational) -> bool {
        let above = if self.lo_open { v > &self.lo } else { v >= &self.lo };
        let below = if self.hi_open { v < &self.hi } else { v <= &self.hi };
        above && below
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// `shift + scale * self`, for `scale > 0`.
    pub fn affine(&self, shift: &Rational, scale: &Rational) -> AxisBounds {
        AxisBounds {
            lo: shift + &(scale * &self.lo),
            hi: shift + &(scale * &self.hi),
            lo_open: self.lo_open,
            hi_open: self.hi_open,
        }
    }

    fn flags(&self) -> &'static str {
        match (self.lo_open, self.hi_open) {
            (true, true) => "oo",
            (true, false) => "oc",
            (false, true) => "co",
            (false, false) => "cc",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RegionSpec {
    /// A one-dimensional interval.
    Interval(AxisBounds),
    /// Product of per-axis intervals.
    Box(Vec<AxisBounds>),
    /// `{ y : |y - center| <= radius }` (or `<` when open). An empty center
    /// means the origin in whatever dimension the query uses.
    Ball {
        radius: Rational,
        center: Vec<Rational>,
        norm: Norm,
        open: bool,
    },
}

fn parse_flags(s: &str) -> Result<(bool, bool)> {
    match s {
        "oo" => Ok((true, true)),
        "oc" => Ok((true, false)),
        "co" => Ok((false, true)),
        "cc" => Ok((false, false)),
        _ => Err(Error::parse(format!("bad endpoint flags {s:?} (expected oo|oc|co|cc)"))),
    }
}

fn parse_axis(s: &str, axis: usize) -> Result<AxisBounds> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| Error::parse(format!("axis {axis}: expected lo,hi in {s:?}")))?;
    let lo = Rational::parse(lo)?;
    let hi = Rational::parse(hi)?;
    if lo >= hi {
        return Err(Error::EmptyInterior { axis });
    }
    Ok(AxisBounds::half_open(lo, hi))
}

impl RegionSpec {
    /// Parses the region grammar described in the module docs.
    pub fn parse(text: &str) -> Result<RegionSpec> {
        let text = text.trim();
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::parse(format!("expected <kind>:<bounds> in {text:?}")))?;
        match kind {
            "interval" => {
                let mut parts = rest.split(':');
                let mut axis = parse_axis(parts.next().unwrap_or(""), 0)?;
                if let Some(f) = parts.next() {
                    (axis.lo_open, axis.hi_open) = parse_flags(f)?;
                }
                if parts.next().is_some() {
                    return Err(Error::parse(format!("trailing fields in {text:?}")));
                }
                Ok(RegionSpec::Interval(axis))
            }
            "box" => {
                let mut parts = rest.split(':');
                let mut axes = parts
                    .next()
                    .unwrap_or("")
                    .split(';')
                    .enumerate()
                    .map(|(i, a)| parse_axis(a, i))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(f) = parts.next() {
                    let flags = f.split(';').map(parse_flags).collect::<Result<Vec<_>>>()?;
                    match flags.len() {
                        1 => axes.iter_mut().for_each(|a| (a.lo_open, a.hi_open) = flags[0]),
                        k if k == axes.len() => axes
                            .iter_mut()
                            .zip(flags)
                            .for_each(|(a, fl)| (a.lo_open, a.hi_open) = fl),
                        k => {
                            return Err(Error::parse(format!(
                                "{k} flag pairs for {} axes",
                                axes.len()
                            )))
                        }
                    }
                }
                if parts.next().is_some() {
                    return Err(Error::parse(format!("trailing fields in {text:?}")));
                }
                Ok(RegionSpec::Box(axes))
            }
            "ball" => {
                let mut parts = rest.split(':');
                let head = parts.next().unwrap_or("");
                let (radius, center) = match head.split_once('@') {
                    Some((r, c)) => (
                        Rational::parse(r)?,
                        c.split(',').map(Rational::parse).collect::<Result<Vec<_>>>()?,
                    ),
                    None => (Rational::parse(head)?, Vec::new()),
                };
                if !radius.is_positive() {
                    return Err(Error::EmptyInterior { axis: 0 });
                }
                let mut norm = Norm::L2;
                let mut open = false;
                for f in parts {
                    match f {
                        "o" | "open" => open = true,
                        "c" | "closed" => open = false,
                        other => norm = other.parse()?,
                    }
                }
                Ok(RegionSpec::Ball { radius, center, norm, open })
            }
            _ => Err(Error::parse(format!("unknown region kind {kind:?}"))),
        }
    }

    /// `[0, 1)^n`.
    pub fn unit_box(n: usize) -> RegionSpec {
        let axis = AxisBounds::half_open(Rational::zero(), Rational::one());
        if n == 1 {
            RegionSpec::Interval(axis)
        } else {
            RegionSpec::Box(vec![axis; n])
        }
    }

    /// The dimension, or `None` for a centerless ball.
    pub fn dim(&self) -> Option<usize> {
        match self {
            RegionSpec::Interval(_) => Some(1),
            RegionSpec::Box(axes) => Some(axes.len()),
            RegionSpec::Ball { center, .. } if center.is_empty() => None,
            RegionSpec::Ball { center, .. } => Some(center.len()),
        }
    }

    /// Fixes the dimension of a centerless ball; checks it otherwise.
    pub fn resolve_dim(&self, n: usize) -> Result<RegionSpec> {
        if n == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        match self {
            RegionSpec::Ball { radius, center, norm, open } if center.is_empty() => {
                Ok(RegionSpec::Ball {
                    radius: radius.clone(),
                    center: vec![Rational::zero(); n],
                    norm: *norm,
                    open: *open,
                })
            }
            _ => {
                let d = self.dim().expect("resolved");
                if d != n {
                    return Err(Error::DimensionMismatch { expected: n, got: d });
                }
                Ok(self.clone())
            }
        }
    }

    /// Per-axis bounds for interval/box kinds.
    pub fn axes(&self) -> Option<&[AxisBounds]> {
        match self {
            RegionSpec::Interval(a) => Some(std::slice::from_ref(a)),
            RegionSpec::Box(axes) => Some(axes),
            RegionSpec::Ball { .. } => None,
        }
    }

    /// Side length of the largest axis-aligned cube inside the region.
    pub fn inscribed_cube_width(&self) -> f64 {
        match self {
            RegionSpec::Interval(a) => a.width().to_f64(),
            RegionSpec::Box(axes) => axes
                .iter()
                .map(|a| a.width().to_f64())
                .fold(f64::INFINITY, f64::min),
            RegionSpec::Ball { radius, center, norm, .. } => {
                let n = center.len().max(1) as f64;
                let r = radius.to_f64();
                match norm {
                    Norm::Sup => 2.0 * r,
                    Norm::L2 => 2.0 * r / n.sqrt(),
                    Norm::L1 => 2.0 * r / n,
                }
            }
        }
    }

    /// Lebesgue measure of a box region.
    pub fn box_volume(&self) -> Option<Rational> {
        self.axes()
            .map(|axes| axes.iter().fold(Rational::one(), |v, a| v * a.width()))
    }

    /// Exact membership of `pt` in the region itself (no shift or scale).
    pub fn contains(&self, pt: &[Rational]) -> Result<bool> {
        let spec = self.resolve_dim(pt.len())?;
        match &spec {
            RegionSpec::Interval(_) | RegionSpec::Box(_) => {
                let axes = spec.axes().expect("box kind");
                Ok(axes.iter().zip(pt).all(|(a, v)| a.contains(v)))
            }
            RegionSpec::Ball { radius, center, norm, open } => {
                let diffs: Vec<Rational> = pt.iter().zip(center).map(|(v, c)| v - c).collect();
                let (value, bound) = match norm {
                    Norm::L2 => (
                        diffs.iter().fold(Rational::zero(), |s, d| s + d * d),
                        radius * radius,
                    ),
                    Norm::Sup => (
                        diffs.iter().map(Rational::abs).max().unwrap_or_default(),
                        radius.clone(),
                    ),
                    Norm::L1 => (
                        diffs.iter().fold(Rational::zero(), |s, d| s + d.abs()),
                        radius.clone(),
                    ),
                };
                Ok(if *open { value < bound } else { value <= bound })
            }
        }
    }
}

impl fmt::Display for RegionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionSpec::Interval(a) => write!(f, "interval:{},{}:{}", a.lo, a.hi, a.flags()),
            RegionSpec::Box(axes) => {
                let bounds: Vec<String> = axes.iter().map(|a| format!("{},{}", a.lo, a.hi)).collect();
                let flags: Vec<&str> = axes.iter().map(AxisBounds::flags).collect();
                let flags = if flags.iter().all(|fl| *fl == flags[0]) {
                    flags[0].to_string()
                } else {
                    flags.join(";")
                };
                write!(f, "box:{}:{}", bounds.join(";"), flags)
            }
            RegionSpec::Ball { radius, center, norm, open } => {
                write!(f, "ball:{radius}")?;
                if !center.is_empty() {
                    let c: Vec<String> = center.iter().map(|c| c.to_string()).collect();
                    write!(f, "@{}", c.join(","))?;
                }
                write!(f, ":{}:{}", norm, if *open { "o" } else { "c" })
            }
        }
    }
}

impl FromStr for RegionSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RegionSpec::parse(s)
    }
}

impl serde::Serialize for RegionSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for RegionSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        RegionSpec::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// The set `x + delta * A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryRegion {
    base: RegionSpec,
    shift: Vec<Rational>,
    scale: Rational,
}

/// The query region in absolute coordinates, as consumed by the search
/// kernels.
#[derive(Debug, Clone)]
pub(crate) enum Placed {
    Boxed(Vec<AxisBounds>),
    Ball {
        center: Vec<Rational>,
        radius: Rational,
        norm: Norm,
        open: bool,
    },
}

impl QueryRegion {
    pub fn new(base: &RegionSpec, shift: Vec<Rational>, scale: Rational) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::invalid(format!("scale {scale} must be positive")));
        }
        if shift.is_empty() {
            return Err(Error::invalid("empty shift vector"));
        }
        let base = base.resolve_dim(shift.len())?;
        Ok(QueryRegion { base, shift, scale })
    }

    pub fn base(&self) -> &RegionSpec {
        &self.base
    }

    pub fn shift(&self) -> &[Rational] {
        &self.shift
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    /// `pt ∈ x + delta * A`, decided exactly.
    pub fn contains(&self, pt: &[Rational]) -> Result<bool> {
        if pt.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: pt.len() });
        }
        match self.placed() {
            Placed::Boxed(axes) => Ok(axes.iter().zip(pt).all(|(a, v)| a.contains(v))),
            Placed::Ball { center, radius, norm, open } => {
                let ball = RegionSpec::Ball { radius, center, norm, open };
                ball.contains(pt)
            }
        }
    }

    /// Smallest axis-aligned box containing the query set.
    pub fn bounding_box(&self) -> Vec<AxisBounds> {
        match self.placed() {
            Placed::Boxed(axes) => axes,
            Placed::Ball { center, radius, open, .. } => center
                .iter()
                .map(|c| AxisBounds::new(c - &radius, c + &radius, open, open))
                .collect(),
        }
    }

    pub(crate) fn placed(&self) -> Placed {
        match &self.base {
            RegionSpec::Interval(_) | RegionSpec::Box(_) => Placed::Boxed(
                self.base
                    .axes()
                    .expect("box kind")
                    .iter()
                    .zip(&self.shift)
                    .map(|(a, x)| a.affine(x, &self.scale))
                    .collect(),
            ),
            RegionSpec::Ball { radius, center, norm, open } => Placed::Ball {
                center: center
                    .iter()
                    .zip(&self.shift)
                    .map(|(c, x)| x + &(&self.scale * c))
                    .collect(),
                radius: &self.scale * radius,
                norm: *norm,
                open: *open,
            },
        }
    }

    /// Translates by an integer vector.
    pub fn translated(&self, m: &[BigInt]) -> Result<QueryRegion> {
        if m.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: m.len() });
        }
        let shift = self
            .shift
            .iter()
            .zip(m)
            .map(|(x, k)| x + &Rational::from_integer(k.clone()))
            .collect();
        Ok(QueryRegion { base: self.base.clone(), shift, scale: self.scale.clone() })
    }
}
