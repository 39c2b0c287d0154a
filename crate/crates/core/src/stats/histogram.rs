//! Density histograms and a dependency-free SVG chart writer.

use std::fmt::Write;

use serde::Serialize;

use super::format::g12;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityHistogram {
    pub lo: f64,
    pub hi: f64,
    pub densities: Vec<f64>,
    pub count: usize,
}

impl DensityHistogram {
    /// Histogram with `bins` equal bins on `range` (default: sample min to
    /// max), normalised to unit area. Samples outside the range are dropped.
    pub fn new(samples: &[f64], bins: usize, range: Option<(f64, f64)>) -> Result<Self> {
        if bins == 0 {
            return Err(Error::invalid("need at least one bin"));
        }
        if samples.is_empty() {
            return Err(Error::NoSamples);
        }
        let (lo, hi) = range.unwrap_or_else(|| {
            let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) }
        });
        if !(hi > lo) {
            return Err(Error::invalid(format!("empty histogram range [{lo}, {hi}]")));
        }
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0usize; bins];
        let mut used = 0;
        for &x in samples {
            if x < lo || x > hi {
                continue;
            }
            let b = (((x - lo) / width) as usize).min(bins - 1);
            counts[b] += 1;
            used += 1;
        }
        if used == 0 {
            return Err(Error::NoSamples);
        }
        let densities = counts.iter().map(|&c| c as f64 / (used as f64 * width)).collect();
        Ok(DensityHistogram { lo, hi, densities, count: used })
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.densities.len() as f64
    }

    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let w = self.bin_width();
        (self.lo + w * i as f64, self.lo + w * (i + 1) as f64)
    }

    /// Histogram CDF at the right edge of each bin.
    pub fn binned_cdf(&self) -> Vec<(f64, f64)> {
        let w = self.bin_width();
        let mut acc = 0.0;
        (0..self.densities.len())
            .map(|i| {
                acc += self.densities[i] * w;
                (self.bin_edges(i).1, acc)
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,density\n");
        for (i, d) in self.densities.iter().enumerate() {
            let (a, b) = self.bin_edges(i);
            writeln!(out, "{},{},{}", g12(a), g12(b), g12(*d)).unwrap();
        }
        out
    }

    pub fn to_svg(&self, title: &str, model: Option<&dyn Fn(f64) -> f64>) -> String {
        let bars: Vec<(f64, f64, f64)> = (0..self.densities.len())
            .map(|i| {
                let (a, b) = self.bin_edges(i);
                (a, b, self.densities[i])
            })
            .collect();
        let curve = model.map(|f| {
            (0..=400)
                .map(|i| {
                    let x = self.lo + (self.hi - self.lo) * i as f64 / 400.0;
                    (x, f(x))
                })
                .collect::<Vec<_>>()
        });
        svg_chart(title, &bars, curve.as_deref())
    }
}

/// Standalone SVG with bars `(x_lo, x_hi, height)` and an optional polyline.
pub fn svg_chart(title: &str, bars: &[(f64, f64, f64)], curve: Option<&[(f64, f64)]>) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const M: f64 = 48.0;
    let xs = bars.iter().flat_map(|b| [b.0, b.1]).chain(curve.into_iter().flatten().map(|p| p.0));
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in xs {
        x0 = x0.min(x);
        x1 = x1.max(x);
    }
    let y1 = bars
        .iter()
        .map(|b| b.2)
        .chain(curve.into_iter().flatten().map(|p| p.1))
        .filter(|y| y.is_finite())
        .fold(0.0, f64::max);
    let (x0, x1) = if x1 > x0 { (x0, x1) } else { (0.0, 1.0) };
    let y1 = if y1 > 0.0 { y1 * 1.05 } else { 1.0 };
    let px = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let py = |y: f64| H - M - y / y1 * (H - 2.0 * M);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        W / 2.0,
        escape(title)
    )
    .unwrap();
    for &(a, b, h) in bars {
        let (xa, xb) = (px(a), px(b));
        let top = py(h.min(y1));
        writeln!(
            s,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#9ab" stroke="#567" stroke-width="0.5"/>"##,
            xa,
            top,
            (xb - xa).max(0.0),
            (H - M - top).max(0.0)
        )
        .unwrap();
    }
    if let Some(c) = curve {
        let pts: Vec<String> = c
            .iter()
            .filter(|p| p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y.min(y1))))
            .collect();
        writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#c22" stroke-width="1.5"/>"##,
            pts.join(" ")
        )
        .unwrap();
    }
    // Axes with end labels.
    writeln!(
        s,
        r#"<path d="M{M} {M} V{b} H{r}" fill="none" stroke="black"/>"#,
        b = H - M,
        r = W - M
    )
    .unwrap();
    for (x, anchor) in [(x0, "start"), (x1, "end")] {
        writeln!(
            s,
            r#"<text x="{:.2}" y="{}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{}</text>"#,
            px(x),
            H - M + 16.0,
            g12(x)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
        M - 4.0,
        py(y1 / 1.05) + 4.0,
        g12(y1 / 1.05)
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
