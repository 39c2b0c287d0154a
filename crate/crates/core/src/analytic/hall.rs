//! The Hall distribution `H(s)`, the density `η(s)` of the rescaled smallest
//! denominator, and the survival function `∫_L^∞ η`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::Serialize;

use super::quad::integrate_real;
use crate::error::{Error, Result};

const SIX_OVER_PI2: f64 = 6.0 / (PI * PI);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HallBranch {
    #[serde(rename = "t>=1")]
    Upper,
    #[serde(rename = "1/4<=t<=1")]
    Middle,
    #[serde(rename = "t<=1/4")]
    Lower,
}

impl HallBranch {
    pub fn label(self) -> &'static str {
        match self {
            HallBranch::Upper => "t>=1",
            HallBranch::Middle => "1/4<=t<=1",
            HallBranch::Lower => "t<=1/4",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HallEval {
    pub s: f64,
    pub t: f64,
    pub value: f64,
    pub branch: HallBranch,
}

/// `H` as a function of `t = 3 / (π² s)`.
fn hall_of_t(t: f64) -> (f64, HallBranch) {
    if t >= 1.0 {
        (1.0, HallBranch::Upper)
    } else if t >= 0.25 {
        (-1.0 + 2.0 * t - 2.0 * t * t.ln(), HallBranch::Middle)
    } else {
        // -1 + 2t + 2u - 4t log(1/2 + u) with u = sqrt(1/4 - t), rewritten
        // through y = 1/2 - u so that small t does not cancel.
        let r = (1.0 - 4.0 * t).sqrt();
        let y = 2.0 * t / (1.0 + r);
        let v = -8.0 * t * t / ((1.0 + r) * (1.0 + r)) - 4.0 * t * (-y).ln_1p();
        (v, HallBranch::Lower)
    }
}

fn check_nonnegative(s: f64) -> Result<()> {
    if s.is_nan() || s < 0.0 {
        Err(Error::Domain(format!("argument {s} must be nonnegative")))
    } else {
        Ok(())
    }
}

pub fn hall_h(s: f64) -> Result<HallEval> {
    check_nonnegative(s)?;
    let t = 3.0 / (PI * PI * s);
    let (value, branch) = hall_of_t(t);
    Ok(HallEval { s, t, value, branch })
}

/// `η(s) = (6/π²) s H(3s²/π²)`, evaluated as `(6/π²) s h(1/s²)`.
pub fn eta_density(s: f64) -> Result<f64> {
    check_nonnegative(s)?;
    Ok(eta_unchecked(s))
}

pub(crate) fn eta_unchecked(s: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    if s.is_infinite() {
        return 0.0;
    }
    SIX_OVER_PI2 * s * hall_of_t(1.0 / (s * s)).0
}

/// Antiderivative of `η` on `[1, 2]`.
fn eta_antiderivative_mid(s: f64) -> f64 {
    let l = s.ln();
    SIX_OVER_PI2 * (-0.5 * s * s + 2.0 * l + 2.0 * l * l)
}

/// `∫_4^∞ η`, computed once.
fn survival_at_4() -> f64 {
    static AT4: OnceLock<f64> = OnceLock::new();
    *AT4.get_or_init(|| tail_from(4.0))
}

/// `∫_L^4 η` for `2 <= L <= 4`, with `s = 2 / sqrt(1 - v²)` removing the
/// square-root edge at `s = 2`.
fn survival_2_to_4(l: f64) -> f64 {
    let v_of = |s: f64| (1.0 - 4.0 / (s * s)).max(0.0).sqrt();
    let f = |v: f64| {
        let w = 1.0 - v * v;
        let s = 2.0 / w.sqrt();
        eta_unchecked(s) * 2.0 * v / (w * w.sqrt())
    };
    integrate_real(f, v_of(l), v_of(4.0), 1e-15)
}

/// `∫_L^∞ η` for `L >= 4` through `s = L / w`.
fn tail_from(l: f64) -> f64 {
    let f = |w: f64| if w == 0.0 { 0.0 } else { eta_unchecked(l / w) * l / (w * w) };
    integrate_real(f, 0.0, 1.0, 1e-16)
}

/// `E(L) = ∫_L^∞ η(s) ds`, the limiting probability that the rescaled
/// smallest denominator exceeds `L`.
pub fn eta_survival(l: f64) -> f64 {
    if l <= 0.0 {
        return 1.0;
    }
    if l <= 1.0 {
        return 1.0 - 0.5 * SIX_OVER_PI2 * l * l;
    }
    let s1 = 1.0 - 0.5 * SIX_OVER_PI2;
    if l <= 2.0 {
        return s1 - (eta_antiderivative_mid(l) - eta_antiderivative_mid(1.0));
    }
    if l <= 4.0 {
        survival_2_to_4(l) + survival_at_4()
    } else if l.is_infinite() {
        0.0
    } else {
        tail_from(l)
    }
}

pub fn eta_cdf(l: f64) -> f64 {
    1.0 - eta_survival(l)
}

/// Inverse-CDF sampler for `η` over a precomputed table.
#[derive(Debug, Clone)]
pub struct EtaSampler {
    // (L, survival) with L increasing and survival decreasing.
    table: Vec<(f64, f64)>,
}

impl Default for EtaSampler {
    fn default() -> Self {
        Self::new()
    }
}

impl EtaSampler {
    const L_MAX: f64 = 40.0;

    pub fn new() -> Self {
        let steps = 4000;
        let table = (0..=steps)
            .map(|i| {
                let l = Self::L_MAX * i as f64 / steps as f64;
                (l, eta_survival(l))
            })
            .collect();
        EtaSampler { table }
    }

    /// The `L` with `E(L) = 1 - u`, for `u` in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        let surv = 1.0 - u;
        let last = self.table.last().expect("table is never empty");
        if surv <= last.1 {
            // Beyond the table E(L) ~ 6 / (π² L²).
            return (SIX_OVER_PI2 / surv.max(f64::MIN_POSITIVE)).sqrt();
        }
        let i = self.table.partition_point(|&(_, s)| s > surv);
        if i == 0 {
            return 0.0;
        }
        let (l0, s0) = self.table[i - 1];
        let (l1, s1) = self.table[i];
        let mut l = l0 + (l1 - l0) * (s0 - surv) / (s0 - s1);
        // Newton on E(L) = surv, kept inside the bracketing cell.
        for _ in 0..4 {
            let d = eta_unchecked(l);
            if d <= 0.0 {
                break;
            }
            let next = (l + (eta_survival(l) - surv) / d).clamp(l0, l1);
            if next == l {
                break;
            }
            l = next;
        }
        l
    }
}
