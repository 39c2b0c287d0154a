//! Closed-form limit laws and the numerics behind them.

mod gamma;
pub(crate) mod hall;
mod moments;
pub mod quad;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub use gamma::{beta, complex_log_gamma, recip_gamma};
pub use hall::{eta_cdf, eta_density, eta_survival, hall_h, EtaSampler, HallBranch, HallEval};
pub use moments::{moment_m_closed, moment_m_quadrature, MomentEval, MomentMethod, CLOSED_FORM_EPS};

// B_{2j} / (2j)! for j = 1..=6.
const EM_COEF: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
];

/// Riemann `ζ(k)` for integer `k >= 2`.
pub fn zeta(k: u32) -> f64 {
    assert!(k >= 2, "ζ(k) needs k >= 2");
    const N: f64 = 20.0;
    let kf = k as f64;
    // Sum the small terms last to limit rounding.
    let mut head = 0.0;
    for m in (1..20).rev() {
        head += (m as f64).powf(-kf);
    }
    let mut tail = N.powf(1.0 - kf) / (kf - 1.0) + 0.5 * N.powf(-kf);
    // Rising factorial k (k+1) ... (k+2j-2).
    let mut rising = kf;
    for (j, c) in EM_COEF.iter().enumerate() {
        let p = 2 * j as i32 + 1;
        tail += c * rising * N.powf(-kf - p as f64);
        rising *= (kf + p as f64) * (kf + p as f64 + 1.0);
    }
    head + tail
}

/// Conversion between the rescaled smallest denominator `L` and the void
/// size `s = σ₁^{1/n} L^{1+1/n}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleMap {
    pub n: usize,
    pub sigma_1: f64,
}

impl ScaleMap {
    pub fn new(n: usize) -> Self {
        ScaleMap { n, sigma_1: crate::farey::sigma_1(n) }
    }

    pub fn l_to_s(&self, l: f64) -> f64 {
        let n = self.n as f64;
        self.sigma_1.powf(1.0 / n) * l.powf(1.0 + 1.0 / n)
    }

    pub fn s_to_l(&self, s: f64) -> f64 {
        let n = self.n as f64;
        self.sigma_1.powf(-1.0 / (n + 1.0)) * s.powf(n / (n + 1.0))
    }
}

pub fn scale_l_to_s(l: f64, n: usize) -> f64 {
    ScaleMap::new(n).l_to_s(l)
}

pub fn scale_s_to_l(s: f64, n: usize) -> f64 {
    ScaleMap::new(n).s_to_l(s)
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (`j` is accepted for `i`).
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::parse(format!("not a number: {text:?}"));
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return Ok(Complex64::new(num(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (num(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => num(other.strip_suffix('*').unwrap_or(other))?,
    };
    Ok(Complex64::new(re, im))
}
