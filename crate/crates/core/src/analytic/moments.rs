//! The moment function `M(α) = ∫_0^∞ s^α η(s) ds` for `|Re α| < 2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::gamma::beta;
use super::hall::eta_unchecked;
use super::quad::integrate;
use crate::error::{Error, Result};

/// Closed-form evaluation falls back to quadrature for `|α|` below this.
pub const CLOSED_FORM_EPS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentMethod {
    ClosedForm,
    Quadrature,
}

impl MomentMethod {
    pub fn label(self) -> &'static str {
        match self {
            MomentMethod::ClosedForm => "closed-form",
            MomentMethod::Quadrature => "quadrature",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEval {
    pub alpha: Complex64,
    pub value: Complex64,
    pub method: MomentMethod,
}

fn check_domain(alpha: Complex64) -> Result<()> {
    if !(alpha.re.abs() < 2.0) || !alpha.im.is_finite() {
        return Err(Error::Domain(format!("moment diverges for Re α = {}", alpha.re)));
    }
    Ok(())
}

/// `24 / (π² α (α+2)) · (2/α + 2^α B(-α/2, 1/2))`.
pub fn moment_m_closed(alpha: Complex64) -> Result<MomentEval> {
    check_domain(alpha)?;
    if alpha.norm() < CLOSED_FORM_EPS {
        return moment_m_quadrature(alpha);
    }
    let b = beta(-alpha / 2.0, Complex64::new(0.5, 0.0))?;
    let two_pow = (alpha * 2f64.ln()).exp();
    let value = 24.0 / (PI * PI * alpha * (alpha + 2.0)) * (2.0 / alpha + two_pow * b);
    Ok(MomentEval { alpha, value, method: MomentMethod::ClosedForm })
}

/// Direct integration, split at `s = 1, 2, 4` and `s = 10⁴`, with the
/// asymptotic expansion of `η` integrated exactly beyond the last point.
pub fn moment_m_quadrature(alpha: Complex64) -> Result<MomentEval> {
    check_domain(alpha)?;
    const TOL: f64 = 1e-12;
    const S_TAIL: f64 = 1e4;
    let c = 6.0 / (PI * PI);
    let pow = |s: f64| (alpha * s.ln()).exp();

    let on_0_1 = c / (alpha + 2.0);
    let (on_1_2, _) = integrate(|s| pow(s) * eta_unchecked(s), 1.0, 2.0, TOL);
    let (on_2_4, _) = integrate(
        |v| {
            let w = 1.0 - v * v;
            let s = 2.0 / w.sqrt();
            pow(s) * (eta_unchecked(s) * 2.0 * v / (w * w.sqrt()))
        },
        0.0,
        0.75f64.sqrt(),
        TOL,
    );
    let (on_4_tail, _) = integrate(
        |u| {
            let s = u.exp();
            pow(s) * (eta_unchecked(s) * s)
        },
        4f64.ln(),
        S_TAIL.ln(),
        TOL,
    );
    // η(s) = (6/π²)(2 s⁻³ + 2 s⁻⁵ + (10/3) s⁻⁷ + ...)
    let t = |k: f64, coef: f64| ((alpha - k) * S_TAIL.ln()).exp() * coef / (k - alpha);
    let tail = c * (t(2.0, 2.0) + t(4.0, 2.0) + t(6.0, 10.0 / 3.0));
    Ok(MomentEval {
        alpha,
        value: on_0_1 + on_1_2 + on_2_4 + on_4_tail + tail,
        method: MomentMethod::Quadrature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classic_constants() {
        let sixteen = 16.0 / (PI * PI);
        assert!((moment_m_closed(c(1.0, 0.0)).unwrap().value.re - sixteen).abs() < 1e-12);
        assert!((moment_m_quadrature(c(1.0, 0.0)).unwrap().value.re - sixteen).abs() < 1e-9);
        let z = moment_m_closed(c(0.0, 0.0)).unwrap();
        assert_eq!(z.method, MomentMethod::Quadrature);
        assert!((z.value.re - 1.0).abs() < 1e-10);
        let m1 = moment_m_closed(c(-1.0, 0.0)).unwrap().value.re;
        assert!((m1 - 24.0 / (PI * PI) * (2.0 - PI / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn reference_values() {
        let cases = [
            (c(-1.9, 0.0), c(6.393_300_243_312_178, 0.0)),
            (c(-0.5, 0.0), c(0.946_260_890_829_766_2, 0.0)),
            (c(0.5, 0.0), c(1.188_906_323_998_889, 0.0)),
            (c(1.5, 0.0), c(2.907_643_522_275_100_4, 0.0)),
            (c(1.9, 0.0), c(12.733_609_685_018_323, 0.0)),
            (c(0.5, 1.0), c(0.868_641_424_193_781_8, 0.391_324_414_146_035_8)),
        ];
        for (a, want) in cases {
            let cl = moment_m_closed(a).unwrap().value;
            let qu = moment_m_quadrature(a).unwrap().value;
            assert!((cl - want).norm() < 1e-10, "closed {a}: {cl}");
            assert!((qu - want).norm() < 1e-9, "quad {a}: {qu}");
        }
    }

    #[test]
    fn divergent_moments_are_rejected() {
        assert!(matches!(moment_m_closed(c(2.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(moment_m_quadrature(c(-2.5, 1.0)), Err(Error::Domain(_))));
    }
}
