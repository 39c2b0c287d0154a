//! Complex log-gamma and the beta function.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

// B_{2k} / (2k (2k-1)) for k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Principal branch of `log Γ(z)`: analytic off the non-positive real axis
/// and real for real `z > 0`.
pub fn complex_log_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole(format!("Γ has a pole at {}", z.re)));
    }
    // Shift up with log Γ(z) = log Γ(z + m) - Σ log(z + k).
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 20.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    let lg = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series;
    Ok(lg - shift)
}

/// `1/Γ(z)`, which is entire.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    match complex_log_gamma(z) {
        Ok(lg) => (-lg).exp(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

/// `B(x, y) = Γ(x) Γ(y) / Γ(x + y)`; zero when `x + y` is a pole of `Γ`.
pub fn beta(x: Complex64, y: Complex64) -> Result<Complex64> {
    let lx = complex_log_gamma(x)?;
    let ly = complex_log_gamma(y)?;
    if is_pole(x + y) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok((lx + ly - complex_log_gamma(x + y)?).exp())
}
