//! Float formatting shared by every writer.

/// C-style `%.{sig}g`: `sig` significant digits, trailing zeros removed,
/// scientific notation outside `1e-4 <= |x| < 10^sig`.
pub fn fmt_g(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// [`fmt_g`] with 12 significant digits.
pub fn g12(x: f64) -> String {
    fmt_g(x, 12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf() {
        assert_eq!(g12(1.0), "1");
        assert_eq!(g12(16.0 / std::f64::consts::PI.powi(2)), "1.62113893828");
        assert_eq!(g12(0.5), "0.5");
        assert_eq!(g12(1e-5), "1e-05");
        assert_eq!(g12(0.0001), "0.0001");
        assert_eq!(g12(123456789012.0), "123456789012");
        assert_eq!(g12(1234567890123.0), "1.23456789012e+12");
        assert_eq!(g12(-2.5e-7), "-2.5e-07");
        assert_eq!(g12(0.0), "0");
        assert_eq!(fmt_g(0.999_999_9, 3), "1");
        assert_eq!(fmt_g(99.96, 3), "100");
    }
}
