//! Counter-based uniform draws.
//!
//! Draw `index` of stream `seed` is `splitmix64(splitmix64(seed) + (index + 1) * φ)`
//! with `φ = 0x9E3779B97F4A7C15`, so any draw can be computed on its own and
//! results never depend on how work is split between threads. The 64-bit
//! word is mapped to `{0, ..., G-1}` by its top bits when `G` is a power of
//! two and by Lemire's multiply-shift otherwise.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactnum::Rational;

pub const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
/// Denominator of the dyadic grid used for continuous sampling.
pub const DYADIC_BITS: u32 = 53;

pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn prng_u64(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed).wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// `j` uniform on `{0, ..., g-1}`.
pub fn prng_index(seed: u64, index: u64, g: u64) -> u64 {
    let h = prng_u64(seed, index);
    if g.is_power_of_two() {
        if g == 1 {
            0
        } else {
            h >> (64 - g.trailing_zeros())
        }
    } else {
        ((h as u128 * g as u128) >> 64) as u64
    }
}

/// `j / g` with `j` uniform on `{0, ..., g-1}`.
pub fn prng_uniform_rational(seed: u64, index: u64, g: u64) -> Result<Rational> {
    if g < 2 {
        return Err(Error::invalid(format!("grid denominator {g} must be at least 2")));
    }
    Rational::new(BigInt::from(prng_index(seed, index, g)), BigInt::from(g))
}

/// Uniform on the dyadic grid `j / 2^53`, as a float (exactly representable).
pub fn prng_unit_f64(seed: u64, index: u64) -> f64 {
    (prng_u64(seed, index) >> (64 - DYADIC_BITS)) as f64 / (1u64 << DYADIC_BITS) as f64
}
