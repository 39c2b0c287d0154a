#![allow(dead_code)]

use denomlab::stats::rng::prng_u64;
use denomlab::Rational;

/// Deterministic counter-based source of test instances.
pub struct Gen {
    seed: u64,
    next: u64,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { seed, next: 0 }
    }

    pub fn u64(&mut self) -> u64 {
        self.next += 1;
        prng_u64(self.seed, self.next)
    }

    pub fn below(&mut self, m: u64) -> u64 {
        self.u64() % m
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }

    /// `j / den` with `j` uniform in `[0, den)`.
    pub fn unit(&mut self, den: u64) -> Rational {
        Rational::new(self.below(den) as i64, den as i64).unwrap()
    }

    pub fn vector(&mut self, n: usize, den: u64) -> Vec<Rational> {
        (0..n).map(|_| self.unit(den)).collect()
    }
}

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}
