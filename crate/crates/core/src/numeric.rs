//! Small numeric helpers shared by the entropy and probability code.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Base-2 logarithm of an arbitrary-precision integer. Returns `-inf` for zero.
pub fn log2_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.log2() + shift as f64
}

/// `lg(1/p)` for a positive rational `p`.
pub fn lg_inverse(p: &BigRational) -> f64 {
    assert!(p.is_positive(), "probability must be positive");
    let numer = p.numer().magnitude();
    let denom = p.denom().magnitude();
    log2_biguint(denom) - log2_biguint(numer)
}

/// Table of `lg(k!)` for `k` in `0..=max`.
#[derive(Debug, Clone)]
pub struct LgFactorial {
    table: Vec<f64>,
}

impl LgFactorial {
    pub fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        let mut acc = 0.0f64;
        table.push(0.0);
        for k in 1..=max {
            acc += (k as f64).log2();
            table.push(acc);
        }
        Self { table }
    }

    pub fn get(&self, k: usize) -> f64 {
        self.table[k]
    }

    /// `lg binom(n, k)`.
    pub fn binomial(&self, n: usize, k: usize) -> f64 {
        debug_assert!(k <= n);
        self.table[n] - self.table[k] - self.table[n - k]
    }
}

/// `lg(n!)` computed directly.
pub fn lg_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).log2()).sum()
}

/// `x * lg(x)` with the convention `0 lg 0 = 0`.
pub(crate) fn xlgx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}
