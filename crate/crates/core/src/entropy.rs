//! Zeroth-order empirical entropy and the space budgets built on it.
//!
//! All quantities are in bits. `H0(T) = sum_c |T|_c lg(|T| / |T|_c)` with
//! `0 lg(n/0) = 0`; the per-character variant divides by `|T|`.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigUint;

use crate::generate::log_prob;
use crate::graph::{Dag, PaGraph};
use crate::numeric::{lg_factorial, log2_biguint, xlgx};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub length: usize,
    pub alphabet_size: usize,
    /// Symbol frequencies, in order of first occurrence.
    pub frequencies: Vec<usize>,
    pub h0_bits: f64,
    pub h0_pc_bits: f64,
}

pub fn frequencies<T: Hash + Eq>(seq: &[T]) -> Vec<usize> {
    let mut index: HashMap<&T, usize> = HashMap::new();
    let mut freq = Vec::new();
    for x in seq {
        let slot = *index.entry(x).or_insert_with(|| {
            freq.push(0);
            freq.len() - 1
        });
        freq[slot] += 1;
    }
    freq
}

/// `H0` from a frequency vector.
pub fn h0_from_counts(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let h = xlgx(n as f64) - counts.iter().map(|&c| xlgx(c as f64)).sum::<f64>();
    h.max(0.0)
}

pub fn h0<T: Hash + Eq>(seq: &[T]) -> EntropyReport {
    let frequencies = frequencies(seq);
    let h0_bits = h0_from_counts(&frequencies);
    let length = seq.len();
    EntropyReport {
        length,
        alphabet_size: frequencies.len(),
        h0_pc_bits: if length == 0 {
            0.0
        } else {
            h0_bits / length as f64
        },
        frequencies,
        h0_bits,
    }
}

/// `H0` evaluated as `lg(n^n / prod_c c^c)` with exact integer arithmetic.
pub fn h0_exact_bits(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let numer = BigUint::from(n).pow(n as u32);
    let denom = counts
        .iter()
        .filter(|&&c| c > 0)
        .fold(BigUint::from(1u32), |acc, &c| {
            acc * BigUint::from(c).pow(c as u32)
        });
    log2_biguint(&numer) - log2_biguint(&denom)
}

/// Degree entropy: `H0` of the adjacency string.
pub fn degree_entropy(g: impl AsRef<Dag>) -> f64 {
    let d = g.as_ref();
    let mut counts = d.in_degrees();
    counts.retain(|&c| c > 0);
    h0_from_counts(&counts)
}

/// Bound evaluations for one instance, to compare against measured space.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub n: usize,
    pub m: usize,
    pub h_deg: f64,
    pub lg_inv_p: f64,
    pub lg_factorial_n: f64,
    /// `lg(1/P[G]) - lg(n!)`: lower bound on the unlabelled information content.
    pub unlabelled_lb: f64,
    /// `H_deg (1 - 1/M) + 2n`.
    pub entropy_budget: f64,
    /// `(M - 1) n lg n + 2n`.
    pub worstcase_budget: f64,
}

pub fn bounds_report(g: &PaGraph) -> Result<BoundsReport> {
    let h_deg = degree_entropy(g);
    let lg_inv_p = log_prob(g, false)?.bits;
    Ok(bounds_from_parts(g.n(), g.m(), h_deg, lg_inv_p))
}

pub(crate) fn bounds_from_parts(n: usize, m: usize, h_deg: f64, lg_inv_p: f64) -> BoundsReport {
    let lg_factorial_n = lg_factorial(n);
    let b = budgets(n, m, h_deg);
    BoundsReport {
        n,
        m,
        h_deg,
        lg_inv_p,
        lg_factorial_n,
        unlabelled_lb: lg_inv_p - lg_factorial_n,
        entropy_budget: b.entropy_budget,
        worstcase_budget: b.worstcase_budget,
    }
}

/// Space budgets that depend only on `n`, `M` and the degree entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budgets {
    pub entropy_budget: f64,
    pub worstcase_budget: f64,
}

pub fn budgets(n: usize, m: usize, h_deg: f64) -> Budgets {
    let nf = n as f64;
    let mf = m as f64;
    Budgets {
        entropy_budget: h_deg * (1.0 - 1.0 / mf) + 2.0 * nf,
        worstcase_budget: (mf - 1.0) * nf * nf.log2() + 2.0 * nf,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example_n4() -> PaGraph {
        PaGraph::new(3, vec![0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 1, 3]).unwrap()
    }

    fn example_n5() -> PaGraph {
        PaGraph::new(3, vec![0, 0, 0, 1, 1, 1, 1, 1, 1, 3, 2, 2, 3, 4, 4]).unwrap()
    }

    #[test]
    fn abracadabra_per_char() {
        let a: Vec<char> = "abracadabraa".chars().collect();
        assert!((h0(&a).h0_pc_bits - 1.95915).abs() < 1e-5);
        let b: Vec<char> = "araadaraa".chars().collect();
        assert!((h0(&b).h0_pc_bits - 1.22439).abs() < 1e-5);
    }

    #[test]
    fn single_symbol_and_empty() {
        let r = h0(&[0, 0, 0]);
        assert_eq!(r.h0_bits, 0.0);
        assert_eq!(r.alphabet_size, 1);
        let e = h0::<u8>(&[]);
        assert_eq!(e.h0_bits, 0.0);
        assert_eq!(e.h0_pc_bits, 0.0);
    }

    #[test]
    fn degree_entropy_of_examples() {
        assert!((degree_entropy(example_n4()) - 15.368).abs() < 1e-3);
        let expected = 3.0 * 5f64.log2() + 6.0 * (15.0f64 / 6.0).log2() + 3.0 * 2.0 * 7.5f64.log2();
        assert!((degree_entropy(example_n5()) - expected).abs() < 1e-9);
        assert!((expected - 32.34).abs() < 0.01);
        assert_eq!(degree_entropy(PaGraph::new(4, vec![0; 4]).unwrap()), 0.0);
    }

    #[test]
    fn exact_mode_agrees() {
        let counts = [7usize, 4, 1];
        assert!((h0_exact_bits(&counts) - h0_from_counts(&counts)).abs() < 1e-9);
    }

    #[test]
    fn example_n4_bounds() {
        let b = bounds_report(&example_n4()).unwrap();
        assert!((b.lg_factorial_n - 24f64.log2()).abs() < 1e-12);
        assert!((b.unlabelled_lb - 2.848).abs() < 1e-3);
    }

    #[test]
    fn budgets() {
        let g = PaGraph::new(1, vec![0, 1, 1, 2]).unwrap();
        let b = bounds_report(&g).unwrap();
        assert_eq!(b.entropy_budget, 8.0);
        let b2 = bounds_report(&example_n5()).unwrap();
        assert!((b2.worstcase_budget - (10.0 * 5f64.log2() + 10.0)).abs() < 1e-9);
        assert!((b2.worstcase_budget - 33.22).abs() < 0.01);
    }

    proptest! {
        #[test]
        fn permutation_invariant(mut seq in proptest::collection::vec(0u8..12, 0..200), seed in any::<u64>()) {
            let before = h0(&seq).h0_bits;
            // deterministic shuffle
            let mut s = seed;
            for i in (1..seq.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (s >> 33) as usize % (i + 1);
                seq.swap(i, j);
            }
            prop_assert!((h0(&seq).h0_bits - before).abs() < 1e-9);
        }

        #[test]
        fn per_char_bounded_by_alphabet(seq in proptest::collection::vec(0u16..40, 1..300)) {
            let r = h0(&seq);
            prop_assert!(r.h0_pc_bits >= 0.0);
            prop_assert!(r.h0_pc_bits <= (r.alphabet_size as f64).log2() + 1e-12);
            prop_assert_eq!(r.h0_pc_bits == 0.0, r.alphabet_size == 1);
            prop_assert!((r.h0_bits - r.h0_pc_bits * r.length as f64).abs() < 1e-9);
        }
    }
}
