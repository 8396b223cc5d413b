use super::bitvec::{lg_binomial, BitVecMode, SuccinctBitVector};
use super::SpaceBits;
use crate::entropy::h0_from_counts;
use crate::{Error, Result};

/// Balanced pointerless wavelet tree over symbols in `0..sigma`.
///
/// Level `l` holds bit `levels - 1 - l` of every symbol, with the symbols of
/// each node laid out contiguously in level order. A node's children occupy
/// the same positions at the next level: zeros first, then ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveletTree {
    sigma: usize,
    len: usize,
    levels: Vec<SuccinctBitVector>,
}

fn level_count(sigma: usize) -> usize {
    if sigma <= 1 {
        0
    } else {
        (usize::BITS - (sigma - 1).leading_zeros()) as usize
    }
}

impl WaveletTree {
    pub fn new(seq: &[usize], sigma: usize) -> Result<Self> {
        Self::with_mode(seq, sigma, BitVecMode::Compressed)
    }

    pub fn with_mode(seq: &[usize], sigma: usize, mode: BitVecMode) -> Result<Self> {
        if let Some(&bad) = seq.iter().find(|&&c| c >= sigma) {
            return Err(Error::out_of_range("symbol", bad, format!("0..{sigma}")));
        }
        let nlev = level_count(sigma);
        let mut cur = seq.to_vec();
        let mut levels = Vec::with_capacity(nlev);
        for l in 0..nlev {
            let shift = nlev - 1 - l;
            levels.push(SuccinctBitVector::from_bits(
                cur.iter().map(|&c| (c >> shift) & 1 == 1),
                mode,
            ));
            // stable sort by the top l + 1 bits
            cur.sort_by_key(|&c| c >> shift);
        }
        Ok(Self {
            sigma,
            len: seq.len(),
            levels,
        })
    }

    pub(crate) fn from_levels(
        sigma: usize,
        len: usize,
        levels: Vec<SuccinctBitVector>,
    ) -> Result<Self> {
        if levels.len() != level_count(sigma) || levels.iter().any(|l| l.len() != len) {
            return Err(Error::Corrupt("wavelet level shape mismatch".into()));
        }
        let wt = Self { sigma, len, levels };
        // every root-to-leaf path must land on a symbol below sigma
        let mut counts_total = 0usize;
        for c in 0..sigma {
            counts_total += wt.rank_prefix(c, len);
        }
        if counts_total != len {
            return Err(Error::Corrupt(
                "wavelet tree encodes symbols outside the alphabet".into(),
            ));
        }
        Ok(wt)
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn levels(&self) -> &[SuccinctBitVector] {
        &self.levels
    }

    /// Symbol at 0-based position `i`.
    pub fn get(&self, mut i: usize) -> usize {
        let (mut b, mut e) = (0usize, self.len);
        let mut sym = 0usize;
        for bv in &self.levels {
            let ones_b = bv.rank1(b);
            let ones_e = bv.rank1(e);
            let zeros = (e - b) - (ones_e - ones_b);
            sym <<= 1;
            let (bit, ones_i) = bv.access_rank1(i);
            if bit {
                sym |= 1;
                i = b + zeros + (ones_i - ones_b);
                b += zeros;
            } else {
                i = b + ((i - ones_i) - (b - ones_b));
                e = b + zeros;
            }
        }
        sym
    }

    /// Occurrences of `c` in the first `i` symbols. `c` must be below sigma.
    pub fn rank_prefix(&self, c: usize, i: usize) -> usize {
        let nlev = self.levels.len();
        let (mut b, mut e) = (0usize, self.len);
        let mut p = i;
        for (l, bv) in self.levels.iter().enumerate() {
            let bit = (c >> (nlev - 1 - l)) & 1 == 1;
            let ones_b = bv.rank1(b);
            let ones_e = bv.rank1(e);
            let ones_p = bv.rank1(p);
            let zeros = (e - b) - (ones_e - ones_b);
            if bit {
                p = b + zeros + (ones_p - ones_b);
                b += zeros;
            } else {
                p = b + ((p - ones_p) - (b - ones_b));
                e = b + zeros;
            }
        }
        p - b
    }

    /// Occurrences of `c` in positions `i..j` (0-based, `i <= j`), walking
    /// the path to `c` once for both ends.
    pub fn count_range(&self, c: usize, i: usize, j: usize) -> usize {
        let nlev = self.levels.len();
        let (mut b, mut e) = (0usize, self.len);
        let (mut p, mut q) = (i, j);
        for (l, bv) in self.levels.iter().enumerate() {
            if p == q {
                return 0;
            }
            let bit = (c >> (nlev - 1 - l)) & 1 == 1;
            let ones_b = bv.rank1(b);
            let ones_e = bv.rank1(e);
            let ones_p = bv.rank1(p);
            let ones_q = bv.rank1(q);
            let zeros = (e - b) - (ones_e - ones_b);
            if bit {
                p = b + zeros + (ones_p - ones_b);
                q = b + zeros + (ones_q - ones_b);
                b += zeros;
            } else {
                p = b + ((p - ones_p) - (b - ones_b));
                q = b + ((q - ones_q) - (b - ones_b));
                e = b + zeros;
            }
        }
        q - p
    }

    /// 0-based position of the `k`-th occurrence of `c` (`k >= 1`).
    pub fn select_pos(&self, c: usize, k: usize) -> Option<usize> {
        if k == 0 || c >= self.sigma {
            return None;
        }
        let nlev = self.levels.len();
        // (node start, zeros in node) per level on the path to c
        let mut path = Vec::with_capacity(nlev);
        let (mut b, mut e) = (0usize, self.len);
        for (l, bv) in self.levels.iter().enumerate() {
            let bit = (c >> (nlev - 1 - l)) & 1 == 1;
            let zeros = (e - b) - (bv.rank1(e) - bv.rank1(b));
            path.push((b, zeros));
            if bit {
                b += zeros;
            } else {
                e = b + zeros;
            }
        }
        if k > e - b {
            return None;
        }
        let mut pos = b + k - 1;
        for l in (0..nlev).rev() {
            let bv = &self.levels[l];
            let bit = (c >> (nlev - 1 - l)) & 1 == 1;
            let (nb, zeros) = path[l];
            let ones_b = bv.rank1(nb);
            pos = if bit {
                bv.select1(ones_b + (pos - nb - zeros) + 1)
            } else {
                bv.select0((nb - ones_b) + (pos - nb) + 1)
            }
            .expect("rank-consistent");
        }
        Some(pos)
    }

    /// Symbol at 1-based position `i`.
    pub fn access(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.len {
            return Err(Error::out_of_range(
                "sequence position",
                i,
                format!("1..={}", self.len),
            ));
        }
        Ok(self.get(i - 1))
    }

    /// Occurrences of `c` in `S[1..=i]`.
    pub fn rank(&self, c: usize, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(Error::out_of_range(
                "rank position",
                i,
                format!("0..={}", self.len),
            ));
        }
        if c >= self.sigma {
            return Err(Error::out_of_range(
                "symbol",
                c,
                format!("0..{}", self.sigma),
            ));
        }
        Ok(self.rank_prefix(c, i))
    }

    /// 1-based position of the `k`-th occurrence of `c`.
    pub fn select(&self, c: usize, k: usize) -> Result<usize> {
        if c >= self.sigma {
            return Err(Error::out_of_range(
                "symbol",
                c,
                format!("0..{}", self.sigma),
            ));
        }
        self.select_pos(c, k).map(|p| p + 1).ok_or_else(|| {
            Error::out_of_range(
                "select rank",
                k,
                format!("1..={}", self.rank_prefix(c, self.len)),
            )
        })
    }

    /// Per-symbol frequencies, recovered from the structure.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.sigma.max(1)];
        self.collect_counts(0, 0, self.len, 0, &mut counts);
        if self.sigma == 0 {
            counts.clear();
        }
        counts
    }

    fn collect_counts(&self, l: usize, b: usize, e: usize, prefix: usize, out: &mut [usize]) {
        if b == e {
            return;
        }
        if l == self.levels.len() {
            out[prefix] += e - b;
            return;
        }
        let bv = &self.levels[l];
        let zeros = (e - b) - (bv.rank1(e) - bv.rank1(b));
        self.collect_counts(l + 1, b, b + zeros, prefix << 1, out);
        self.collect_counts(l + 1, b + zeros, e, (prefix << 1) | 1, out);
    }

    /// `sum over nodes of lg binom(node length, node ones)`. Equals the
    /// log of the multinomial coefficient of the frequency vector.
    pub fn node_entropy_bits(&self) -> f64 {
        let mut total = 0.0;
        self.node_entropy_rec(0, 0, self.len, &mut total);
        total
    }

    fn node_entropy_rec(&self, l: usize, b: usize, e: usize, acc: &mut f64) {
        if l == self.levels.len() || b == e {
            return;
        }
        let bv = &self.levels[l];
        let ones = bv.rank1(e) - bv.rank1(b);
        *acc += lg_binomial(e - b, ones);
        let zeros = (e - b) - ones;
        self.node_entropy_rec(l + 1, b, b + zeros, acc);
        self.node_entropy_rec(l + 1, b + zeros, e, acc);
    }

    /// Number of non-empty internal nodes.
    pub fn node_count(&self) -> usize {
        fn rec(wt: &WaveletTree, l: usize, b: usize, e: usize) -> usize {
            if l == wt.levels.len() || b == e {
                return 0;
            }
            let bv = &wt.levels[l];
            let zeros = (e - b) - (bv.rank1(e) - bv.rank1(b));
            1 + rec(wt, l + 1, b, b + zeros) + rec(wt, l + 1, b + zeros, e)
        }
        rec(self, 0, 0, self.len)
    }

    pub fn space_bits(&self) -> SpaceBits {
        let mut s = self
            .levels
            .iter()
            .map(|l| {
                let mut s = l.space_bits();
                s.entropy_bound_bits = 0.0;
                s
            })
            .fold(SpaceBits::default(), |a, b| a + b);
        s.entropy_bound_bits = h0_from_counts(&self.counts());
        s
    }
}

/// Wavelet tree over the symbols that actually occur, plus a compressed
/// bitvector marking which symbols of `0..universe` those are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappedWaveletTree {
    alphabet: SuccinctBitVector,
    wt: WaveletTree,
}

impl MappedWaveletTree {
    pub fn new(seq: &[usize], universe: usize) -> Result<Self> {
        if let Some(&bad) = seq.iter().find(|&&c| c >= universe) {
            return Err(Error::out_of_range("symbol", bad, format!("0..{universe}")));
        }
        let mut present = vec![false; universe];
        for &c in seq {
            present[c] = true;
        }
        let alphabet =
            SuccinctBitVector::from_bits(present.iter().copied(), BitVecMode::Compressed);
        let codes: Vec<usize> = seq.iter().map(|&c| alphabet.rank1(c)).collect();
        let wt = WaveletTree::new(&codes, alphabet.count_ones())?;
        Ok(Self { alphabet, wt })
    }

    /// Reassembles from parts, checking that every marked symbol occurs.
    pub(crate) fn from_parts(alphabet: SuccinctBitVector, wt: WaveletTree) -> Result<Self> {
        if alphabet.count_ones() != wt.sigma() || wt.counts().contains(&0) {
            return Err(Error::Corrupt(
                "alphabet map disagrees with the wavelet tree".into(),
            ));
        }
        Ok(Self { alphabet, wt })
    }

    pub fn universe(&self) -> usize {
        self.alphabet.len()
    }

    pub fn len(&self) -> usize {
        self.wt.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wt.is_empty()
    }

    pub fn alphabet(&self) -> &SuccinctBitVector {
        &self.alphabet
    }

    pub fn wavelet(&self) -> &WaveletTree {
        &self.wt
    }

    fn code(&self, c: usize) -> Option<usize> {
        (c < self.alphabet.len() && self.alphabet.get(c)).then(|| self.alphabet.rank1(c))
    }

    /// Symbol at 0-based position `i`.
    pub fn get(&self, i: usize) -> usize {
        self.alphabet
            .select1(self.wt.get(i) + 1)
            .expect("every code has a symbol")
    }

    /// Occurrences of `c` in the first `i` symbols.
    pub fn rank_prefix(&self, c: usize, i: usize) -> usize {
        self.code(c).map_or(0, |code| self.wt.rank_prefix(code, i))
    }

    /// Occurrences of `c` in positions `i..j`.
    pub fn count_range(&self, c: usize, i: usize, j: usize) -> usize {
        self.code(c)
            .map_or(0, |code| self.wt.count_range(code, i, j))
    }

    /// 0-based position of the `k`-th occurrence of `c` (`k >= 1`).
    pub fn select_pos(&self, c: usize, k: usize) -> Option<usize> {
        self.wt.select_pos(self.code(c)?, k)
    }

    /// Frequencies of the symbols that occur, in symbol order.
    pub fn counts(&self) -> Vec<usize> {
        self.wt.counts()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn example_sequence() {
        let a = [0, 0, 1, 1, 1, 1, 2, 2, 4, 4];
        let wt = WaveletTree::new(&a, 6).unwrap();
        assert_eq!(wt.rank(1, 6).unwrap(), 4);
        assert_eq!(wt.select(4, 1).unwrap(), 9);
        assert_eq!(wt.access(7).unwrap(), 2);
        assert!(wt.select(4, 3).is_err());
        assert!(wt.rank(6, 1).is_err());
    }

    #[test]
    fn constant_sequence() {
        let wt = WaveletTree::new(&[5; 10], 6).unwrap();
        assert_eq!(wt.rank(5, 10).unwrap(), 10);
        assert_eq!(wt.select(5, 3).unwrap(), 3);
    }

    #[test]
    fn unary_alphabet_has_no_levels() {
        let wt = WaveletTree::new(&[0; 7], 1).unwrap();
        assert!(wt.levels().is_empty());
        assert_eq!(wt.access(3).unwrap(), 0);
        assert_eq!(wt.rank(0, 5).unwrap(), 5);
        assert_eq!(wt.select(0, 7).unwrap(), 7);
        assert_eq!(wt.space_bits().payload_bits, 0);
    }

    #[test]
    fn empty_sequence() {
        let wt = WaveletTree::new(&[], 9).unwrap();
        assert_eq!(wt.rank(3, 0).unwrap(), 0);
        assert!(wt.select(3, 1).is_err());
        assert!(wt.access(1).is_err());
    }

    #[test]
    fn rejects_symbols_outside_alphabet() {
        assert!(WaveletTree::new(&[0, 3], 3).is_err());
    }

    #[test]
    fn random_against_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (sigma, mode) in [
            (256, BitVecMode::Compressed),
            (37, BitVecMode::Plain),
            (2, BitVecMode::Compressed),
        ] {
            let seq: Vec<usize> = (0..10_000).map(|_| rng.gen_range(0..sigma)).collect();
            let wt = WaveletTree::with_mode(&seq, sigma, mode).unwrap();
            let mut seen = vec![0usize; sigma];
            for (i, &c) in seq.iter().enumerate() {
                assert_eq!(wt.get(i), c);
                if i % 97 == 0 {
                    let probe = rng.gen_range(0..sigma);
                    assert_eq!(wt.rank_prefix(probe, i), seen[probe]);
                }
                seen[c] += 1;
                assert_eq!(wt.select_pos(c, seen[c]), Some(i));
            }
            for c in 0..sigma {
                assert_eq!(wt.rank_prefix(c, seq.len()), seen[c]);
                assert_eq!(wt.select_pos(c, seen[c] + 1), None);
            }
            assert_eq!(wt.counts(), seen);
            for _ in 0..500 {
                let c = rng.gen_range(0..sigma);
                let i = rng.gen_range(0..=seq.len());
                let j = rng.gen_range(i..=seq.len());
                let direct = seq[i..j].iter().filter(|&&x| x == c).count();
                assert_eq!(wt.count_range(c, i, j), direct);
            }
        }
    }

    #[test]
    fn node_entropy_is_log_multinomial() {
        let a = [0usize, 0, 1, 1, 1, 1, 2, 2, 4, 4];
        let wt = WaveletTree::new(&a, 6).unwrap();
        // 10! / (2! 4! 2! 2!) = 18900
        assert!((wt.node_entropy_bits() - 18900f64.log2()).abs() < 1e-9);
        let h0 = h0_from_counts(&[2, 4, 2, 2]);
        assert!(wt.node_entropy_bits() <= h0);
        assert!(wt.space_bits().payload_bits as f64 <= h0 + 2.0 * 4.0 + wt.node_count() as f64);
    }
}
