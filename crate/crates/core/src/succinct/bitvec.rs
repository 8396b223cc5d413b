use std::sync::OnceLock;

use super::intvec::{read_bits, write_bits, IntVec};
use super::{bit_width, SpaceBits};
use crate::{Error, Result};

/// Bits per block; compressed mode encodes each block as a (class, offset) pair.
pub const BLOCK_BITS: usize = 64;
/// Bits per superblock; absolute ranks and payload pointers are sampled here.
pub const SUPERBLOCK_BITS: usize = 1024;
/// One select sample per this many occurrences.
pub const SELECT_SAMPLE: usize = 4096;

const BLOCKS_PER_SUPER: usize = SUPERBLOCK_BITS / BLOCK_BITS;
const CLASS_WIDTH: u32 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitVecMode {
    /// One stored bit per bit.
    Plain,
    /// Each 64-bit block stored as its popcount class plus its index among
    /// all blocks of that class (`ceil(lg binom(64, class))` bits).
    Compressed,
}

struct Tables {
    binom: [[u64; 65]; 65],
    width: [u32; 65],
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut binom = [[0u64; 65]; 65];
        for n in 0..=64 {
            binom[n][0] = 1;
            for k in 1..=n {
                binom[n][k] = binom[n - 1][k - 1] + if k < n { binom[n - 1][k] } else { 0 };
            }
        }
        let mut width = [0u32; 65];
        for k in 0..=64 {
            width[k] = bit_width(binom[64][k] - 1);
        }
        Tables { binom, width }
    })
}

/// Offset width of a block of `blen` bits holding `class` ones.
fn offset_width(blen: usize, class: usize) -> u32 {
    let t = tables();
    if blen == BLOCK_BITS {
        t.width[class]
    } else {
        bit_width(t.binom[blen][class] - 1)
    }
}

/// Index of `word` among the 64-bit words with the same popcount.
fn encode_block(word: u64) -> u64 {
    let t = tables();
    let mut rest = word;
    let mut j = 1;
    let mut rank = 0u64;
    while rest != 0 {
        let p = rest.trailing_zeros() as usize;
        rank += t.binom[p][j];
        j += 1;
        rest &= rest - 1;
    }
    rank
}

/// Sparse blocks skip straight to each one; denser blocks scan every
/// position without branching on the data.
const SPARSE_CLASS: usize = 8;

/// Walks the block's ones from the top bit down while the position stays at
/// or above `floor`, calling `hit` with each. Returns the ones left below
/// `floor`.
#[inline]
fn walk_down(class: usize, mut rank: u64, floor: usize, mut hit: impl FnMut(usize)) -> usize {
    let t = tables();
    let mut j = class;
    let mut p = 64usize;
    if class <= SPARSE_CLASS {
        while j > 0 {
            p -= 1;
            while t.binom[p][j] > rank {
                p -= 1;
            }
            if p < floor {
                return j;
            }
            hit(p);
            rank -= t.binom[p][j];
            j -= 1;
        }
    } else {
        while p > floor && j > 0 {
            p -= 1;
            let c = t.binom[p][j];
            let take = (rank >= c) as usize;
            if take == 1 {
                hit(p);
            }
            rank -= c * take as u64;
            j -= take;
        }
    }
    j
}

fn decode_block(class: usize, rank: u64) -> u64 {
    let mut word = 0u64;
    walk_down(class, rank, 0, |p| word |= 1u64 << p);
    word
}

/// Ones below bit `off` in the block with this class and offset.
fn ones_below(class: usize, rank: u64, off: usize) -> usize {
    walk_down(class, rank, off, |_| {})
}

/// Bit `off` of the block with this class and offset.
fn bit_at(class: usize, rank: u64, off: usize) -> bool {
    let mut lowest = 64;
    walk_down(class, rank, off, |p| lowest = p);
    lowest == off
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Payload {
    Plain {
        words: Vec<u64>,
    },
    Compressed {
        classes: IntVec,
        offsets: Vec<u64>,
        offsets_len: usize,
        /// Offset bit position at the start of each superblock.
        super_ptr: IntVec,
    },
}

/// Static bitvector with rank, select and access.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccinctBitVector {
    len: usize,
    ones: usize,
    payload: Payload,
    /// Ones before each superblock, plus a final entry holding the total.
    super_rank: IntVec,
    select1_samples: IntVec,
    select0_samples: IntVec,
}

impl SuccinctBitVector {
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I, mode: BitVecMode) -> Self {
        let mut words = Vec::new();
        let mut len = 0usize;
        for b in bits {
            if len.is_multiple_of(64) {
                words.push(0);
            }
            if b {
                words[len / 64] |= 1u64 << (len % 64);
            }
            len += 1;
        }
        Self::from_words(words, len, mode)
    }

    /// Builds from LSB-first words; bits at or beyond `len` are ignored.
    pub fn from_words(mut words: Vec<u64>, len: usize, mode: BitVecMode) -> Self {
        words.resize(len.div_ceil(64), 0);
        if !len.is_multiple_of(64) {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % 64)) - 1;
        }
        let payload = match mode {
            BitVecMode::Plain => Payload::Plain { words },
            BitVecMode::Compressed => {
                let mut classes = IntVec::with_width(CLASS_WIDTH, words.len());
                let blen = |b: usize| (len - b * BLOCK_BITS).min(BLOCK_BITS);
                let total: usize = words
                    .iter()
                    .enumerate()
                    .map(|(b, w)| offset_width(blen(b), w.count_ones() as usize) as usize)
                    .sum();
                let mut offsets = vec![0u64; total.div_ceil(64)];
                let mut pos = 0usize;
                let mut ptrs = Vec::with_capacity(words.len().div_ceil(BLOCKS_PER_SUPER));
                for (b, &w) in words.iter().enumerate() {
                    if b % BLOCKS_PER_SUPER == 0 {
                        ptrs.push(pos as u64);
                    }
                    let class = w.count_ones() as usize;
                    classes.set(b, class as u64);
                    let width = offset_width(blen(b), class);
                    write_bits(&mut offsets, pos, width, encode_block(w));
                    pos += width as usize;
                }
                Payload::Compressed {
                    classes,
                    offsets,
                    offsets_len: total,
                    super_ptr: IntVec::from_values(&ptrs),
                }
            }
        };
        Self::with_directories(len, payload)
    }

    fn with_directories(len: usize, payload: Payload) -> Self {
        let mut bv = Self {
            len,
            ones: 0,
            payload,
            super_rank: IntVec::default(),
            select1_samples: IntVec::default(),
            select0_samples: IntVec::default(),
        };
        let nblocks = len.div_ceil(BLOCK_BITS);
        let nsuper = nblocks.div_ceil(BLOCKS_PER_SUPER);
        let mut ranks = Vec::with_capacity(nsuper + 1);
        let mut sel1 = Vec::new();
        let mut sel0 = Vec::new();
        let mut ones = 0usize;
        let mut zeros = 0usize;
        for b in 0..nblocks {
            let sb = b / BLOCKS_PER_SUPER;
            if b % BLOCKS_PER_SUPER == 0 {
                ranks.push(ones as u64);
            }
            let c = bv.block_popcount(b);
            let z = bv.block_len(b) - c;
            // record the superblock of every SELECT_SAMPLE-th occurrence
            while sel1.len() * SELECT_SAMPLE < ones + c {
                sel1.push(sb as u64);
            }
            while sel0.len() * SELECT_SAMPLE < zeros + z {
                sel0.push(sb as u64);
            }
            ones += c;
            zeros += z;
        }
        ranks.push(ones as u64);
        bv.ones = ones;
        bv.super_rank = IntVec::from_values(&ranks);
        bv.select1_samples = IntVec::from_values(&sel1);
        bv.select0_samples = IntVec::from_values(&sel0);
        bv
    }

    pub(crate) fn from_compressed_parts(
        len: usize,
        classes: IntVec,
        offsets: Vec<u64>,
        offsets_len: usize,
    ) -> Result<Self> {
        let t = tables();
        let nblocks = len.div_ceil(BLOCK_BITS);
        if classes.len() != nblocks || offsets.len() != offsets_len.div_ceil(64) {
            return Err(Error::Corrupt("bitvector part sizes disagree".into()));
        }
        let mut pos = 0usize;
        let mut ptrs = Vec::new();
        for b in 0..nblocks {
            if b % BLOCKS_PER_SUPER == 0 {
                ptrs.push(pos as u64);
            }
            let class = classes.get(b) as usize;
            let blen = (len - b * BLOCK_BITS).min(BLOCK_BITS);
            if class > blen {
                return Err(Error::Corrupt(format!("block {b} has class {class}")));
            }
            let width = offset_width(blen, class);
            if pos + width as usize > offsets_len {
                return Err(Error::Corrupt("offset stream too short".into()));
            }
            let off = read_bits(&offsets, pos, width);
            if off >= t.binom[blen][class] {
                return Err(Error::Corrupt(format!("block {b} offset out of range")));
            }
            if blen < BLOCK_BITS && decode_block(class, off) >> blen != 0 {
                return Err(Error::Corrupt("bits set past the end".into()));
            }
            pos += width as usize;
        }
        if pos != offsets_len {
            return Err(Error::Corrupt("offset stream length mismatch".into()));
        }
        let payload = Payload::Compressed {
            classes,
            offsets,
            offsets_len,
            super_ptr: IntVec::from_values(&ptrs),
        };
        Ok(Self::with_directories(len, payload))
    }

    pub(crate) fn compressed_parts(&self) -> Option<(&IntVec, &[u64], usize)> {
        match &self.payload {
            Payload::Compressed {
                classes,
                offsets,
                offsets_len,
                ..
            } => Some((classes, offsets, *offsets_len)),
            Payload::Plain { .. } => None,
        }
    }

    pub fn mode(&self) -> BitVecMode {
        match self.payload {
            Payload::Plain { .. } => BitVecMode::Plain,
            Payload::Compressed { .. } => BitVecMode::Compressed,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    fn block_len(&self, b: usize) -> usize {
        (self.len - b * BLOCK_BITS).min(BLOCK_BITS)
    }

    fn block_popcount(&self, b: usize) -> usize {
        match &self.payload {
            Payload::Plain { words } => words[b].count_ones() as usize,
            Payload::Compressed { classes, .. } => classes.get(b) as usize,
        }
    }

    /// The raw 64-bit word of block `b`.
    pub fn block_word(&self, b: usize) -> u64 {
        match &self.payload {
            Payload::Plain { words } => words[b],
            Payload::Compressed {
                classes, offsets, ..
            } => {
                let class = classes.get(b) as usize;
                let pos = self.offset_pos(b);
                decode_block(
                    class,
                    read_bits(offsets, pos, offset_width(self.block_len(b), class)),
                )
            }
        }
    }

    /// All blocks as plain words.
    pub fn to_words(&self) -> Vec<u64> {
        (0..self.len.div_ceil(BLOCK_BITS))
            .map(|b| self.block_word(b))
            .collect()
    }

    /// Bit at 0-based position `i`.
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        let b = i / BLOCK_BITS;
        match &self.payload {
            Payload::Plain { words } => (words[b] >> (i % BLOCK_BITS)) & 1 == 1,
            Payload::Compressed {
                classes, offsets, ..
            } => {
                let class = classes.get(b) as usize;
                let blen = self.block_len(b);
                if class == 0 || class == blen {
                    return class != 0;
                }
                let pos = self.offset_pos(b);
                bit_at(
                    class,
                    read_bits(offsets, pos, offset_width(blen, class)),
                    i % BLOCK_BITS,
                )
            }
        }
    }

    /// `(B[i], rank1(i))` for 0-based `i < len`, decoding the block once.
    pub fn access_rank1(&self, i: usize) -> (bool, usize) {
        debug_assert!(i < self.len);
        let b = i / BLOCK_BITS;
        let off = i % BLOCK_BITS;
        match &self.payload {
            Payload::Plain { words } => ((words[b] >> off) & 1 == 1, self.rank1(i)),
            Payload::Compressed {
                classes,
                offsets,
                super_ptr,
                ..
            } => {
                let sb = b / BLOCKS_PER_SUPER;
                let mut r = self.super_rank.get(sb) as usize;
                let mut pos = super_ptr.get(sb) as usize;
                let t = tables();
                for bb in sb * BLOCKS_PER_SUPER..b {
                    let c = classes.get(bb) as usize;
                    r += c;
                    pos += t.width[c] as usize;
                }
                let class = classes.get(b) as usize;
                let blen = self.block_len(b);
                if class == 0 || class == blen {
                    return (class != 0, r + class.min(off));
                }
                let rank = read_bits(offsets, pos, offset_width(blen, class));
                let mut lowest = 64;
                let below = walk_down(class, rank, off, |p| lowest = p);
                (lowest == off, r + below)
            }
        }
    }

    /// Bit position of block `b`'s offset in the compressed payload.
    fn offset_pos(&self, b: usize) -> usize {
        match &self.payload {
            Payload::Plain { .. } => 0,
            Payload::Compressed {
                classes, super_ptr, ..
            } => {
                let t = tables();
                let mut pos = super_ptr.get(b / BLOCKS_PER_SUPER) as usize;
                for bb in b - b % BLOCKS_PER_SUPER..b {
                    pos += t.width[classes.get(bb) as usize] as usize;
                }
                pos
            }
        }
    }

    /// Ones among the first `i` bits.
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        if i == self.len {
            return self.ones;
        }
        let b = i / BLOCK_BITS;
        let sb = b / BLOCKS_PER_SUPER;
        let off = i % BLOCK_BITS;
        let mut r = self.super_rank.get(sb) as usize;
        match &self.payload {
            Payload::Plain { words } => {
                for w in &words[sb * BLOCKS_PER_SUPER..b] {
                    r += w.count_ones() as usize;
                }
                if off > 0 {
                    r += (words[b] & ((1u64 << off) - 1)).count_ones() as usize;
                }
            }
            Payload::Compressed {
                classes,
                offsets,
                super_ptr,
                ..
            } => {
                let t = tables();
                let mut pos = super_ptr.get(sb) as usize;
                for bb in sb * BLOCKS_PER_SUPER..b {
                    let c = classes.get(bb) as usize;
                    r += c;
                    pos += t.width[c] as usize;
                }
                if off > 0 {
                    let class = classes.get(b) as usize;
                    let blen = self.block_len(b);
                    r += if class == 0 || class == blen {
                        class.min(off)
                    } else {
                        ones_below(
                            class,
                            read_bits(offsets, pos, offset_width(blen, class)),
                            off,
                        )
                    };
                }
            }
        }
        r
    }

    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    /// 0-based position of the `k`-th one (`k >= 1`).
    pub fn select1(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.ones {
            return None;
        }
        let s = (k - 1) / SELECT_SAMPLE;
        let lo = self.select1_samples.get(s) as usize;
        let hi = if s + 1 < self.select1_samples.len() {
            self.select1_samples.get(s + 1) as usize
        } else {
            self.super_rank.len() - 2
        };
        // last superblock in [lo, hi] with fewer than k ones before it
        let (mut a, mut b) = (lo, hi);
        while a < b {
            let mid = (a + b).div_ceil(2);
            if (self.super_rank.get(mid) as usize) < k {
                a = mid;
            } else {
                b = mid - 1;
            }
        }
        let sb = a;
        let mut rem = k - self.super_rank.get(sb) as usize;
        let mut blk = sb * BLOCKS_PER_SUPER;
        loop {
            let c = self.block_popcount(blk);
            if rem <= c {
                return Some(blk * BLOCK_BITS + select_in_word(self.block_word(blk), rem));
            }
            rem -= c;
            blk += 1;
        }
    }

    /// 0-based position of the `k`-th zero (`k >= 1`).
    pub fn select0(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.count_zeros() {
            return None;
        }
        let zeros_before =
            |sb: usize| (sb * SUPERBLOCK_BITS).min(self.len) - self.super_rank.get(sb) as usize;
        let s = (k - 1) / SELECT_SAMPLE;
        let lo = self.select0_samples.get(s) as usize;
        let hi = if s + 1 < self.select0_samples.len() {
            self.select0_samples.get(s + 1) as usize
        } else {
            self.super_rank.len() - 2
        };
        let (mut a, mut b) = (lo, hi);
        while a < b {
            let mid = (a + b).div_ceil(2);
            if zeros_before(mid) < k {
                a = mid;
            } else {
                b = mid - 1;
            }
        }
        let sb = a;
        let mut rem = k - zeros_before(sb);
        let mut blk = sb * BLOCKS_PER_SUPER;
        loop {
            let blen = self.block_len(blk);
            let z = blen - self.block_popcount(blk);
            if rem <= z {
                let mask = if blen == 64 {
                    u64::MAX
                } else {
                    (1u64 << blen) - 1
                };
                return Some(blk * BLOCK_BITS + select_in_word(!self.block_word(blk) & mask, rem));
            }
            rem -= z;
            blk += 1;
        }
    }

    /// `B[i]` for 1-based `i`.
    pub fn access(&self, i: usize) -> Result<bool> {
        if i == 0 || i > self.len {
            return Err(Error::out_of_range(
                "bitvector position",
                i,
                format!("1..={}", self.len),
            ));
        }
        Ok(self.get(i - 1))
    }

    /// Number of `bit` values in `B[1..=i]`, `i` in `0..=len`.
    pub fn rank(&self, bit: bool, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(Error::out_of_range(
                "rank position",
                i,
                format!("0..={}", self.len),
            ));
        }
        Ok(if bit { self.rank1(i) } else { self.rank0(i) })
    }

    /// 1-based position of the `k`-th `bit`.
    pub fn select(&self, bit: bool, k: usize) -> Result<usize> {
        let found = if bit {
            self.select1(k)
        } else {
            self.select0(k)
        };
        let count = if bit { self.ones } else { self.count_zeros() };
        found
            .map(|p| p + 1)
            .ok_or_else(|| Error::out_of_range("select rank", k, format!("1..={count}")))
    }

    pub fn space_bits(&self) -> SpaceBits {
        let mut directory = self.super_rank.size_bits()
            + self.select1_samples.size_bits()
            + self.select0_samples.size_bits();
        let payload = match &self.payload {
            Payload::Plain { .. } => self.len as u64,
            Payload::Compressed {
                classes,
                offsets_len,
                super_ptr,
                ..
            } => {
                directory += classes.size_bits() + super_ptr.size_bits();
                *offsets_len as u64
            }
        };
        SpaceBits {
            payload_bits: payload,
            directory_bits: directory,
            entropy_bound_bits: lg_binomial(self.len, self.ones),
        }
    }
}

/// 0-based index of the `k`-th set bit of `word` (`k >= 1`).
fn select_in_word(mut word: u64, k: usize) -> usize {
    for _ in 1..k {
        word &= word - 1;
    }
    word.trailing_zeros() as usize
}

/// `lg binom(n, k)`.
pub(crate) fn lg_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k)
        .map(|i| ((n - i) as f64 / (i + 1) as f64).log2())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn parse(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn block_codec_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let w: u64 = rng.gen::<u64>() & rng.gen::<u64>();
            let c = w.count_ones() as usize;
            let r = encode_block(w);
            assert!(r < tables().binom[64][c]);
            assert_eq!(decode_block(c, r), w);
        }
        assert_eq!(decode_block(64, encode_block(u64::MAX)), u64::MAX);
        assert_eq!(decode_block(0, 0), 0);
    }

    #[test]
    fn small_example() {
        for mode in [BitVecMode::Plain, BitVecMode::Compressed] {
            let bv = SuccinctBitVector::from_bits(parse("10110"), mode);
            assert_eq!(bv.rank(true, 3).unwrap(), 2);
            assert_eq!(bv.select(true, 2).unwrap(), 3);
            assert!(bv.access(4).unwrap());
            assert_eq!(bv.rank(true, 0).unwrap(), 0);
            assert!(bv.access(0).is_err());
            assert!(bv.access(6).is_err());
            assert!(bv.rank(true, 6).is_err());
        }
    }

    #[test]
    fn all_zeros() {
        for mode in [BitVecMode::Plain, BitVecMode::Compressed] {
            let bv = SuccinctBitVector::from_bits(vec![false; 8], mode);
            assert_eq!(bv.rank(true, 8).unwrap(), 0);
            assert!(matches!(bv.select(true, 1), Err(Error::OutOfRange { .. })));
            assert_eq!(bv.select(false, 8).unwrap(), 8);
        }
    }

    #[test]
    fn empty() {
        let bv = SuccinctBitVector::from_bits(Vec::new(), BitVecMode::Compressed);
        assert_eq!(bv.rank(true, 0).unwrap(), 0);
        assert!(bv.select(false, 1).is_err());
        assert_eq!(bv.space_bits().payload_bits, 0);
    }

    fn check_against_scan(bits: &[bool], mode: BitVecMode) {
        let bv = SuccinctBitVector::from_bits(bits.iter().copied(), mode);
        let mut ones = 0;
        let mut zeros = 0;
        for (i, &b) in bits.iter().enumerate() {
            assert_eq!(bv.rank1(i), ones, "rank1({i})");
            assert_eq!(bv.get(i), b);
            assert_eq!(bv.access_rank1(i), (b, ones));
            if b {
                ones += 1;
                assert_eq!(bv.select1(ones), Some(i));
            } else {
                zeros += 1;
                assert_eq!(bv.select0(zeros), Some(i));
            }
        }
        assert_eq!(bv.rank1(bits.len()), ones);
        assert_eq!(bv.select1(ones + 1), None);
        assert_eq!(bv.select0(zeros + 1), None);
    }

    #[test]
    fn random_against_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for density in [0.01, 0.3, 0.5, 0.97] {
            let bits: Vec<bool> = (0..10_000).map(|_| rng.gen_bool(density)).collect();
            check_against_scan(&bits, BitVecMode::Plain);
            check_against_scan(&bits, BitVecMode::Compressed);
        }
    }

    #[test]
    fn sparse_long_vector_hits_select_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let bits: Vec<bool> = (0..300_000).map(|_| rng.gen_bool(0.2)).collect();
        check_against_scan(&bits, BitVecMode::Compressed);
    }

    #[test]
    fn compressed_payload_near_entropy() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let bits: Vec<bool> = (0..64_000).map(|_| rng.gen_bool(0.05)).collect();
        let bv = SuccinctBitVector::from_bits(bits, BitVecMode::Compressed);
        let s = bv.space_bits();
        let blocks = 1000.0;
        assert!((s.payload_bits as f64) <= s.entropy_bound_bits + blocks);
        assert!(s.payload_bits < 64_000 / 2);
    }

    #[test]
    fn parts_round_trip() {
        let bits: Vec<bool> = (0..1000).map(|i| i % 7 == 0 || i % 11 == 3).collect();
        let bv = SuccinctBitVector::from_bits(bits, BitVecMode::Compressed);
        let (c, o, l) = bv.compressed_parts().unwrap();
        let back =
            SuccinctBitVector::from_compressed_parts(bv.len(), c.clone(), o.to_vec(), l).unwrap();
        assert_eq!(back, bv);
    }

    proptest! {
        #[test]
        fn select_rank_inverse(bits in proptest::collection::vec(any::<bool>(), 0..3000)) {
            let bv = SuccinctBitVector::from_bits(bits.clone(), BitVecMode::Compressed);
            for k in 1..=bv.count_ones() {
                let p = bv.select(true, k).unwrap();
                prop_assert_eq!(bv.rank(true, p).unwrap(), k);
            }
            for i in 0..=bits.len() {
                let r = bv.rank(true, i).unwrap();
                if r >= 1 {
                    prop_assert!(bv.select(true, r).unwrap() <= i);
                }
            }
        }
    }
}
