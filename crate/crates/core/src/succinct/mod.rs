//! Static succinct primitives: rank/select bitvectors (plain and
//! block-compressed), a balanced pointerless wavelet tree (optionally over
//! the effective alphabet of its input), and a balanced-parentheses ordinal
//! tree.
//!
//! Public positions are 1-based: `rank(b, i)` counts over `B[1..=i]`,
//! `select(b, k)` returns the 1-based position of the `k`-th `b`.

mod bitvec;
mod intvec;
mod tree;
mod wavelet;

pub use bitvec::{BitVecMode, SuccinctBitVector, BLOCK_BITS, SELECT_SAMPLE, SUPERBLOCK_BITS};
pub use intvec::IntVec;
pub use tree::OrdinalTree;
pub use wavelet::{MappedWaveletTree, WaveletTree};

/// Bit accounting for a built structure.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpaceBits {
    /// Stored data bits.
    pub payload_bits: u64,
    /// Rank/select/navigation overhead.
    pub directory_bits: u64,
    /// Information-theoretic target for the payload.
    pub entropy_bound_bits: f64,
}

impl std::ops::Add for SpaceBits {
    type Output = SpaceBits;
    fn add(self, o: SpaceBits) -> SpaceBits {
        SpaceBits {
            payload_bits: self.payload_bits + o.payload_bits,
            directory_bits: self.directory_bits + o.directory_bits,
            entropy_bound_bits: self.entropy_bound_bits + o.entropy_bound_bits,
        }
    }
}

/// Bits needed to store values in `0..=max`.
pub(crate) fn bit_width(max: u64) -> u32 {
    64 - max.leading_zeros()
}
