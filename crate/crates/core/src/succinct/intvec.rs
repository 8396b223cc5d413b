use super::bit_width;

/// Fixed-width packed integer array, LSB-first in 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntVec {
    width: u32,
    len: usize,
    words: Vec<u64>,
}

impl IntVec {
    pub fn with_width(width: u32, len: usize) -> Self {
        assert!(width <= 64);
        let words = vec![0u64; (len * width as usize).div_ceil(64)];
        Self { width, len, words }
    }

    /// Packs `values` using the smallest width that fits all of them.
    pub fn from_values(values: &[u64]) -> Self {
        let max = values.iter().copied().max().unwrap_or(0);
        let mut v = Self::with_width(bit_width(max), values.len());
        for (i, &x) in values.iter().enumerate() {
            v.set(i, x);
        }
        v
    }

    pub(crate) fn from_words(width: u32, len: usize, words: Vec<u64>) -> Option<Self> {
        if width > 64 || words.len() != (len * width as usize).div_ceil(64) {
            return None;
        }
        Some(Self { width, len, words })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn size_bits(&self) -> u64 {
        (self.len * self.width as usize) as u64
    }

    pub fn set(&mut self, i: usize, value: u64) {
        assert!(i < self.len);
        if self.width == 0 {
            debug_assert_eq!(value, 0);
            return;
        }
        write_bits(&mut self.words, i * self.width as usize, self.width, value);
    }

    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        if self.width == 0 {
            return 0;
        }
        read_bits(&self.words, i * self.width as usize, self.width)
    }
}

/// Reads `width` (<= 64) bits starting at bit `pos`.
pub(crate) fn read_bits(words: &[u64], pos: usize, width: u32) -> u64 {
    if width == 0 {
        return 0;
    }
    let w = pos / 64;
    let off = (pos % 64) as u32;
    let mask = if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    };
    let lo = words[w] >> off;
    if off + width <= 64 {
        lo & mask
    } else {
        (lo | (words[w + 1] << (64 - off))) & mask
    }
}

/// Writes the low `width` bits of `value` at bit `pos`; the target bits must be zero.
pub(crate) fn write_bits(words: &mut [u64], pos: usize, width: u32, value: u64) {
    if width == 0 {
        return;
    }
    let w = pos / 64;
    let off = (pos % 64) as u32;
    let mask = if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    };
    let value = value & mask;
    words[w] = (words[w] & !(mask << off)) | (value << off);
    if off + width > 64 {
        let hi_bits = off + width - 64;
        let hi_mask = (1u64 << hi_bits) - 1;
        words[w + 1] = (words[w + 1] & !hi_mask) | (value >> (64 - off));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn packs_and_unpacks(values in proptest::collection::vec(any::<u64>(), 0..200), shift in 0u32..64) {
            let values: Vec<u64> = values.into_iter().map(|v| v >> shift).collect();
            let iv = IntVec::from_values(&values);
            for (i, &v) in values.iter().enumerate() {
                prop_assert_eq!(iv.get(i), v);
            }
        }
    }

    #[test]
    fn zero_width() {
        let iv = IntVec::from_values(&[0, 0, 0]);
        assert_eq!(iv.width(), 0);
        assert_eq!(iv.get(2), 0);
        assert_eq!(iv.size_bits(), 0);
    }
}
