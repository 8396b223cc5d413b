use super::bitvec::{BitVecMode, SuccinctBitVector};
use super::SpaceBits;
use crate::{Error, Result};

/// Bits per leaf of the range min-max tree.
const LEAF_BITS: usize = 512;

/// Ordinal tree in balanced-parentheses form. Nodes are named by preorder
/// rank; node `v` is the `(v+1)`-th open parenthesis (a 1 bit).
///
/// Navigation uses the excess `E(j) = opens - closes` over `B[0..=j]` and a
/// min-max tree over fixed leaves: per leaf the excess before it, and per
/// tree node the minimum excess and its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinalTree {
    nodes: usize,
    bits: SuccinctBitVector,
    /// Excess before each leaf.
    leaf_base: Vec<i32>,
    /// Segment tree (1-based heap layout) of (min excess, count of min) over leaves.
    seg_min: Vec<i32>,
    seg_cnt: Vec<u32>,
    seg_size: usize,
}

impl OrdinalTree {
    /// Builds from `parents[v]` for nodes in preorder; `parents[0]` is ignored
    /// (the root). Children of a node appear in increasing preorder.
    pub fn from_preorder_parents(parents: &[usize]) -> Result<Self> {
        if parents.is_empty() {
            return Err(Error::InvalidParameter(
                "tree needs at least one node".into(),
            ));
        }
        let mut bits = Vec::with_capacity(2 * parents.len());
        let mut stack: Vec<usize> = vec![0];
        bits.push(true);
        for (v, &p) in parents.iter().enumerate().skip(1) {
            if p >= v {
                return Err(Error::MalformedGraph(format!(
                    "node {v} has parent {p}, which is not an earlier preorder node"
                )));
            }
            while let Some(&top) = stack.last() {
                if top == p {
                    break;
                }
                stack.pop();
                bits.push(false);
            }
            if stack.is_empty() {
                return Err(Error::MalformedGraph(format!(
                    "parent {p} of node {v} is closed; array is not in preorder"
                )));
            }
            stack.push(v);
            bits.push(true);
        }
        bits.extend(std::iter::repeat_n(false, stack.len()));
        Self::from_parentheses(SuccinctBitVector::from_bits(bits, BitVecMode::Plain))
    }

    /// Builds from a balanced parentheses sequence (1 = open).
    pub fn from_parentheses(bits: SuccinctBitVector) -> Result<Self> {
        let len = bits.len();
        if len == 0 || !len.is_multiple_of(2) {
            return Err(Error::Corrupt(
                "parentheses length must be even and non-zero".into(),
            ));
        }
        let nleaves = len.div_ceil(LEAF_BITS);
        let mut leaf_base = Vec::with_capacity(nleaves);
        let mut leaf_min = Vec::with_capacity(nleaves);
        let mut leaf_cnt = Vec::with_capacity(nleaves);
        let mut e: i64 = 0;
        for leaf in 0..nleaves {
            leaf_base.push(e as i32);
            let (mut mn, mut cnt) = (i64::MAX, 0u32);
            for j in leaf * LEAF_BITS..((leaf + 1) * LEAF_BITS).min(len) {
                e += if bits.get(j) { 1 } else { -1 };
                if e < 0 || (e == 0 && j + 1 != len) {
                    return Err(Error::Corrupt(format!(
                        "parentheses unbalanced at position {j}"
                    )));
                }
                if e < mn {
                    mn = e;
                    cnt = 1;
                } else if e == mn {
                    cnt += 1;
                }
            }
            leaf_min.push(mn as i32);
            leaf_cnt.push(cnt);
        }
        if e != 0 {
            return Err(Error::Corrupt("parentheses do not close".into()));
        }
        let seg_size = nleaves.next_power_of_two();
        let mut seg_min = vec![i32::MAX; 2 * seg_size];
        let mut seg_cnt = vec![0u32; 2 * seg_size];
        seg_min[seg_size..seg_size + nleaves].copy_from_slice(&leaf_min[..nleaves]);
        seg_cnt[seg_size..seg_size + nleaves].copy_from_slice(&leaf_cnt[..nleaves]);
        for i in (1..seg_size).rev() {
            let (l, r) = (2 * i, 2 * i + 1);
            let (m, c) = merge((seg_min[l], seg_cnt[l]), (seg_min[r], seg_cnt[r]));
            seg_min[i] = m;
            seg_cnt[i] = c;
        }
        Ok(Self {
            nodes: len / 2,
            bits,
            leaf_base,
            seg_min,
            seg_cnt,
            seg_size,
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn parentheses(&self) -> &SuccinctBitVector {
        &self.bits
    }

    fn check(&self, v: usize) -> Result<()> {
        if v >= self.nodes {
            return Err(Error::out_of_range(
                "tree node",
                v,
                format!("0..{}", self.nodes),
            ));
        }
        Ok(())
    }

    fn open_pos(&self, v: usize) -> usize {
        self.bits.select1(v + 1).expect("node exists")
    }

    fn node_at(&self, open: usize) -> usize {
        self.bits.rank1(open + 1) - 1
    }

    /// `E(j)`; `j = -1` maps to 0.
    fn excess(&self, j: isize) -> i64 {
        if j < 0 {
            0
        } else {
            let j = j as usize;
            2 * self.bits.rank1(j + 1) as i64 - (j as i64 + 1)
        }
    }

    fn step(&self, j: usize) -> i64 {
        if self.bits.get(j) {
            1
        } else {
            -1
        }
    }

    /// Smallest `j > from` with `E(j) = target`, where `target < E(from)`.
    fn fwd_search(&self, from: usize, target: i64) -> Option<usize> {
        let len = self.bits.len();
        let leaf = from / LEAF_BITS;
        let mut e = self.excess(from as isize);
        let leaf_end = ((leaf + 1) * LEAF_BITS).min(len);
        for j in from + 1..leaf_end {
            e += self.step(j);
            if e == target {
                return Some(j);
            }
        }
        let next = self.first_leaf_at_most(leaf + 1, target)?;
        let mut e = self.leaf_base[next] as i64;
        for j in next * LEAF_BITS..((next + 1) * LEAF_BITS).min(len) {
            e += self.step(j);
            if e == target {
                return Some(j);
            }
        }
        unreachable!("leaf minimum promised a hit")
    }

    /// Largest `j < from` (`j >= -1`) with `E(j) = target`, where `target < E(from - 1)`.
    fn bwd_search(&self, from: usize, target: i64) -> isize {
        let leaf = from / LEAF_BITS;
        let mut e = self.excess(from as isize - 1);
        let mut j = from as isize - 1;
        let leaf_start = (leaf * LEAF_BITS) as isize;
        while j >= leaf_start {
            if e == target {
                return j;
            }
            e -= self.step(j as usize);
            j -= 1;
        }
        if e == target {
            return j;
        }
        let Some(prev) = self.last_leaf_at_most(leaf, target) else {
            debug_assert_eq!(target, 0);
            return -1;
        };
        let start = prev * LEAF_BITS;
        let mut e = self.excess(((prev + 1) * LEAF_BITS) as isize - 1);
        let mut j = ((prev + 1) * LEAF_BITS) as isize - 1;
        while j >= start as isize {
            if e == target {
                return j;
            }
            e -= self.step(j as usize);
            j -= 1;
        }
        unreachable!("leaf minimum promised a hit")
    }

    /// First leaf index `>= from` whose minimum is `<= target`.
    fn first_leaf_at_most(&self, from: usize, target: i64) -> Option<usize> {
        let nleaves = self.leaf_base.len();
        if from >= nleaves {
            return None;
        }
        // climb until a right sibling subtree qualifies, then descend
        let mut i = self.seg_size + from;
        if (self.seg_min[i] as i64) <= target {
            return Some(from);
        }
        loop {
            if i == 1 {
                return None;
            }
            if i.is_multiple_of(2) && (self.seg_min[i + 1] as i64) <= target {
                i += 1;
                break;
            }
            i /= 2;
        }
        while i < self.seg_size {
            i = if (self.seg_min[2 * i] as i64) <= target {
                2 * i
            } else {
                2 * i + 1
            };
        }
        Some(i - self.seg_size)
    }

    /// Last leaf index `< before` whose minimum is `<= target`.
    fn last_leaf_at_most(&self, before: usize, target: i64) -> Option<usize> {
        if before == 0 {
            return None;
        }
        let mut i = self.seg_size + before - 1;
        if (self.seg_min[i] as i64) <= target {
            return Some(before - 1);
        }
        loop {
            if i == 1 {
                return None;
            }
            if i % 2 == 1 && (self.seg_min[i - 1] as i64) <= target {
                i -= 1;
                break;
            }
            i /= 2;
        }
        while i < self.seg_size {
            i = if (self.seg_min[2 * i + 1] as i64) <= target {
                2 * i + 1
            } else {
                2 * i
            };
        }
        Some(i - self.seg_size)
    }

    fn find_close(&self, open: usize) -> usize {
        let e = self.excess(open as isize);
        self.fwd_search(open, e - 1).expect("balanced")
    }

    /// Number of positions in `[a, b]` whose excess equals `value`, given
    /// that no position in the range has a smaller excess.
    fn count_value(&self, a: usize, b: usize, value: i64) -> usize {
        if a > b {
            return 0;
        }
        let (la, lb) = (a / LEAF_BITS, b / LEAF_BITS);
        if la == lb {
            return self.scan_count(a, b, value);
        }
        let mut total = self.scan_count(a, (la + 1) * LEAF_BITS - 1, value);
        total += self.scan_count(lb * LEAF_BITS, b, value);
        if la + 1 < lb {
            let (m, c) = self.seg_query(la + 1, lb - 1);
            if m as i64 == value {
                total += c as usize;
            }
        }
        total
    }

    fn scan_count(&self, a: usize, b: usize, value: i64) -> usize {
        let mut e = self.excess(a as isize - 1);
        let mut c = 0;
        for j in a..=b {
            e += self.step(j);
            if e == value {
                c += 1;
            }
        }
        c
    }

    /// Position of the `k`-th `j` in `[a, b]` with `E(j) = value` (same precondition).
    fn select_value(&self, a: usize, b: usize, value: i64, mut k: usize) -> Option<usize> {
        let (la, lb) = (a / LEAF_BITS, b / LEAF_BITS);
        let first_end = if la == lb {
            b
        } else {
            (la + 1) * LEAF_BITS - 1
        };
        match self.scan_select(a, first_end, value, k) {
            Ok(p) => return Some(p),
            Err(seen) => k -= seen,
        }
        if la == lb {
            return None;
        }
        let mut leaf = la + 1;
        while leaf < lb {
            // skip whole leaves using the segment tree
            let (hit_leaf, before) = self.seg_select(leaf, lb - 1, value, k);
            match hit_leaf {
                Some(l) => {
                    k -= before;
                    let s = l * LEAF_BITS;
                    return self.scan_select(s, s + LEAF_BITS - 1, value, k).ok();
                }
                None => {
                    k -= before;
                    leaf = lb;
                }
            }
        }
        self.scan_select(lb * LEAF_BITS, b, value, k).ok()
    }

    fn scan_select(
        &self,
        a: usize,
        b: usize,
        value: i64,
        k: usize,
    ) -> std::result::Result<usize, usize> {
        let mut e = self.excess(a as isize - 1);
        let mut seen = 0;
        for j in a..=b {
            e += self.step(j);
            if e == value {
                seen += 1;
                if seen == k {
                    return Ok(j);
                }
            }
        }
        Err(seen)
    }

    fn seg_query(&self, l: usize, r: usize) -> (i32, u32) {
        let mut acc = (i32::MAX, 0u32);
        let (mut lo, mut hi) = (l + self.seg_size, r + self.seg_size + 1);
        while lo < hi {
            if lo & 1 == 1 {
                acc = merge(acc, (self.seg_min[lo], self.seg_cnt[lo]));
                lo += 1;
            }
            if hi & 1 == 1 {
                hi -= 1;
                acc = merge(acc, (self.seg_min[hi], self.seg_cnt[hi]));
            }
            lo /= 2;
            hi /= 2;
        }
        acc
    }

    /// Within leaves `[l, r]`, find the leaf holding the `k`-th position with
    /// excess `value`. Returns the leaf and the count in leaves before it, or
    /// `None` and the total count in the range.
    fn seg_select(&self, l: usize, r: usize, value: i64, k: usize) -> (Option<usize>, usize) {
        let mut seen = 0usize;
        let hit = self.seg_select_rec(1, 0, self.seg_size - 1, l, r, value, k, &mut seen);
        (hit, seen)
    }

    #[allow(clippy::too_many_arguments)]
    fn seg_select_rec(
        &self,
        node: usize,
        nl: usize,
        nr: usize,
        l: usize,
        r: usize,
        value: i64,
        k: usize,
        seen: &mut usize,
    ) -> Option<usize> {
        if nr < l || nl > r {
            return None;
        }
        let cnt = if self.seg_min[node] as i64 == value {
            self.seg_cnt[node] as usize
        } else {
            0
        };
        if l <= nl && nr <= r {
            if *seen + cnt < k {
                *seen += cnt;
                return None;
            }
            if nl == nr {
                return Some(nl);
            }
        }
        if cnt == 0 && l <= nl && nr <= r {
            return None;
        }
        let mid = (nl + nr) / 2;
        self.seg_select_rec(2 * node, nl, mid, l, r, value, k, seen)
            .or_else(|| self.seg_select_rec(2 * node + 1, mid + 1, nr, l, r, value, k, seen))
    }

    /// Parent of `v`; the root has none.
    pub fn parent(&self, v: usize) -> Result<usize> {
        self.check(v)?;
        if v == 0 {
            return Err(Error::out_of_range(
                "non-root tree node",
                v,
                format!("1..{}", self.nodes),
            ));
        }
        let p = self.open_pos(v);
        let e = self.excess(p as isize);
        let j = self.bwd_search(p, e - 2);
        Ok(self.node_at((j + 1) as usize))
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check(v)?;
        let p = self.open_pos(v);
        let c = self.find_close(p);
        if c == p + 1 {
            return Ok(0);
        }
        Ok(self.count_value(p + 1, c - 1, self.excess(p as isize)))
    }

    /// The `i`-th child of `v` (1-based).
    pub fn child(&self, v: usize, i: usize) -> Result<usize> {
        self.check(v)?;
        let deg = self.degree(v)?;
        if i == 0 || i > deg {
            return Err(Error::out_of_range("child index", i, format!("1..={deg}")));
        }
        let p = self.open_pos(v);
        if i == 1 {
            return Ok(v + 1);
        }
        let c = self.find_close(p);
        let prev_close = self
            .select_value(p + 1, c - 1, self.excess(p as isize), i - 1)
            .expect("degree bounds the search");
        Ok(self.node_at(prev_close + 1))
    }

    /// Subtree size of `v`, including `v`.
    pub fn subtree_size(&self, v: usize) -> Result<usize> {
        self.check(v)?;
        let p = self.open_pos(v);
        Ok((self.find_close(p) - p).div_ceil(2))
    }

    pub fn space_bits(&self) -> SpaceBits {
        let bv = self.bits.space_bits();
        let nav =
            (self.leaf_base.len() * 32 + self.seg_min.len() * 32 + self.seg_cnt.len() * 32) as u64;
        SpaceBits {
            payload_bits: bv.payload_bits,
            directory_bits: bv.directory_bits + nav,
            entropy_bound_bits: 2.0 * self.nodes as f64,
        }
    }
}

fn merge(a: (i32, u32), b: (i32, u32)) -> (i32, u32) {
    use std::cmp::Ordering::*;
    match a.0.cmp(&b.0) {
        Less => a,
        Greater => b,
        Equal => (a.0, a.1 + b.1),
    }
}
