//! The compressed query structure and its `.upag` binary format.
//!
//! In the unlabelled layout a graph is an ordinal tree `T` (every vertex's
//! minimal-rank out-neighbour is its parent) plus a wavelet tree over `A'`,
//! the remaining `M - 1` out-neighbours of every vertex. Vertices are named
//! by preorder rank in `T`. The labelled layout keeps the original labels
//! and stores only a wavelet tree over the full adjacency string. Either
//! wavelet tree runs over the vertices that occur in its string, with a
//! compressed bitvector mapping them back to vertex ids.
//!
//! `A'` positions are 1-based; the non-parent out-neighbours of `v` live in
//! `A'[(v-1)(M-1)+1 ..= v(M-1)]`.

use crate::construct::{build_labelled, build_with, sigma_rank, BuildOutput, SigmaRank};
use crate::entropy::{budgets, h0_from_counts};
use crate::graph::{Dag, Vertex};
use crate::succinct::{
    BitVecMode, IntVec, MappedWaveletTree, OrdinalTree, SpaceBits, SuccinctBitVector, WaveletTree,
};
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"UPAG";
pub const FORMAT_VERSION: u16 = 1;
const FLAG_LABELLED: u16 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Layout {
    Unlabelled {
        tree: OrdinalTree,
        a_prime: MappedWaveletTree,
    },
    Labelled {
        a: MappedWaveletTree,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedGraph {
    n: usize,
    m: usize,
    layout: Layout,
    /// Input label to stored label. Not part of the space accounting.
    relabel: Option<Vec<Vertex>>,
}

/// Component-wise bit counts.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceReport {
    pub tree_payload_bits: u64,
    pub tree_directory_bits: u64,
    pub wt_payload_bits: u64,
    pub wt_directory_bits: u64,
    /// The bitvector marking which vertices occur in the stored string.
    pub alphabet_payload_bits: u64,
    pub alphabet_directory_bits: u64,
    pub metadata_bits: u64,
    pub total_bits: u64,
    /// `H0` of the stored string (`A'` or `A`).
    pub h0_stored_bits: f64,
    /// Distinct symbols in the stored string.
    pub distinct_symbols: usize,
    /// Degree entropy recovered from the stored in-degrees.
    pub h_deg: f64,
    /// `H_deg (1 - 1/M) + 2n`.
    pub entropy_budget: f64,
    /// `(M - 1) n lg n + 2n`.
    pub worstcase_budget: f64,
}

impl SpaceReport {
    pub fn payload_bits(&self) -> u64 {
        self.tree_payload_bits + self.wt_payload_bits + self.alphabet_payload_bits
    }

    pub fn directory_bits(&self) -> u64 {
        self.tree_directory_bits + self.wt_directory_bits + self.alphabet_directory_bits
    }
}

impl CompressedGraph {
    /// Unlabelled layout with the default in-degree ranking.
    pub fn build(d: &Dag) -> Result<Self> {
        Self::build_with(d, &sigma_rank(d))
    }

    pub fn build_with(d: &Dag, sigma: &SigmaRank) -> Result<Self> {
        Self::from_build_output(&build_with(d, sigma))
    }

    pub fn from_build_output(out: &BuildOutput) -> Result<Self> {
        let tree = OrdinalTree::from_preorder_parents(&out.parents)?;
        let a_prime = MappedWaveletTree::new(&out.a_prime, out.n + 1)?;
        Ok(Self {
            n: out.n,
            m: out.m,
            layout: Layout::Unlabelled { tree, a_prime },
            relabel: Some(out.relabel.clone()),
        })
    }

    /// Labelled layout: a wavelet tree over the adjacency string only.
    pub fn build_labelled(d: &Dag) -> Result<Self> {
        let a = MappedWaveletTree::new(&build_labelled(d), d.n() + 1)?;
        Ok(Self {
            n: d.n(),
            m: d.m(),
            layout: Layout::Labelled { a },
            relabel: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.n + 1
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn is_labelled(&self) -> bool {
        matches!(self.layout, Layout::Labelled { .. })
    }

    pub fn relabel(&self) -> Option<&[Vertex]> {
        self.relabel.as_deref()
    }

    pub fn without_relabel(mut self) -> Self {
        self.relabel = None;
        self
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v > self.n {
            return Err(Error::out_of_range("vertex", v, format!("0..={}", self.n)));
        }
        Ok(())
    }

    /// Stored block width: `M - 1` for `A'`, `M` for `A`.
    fn width(&self) -> usize {
        match self.layout {
            Layout::Unlabelled { .. } => self.m - 1,
            Layout::Labelled { .. } => self.m,
        }
    }

    fn string(&self) -> &MappedWaveletTree {
        match &self.layout {
            Layout::Unlabelled { a_prime, .. } => a_prime,
            Layout::Labelled { a } => a,
        }
    }

    /// Source vertex of the edge stored at 1-based string position `i`.
    fn source(&self, i: usize) -> Vertex {
        i.div_ceil(self.width())
    }

    /// The `i`-th out-neighbour of `v` (1-based); the tree parent comes first.
    pub fn out_neighbour(&self, v: Vertex, i: usize) -> Result<Vertex> {
        self.check_vertex(v)?;
        if v == 0 {
            return Err(Error::out_of_range(
                "vertex with out-edges",
                v,
                format!("1..={}", self.n),
            ));
        }
        if i == 0 || i > self.m {
            return Err(Error::out_of_range(
                "out-neighbour index",
                i,
                format!("1..={}", self.m),
            ));
        }
        match &self.layout {
            Layout::Unlabelled { tree, a_prime } => {
                if i == 1 {
                    tree.parent(v)
                } else {
                    Ok(a_prime.get((v - 1) * (self.m - 1) + i - 2))
                }
            }
            Layout::Labelled { a } => Ok(a.get((v - 1) * self.m + i - 1)),
        }
    }

    /// The `i`-th in-neighbour of `v` (1-based): tree children first, then
    /// sources of the occurrences of `v` in the stored string, by position.
    pub fn in_neighbour(&self, v: Vertex, i: usize) -> Result<Vertex> {
        self.check_vertex(v)?;
        let tree_deg = self.tree_degree(v)?;
        if i >= 1 && i <= tree_deg {
            if let Layout::Unlabelled { tree, .. } = &self.layout {
                return tree.child(v, i);
            }
        }
        let k = i.checked_sub(tree_deg).filter(|&k| k >= 1);
        let pos = k.and_then(|k| self.string().select_pos(v, k));
        match pos {
            Some(p) => Ok(self.source(p + 1)),
            None => Err(Error::out_of_range(
                "in-neighbour index",
                i,
                format!("1..={}", self.degree_in(v).unwrap_or(0)),
            )),
        }
    }

    fn tree_degree(&self, v: Vertex) -> Result<usize> {
        match &self.layout {
            Layout::Unlabelled { tree, .. } => tree.degree(v),
            Layout::Labelled { .. } => Ok(0),
        }
    }

    pub fn degree_in(&self, v: Vertex) -> Result<usize> {
        self.check_vertex(v)?;
        let s = self.string();
        Ok(self.tree_degree(v)? + s.rank_prefix(v, s.len()))
    }

    pub fn degree_out(&self, v: Vertex) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(if v == 0 { 0 } else { self.m })
    }

    pub fn degree_total(&self, v: Vertex) -> Result<usize> {
        Ok(self.degree_in(v)? + self.degree_out(v)?)
    }

    /// Does `v` occur among the stored out-neighbours of `u`?
    fn in_stored_block(&self, u: Vertex, v: Vertex) -> bool {
        if u == 0 {
            return false;
        }
        let w = self.width();
        if w == 0 {
            return false;
        }
        let s = self.string();
        s.count_range(v, (u - 1) * w, u * w) > 0
    }

    fn is_tree_parent(&self, child: Vertex, parent: Vertex) -> Result<bool> {
        match &self.layout {
            Layout::Unlabelled { tree, .. } if child != 0 => Ok(tree.parent(child)? == parent),
            _ => Ok(false),
        }
    }

    /// True iff there is an edge between `u` and `v` in either direction.
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.is_tree_parent(v, u)?
            || self.is_tree_parent(u, v)?
            || self.in_stored_block(u, v)
            || self.in_stored_block(v, u))
    }

    pub fn neighbours_out(&self, v: Vertex) -> Result<Vec<Vertex>> {
        let d = self.degree_out(v)?;
        (1..=d).map(|i| self.out_neighbour(v, i)).collect()
    }

    pub fn neighbours_in(&self, v: Vertex) -> Result<Vec<Vertex>> {
        self.check_vertex(v)?;
        let mut out = Vec::new();
        if let Layout::Unlabelled { tree, .. } = &self.layout {
            let d = tree.degree(v)?;
            out.extend(
                (1..=d)
                    .map(|i| tree.child(v, i))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let s = self.string();
        let occ = s.rank_prefix(v, s.len());
        out.extend((1..=occ).map(|k| self.source(s.select_pos(v, k).expect("counted") + 1)));
        Ok(out)
    }

    /// Decodes the stored graph back into a DAG over stored labels. The
    /// labels need not be an arrival order, so the result is returned as
    /// out-lists rather than a [`Dag`].
    pub fn out_lists(&self) -> Result<Vec<Vec<Vertex>>> {
        (1..=self.n).map(|v| self.neighbours_out(v)).collect()
    }

    pub fn space_report(&self) -> SpaceReport {
        let tree = match &self.layout {
            Layout::Unlabelled { tree, .. } => tree.space_bits(),
            Layout::Labelled { .. } => SpaceBits::default(),
        };
        let wt = self.string().wavelet().space_bits();
        let alphabet = self.string().alphabet().space_bits();
        let counts = self.string().counts();
        let distinct = counts.iter().filter(|&&c| c > 0).count();
        let h0_stored = h0_from_counts(&counts);
        // n, M, universe, sigma, string length, level count
        let metadata_bits = 6 * 64;
        let total = tree.payload_bits
            + tree.directory_bits
            + wt.payload_bits
            + wt.directory_bits
            + alphabet.payload_bits
            + alphabet.directory_bits
            + metadata_bits;
        let mut in_counts = vec![0usize; self.n + 1];
        for (v, slot) in in_counts.iter_mut().enumerate() {
            *slot = self.degree_in(v).expect("in range");
        }
        in_counts.retain(|&c| c > 0);
        let h_deg = h0_from_counts(&in_counts);
        let budgets = budgets(self.n, self.m, h_deg);
        SpaceReport {
            tree_payload_bits: tree.payload_bits,
            tree_directory_bits: tree.directory_bits,
            wt_payload_bits: wt.payload_bits,
            wt_directory_bits: wt.directory_bits,
            alphabet_payload_bits: alphabet.payload_bits,
            alphabet_directory_bits: alphabet.directory_bits,
            metadata_bits,
            total_bits: total,
            h0_stored_bits: h0_stored,
            distinct_symbols: distinct,
            h_deg,
            entropy_budget: budgets.entropy_budget,
            worstcase_budget: budgets.worstcase_budget,
        }
    }

    /// Serialises to the `.upag` format. The relabel map is not included.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::default();
        w.bytes(MAGIC);
        w.u16(FORMAT_VERSION);
        w.u16(if self.is_labelled() { FLAG_LABELLED } else { 0 });
        w.u64(self.m as u64);
        w.u64(self.n as u64);
        match &self.layout {
            Layout::Unlabelled { tree, .. } => {
                let bp = tree.parentheses();
                w.u64(bp.len() as u64);
                for word in bp.to_words() {
                    w.u64(word);
                }
            }
            Layout::Labelled { .. } => w.u64(0),
        }
        let alphabet = self.string().alphabet();
        w.u64(alphabet.len() as u64);
        w.bitvector(alphabet);
        let wt = self.string().wavelet();
        w.u64(wt.sigma() as u64);
        w.u64(wt.len() as u64);
        w.u64(wt.levels().len() as u64);
        for level in wt.levels() {
            w.u64(level.len() as u64);
        }
        for level in wt.levels() {
            w.bitvector(level);
        }
        let crc = crc32fast::hash(&w.buf);
        w.u32(crc);
        w.buf
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { buf: bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::BadMagic);
        }
        let version = r.u16()?;
        if version != FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                found: version,
                expected: FORMAT_VERSION,
            });
        }
        let flags = r.u16()?;
        if flags & !FLAG_LABELLED != 0 {
            return Err(Error::Corrupt(format!("unknown flags {flags:#06x}")));
        }
        let labelled = flags & FLAG_LABELLED != 0;
        let m = r.usize()?;
        let n = r.usize()?;
        if m == 0 || n == 0 {
            return Err(Error::Corrupt("M and n must be positive".into()));
        }
        let tree_bits = r.usize()?;
        let tree_words = r.words(tree_bits.div_ceil(64))?;
        let universe = r.usize()?;
        let alphabet = r.bitvector(universe)?;
        let sigma = r.usize()?;
        let len = r.usize()?;
        let nlev = r.usize()?;
        if nlev > 64 {
            return Err(Error::Corrupt("too many wavelet levels".into()));
        }
        let mut lens = Vec::with_capacity(nlev);
        for _ in 0..nlev {
            lens.push(r.usize()?);
        }
        let mut levels = Vec::with_capacity(nlev);
        for &l in &lens {
            levels.push(r.bitvector(l)?);
        }
        let body_end = r.pos;
        let stored = r.u32()?;
        if r.pos != bytes.len() {
            return Err(Error::Corrupt(format!(
                "{} trailing bytes",
                bytes.len() - r.pos
            )));
        }
        let computed = crc32fast::hash(&bytes[..body_end]);
        if stored != computed {
            return Err(Error::ChecksumMismatch { stored, computed });
        }

        if universe != n + 1 {
            return Err(Error::Corrupt(format!(
                "alphabet universe {universe} does not match n + 1"
            )));
        }
        let string =
            MappedWaveletTree::from_parts(alphabet, WaveletTree::from_levels(sigma, len, levels)?)?;
        let layout = if labelled {
            if tree_bits != 0 || len != n * m {
                return Err(Error::Corrupt("labelled layout shape".into()));
            }
            Layout::Labelled { a: string }
        } else {
            if tree_bits != 2 * (n + 1) || len != n * (m - 1) {
                return Err(Error::Corrupt("unlabelled layout shape".into()));
            }
            let bp = SuccinctBitVector::from_words(tree_words, tree_bits, BitVecMode::Plain);
            let tree = OrdinalTree::from_parentheses(bp)?;
            Layout::Unlabelled {
                tree,
                a_prime: string,
            }
        };
        let g = Self {
            n,
            m,
            layout,
            relabel: None,
        };
        g.validate_sources()?;
        Ok(g)
    }

    /// Every stored out-neighbour must be a valid vertex other than its source.
    fn validate_sources(&self) -> Result<()> {
        let s = self.string();
        for i in 0..s.len() {
            let target = s.get(i);
            if target == self.source(i + 1) {
                return Err(Error::Corrupt(format!(
                    "self-loop stored at position {}",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Sidecar text for the relabel map, if retained.
    pub fn relabel_text(&self) -> Option<String> {
        self.relabel.as_ref().map(|r| {
            r.iter()
                .enumerate()
                .map(|(old, new)| format!("{old} {new}\n"))
                .collect()
        })
    }
}

#[derive(Default)]
struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }
    fn u16(&mut self, x: u16) {
        self.buf.extend_from_slice(&x.to_le_bytes());
    }
    fn u32(&mut self, x: u32) {
        self.buf.extend_from_slice(&x.to_le_bytes());
    }
    fn u64(&mut self, x: u64) {
        self.buf.extend_from_slice(&x.to_le_bytes());
    }
    /// Class words, offset bit length, offset words. The length is written by the caller.
    fn bitvector(&mut self, bv: &SuccinctBitVector) {
        let (classes, offsets, offsets_len) = bv.compressed_parts().expect("compressed bitvector");
        for &word in classes.words() {
            self.u64(word);
        }
        self.u64(offsets_len as u64);
        for &word in offsets {
            self.u64(word);
        }
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn truncated(&self, want: usize) -> Error {
        Error::Truncated {
            offset: self.pos,
            needed: want.saturating_sub(self.buf.len() - self.pos),
        }
    }

    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < k {
            return Err(self.truncated(k));
        }
        let s = &self.buf[self.pos..self.pos + k];
        self.pos += k;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(
            self.take(2)?.try_into().expect("2 bytes"),
        ))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(
            self.take(4)?.try_into().expect("4 bytes"),
        ))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(
            self.take(8)?.try_into().expect("8 bytes"),
        ))
    }

    fn usize(&mut self) -> Result<usize> {
        let x = self.u64()?;
        usize::try_from(x).map_err(|_| Error::Corrupt(format!("value {x} does not fit in usize")))
    }

    fn bitvector(&mut self, len: usize) -> Result<SuccinctBitVector> {
        let nblocks = len.div_ceil(64);
        let class_bits = nblocks
            .checked_mul(7)
            .ok_or_else(|| self.truncated(usize::MAX))?;
        let class_words = self.words(class_bits.div_ceil(64))?;
        let classes = IntVec::from_words(7, nblocks, class_words)
            .ok_or_else(|| Error::Corrupt("class array shape".into()))?;
        let offsets_len = self.usize()?;
        let offsets = self.words(offsets_len.div_ceil(64))?;
        SuccinctBitVector::from_compressed_parts(len, classes, offsets, offsets_len)
    }

    fn words(&mut self, count: usize) -> Result<Vec<u64>> {
        let bytes = count
            .checked_mul(8)
            .ok_or_else(|| self.truncated(usize::MAX))?;
        let raw = self.take(bytes)?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{sigma_rank_with, TieBreak};

    fn example_n5() -> CompressedGraph {
        let d = Dag::new(3, vec![0, 0, 0, 1, 1, 1, 1, 1, 1, 3, 2, 2, 3, 4, 4]).unwrap();
        let sigma = sigma_rank_with(&d, TieBreak::Priority(vec![0, 0, 2, 0, 3, 0])).unwrap();
        CompressedGraph::build_with(&d, &sigma).unwrap()
    }

    #[test]
    fn example_queries() {
        let g = example_n5();
        assert_eq!(g.out_neighbour(4, 1).unwrap(), 3);
        assert_eq!(g.out_neighbour(4, 2).unwrap(), 2);
        for i in 1..=3 {
            assert_eq!(g.out_neighbour(1, i).unwrap(), 0);
        }
        assert_eq!(g.in_neighbour(1, 1).unwrap(), 2);
        assert_eq!(g.in_neighbour(1, 3).unwrap(), 2);
        assert!(g.in_neighbour(5, 1).is_err());
        assert_eq!(g.degree_in(1).unwrap(), 6);
        assert_eq!(g.degree_in(5).unwrap(), 0);
        assert_eq!(g.degree_in(0).unwrap(), 3);
        assert!(g.adjacent(4, 3).unwrap());
        assert!(!g.adjacent(5, 2).unwrap());
        assert_eq!(g.neighbours_out(5).unwrap(), vec![3, 4, 4]);
        assert!(g.neighbours_in(5).unwrap().is_empty());
        assert_eq!(g.space_report().tree_payload_bits, 12);
    }

    #[test]
    fn query_errors() {
        let g = example_n5();
        assert!(g.out_neighbour(0, 1).is_err());
        assert!(g.out_neighbour(2, 0).is_err());
        assert!(g.out_neighbour(2, 4).is_err());
        assert!(g.degree_in(6).is_err());
        assert!(g.adjacent(0, 6).is_err());
        assert!(!g.adjacent(0, 0).unwrap());
    }

    #[test]
    fn round_trip_bytes() {
        let g = example_n5();
        let bytes = g.to_bytes();
        assert_eq!(&bytes[..4], b"UPAG");
        let back = CompressedGraph::from_bytes(&bytes).unwrap();
        assert_eq!(back, g.clone().without_relabel());
        assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn corrupted_streams() {
        let bytes = example_n5().to_bytes();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(
            CompressedGraph::from_bytes(&bad),
            Err(Error::BadMagic)
        ));
        let mut bad = bytes.clone();
        bad[4] = 9;
        assert!(matches!(
            CompressedGraph::from_bytes(&bad),
            Err(Error::VersionMismatch { .. })
        ));
        // tree bit length field sits after magic, version, flags, M, n
        let mut bad = bytes.clone();
        bad[24..32].copy_from_slice(&u64::MAX.to_le_bytes());
        assert!(matches!(
            CompressedGraph::from_bytes(&bad),
            Err(Error::Truncated { .. })
        ));
        assert!(matches!(
            CompressedGraph::from_bytes(&bytes[..bytes.len() - 3]),
            Err(Error::Truncated { .. })
        ));
        let mut bad = bytes.clone();
        let last = bad.len() - 5;
        bad[last] ^= 0x40;
        assert!(matches!(
            CompressedGraph::from_bytes(&bad),
            Err(Error::ChecksumMismatch { .. }) | Err(Error::Corrupt(_))
        ));
        let mut bad = bytes.clone();
        let crc_at = bad.len() - 1;
        bad[crc_at] ^= 1;
        assert!(matches!(
            CompressedGraph::from_bytes(&bad),
            Err(Error::ChecksumMismatch { .. })
        ));
    }

    #[test]
    fn m1_tree_only() {
        let d = Dag::new(1, vec![0, 0, 1, 1, 3]).unwrap();
        let g = CompressedGraph::build(&d).unwrap();
        assert_eq!(g.string().len(), 0);
        let back = CompressedGraph::from_bytes(&g.to_bytes()).unwrap();
        for v in 0..=5 {
            assert_eq!(back.degree_in(v).unwrap(), g.degree_in(v).unwrap());
            assert_eq!(back.neighbours_in(v).unwrap(), g.neighbours_in(v).unwrap());
        }
    }

    #[test]
    fn labelled_layout() {
        let d = Dag::new(3, vec![0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 1, 3]).unwrap();
        let g = CompressedGraph::build_labelled(&d).unwrap();
        assert_eq!(g.neighbours_out(4).unwrap(), vec![0, 1, 3]);
        assert_eq!(g.degree_in(0).unwrap(), 7);
        assert_eq!(g.neighbours_in(1).unwrap(), vec![2, 3, 3, 4]);
        assert!(g.adjacent(3, 4).unwrap());
        assert!(!g.adjacent(2, 4).unwrap());
        let back = CompressedGraph::from_bytes(&g.to_bytes()).unwrap();
        assert_eq!(back, g);
        assert_eq!(g.space_report().tree_payload_bits, 0);
    }
}
