//! From a PA graph to the pieces of the compressed structure.
//!
//! 1. [`peel`] recovers edge orientations from the undirected multigraph by
//!    repeatedly removing a vertex whose current degree is exactly `M`.
//! 2. [`sigma_rank`] orders vertices by in-degree.
//! 3. [`build`] picks for every vertex the out-neighbour of minimal rank as its
//!    tree parent, relabels vertices by preorder of that tree, and stores the
//!    remaining `M - 1` out-neighbours of every vertex in `A'`.
//!
//! [`lfc_string`] is the same reduction phrased on plain strings: each block
//! of `M` characters loses one occurrence of its least frequent character.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Dag, UndirectedMultigraph, Vertex};
use crate::{Error, Result};

/// Outcome of peeling: the DAG plus the inferred arrival order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Peeled {
    pub dag: Dag,
    /// `arrival[t]` is the input label of the vertex that arrived at step `t`.
    pub arrival: Vec<Vertex>,
    /// True when the input labels already formed an admissible arrival order,
    /// in which case `dag` uses them unchanged.
    pub labels_preserved: bool,
}

struct Orientation {
    /// Out-lists by input label, in edge-list order.
    out: Vec<Vec<Vertex>>,
    /// Removal order, last arrival first.
    removed: Vec<Vertex>,
    /// Per edge: true when oriented from `edges[e].0` to `edges[e].1`.
    forward: Vec<bool>,
}

fn orient(
    u: &UndirectedMultigraph,
    m: usize,
    mut pick: impl FnMut(&BTreeSet<Vertex>) -> Vertex,
) -> Result<Orientation> {
    if m == 0 {
        return Err(Error::InvalidParameter("M must be at least 1".into()));
    }
    let nv = u.vertex_count();
    if nv < 2 {
        return Err(Error::NotPeelable("fewer than two vertices".into()));
    }
    if u.edge_count() != (nv - 1) * m {
        return Err(Error::NotPeelable(format!(
            "{} edges on {nv} vertices, expected {}",
            u.edge_count(),
            (nv - 1) * m
        )));
    }
    let edges = u.edges();
    let mut incident = vec![Vec::new(); nv];
    for (e, &(a, b)) in edges.iter().enumerate() {
        incident[a].push(e);
        incident[b].push(e);
    }
    let mut deg = u.degrees().to_vec();
    let mut alive_edge = vec![true; edges.len()];
    let mut alive = vec![true; nv];
    let mut forward = vec![true; edges.len()];
    let mut out = vec![Vec::new(); nv];
    let mut eligible: BTreeSet<Vertex> = (2..nv).filter(|&v| deg[v] == m).collect();
    let mut removed = Vec::with_capacity(nv - 2);

    while removed.len() < nv - 2 {
        let v = loop {
            if eligible.is_empty() {
                return Err(Error::NotPeelable(format!(
                    "no vertex of degree {m} left with {} vertices remaining",
                    nv - removed.len()
                )));
            }
            let v = pick(&eligible);
            eligible.remove(&v);
            if alive[v] && deg[v] == m {
                break v;
            }
        };
        for &e in &incident[v] {
            if !alive_edge[e] {
                continue;
            }
            alive_edge[e] = false;
            let (a, b) = edges[e];
            let w = if a == v { b } else { a };
            forward[e] = a == v;
            out[v].push(w);
            deg[w] -= 1;
            if w >= 2 && alive[w] && deg[w] == m {
                eligible.insert(w);
            }
        }
        deg[v] = 0;
        alive[v] = false;
        removed.push(v);
    }
    // residual seed: exactly M parallel edges between 0 and 1, oriented 1 -> 0
    for &e in &incident[1] {
        if alive_edge[e] {
            let (a, b) = edges[e];
            if !(a == 0 && b == 1 || a == 1 && b == 0) {
                return Err(Error::NotPeelable("residual graph is not the seed".into()));
            }
            forward[e] = a == 1;
            out[1].push(0);
        }
    }
    if out[1].len() != m || deg[0] != m {
        return Err(Error::NotPeelable(format!(
            "seed has {} edges between v0 and v1, expected {m}",
            out[1].len()
        )));
    }
    Ok(Orientation {
        out,
        removed,
        forward,
    })
}

/// Peels with the lowest-index eligible vertex first. Vertices `0` and `1`
/// are taken to be the seed.
pub fn peel_with_order(u: &UndirectedMultigraph, m: usize) -> Result<Peeled> {
    let o = orient(u, m, |set| *set.iter().next().expect("non-empty"))?;
    let nv = u.vertex_count();
    let mut arrival = vec![0, 1];
    arrival.extend(o.removed.iter().rev());
    let admissible = (1..nv).all(|v| o.out[v].iter().all(|&w| w < v));
    if admissible {
        let dag = Dag::from_out_lists(m, &o.out[1..])?;
        return Ok(Peeled {
            dag,
            arrival,
            labels_preserved: true,
        });
    }
    let mut new_label = vec![0usize; nv];
    for (t, &old) in arrival.iter().enumerate() {
        new_label[old] = t;
    }
    let lists: Vec<Vec<Vertex>> = arrival[1..]
        .iter()
        .map(|&old| o.out[old].iter().map(|&w| new_label[w]).collect())
        .collect();
    Ok(Peeled {
        dag: Dag::from_out_lists(m, &lists)?,
        arrival,
        labels_preserved: false,
    })
}

/// Recovers the DAG of a PA graph from its undirected form.
pub fn peel(u: &UndirectedMultigraph, m: usize) -> Result<Dag> {
    peel_with_order(u, m).map(|p| p.dag)
}

/// Re-peels `trials` times choosing uniformly among eligible vertices and
/// reports whether every run produced the same edge orientations.
pub fn peel_is_unambiguous(
    u: &UndirectedMultigraph,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    let reference = orient(u, m, |set| *set.iter().next().expect("non-empty"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let o = orient(u, m, |set| {
            let k = rng.gen_range(0..set.len());
            *set.iter().nth(k).expect("in range")
        })?;
        if o.forward != reference.forward {
            return Ok(false);
        }
    }
    Ok(true)
}

/// How to order vertices of equal in-degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Smaller vertex index gets the smaller rank.
    #[default]
    AscendingIndex,
    DescendingIndex,
    /// Smaller key gets the smaller rank; remaining ties by index.
    Priority(Vec<usize>),
}

/// Bijection from vertices to `0..=n`, monotone in in-degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaRank {
    rank: Vec<usize>,
    order: Vec<Vertex>,
    tie_break: TieBreak,
}

impl SigmaRank {
    pub fn rank(&self, v: Vertex) -> usize {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// Vertices by increasing rank.
    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn tie_break(&self) -> &TieBreak {
        &self.tie_break
    }
}

pub fn sigma_rank(d: &Dag) -> SigmaRank {
    sigma_rank_with(d, TieBreak::AscendingIndex).expect("default tie-break is total")
}

pub fn sigma_rank_with(d: &Dag, tie_break: TieBreak) -> Result<SigmaRank> {
    sigma_from_counts(&d.in_degrees(), tie_break)
}

fn sigma_from_counts(counts: &[usize], tie_break: TieBreak) -> Result<SigmaRank> {
    let nv = counts.len();
    let mut order: Vec<Vertex> = (0..nv).collect();
    match &tie_break {
        TieBreak::AscendingIndex => order.sort_by_key(|&v| (counts[v], v)),
        TieBreak::DescendingIndex => order.sort_by_key(|&v| (counts[v], std::cmp::Reverse(v))),
        TieBreak::Priority(key) => {
            if key.len() != nv {
                return Err(Error::InvalidParameter(format!(
                    "priority list has {} entries for {nv} vertices",
                    key.len()
                )));
            }
            order.sort_by_key(|&v| (counts[v], key[v], v));
        }
    }
    let mut rank = vec![0usize; nv];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    Ok(SigmaRank {
        rank,
        order,
        tie_break,
    })
}

/// Tree, reduced string and relabelling produced by [`build`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildOutput {
    pub m: usize,
    pub n: usize,
    /// Tree parent by preorder label; entry 0 (the root) is 0.
    pub parents: Vec<Vertex>,
    /// `A'`: for preorder label `j` in `1..=n`, its `M - 1` non-parent
    /// out-neighbours at `[(j-1)(M-1), j(M-1))`, as preorder labels.
    pub a_prime: Vec<Vertex>,
    /// Input label to preorder label.
    pub relabel: Vec<Vertex>,
    /// Preorder label to input label.
    pub inverse: Vec<Vertex>,
}

impl BuildOutput {
    /// Non-parent out-neighbours of preorder label `j >= 1`.
    pub fn a_prime_block(&self, j: Vertex) -> &[Vertex] {
        let w = self.m - 1;
        &self.a_prime[(j - 1) * w..j * w]
    }

    /// Two-column `old new` text, one vertex per line.
    pub fn relabel_text(&self) -> String {
        let mut s = String::new();
        for (old, new) in self.relabel.iter().enumerate() {
            s.push_str(&format!("{old} {new}\n"));
        }
        s
    }
}

pub fn build(d: &Dag) -> BuildOutput {
    build_with(d, &sigma_rank(d))
}

/// Builds with a caller-supplied ranking.
pub fn build_with(d: &Dag, sigma: &SigmaRank) -> BuildOutput {
    let nv = d.vertex_count();
    let m = d.m();
    assert_eq!(sigma.ranks().len(), nv, "rank covers every vertex");
    let mut parent_old = vec![0usize; nv];
    let mut children: Vec<Vec<Vertex>> = vec![Vec::new(); nv];
    for v in 1..nv {
        let p = *d
            .block(v)
            .iter()
            .min_by_key(|&&w| sigma.rank(w))
            .expect("out-degree M >= 1");
        parent_old[v] = p;
        children[p].push(v);
    }

    let mut inverse = Vec::with_capacity(nv);
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        inverse.push(v);
        stack.extend(children[v].iter().rev());
    }
    let mut relabel = vec![0usize; nv];
    for (new, &old) in inverse.iter().enumerate() {
        relabel[old] = new;
    }

    let parents: Vec<Vertex> = inverse
        .iter()
        .map(|&old| relabel[parent_old[old]])
        .collect();
    let mut a_prime = Vec::with_capacity(d.n() * (m - 1));
    for &old in &inverse[1..] {
        let block = d.block(old);
        let skip = block
            .iter()
            .position(|&w| w == parent_old[old])
            .expect("parent is an out-neighbour");
        a_prime.extend(
            block
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &w)| relabel[w]),
        );
    }
    BuildOutput {
        m,
        n: d.n(),
        parents,
        a_prime,
        relabel,
        inverse,
    }
}

/// The full adjacency string, for storing the labelled graph with a wavelet tree only.
pub fn build_labelled(d: &Dag) -> Vec<Vertex> {
    d.targets().to_vec()
}

/// One iteration of the least-frequent-character scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LfcStep<T> {
    /// 1-based index of the block flagged in this step.
    pub block: usize,
    /// Character deleted from that block.
    pub character: T,
    /// Working copy of `A`, `None` marking deleted characters.
    pub a_hat: Vec<Option<T>>,
    /// Working copy of the sorted string, `None` marking consumed characters.
    pub s: Vec<Option<T>>,
    pub flags: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LfcTrace<T> {
    /// `A` sorted by rank.
    pub sorted: Vec<T>,
    /// Alphabet by increasing rank.
    pub sigma: Vec<T>,
    pub steps: Vec<LfcStep<T>>,
    /// Character deleted from each block, by block.
    pub deleted: Vec<T>,
    pub output: Vec<T>,
}

/// The scheme on integer symbols with explicit ranks (`rank[c]` distinct per symbol).
pub fn lfc_symbols(a: &[usize], m: usize, rank: &[usize], trace: bool) -> Result<LfcTrace<usize>> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "block size must be at least 1".into(),
        ));
    }
    if a.is_empty() {
        return Err(Error::InvalidParameter("string must be non-empty".into()));
    }
    if !a.len().is_multiple_of(m) {
        return Err(Error::UnequalBlocks {
            len: a.len(),
            block: m,
        });
    }
    let nblocks = a.len() / m;
    let alpha = rank.len();
    if let Some(&c) = a.iter().find(|&&c| c >= alpha) {
        return Err(Error::out_of_range("symbol", c, format!("0..{alpha}")));
    }

    let mut counts = vec![0usize; alpha];
    for &c in a {
        counts[c] += 1;
    }
    let mut by_rank: Vec<usize> = (0..alpha).filter(|&c| counts[c] > 0).collect();
    by_rank.sort_by_key(|&c| rank[c]);
    let mut sorted = Vec::with_capacity(a.len());
    // leftmost live occurrence of each symbol in S
    let mut next_in_s = vec![0usize; alpha];
    for &c in &by_rank {
        next_in_s[c] = sorted.len();
        sorted.extend(std::iter::repeat_n(c, counts[c]));
    }
    let mut blocks_with: Vec<Vec<usize>> = vec![Vec::new(); alpha];
    for j in 0..nblocks {
        for &c in &a[j * m..(j + 1) * m] {
            if blocks_with[c].last() != Some(&j) {
                blocks_with[c].push(j);
            }
        }
    }
    let mut block_ptr = vec![0usize; alpha];

    let mut s: Vec<Option<usize>> = sorted.iter().map(|&c| Some(c)).collect();
    let mut a_hat: Vec<Option<usize>> = a.iter().map(|&c| Some(c)).collect();
    let mut flags = vec![false; nblocks];
    let mut deleted = vec![0usize; nblocks];
    let mut steps = Vec::new();
    let mut k = 0usize;

    for _ in 0..nblocks {
        while s[k].is_none() {
            k += 1;
        }
        let c = s[k].expect("live");
        let list = &blocks_with[c];
        while flags[list[block_ptr[c]]] {
            block_ptr[c] += 1;
        }
        let j = list[block_ptr[c]];
        flags[j] = true;
        for &l in &a[j * m..(j + 1) * m] {
            s[next_in_s[l]] = None;
            next_in_s[l] += 1;
        }
        let off = a[j * m..(j + 1) * m]
            .iter()
            .position(|&x| x == c)
            .expect("block contains c");
        a_hat[j * m + off] = None;
        deleted[j] = c;
        if trace {
            steps.push(LfcStep {
                block: j + 1,
                character: c,
                a_hat: a_hat.clone(),
                s: s.clone(),
                flags: flags.clone(),
            });
        }
    }
    debug_assert!(s.iter().all(Option::is_none));
    Ok(LfcTrace {
        sorted,
        sigma: by_rank,
        steps,
        deleted,
        output: a_hat.into_iter().flatten().collect(),
    })
}

/// Runs the scheme on an arbitrary string with the default ranking: by
/// increasing frequency, ties by increasing character.
pub fn lfc_trace<T: Ord + Clone + Hash>(a: &[T], m: usize) -> Result<LfcTrace<T>> {
    let mut alphabet: Vec<T> = a.to_vec();
    alphabet.sort();
    alphabet.dedup();
    let id: HashMap<&T, usize> = alphabet.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let ids: Vec<usize> = a.iter().map(|c| id[c]).collect();
    let mut counts = vec![0usize; alphabet.len()];
    for &c in &ids {
        counts[c] += 1;
    }
    let sigma = sigma_from_counts(&counts, TieBreak::AscendingIndex)?;
    let run = lfc_symbols(&ids, m, sigma.ranks(), true)?;
    let map = |c: usize| alphabet[c].clone();
    let map_opt = |v: Vec<Option<usize>>| v.into_iter().map(|c| c.map(map)).collect();
    Ok(LfcTrace {
        sorted: run.sorted.into_iter().map(map).collect(),
        sigma: run.sigma.into_iter().map(map).collect(),
        steps: run
            .steps
            .into_iter()
            .map(|st| LfcStep {
                block: st.block,
                character: map(st.character),
                a_hat: map_opt(st.a_hat),
                s: map_opt(st.s),
                flags: st.flags,
            })
            .collect(),
        deleted: run.deleted.into_iter().map(map).collect(),
        output: run.output.into_iter().map(map).collect(),
    })
}

/// Reduced string `A'` of `a` with blocks of size `m`.
pub fn lfc_string<T: Ord + Clone + Hash>(a: &[T], m: usize) -> Result<Vec<T>> {
    lfc_trace(a, m).map(|t| t.output)
}
