//! Brute-force references.
//!
//! Nothing here calls into the construction or succinct code: adjacency lists
//! are rebuilt from the DAG, preorder is recomputed recursively, entropies and
//! probabilities are recounted from scratch, and admissible arrival orders are
//! enumerated exhaustively.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compressed::CompressedGraph;
use crate::graph::{Dag, PaGraph, Vertex};
use crate::{Error, Result};

/// Explicit out- and in-lists per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveGraph {
    out: Vec<Vec<Vertex>>,
    inn: Vec<Vec<Vertex>>,
    /// Input label to stored label.
    relabel: Vec<Vertex>,
}

impl NaiveGraph {
    /// Lists in the unlabelled layout's conventions: given a rank per input
    /// vertex, each vertex's parent is its out-neighbour of smallest rank,
    /// vertices are renamed by preorder of the parent tree with children
    /// visited by increasing input label, out-lists put the parent first and
    /// in-lists put tree children first.
    pub fn unlabelled(d: &Dag, ranks: &[usize]) -> Self {
        let nv = d.n() + 1;
        let m = d.m();
        let mut parent = vec![usize::MAX; nv];
        let mut kids: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); nv];
        for v in 1..nv {
            let block = &d.targets()[(v - 1) * m..v * m];
            let mut best = block[0];
            for &w in block {
                if ranks[w] < ranks[best] {
                    best = w;
                }
            }
            parent[v] = best;
            kids[best].insert(v);
        }
        let mut relabel = vec![usize::MAX; nv];
        let mut next = 0;
        let mut pending = vec![0usize];
        while let Some(v) = pending.pop() {
            relabel[v] = next;
            next += 1;
            pending.extend(kids[v].iter().rev());
        }
        assert_eq!(next, nv, "every vertex reaches the root");

        let mut out = vec![Vec::new(); nv];
        let mut rest = vec![Vec::new(); nv];
        for v in 1..nv {
            let block = &d.targets()[(v - 1) * m..v * m];
            let mut removed = false;
            let mut others = Vec::new();
            for &w in block {
                if w == parent[v] && !removed {
                    removed = true;
                } else {
                    others.push(relabel[w]);
                }
            }
            let nv_ = relabel[v];
            out[nv_].push(relabel[parent[v]]);
            out[nv_].extend(others.iter().copied());
            rest[nv_] = others;
        }
        let mut inn = vec![Vec::new(); nv];
        for v in 1..nv {
            inn[relabel[parent[v]]].push(relabel[v]);
        }
        for list in inn.iter_mut() {
            list.sort_unstable();
        }
        for (s, others) in rest.iter().enumerate() {
            for &t in others {
                inn[t].push(s);
            }
        }
        Self { out, inn, relabel }
    }

    /// Lists over the original labels: out-lists are the blocks, in-lists
    /// list sources in arrival order.
    pub fn labelled(d: &Dag) -> Self {
        let nv = d.n() + 1;
        let m = d.m();
        let mut out = vec![Vec::new(); nv];
        let mut inn = vec![Vec::new(); nv];
        for (i, &w) in d.targets().iter().enumerate() {
            let s = i / m + 1;
            out[s].push(w);
            inn[w].push(s);
        }
        Self {
            out,
            inn,
            relabel: (0..nv).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn relabel(&self) -> &[Vertex] {
        &self.relabel
    }

    pub fn out_list(&self, v: Vertex) -> &[Vertex] {
        &self.out[v]
    }

    pub fn in_list(&self, v: Vertex) -> &[Vertex] {
        &self.inn[v]
    }

    pub fn out_neighbour(&self, v: Vertex, i: usize) -> Option<Vertex> {
        self.out.get(v)?.get(i.checked_sub(1)?).copied()
    }

    pub fn in_neighbour(&self, v: Vertex, i: usize) -> Option<Vertex> {
        self.inn.get(v)?.get(i.checked_sub(1)?).copied()
    }

    pub fn degree_in(&self, v: Vertex) -> usize {
        self.inn[v].len()
    }

    pub fn degree_out(&self, v: Vertex) -> usize {
        self.out[v].len()
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.out[u].contains(&v) || self.out[v].contains(&u)
    }
}

/// First disagreement between the compressed structure and the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub query: String,
    pub expected: String,
    pub got: String,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: expected {}, got {}",
            self.query, self.expected, self.got
        )
    }
}

fn show<T: std::fmt::Debug>(r: &Result<T>) -> String {
    match r {
        Ok(x) => format!("{x:?}"),
        Err(_) => "error".into(),
    }
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(
    query: impl FnOnce() -> String,
    expected: Option<T>,
    got: Result<T>,
) -> std::result::Result<(), Mismatch> {
    let ok = match (&expected, &got) {
        (Some(e), Ok(g)) => e == g,
        (None, Err(_)) => true,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Mismatch {
            query: query(),
            expected: expected.map_or_else(|| "error".into(), |e| format!("{e:?}")),
            got: show(&got),
        })
    }
}

/// Queries every vertex: all out- and in-neighbours, degrees, one past each
/// valid index, and adjacency for all pairs when `pairs` is set. Returns the
/// number of queries checked.
pub fn check_exhaustive(
    g: &CompressedGraph,
    o: &NaiveGraph,
    pairs: bool,
) -> std::result::Result<usize, Mismatch> {
    let nv = o.vertex_count();
    if g.vertex_count() != nv {
        return Err(Mismatch {
            query: "vertex_count".into(),
            expected: nv.to_string(),
            got: g.vertex_count().to_string(),
        });
    }
    let mut count = 0;
    for v in 0..nv {
        count += check_vertex(g, o, v)?;
    }
    if pairs {
        for u in 0..nv {
            for v in 0..nv {
                expect_eq(
                    || format!("adjacent({u}, {v})"),
                    Some(o.adjacent(u, v)),
                    g.adjacent(u, v),
                )?;
                count += 1;
            }
        }
    }
    expect_eq(
        || format!("degree_in({nv})"),
        None::<usize>,
        g.degree_in(nv),
    )?;
    Ok(count + 1)
}

fn check_vertex(
    g: &CompressedGraph,
    o: &NaiveGraph,
    v: Vertex,
) -> std::result::Result<usize, Mismatch> {
    let (din, dout) = (o.degree_in(v), o.degree_out(v));
    expect_eq(|| format!("degree_in({v})"), Some(din), g.degree_in(v))?;
    expect_eq(|| format!("degree_out({v})"), Some(dout), g.degree_out(v))?;
    expect_eq(
        || format!("degree_total({v})"),
        Some(din + dout),
        g.degree_total(v),
    )?;
    for i in 1..=dout + 1 {
        expect_eq(
            || format!("out_neighbour({v}, {i})"),
            o.out_neighbour(v, i),
            g.out_neighbour(v, i),
        )?;
    }
    for i in 1..=din + 1 {
        expect_eq(
            || format!("in_neighbour({v}, {i})"),
            o.in_neighbour(v, i),
            g.in_neighbour(v, i),
        )?;
    }
    Ok(3 + dout + din + 2)
}

/// `count` random queries drawn uniformly from the five query kinds.
pub fn check_sampled(
    g: &CompressedGraph,
    o: &NaiveGraph,
    count: usize,
    seed: u64,
) -> std::result::Result<usize, Mismatch> {
    let nv = o.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let v = rng.gen_range(0..nv);
        match rng.gen_range(0..5) {
            0 => {
                let i = rng.gen_range(1..=o.degree_out(v).max(1));
                expect_eq(
                    || format!("out_neighbour({v}, {i})"),
                    o.out_neighbour(v, i),
                    g.out_neighbour(v, i),
                )?;
            }
            1 => {
                let i = rng.gen_range(1..=o.degree_in(v).max(1));
                expect_eq(
                    || format!("in_neighbour({v}, {i})"),
                    o.in_neighbour(v, i),
                    g.in_neighbour(v, i),
                )?;
            }
            2 => expect_eq(
                || format!("degree_in({v})"),
                Some(o.degree_in(v)),
                g.degree_in(v),
            )?,
            3 => {
                // bias half the pairs towards actual neighbours
                let u = if rng.gen_bool(0.5) && o.degree_out(v) > 0 {
                    o.out_list(v)[rng.gen_range(0..o.degree_out(v))]
                } else {
                    rng.gen_range(0..nv)
                };
                expect_eq(
                    || format!("adjacent({u}, {v})"),
                    Some(o.adjacent(u, v)),
                    g.adjacent(u, v),
                )?;
            }
            _ => expect_eq(
                || format!("degree_total({v})"),
                Some(o.degree_in(v) + o.degree_out(v)),
                g.degree_total(v),
            )?,
        }
    }
    Ok(count)
}

/// `H0` by direct counting: `sum_c n_c lg(n / n_c)`.
pub fn naive_h0<T: Ord>(seq: &[T]) -> f64 {
    let mut counts: BTreeMap<&T, usize> = BTreeMap::new();
    for x in seq {
        *counts.entry(x).or_default() += 1;
    }
    let n = seq.len() as f64;
    counts
        .values()
        .map(|&c| c as f64 * (n / c as f64).log2())
        .sum()
}

/// Exact `P[G]` by summing, per step, the probabilities of every distinct
/// ordered draw sequence realising the block. Exponential in `M`.
pub fn naive_probability(g: &PaGraph) -> Result<BigRational> {
    let m = g.m();
    if m > 8 {
        return Err(Error::TooLarge {
            what: "M for draw enumeration",
            value: m,
            limit: 8,
        });
    }
    let nv = g.n() + 1;
    let mut degree = vec![0u64; nv];
    degree[0] = m as u64;
    degree[1] = m as u64;
    let mut p = BigRational::one();
    for t in 2..nv {
        let block = g.block(t).to_vec();
        let total = 2 * (t as u64 - 1) * m as u64;
        let mut sequences = BTreeSet::new();
        permutations(&block, &mut Vec::new(), &mut vec![false; m], &mut sequences);
        let mut step = BigRational::zero();
        for seq in &sequences {
            let mut q = BigRational::one();
            for &w in seq {
                q *= BigRational::new(degree[w].into(), total.into());
            }
            step += q;
        }
        p *= step;
        for &w in &block {
            degree[w] += 1;
        }
        degree[t] += m as u64;
    }
    Ok(p)
}

fn permutations(
    items: &[Vertex],
    cur: &mut Vec<Vertex>,
    used: &mut Vec<bool>,
    out: &mut BTreeSet<Vec<Vertex>>,
) {
    if cur.len() == items.len() {
        out.insert(cur.clone());
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            cur.push(items[i]);
            permutations(items, cur, used, out);
            cur.pop();
            used[i] = false;
        }
    }
}

/// Largest `n` accepted by [`admissible_orders`].
pub const MAX_ENUMERATION_N: usize = 8;

/// Every admissible arrival order of a DAG and the probability of the graph
/// relabelled by each.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleOrders {
    /// Each order lists vertices by arrival; `orders[k][0] == 0`.
    pub orders: Vec<Vec<Vertex>>,
    pub probabilities: Vec<BigRational>,
}

impl AdmissibleOrders {
    pub fn count(&self) -> usize {
        self.orders.len()
    }

    pub fn all_equal(&self) -> bool {
        self.probabilities.windows(2).all(|w| w[0] == w[1])
    }

    /// `max - min` of `lg(1/P)` over all orders.
    pub fn spread_bits(&self) -> f64 {
        let bits: Vec<f64> = self.probabilities.iter().map(lg_inverse).collect();
        let max = bits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = bits.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }
}

fn lg_inverse(p: &BigRational) -> f64 {
    let lg = |x: &BigUint| {
        let bits = x.bits();
        let shift = bits.saturating_sub(60);
        let top = (x >> shift).to_u64_digits().first().copied().unwrap_or(0) as f64;
        top.log2() + shift as f64
    };
    let (num, den) = (p.numer().magnitude(), p.denom().magnitude());
    lg(den) - lg(num)
}

/// Enumerates arrival orders (with `v0` first) in which every vertex comes
/// after all of its out-neighbours, and evaluates `P` under each.
pub fn admissible_orders(d: &Dag) -> Result<AdmissibleOrders> {
    let n = d.n();
    if n > MAX_ENUMERATION_N {
        return Err(Error::TooLarge {
            what: "n for order enumeration",
            value: n,
            limit: MAX_ENUMERATION_N,
        });
    }
    let nv = n + 1;
    let m = d.m();
    let needs: Vec<BTreeSet<Vertex>> = (0..nv)
        .map(|v| {
            if v == 0 {
                BTreeSet::new()
            } else {
                d.targets()[(v - 1) * m..v * m].iter().copied().collect()
            }
        })
        .collect();
    let mut orders = Vec::new();
    let mut placed = vec![false; nv];
    placed[0] = true;
    extend(&needs, &mut vec![0], &mut placed, &mut orders);

    let mut probabilities = Vec::with_capacity(orders.len());
    for order in &orders {
        let mut pos = vec![0usize; nv];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        let mut targets = Vec::with_capacity(n * m);
        for &v in &order[1..] {
            targets.extend(d.targets()[(v - 1) * m..v * m].iter().map(|&w| pos[w]));
        }
        probabilities.push(naive_probability(&PaGraph::new(m, targets)?)?);
    }
    Ok(AdmissibleOrders {
        orders,
        probabilities,
    })
}

fn extend(
    needs: &[BTreeSet<Vertex>],
    cur: &mut Vec<Vertex>,
    placed: &mut [bool],
    out: &mut Vec<Vec<Vertex>>,
) {
    if cur.len() == needs.len() {
        out.push(cur.clone());
        return;
    }
    for v in 1..needs.len() {
        if !placed[v] && needs[v].iter().all(|&w| placed[w]) {
            placed[v] = true;
            cur.push(v);
            extend(needs, cur, placed, out);
            cur.pop();
            placed[v] = false;
        }
    }
}
