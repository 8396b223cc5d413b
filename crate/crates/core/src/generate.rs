//! The Barabási–Albert preferential-attachment process and exact instance
//! probabilities.
//!
//! At step `t >= 2` the new vertex `v_t` draws `M` targets independently and
//! with repetition, choosing `v_i` with probability `d(v_i) / (2 (t-1) M)`,
//! where `d` is the degree in `G_{t-1}`. Sampling uses the repeat array of
//! edge endpoints: a uniform index into it hits `v_i` exactly `d(v_i)` times.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Dag, PaGraph, Vertex};
use crate::numeric::{lg_factorial, lg_inverse};
use crate::{Error, Result};

/// Graphs with more arrivals than this are refused in exact mode.
pub const DEFAULT_EXACT_CUTOFF: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
}

impl GenConfig {
    pub fn new(m: usize, n: usize, seed: u64) -> Self {
        Self { m, n, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidParameter("M must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        Ok(())
    }
}

/// A PA process in progress. Starts at `G_1`.
#[derive(Debug, Clone)]
pub struct PaProcess {
    m: usize,
    rng: ChaCha8Rng,
    endpoints: Vec<Vertex>,
    targets: Vec<Vertex>,
}

impl PaProcess {
    pub fn new(m: usize, seed: u64) -> Result<Self> {
        GenConfig::new(m, 1, seed).validate()?;
        let mut p = Self {
            m,
            rng: ChaCha8Rng::seed_from_u64(seed),
            endpoints: Vec::new(),
            targets: Vec::new(),
        };
        let seed_block = vec![0; m];
        p.commit(&seed_block);
        Ok(p)
    }

    /// Index of the most recent arrival.
    pub fn t(&self) -> usize {
        self.targets.len() / self.m
    }

    /// Draws the targets of the next vertex without adding it.
    pub fn draw(&mut self) -> Vec<Vertex> {
        let total = self.endpoints.len();
        (0..self.m)
            .map(|_| self.endpoints[self.rng.gen_range(0..total)])
            .collect()
    }

    /// Adds the next vertex with freshly drawn targets and returns them.
    pub fn step(&mut self) -> &[Vertex] {
        let block = self.draw();
        self.commit(&block);
        &self.targets[self.targets.len() - self.m..]
    }

    fn commit(&mut self, block: &[Vertex]) {
        let t = self.t() + 1;
        for &w in block {
            self.endpoints.push(t);
            self.endpoints.push(w);
        }
        self.targets.extend_from_slice(block);
    }

    pub fn graph(&self) -> PaGraph {
        PaGraph::new(self.m, self.targets.clone()).expect("process keeps invariants")
    }

    pub fn into_graph(self) -> PaGraph {
        PaGraph::new(self.m, self.targets).expect("process keeps invariants")
    }
}

/// Draws a graph from PA(M; n). Deterministic in `cfg.seed`.
pub fn generate(cfg: &GenConfig) -> Result<PaGraph> {
    cfg.validate()?;
    let mut p = PaProcess::new(cfg.m, cfg.seed)?;
    p.targets.reserve(cfg.m * (cfg.n - 1));
    p.endpoints.reserve(2 * cfg.m * (cfg.n - 1));
    for _ in 1..cfg.n {
        p.step();
    }
    Ok(p.into_graph())
}

/// Attachment law at step `t` together with the multiplicities realised by `v_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepDistribution {
    pub t: usize,
    /// `d_{t-1}(v_i)` for `i in 0..t`.
    pub degrees: Vec<usize>,
    /// `2 (t-1) M`.
    pub total: usize,
    /// `C_i^{(t)}`: how often `v_t` chose `v_i`.
    pub multiplicities: Vec<usize>,
}

impl StepDistribution {
    pub fn probability(&self, i: Vertex) -> f64 {
        self.degrees[i] as f64 / self.total as f64
    }

    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.degrees.len())
            .map(|i| self.probability(i))
            .collect()
    }
}

/// Degree replay of `g` up to step `t` (`t >= 2`).
pub fn step_distribution(g: &PaGraph, t: usize) -> Result<StepDistribution> {
    if t < 2 || t > g.n() {
        return Err(Error::out_of_range("step", t, format!("2..={}", g.n())));
    }
    let m = g.m();
    let mut degrees = vec![0usize; t];
    for s in 1..t {
        degrees[s] += m;
        for &w in g.block(s) {
            degrees[w] += 1;
        }
    }
    let mut multiplicities = vec![0usize; t];
    for &w in g.block(t) {
        multiplicities[w] += 1;
    }
    Ok(StepDistribution {
        t,
        degrees,
        total: 2 * (t - 1) * m,
        multiplicities,
    })
}

/// Information content of one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct LogProb {
    /// `P[G]` as an exact rational, when requested.
    pub exact: Option<BigRational>,
    /// `lg(1 / P[G])`.
    pub bits: f64,
}

/// Running state for replaying the process on a fixed graph.
#[derive(Debug, Clone)]
pub struct Replay {
    m: usize,
    t: usize,
    degrees: Vec<usize>,
    lg_fact_m: f64,
}

impl Replay {
    /// State after `G_1`.
    pub fn new(m: usize) -> Self {
        Self {
            m,
            t: 1,
            degrees: vec![m, m],
            lg_fact_m: lg_factorial(m),
        }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    fn multiplicities(&self, block: &[Vertex]) -> Result<Vec<(Vertex, usize)>> {
        let t = self.t + 1;
        let mut sorted = block.to_vec();
        sorted.sort_unstable();
        let mut out: Vec<(Vertex, usize)> = Vec::new();
        for w in sorted {
            if w >= t {
                return Err(Error::MalformedGraph(format!(
                    "vertex {t} has out-neighbour {w}"
                )));
            }
            match out.last_mut() {
                Some((v, c)) if *v == w => *c += 1,
                _ => out.push((w, 1)),
            }
        }
        Ok(out)
    }

    /// `lg(1 / P[N(v_t) = block | G_{t-1}])` for the next arrival, without advancing.
    pub fn step_bits(&self, block: &[Vertex]) -> Result<f64> {
        let counts = self.multiplicities(block)?;
        let total = (2 * self.t * self.m) as f64;
        let mut bits = -self.lg_fact_m;
        for &(w, c) in &counts {
            bits += c as f64 * (total / self.degrees[w] as f64).log2();
            bits += lg_factorial(c);
        }
        Ok(bits)
    }

    /// `P[N(v_t) = block | G_{t-1}]` as an exact rational, without advancing.
    pub fn step_exact(&self, block: &[Vertex]) -> Result<BigRational> {
        let counts = self.multiplicities(block)?;
        let total = BigUint::from(2 * self.t * self.m);
        // multinomial(M; C) * prod (d_i / total)^{C_i}
        let mut numer = factorial(self.m);
        let mut denom = BigUint::one();
        for &(w, c) in &counts {
            numer *= BigUint::from(self.degrees[w]).pow(c as u32);
            denom *= factorial(c);
        }
        denom *= total.pow(self.m as u32);
        Ok(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// Adds `block` as the next arrival.
    pub fn advance(&mut self, block: &[Vertex]) -> Result<()> {
        if block.len() != self.m {
            return Err(Error::MalformedGraph("block length differs from M".into()));
        }
        let t = self.t + 1;
        if let Some(&w) = block.iter().find(|&&w| w >= t) {
            return Err(Error::MalformedGraph(format!(
                "vertex {t} has out-neighbour {w}"
            )));
        }
        self.degrees.push(self.m);
        for &w in block {
            self.degrees[w] += 1;
        }
        self.t = t;
        Ok(())
    }
}

fn factorial(k: usize) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, x| acc * BigUint::from(x))
}

/// Computes `lg(1/P[G])`, and `P[G]` exactly when `exact` is set.
pub fn log_prob(g: &PaGraph, exact: bool) -> Result<LogProb> {
    log_prob_with_cutoff(g, exact, DEFAULT_EXACT_CUTOFF)
}

pub fn log_prob_with_cutoff(g: &PaGraph, exact: bool, cutoff: usize) -> Result<LogProb> {
    if exact && g.n() > cutoff {
        return Err(Error::TooLarge {
            what: "graph for exact probability",
            value: g.n(),
            limit: cutoff,
        });
    }
    let mut replay = Replay::new(g.m());
    let mut bits = 0.0f64;
    let mut prob = exact.then(BigRational::one);
    for t in 2..=g.n() {
        let block = g.block(t);
        bits += replay.step_bits(block)?;
        if let Some(p) = prob.as_mut() {
            *p *= replay.step_exact(block)?;
        }
        replay.advance(block)?;
    }
    Ok(LogProb { exact: prob, bits })
}

/// Replays an arbitrary DAG in arrival order (it need not have come from the generator).
pub fn log_prob_dag(d: &Dag, exact: bool) -> Result<LogProb> {
    log_prob(&PaGraph::from_dag(d.clone())?, exact)
}

/// Difference between the information content and the degree entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub lhs: f64,
    pub h_deg: f64,
    pub gap: f64,
    /// `gap / (n M lg(M + 1))`.
    pub normalized_gap: f64,
    /// Set when blocks after the seed contain parallel edges.
    pub multigraph_warning: bool,
}

pub fn entropy_gap(g: &PaGraph) -> Result<GapReport> {
    let lhs = log_prob(g, false)?.bits;
    let h_deg = crate::entropy::degree_entropy(g);
    let gap = lhs - h_deg;
    let scale = (g.n() * g.m()) as f64 * ((g.m() + 1) as f64).log2();
    Ok(GapReport {
        lhs,
        h_deg,
        gap,
        normalized_gap: gap / scale,
        multigraph_warning: !g.dag().is_simple_beyond_seed(),
    })
}

/// Float consistency check used by the tests: `lg(1/exact)`.
pub fn exact_bits(p: &LogProb) -> Option<f64> {
    p.exact.as_ref().map(lg_inverse)
}

impl LogProb {
    pub fn exact_f64(&self) -> Option<f64> {
        self.exact.as_ref().and_then(|p| p.to_f64())
    }
}
