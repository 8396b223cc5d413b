//! Graph representations shared by the rest of the crate.
//!
//! Vertices are dense indices `0..=n`; vertex `0` is the root `v0` and vertex
//! `t` arrived at step `t`. Out-neighbour lists are stored as one flat array of
//! `n * M` targets, block `t` holding the `M` targets of vertex `t` in stored
//! order (parallel edges are repeated entries).

use crate::{Error, Result};

pub type Vertex = usize;

/// An M-out-regular DAG: every vertex `t >= 1` has exactly `M` out-neighbours,
/// each smaller than `t`; vertex `0` has none.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dag {
    m: usize,
    n: usize,
    targets: Vec<Vertex>,
}

impl Dag {
    /// Builds a DAG from the concatenated out-neighbour blocks.
    pub fn new(m: usize, targets: Vec<Vertex>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("M must be at least 1".into()));
        }
        if !targets.len().is_multiple_of(m) {
            return Err(Error::UnequalBlocks {
                len: targets.len(),
                block: m,
            });
        }
        let n = targets.len() / m;
        for (idx, &w) in targets.iter().enumerate() {
            let t = idx / m + 1;
            if w >= t {
                return Err(Error::MalformedGraph(format!(
                    "vertex {t} has out-neighbour {w}, which did not precede it"
                )));
            }
        }
        Ok(Self { m, n, targets })
    }

    /// Builds a DAG from per-vertex out-lists, `out[t - 1]` being the list of `v_t`.
    pub fn from_out_lists(m: usize, out: &[Vec<Vertex>]) -> Result<Self> {
        let mut targets = Vec::with_capacity(out.len() * m);
        for (i, list) in out.iter().enumerate() {
            if list.len() != m {
                return Err(Error::MalformedGraph(format!(
                    "vertex {} has out-degree {}, expected {m}",
                    i + 1,
                    list.len()
                )));
            }
            targets.extend_from_slice(list);
        }
        Self::new(m, targets)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of non-root vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.n + 1
    }

    /// Out-neighbours of vertex `t` (empty for the root).
    pub fn block(&self, t: Vertex) -> &[Vertex] {
        if t == 0 {
            &[]
        } else {
            &self.targets[(t - 1) * self.m..t * self.m]
        }
    }

    /// The adjacency string `A`: all out-neighbour lists concatenated in arrival order.
    pub fn targets(&self) -> &[Vertex] {
        &self.targets
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n + 1];
        for &w in &self.targets {
            deg[w] += 1;
        }
        deg
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        if v == 0 {
            0
        } else {
            self.m
        }
    }

    /// True when no block after the first contains a repeated target.
    pub fn is_simple_beyond_seed(&self) -> bool {
        (2..=self.n).all(|t| {
            let mut b = self.block(t).to_vec();
            b.sort_unstable();
            b.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// Forgets edge orientation, keeping multiplicities. Edges are listed in
    /// block order as `(source, target)` pairs.
    pub fn undirect(&self) -> UndirectedMultigraph {
        let edges = self
            .targets
            .iter()
            .enumerate()
            .map(|(idx, &w)| (idx / self.m + 1, w))
            .collect();
        UndirectedMultigraph::new(self.vertex_count(), edges).expect("DAG edges are in range")
    }

    /// The first `t` arrivals as a DAG on `t + 1` vertices.
    pub fn prefix(&self, t: usize) -> Dag {
        assert!(t <= self.n);
        Dag {
            m: self.m,
            n: t,
            targets: self.targets[..t * self.m].to_vec(),
        }
    }
}

/// A labelled graph drawn from the preferential-attachment process.
///
/// Structurally an M-out-regular DAG in arrival order; block 1 is always the
/// `M` parallel edges from `v1` to `v0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PaGraph {
    dag: Dag,
}

impl PaGraph {
    pub fn new(m: usize, targets: Vec<Vertex>) -> Result<Self> {
        Self::from_dag(Dag::new(m, targets)?)
    }

    pub fn from_dag(dag: Dag) -> Result<Self> {
        if dag.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        // targets < t already forces block 1 to be all zeros.
        Ok(Self { dag })
    }

    pub fn m(&self) -> usize {
        self.dag.m
    }

    pub fn n(&self) -> usize {
        self.dag.n
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn into_dag(self) -> Dag {
        self.dag
    }

    pub fn block(&self, t: Vertex) -> &[Vertex] {
        self.dag.block(t)
    }

    pub fn targets(&self) -> &[Vertex] {
        self.dag.targets()
    }

    pub fn prefix(&self, t: usize) -> PaGraph {
        assert!(t >= 1);
        PaGraph {
            dag: self.dag.prefix(t),
        }
    }
}

impl AsRef<Dag> for Dag {
    fn as_ref(&self) -> &Dag {
        self
    }
}

impl AsRef<Dag> for PaGraph {
    fn as_ref(&self) -> &Dag {
        &self.dag
    }
}

/// Adjacency string `A(G)` of a PA graph or DAG, in block order.
pub fn adjacency_string(g: impl AsRef<Dag>) -> Vec<Vertex> {
    g.as_ref().targets().to_vec()
}

/// Undirected multigraph with an edge list that keeps insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedMultigraph {
    vertex_count: usize,
    edges: Vec<(Vertex, Vertex)>,
    degrees: Vec<usize>,
}

impl UndirectedMultigraph {
    pub fn new(vertex_count: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let mut degrees = vec![0usize; vertex_count];
        for &(a, b) in &edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::MalformedGraph(format!(
                    "edge ({a}, {b}) references a vertex outside 0..{vertex_count}"
                )));
            }
            if a == b {
                return Err(Error::MalformedGraph(format!("self-loop at vertex {a}")));
            }
            degrees[a] += 1;
            degrees[b] += 1;
        }
        Ok(Self {
            vertex_count,
            edges,
            degrees,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Sorted degree multiset.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut d = self.degrees.clone();
        d.sort_unstable();
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example_n5() -> Dag {
        Dag::new(3, vec![0, 0, 0, 1, 1, 1, 1, 1, 1, 3, 2, 2, 3, 4, 4]).unwrap()
    }

    #[test]
    fn example_n4_adjacency_string() {
        let g = PaGraph::new(3, vec![0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 1, 3]).unwrap();
        assert_eq!(
            adjacency_string(&g),
            vec![0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 1, 3]
        );
        assert_eq!(g.n(), 4);
    }

    #[test]
    fn single_seed_block() {
        let g = PaGraph::new(3, vec![0, 0, 0]).unwrap();
        assert_eq!(adjacency_string(&g), vec![0, 0, 0]);
    }

    #[test]
    fn rejects_forward_edges_and_bad_lengths() {
        assert!(matches!(
            Dag::new(2, vec![0, 0, 2, 0]),
            Err(Error::MalformedGraph(_))
        ));
        assert!(matches!(
            Dag::new(2, vec![0, 0, 1]),
            Err(Error::UnequalBlocks { .. })
        ));
        assert!(Dag::new(0, vec![]).is_err());
        assert!(PaGraph::new(2, vec![]).is_err());
    }

    #[test]
    fn example_n5_undirected_degrees() {
        let u = example_n5().undirect();
        assert_eq!(u.edge_count(), 15);
        assert_eq!(u.degrees(), &[3, 9, 5, 5, 5, 3]);
    }

    #[test]
    fn single_edge_undirect() {
        let d = Dag::new(1, vec![0]).unwrap();
        let u = d.undirect();
        assert_eq!(u.edges(), &[(1, 0)]);
    }

    #[test]
    fn in_degree_counts_match_string_occurrences() {
        let d = example_n5();
        let deg = d.in_degrees();
        assert_eq!(deg, vec![3, 6, 2, 2, 2, 0]);
        assert_eq!(deg.iter().sum::<usize>(), d.n() * d.m());
    }

    #[test]
    fn simple_beyond_seed() {
        assert!(!example_n5().is_simple_beyond_seed());
        let d = Dag::new(2, vec![0, 0, 0, 1, 1, 2]).unwrap();
        assert!(d.is_simple_beyond_seed());
    }
}
