//! Weakly fundamental cycle bases with low edge multiplicity.
//!
//! The basis is built by a randomized peeling of the graph: pendant vertices
//! are dropped, degree-2 vertices are contracted or have their loop emitted,
//! and otherwise a shortest cycle is emitted and one of its edges, chosen
//! uniformly at random, is deleted. Each emitted cycle thus owns an edge that
//! never appears later.

mod algorithm;
mod generate;
mod verify;

use serde::Serialize;

use crate::error::{Error, Result};

pub use algorithm::{
    ceil_log2, cycle_basis, default_multiplicity_ceiling, preprocess, shortest_cycle,
    CycleBasisOptions, CycleBasisRun, Preprocessed,
};
pub use generate::{bfs_fundamental_basis, random_bounded_multigraph, random_cubic_graph};
pub use verify::{
    basis_weight, intersection_stats, multiplicity_stats, verify_spanning,
    verify_weakly_fundamental, IntersectionStats, MultiplicityStats, SpanReport, WeakReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: u64,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// Endpoint opposite `x`; for a loop, `x` itself.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected multigraph; self-loops and parallel edges are allowed and
/// edges are identified by insertion index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<Edge>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::new(n);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<usize> {
        self.add_weighted_edge(a, b, 1)
    }

    pub fn add_weighted_edge(&mut self, a: usize, b: usize, weight: u64) -> Result<usize> {
        if a >= self.n || b >= self.n {
            return Err(Error::InvalidArgument(format!(
                "edge ({a}, {b}) has an endpoint outside 0..{}",
                self.n
            )));
        }
        self.edges.push(Edge { u: a, v: b, weight });
        Ok(self.edges.len() - 1)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    /// Replace every weight.
    pub fn with_weights(mut self, weights: &[u64]) -> Self {
        assert_eq!(weights.len(), self.edges.len());
        for (e, &w) in self.edges.iter_mut().zip(weights) {
            e.weight = w;
        }
        self
    }

    /// Degrees, with a self-loop counting twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Number of connected components, isolated vertices included.
    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut count = self.n;
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }

    /// Dimension of the cycle space, `E − V + components`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.components() - self.n
    }
}

/// Ordered cycles, each a list of edge indices in walk order, with one
/// certificate edge per cycle that no later cycle uses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CycleBasis {
    pub cycles: Vec<Vec<usize>>,
    pub certificates: Vec<usize>,
}

impl CycleBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub(crate) fn push(&mut self, cycle: Vec<usize>, certificate: usize) {
        self.cycles.push(cycle);
        self.certificates.push(certificate);
    }
}
