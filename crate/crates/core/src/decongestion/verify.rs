use std::collections::BTreeSet;

use serde::Serialize;

use super::{CycleBasis, Multigraph};
use crate::bits::{Bits, Echelon};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WeakReport {
    pub ok: bool,
    /// First cycle that is not a simple closed walk or whose certificate is
    /// missing from it or reused later.
    pub failing: Option<usize>,
}

/// Vertices visited by `cycle` as a closed walk, or `None` if it is not a
/// simple closed walk.
fn walk_vertices(g: &Multigraph, cycle: &[usize]) -> Option<Vec<usize>> {
    let edge = |i: usize| g.edges().get(i);
    let first = edge(*cycle.first()?)?;
    let start = match cycle {
        [_] => {
            return first.is_loop().then(|| vec![first.u]);
        }
        [_, second, ..] => {
            let second = edge(*second)?;
            if first.is_loop() {
                return None;
            }
            if cycle.len() == 2 || second.u == first.v || second.v == first.v {
                first.u
            } else {
                first.v
            }
        }
        [] => return None,
    };
    let mut seen_edges = BTreeSet::new();
    let mut verts = Vec::with_capacity(cycle.len());
    let mut cur = start;
    for &i in cycle {
        let e = edge(i)?;
        if !seen_edges.insert(i) || e.is_loop() || (e.u != cur && e.v != cur) {
            return None;
        }
        verts.push(cur);
        cur = e.other(cur);
    }
    let distinct: BTreeSet<_> = verts.iter().collect();
    (cur == start && distinct.len() == verts.len()).then_some(verts)
}

pub fn verify_weakly_fundamental(g: &Multigraph, basis: &CycleBasis) -> WeakReport {
    let mut last = vec![None; g.num_edges()];
    for (k, c) in basis.cycles.iter().enumerate() {
        for &e in c {
            if let Some(slot) = last.get_mut(e) {
                *slot = Some(k);
            }
        }
    }
    let failing = (0..basis.cycles.len()).find(|&k| {
        let cert = basis.certificates.get(k).copied();
        walk_vertices(g, &basis.cycles[k]).is_none()
            || cert.is_none_or(|c| !basis.cycles[k].contains(&c) || last.get(c) != Some(&Some(k)))
    });
    WeakReport {
        ok: failing.is_none() && basis.certificates.len() == basis.cycles.len(),
        failing,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpanReport {
    pub ok: bool,
    pub rank: usize,
    pub count: usize,
    pub expected: usize,
}

/// The cycles are independent over F₂ and as many as `E − V + components`.
pub fn verify_spanning(g: &Multigraph, basis: &CycleBasis) -> SpanReport {
    let mut ech = Echelon::new(g.num_edges());
    for c in &basis.cycles {
        let mut v = Bits::zeros(g.num_edges());
        for &e in c {
            v.flip(e);
        }
        ech.insert(v);
    }
    let expected = g.cycle_rank();
    SpanReport {
        ok: ech.rank() == expected && basis.cycles.len() == expected,
        rank: ech.rank(),
        count: basis.cycles.len(),
        expected,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityStats {
    pub per_edge: Vec<usize>,
    pub max: usize,
    /// `histogram[k]` edges appear in exactly `k` cycles.
    pub histogram: Vec<usize>,
}

pub fn multiplicity_stats(basis: &CycleBasis, g: &Multigraph) -> MultiplicityStats {
    let mut per_edge = vec![0; g.num_edges()];
    for c in &basis.cycles {
        for &e in c {
            per_edge[e] += 1;
        }
    }
    let max = per_edge.iter().copied().max().unwrap_or(0);
    let mut histogram = vec![0; max + 1];
    for &m in &per_edge {
        histogram[m] += 1;
    }
    MultiplicityStats {
        per_edge,
        max,
        histogram,
    }
}

/// Sum over cycles of the weights of their edges.
pub fn basis_weight(basis: &CycleBasis, g: &Multigraph) -> u64 {
    basis
        .cycles
        .iter()
        .flatten()
        .map(|&e| g.edge(e).weight)
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionStats {
    /// For each cycle, how many later cycles share a vertex with it.
    pub per_cycle: Vec<usize>,
    pub max: usize,
}

pub fn intersection_stats(basis: &CycleBasis, g: &Multigraph) -> IntersectionStats {
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); g.num_vertices()];
    let cycle_verts: Vec<BTreeSet<usize>> = basis
        .cycles
        .iter()
        .map(|c| c.iter().flat_map(|&e| [g.edge(e).u, g.edge(e).v]).collect())
        .collect();
    for (k, vs) in cycle_verts.iter().enumerate() {
        for &v in vs {
            by_vertex[v].push(k);
        }
    }
    let per_cycle: Vec<usize> = cycle_verts
        .iter()
        .enumerate()
        .map(|(k, vs)| {
            vs.iter()
                .flat_map(|&v| by_vertex[v].iter().copied().filter(|&j| j > k))
                .collect::<BTreeSet<_>>()
                .len()
        })
        .collect();
    IntersectionStats {
        max: per_cycle.iter().copied().max().unwrap_or(0),
        per_cycle,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Multigraph {
        Multigraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn triangles_without_unique_edges_fail() {
        // triangles 012, 013, 023: edge sets {0,1,3}, {0,2,4}, {1,2,5}
        let g = k4();
        let good = CycleBasis {
            cycles: vec![vec![0, 3, 1], vec![0, 4, 2], vec![1, 5, 2]],
            certificates: vec![3, 4, 5],
        };
        assert!(verify_weakly_fundamental(&g, &good).ok);
        assert!(verify_spanning(&g, &good).ok);
        // the 4-cycle 0-1-2-3 reuses every edge of the last triangle's complement
        let bad = CycleBasis {
            cycles: vec![vec![0, 3, 1], vec![0, 3, 5, 2]],
            certificates: vec![3, 5],
        };
        assert_eq!(verify_weakly_fundamental(&g, &bad).failing, Some(0));
        assert!(!verify_spanning(&g, &bad).ok);
    }

    #[test]
    fn walks_must_be_simple_and_closed() {
        let g = k4();
        let open = CycleBasis {
            cycles: vec![vec![0, 3]],
            certificates: vec![0],
        };
        assert!(!verify_weakly_fundamental(&g, &open).ok);
        // figure-eight style revisit of vertex 0
        let h = Multigraph::from_edges(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        let eight = CycleBasis {
            cycles: vec![vec![0, 1, 2, 3, 4, 5]],
            certificates: vec![0],
        };
        assert!(!verify_weakly_fundamental(&h, &eight).ok);
    }

    #[test]
    fn stats_on_small_cases() {
        let g = k4();
        let b = CycleBasis {
            cycles: vec![vec![0, 3, 1], vec![0, 4, 2], vec![1, 5, 2]],
            certificates: vec![3, 4, 5],
        };
        let m = multiplicity_stats(&b, &g);
        assert_eq!(m.max, 2);
        assert_eq!(m.histogram, vec![0, 3, 3]);
        assert_eq!(basis_weight(&b, &g), 9);
        assert_eq!(intersection_stats(&b, &g).per_cycle, vec![2, 1, 0]);
        let tree = Multigraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let empty = CycleBasis::default();
        assert_eq!(multiplicity_stats(&empty, &tree).per_edge, vec![0, 0]);
        assert!(verify_spanning(&tree, &empty).ok);
    }
}
