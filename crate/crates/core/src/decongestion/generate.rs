use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use super::{CycleBasis, Multigraph};
use crate::error::{Error, Result};

/// Uniform simple 3-regular graph on `n` vertices, by the configuration model
/// with rejection of loops and parallel edges.
pub fn random_cubic_graph<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Multigraph> {
    if n % 2 == 1 || n < 4 {
        return Err(Error::InvalidArgument(format!(
            "a simple cubic graph needs an even vertex count of at least 4, got {n}"
        )));
    }
    let mut points: Vec<usize> = (0..3 * n).map(|p| p / 3).collect();
    loop {
        points.shuffle(rng);
        let mut seen = BTreeSet::new();
        let simple = points.chunks(2).all(|p| {
            let (a, b) = (p[0].min(p[1]), p[0].max(p[1]));
            a != b && seen.insert((a, b))
        });
        if simple {
            let edges = points.chunks(2).map(|p| (p[0], p[1]));
            return Multigraph::from_edges(n, edges);
        }
    }
}

/// Random multigraph on `1..=max_vertices` vertices, loops and parallel edges
/// allowed, with every degree at most `max_degree` (a loop counts twice).
pub fn random_bounded_multigraph<R: Rng + ?Sized>(
    rng: &mut R,
    max_vertices: usize,
    max_degree: usize,
) -> Multigraph {
    let n = rng.random_range(1..=max_vertices.max(1));
    let attempts = rng.random_range(0..=n * max_degree / 2 + 1);
    let mut deg = vec![0; n];
    let mut g = Multigraph::new(n);
    for _ in 0..attempts {
        let a = rng.random_range(0..n);
        let b = if rng.random_bool(0.1) {
            a
        } else {
            rng.random_range(0..n)
        };
        let need = if a == b { 2 } else { 1 };
        if deg[a] + need > max_degree || deg[b] + need > max_degree {
            continue;
        }
        if a == b {
            deg[a] += 2;
        } else {
            deg[a] += 1;
            deg[b] += 1;
        }
        g.add_edge(a, b).expect("endpoints in range");
    }
    g
}

/// Fundamental cycle basis of a breadth-first spanning forest: one cycle per
/// non-tree edge, certified by that edge.
pub fn bfs_fundamental_basis(g: &Multigraph) -> CycleBasis {
    let n = g.num_vertices();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        adj[e.u].push(i);
        if !e.is_loop() {
            adj[e.v].push(i);
        }
    }
    let mut depth = vec![usize::MAX; n];
    let mut parent_edge = vec![usize::MAX; n];
    let mut tree = vec![false; g.num_edges()];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &i in &adj[u] {
                let w = g.edge(i).other(u);
                if depth[w] == usize::MAX {
                    depth[w] = depth[u] + 1;
                    parent_edge[w] = i;
                    tree[i] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut basis = CycleBasis::default();
    for (f, e) in g.edges().iter().enumerate() {
        if tree[f] {
            continue;
        }
        let (mut a, mut b) = (e.v, e.u);
        let mut from_b = Vec::new();
        let mut from_a = Vec::new();
        while a != b {
            if depth[a] >= depth[b] {
                from_a.push(parent_edge[a]);
                a = g.edge(parent_edge[a]).other(a);
            } else {
                from_b.push(parent_edge[b]);
                b = g.edge(parent_edge[b]).other(b);
            }
        }
        let mut cycle = vec![f];
        cycle.extend(from_a);
        cycle.extend(from_b.into_iter().rev());
        basis.push(cycle, f);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::super::{verify_spanning, verify_weakly_fundamental};
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cubic_graphs_are_simple_and_regular() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_cubic_graph(64, &mut rng).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 3));
        assert_eq!(g.num_edges(), 96);
        assert!(random_cubic_graph(5, &mut rng).is_err());
    }

    #[test]
    fn bfs_basis_is_weakly_fundamental() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let g = random_bounded_multigraph(&mut rng, 20, 6);
            assert!(g.max_degree() <= 6);
            let b = bfs_fundamental_basis(&g);
            assert!(verify_weakly_fundamental(&g, &b).ok);
            assert!(verify_spanning(&g, &b).ok);
        }
    }
}
