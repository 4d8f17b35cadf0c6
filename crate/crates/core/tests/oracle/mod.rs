//! Independent reference computations for integration tests. Nothing here
//! calls the library's own elimination, products or reductions; inputs are
//! read only through raw entry iterators.

#![allow(dead_code)]

use liftkit::decongestion::{CycleBasis, Multigraph};
use liftkit::{BinMatrix, ChainComplex2, ChainComplexZ, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub fn dense_z(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let mut d = vec![vec![BigInt::zero(); m.ncols()]; m.nrows()];
    for (r, c, v) in m.entries() {
        d[r][c] = v.clone();
    }
    d
}

pub fn dense_f2(m: &BinMatrix) -> Vec<Vec<u8>> {
    let mut d = vec![vec![0u8; m.ncols()]; m.nrows()];
    for (r, c) in m.entries() {
        d[r][c] = 1;
    }
    d
}

/// Schoolbook product over the integers.
pub fn product_is_zero(a: &IntMatrix, b: &IntMatrix) -> bool {
    let (da, db) = (dense_z(a), dense_z(b));
    (0..a.nrows()).all(|i| {
        (0..b.ncols()).all(|j| {
            let s: BigInt = (0..a.ncols()).map(|k| &da[i][k] * &db[k][j]).sum();
            s.is_zero()
        })
    })
}

pub fn composes_to_zero(c: &ChainComplexZ) -> bool {
    c.boundaries()
        .windows(2)
        .all(|w| product_is_zero(&w[0], &w[1]))
}

/// Gaussian elimination over F₂ on dense byte rows.
pub fn rank_f2(mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] == 1 {
                row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        rank += 1;
    }
    rank
}

/// Betti numbers over F₂ with `boundaries[j]` mapping degree `j + 1` to `j`.
pub fn betti_f2(c: &ChainComplex2) -> Vec<usize> {
    let ranks: Vec<usize> = c
        .boundaries()
        .iter()
        .map(|b| rank_f2(dense_f2(b)))
        .collect();
    (0..c.dims().len())
        .map(|j| {
            let out = if j == 0 { 0 } else { ranks[j - 1] };
            let inc = ranks.get(j).copied().unwrap_or(0);
            c.dims()[j] - out - inc
        })
        .collect()
}

/// Odd entries of `z` sit exactly at the ones of `b`, boundary by boundary.
pub fn reduces_to(z: &ChainComplexZ, b: &ChainComplex2) -> bool {
    z.dims() == b.dims()
        && z.boundaries().iter().zip(b.boundaries()).all(|(mz, mb)| {
            let mut odd: Vec<(usize, usize)> = mz
                .entries()
                .filter(|(_, _, v)| v.is_odd())
                .map(|(r, c, _)| (r, c))
                .collect();
            let mut ones: Vec<(usize, usize)> = mb.entries().collect();
            odd.sort_unstable();
            ones.sort_unstable();
            odd == ones
        })
}

/// Largest row or column ℓ₁ norm over all boundaries.
pub fn sparsity_z(c: &ChainComplexZ) -> BigInt {
    let mut best = BigInt::zero();
    for m in c.boundaries() {
        let mut rows = vec![BigInt::zero(); m.nrows()];
        let mut cols = vec![BigInt::zero(); m.ncols()];
        for (r, col, v) in m.entries() {
            rows[r] += v.abs();
            cols[col] += v.abs();
        }
        for s in rows.into_iter().chain(cols) {
            best = best.max(s);
        }
    }
    best
}

pub fn sparsity_f2(c: &ChainComplex2) -> usize {
    let mut best = 0;
    for m in c.boundaries() {
        let mut rows = vec![0; m.nrows()];
        let mut cols = vec![0; m.ncols()];
        for (r, col) in m.entries() {
            rows[r] += 1;
            cols[col] += 1;
        }
        best = rows.into_iter().chain(cols).fold(best, usize::max);
    }
    best
}

/// `E − V + components` by union-find.
pub fn cycle_rank(g: &Multigraph) -> usize {
    let n = g.num_vertices();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut comps = n;
    for e in g.edges() {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a != b {
            parent[a] = b;
            comps -= 1;
        }
    }
    g.num_edges() + comps - n
}

/// Edge-incidence vector of a cycle.
pub fn cycle_vector(g: &Multigraph, cycle: &[usize]) -> Vec<u8> {
    let mut v = vec![0u8; g.num_edges()];
    for &e in cycle {
        v[e] ^= 1;
    }
    v
}

/// Every vertex meets the edge set an even number of times, loops counted twice.
pub fn is_cycle_space_vector(g: &Multigraph, v: &[u8]) -> bool {
    let mut deg = vec![0usize; g.num_vertices()];
    for (e, &bit) in v.iter().enumerate() {
        if bit == 1 {
            let edge = g.edge(e);
            deg[edge.u] += 1;
            deg[edge.v] += 1;
        }
    }
    deg.iter().all(|d| d % 2 == 0)
}

/// Each cycle is a closed walk with no repeated vertex, its certificate lies
/// on it, and no later cycle uses the certificate.
pub fn weakly_fundamental(g: &Multigraph, basis: &CycleBasis) -> bool {
    basis.cycles.len() == basis.certificates.len()
        && basis.cycles.iter().enumerate().all(|(i, c)| {
            let cert = basis.certificates[i];
            c.contains(&cert)
                && basis.cycles[i + 1..].iter().all(|later| !later.contains(&cert))
                && simple_closed(g, c)
        })
}

fn simple_closed(g: &Multigraph, cycle: &[usize]) -> bool {
    let Some(&first) = cycle.first() else {
        return false;
    };
    let e0 = g.edge(first);
    if cycle.len() == 1 {
        return e0.u == e0.v;
    }
    // try both orientations of the first edge
    [(e0.u, e0.v), (e0.v, e0.u)].into_iter().any(|(start, mut at)| {
        let mut seen = vec![start];
        for &e in &cycle[1..] {
            let edge = g.edge(e);
            if seen.contains(&at) {
                return false;
            }
            seen.push(at);
            at = if edge.u == at {
                edge.v
            } else if edge.v == at {
                edge.u
            } else {
                return false;
            };
        }
        at == start && {
            let mut ids = cycle.to_vec();
            ids.sort_unstable();
            ids.windows(2).all(|w| w[0] != w[1])
        }
    })
}

/// Rank over ℚ by exact rational elimination.
pub fn rank_q(m: &IntMatrix) -> usize {
    use num_rational::BigRational;
    let mut rows: Vec<Vec<BigRational>> = dense_z(m)
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut rank = 0;
    for c in 0..m.ncols() {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                row.iter_mut().zip(&pivot).for_each(|(a, b)| *a -= &f * b);
            }
        }
        rank += 1;
    }
    rank
}

/// Some invariant factor is even exactly when reducing mod 2 drops the rank.
pub fn has_even_factor(m: &IntMatrix) -> bool {
    let mod2: Vec<Vec<u8>> = dense_z(m)
        .iter()
        .map(|r| r.iter().map(|v| u8::from(v.is_odd())).collect())
        .collect();
    rank_f2(mod2) < rank_q(m)
}

/// Girth of a simple graph: the minimum over roots of `d(u) + d(w) + 1` for
/// non-tree edges `uw` of the breadth-first tree.
pub fn girth(g: &Multigraph) -> Option<usize> {
    let n = g.num_vertices();
    let mut adj = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        adj[e.u].push((e.v, i));
        adj[e.v].push((e.u, i));
    }
    let mut best: Option<usize> = None;
    for root in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut via = vec![usize::MAX; n];
        dist[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &(y, e) in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    via[y] = e;
                    queue.push_back(y);
                } else if via[x] != e {
                    let len = dist[x] + dist[y] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}
