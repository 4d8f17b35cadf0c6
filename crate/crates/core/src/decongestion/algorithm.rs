use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::verify::multiplicity_stats;
use super::{CycleBasis, Multigraph};
use crate::error::{Error, Result};

pub fn ceil_log2(v: usize) -> usize {
    if v <= 1 {
        0
    } else {
        (usize::BITS - (v - 1).leading_zeros()) as usize
    }
}

/// `4 · ⌈log₂V⌉²`, with `⌈log₂V⌉` floored at 1.
pub fn default_multiplicity_ceiling(v: usize) -> usize {
    let l = ceil_log2(v).max(1);
    4 * l * l
}

/// Outcome of collapsing self-loops and parallel classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preprocessed {
    /// Same vertices, one edge per parallel class, no self-loops.
    pub simple: Multigraph,
    /// Original index of each edge of `simple`.
    pub remap: Vec<usize>,
    /// Singleton loop cycles, then the pair cycles `(e_j, e_{j+1})` of each
    /// parallel class, each with its certificate.
    pub extra: CycleBasis,
}

/// Self-loops become singleton cycles; each parallel class `e_0 < … < e_k`
/// keeps `e_k` and records the pairs `(e_j, e_{j+1})` certified by `e_j`.
pub fn preprocess(g: &Multigraph) -> Preprocessed {
    let mut extra = CycleBasis::default();
    let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        if e.is_loop() {
            extra.push(vec![i], i);
        } else {
            classes.entry((e.u.min(e.v), e.u.max(e.v))).or_default().push(i);
        }
    }
    let mut keep = Vec::with_capacity(classes.len());
    for class in classes.values() {
        for w in class.windows(2) {
            extra.push(vec![w[0], w[1]], w[0]);
        }
        keep.push(*class.last().expect("nonempty class"));
    }
    keep.sort_unstable();
    let mut simple = Multigraph::new(g.num_vertices());
    for &i in &keep {
        let e = g.edge(i);
        simple
            .add_weighted_edge(e.u, e.v, e.weight)
            .expect("endpoints in range");
    }
    Preprocessed {
        simple,
        remap: keep,
        extra,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleBasisOptions {
    pub seed: u64,
    /// Restarts allowed after the first attempt, each with the next seed.
    pub max_retries: usize,
    pub degree_cap: usize,
    /// An attempt whose maximum edge multiplicity exceeds this is retried.
    /// `None` accepts the first attempt.
    pub multiplicity_ceiling: Option<usize>,
}

impl CycleBasisOptions {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            max_retries: 32,
            degree_cap: 16,
            multiplicity_ceiling: None,
        }
    }

    pub fn with_ceiling(mut self, ceiling: Option<usize>) -> Self {
        self.multiplicity_ceiling = ceiling;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleBasisRun {
    pub basis: CycleBasis,
    pub max_multiplicity: usize,
    pub retries_used: usize,
    /// Seed of the accepted attempt.
    pub seed_used: u64,
}

/// Weakly fundamental cycle basis of a bounded-degree multigraph.
pub fn cycle_basis(g: &Multigraph, opts: CycleBasisOptions) -> Result<CycleBasisRun> {
    for (vertex, &degree) in g.degrees().iter().enumerate() {
        if degree > opts.degree_cap {
            return Err(Error::DegreeCapExceeded {
                vertex,
                degree,
                cap: opts.degree_cap,
            });
        }
    }
    let pre = preprocess(g);
    let mut best = usize::MAX;
    for attempt in 0..=opts.max_retries {
        let seed = opts.seed.wrapping_add(attempt as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut basis = pre.extra.clone();
        Residual::from_simple(&pre).peel(&mut rng, &mut basis);
        let max_multiplicity = multiplicity_stats(&basis, g).max;
        best = best.min(max_multiplicity);
        if opts.multiplicity_ceiling.is_none_or(|c| max_multiplicity <= c) {
            return Ok(CycleBasisRun {
                basis,
                max_multiplicity,
                retries_used: attempt,
                seed_used: seed,
            });
        }
    }
    Err(Error::RetriesExhausted {
        attempts: opts.max_retries + 1,
        best,
    })
}

/// A minimum-length simple cycle, as edge indices in walk order.
///
/// Self-loops are preferred (lowest index), then parallel pairs (lowest index
/// pair), then a breadth-first search for the shortest cycle through a root.
pub fn shortest_cycle(g: &Multigraph) -> Result<Vec<usize>> {
    let mut res = Residual::new(g.num_vertices());
    for (i, e) in g.edges().iter().enumerate() {
        res.add(e.u, e.v, vec![i]);
    }
    let walk = res.shortest_cycle().ok_or(Error::Acyclic)?;
    Ok(res.expand(&walk))
}

#[derive(Clone, Debug)]
struct ResEdge {
    a: usize,
    b: usize,
    /// Original edges from `a` to `b`.
    path: Vec<usize>,
    alive: bool,
}

/// A residual edge traversed forward (`a → b`) or backward.
type Step = (usize, bool);

/// The shrinking graph the peeling works on. Each residual edge stands for a
/// path of original edges through contracted degree-2 vertices. Cycle
/// lengths here count residual edges.
struct Residual {
    edges: Vec<ResEdge>,
    adj: Vec<BTreeSet<usize>>,
    deg: Vec<usize>,
    deg1: BTreeSet<usize>,
    deg2: BTreeSet<usize>,
    alive_count: usize,
    loops: BTreeSet<usize>,
    /// Candidate parallel pairs; entries whose edges died are dropped lazily.
    parallel: BTreeSet<(usize, usize)>,
    /// Vertices of positive degree, with each one's slot in `pool_pos`.
    pool: Vec<usize>,
    pool_pos: Vec<usize>,
    scratch: Bfs,
}

impl Residual {
    fn new(n: usize) -> Self {
        Self {
            edges: Vec::new(),
            adj: vec![BTreeSet::new(); n],
            deg: vec![0; n],
            deg1: BTreeSet::new(),
            deg2: BTreeSet::new(),
            alive_count: 0,
            loops: BTreeSet::new(),
            parallel: BTreeSet::new(),
            pool: Vec::new(),
            pool_pos: vec![usize::MAX; n],
            scratch: Bfs::new(n),
        }
    }

    fn from_simple(pre: &Preprocessed) -> Self {
        let mut r = Self::new(pre.simple.num_vertices());
        for (e, &orig) in pre.simple.edges().iter().zip(&pre.remap) {
            r.add(e.u, e.v, vec![orig]);
        }
        r
    }

    fn set_deg(&mut self, v: usize, d: usize) {
        let old = self.deg[v];
        if old == 1 {
            self.deg1.remove(&v);
        } else if old == 2 {
            self.deg2.remove(&v);
        }
        self.deg[v] = d;
        if old == 0 && d > 0 {
            self.pool_pos[v] = self.pool.len();
            self.pool.push(v);
        } else if old > 0 && d == 0 {
            let slot = self.pool_pos[v];
            self.pool.swap_remove(slot);
            if let Some(&moved) = self.pool.get(slot) {
                self.pool_pos[moved] = slot;
            }
            self.pool_pos[v] = usize::MAX;
        }
        if d == 1 {
            self.deg1.insert(v);
        } else if d == 2 {
            self.deg2.insert(v);
        }
    }

    fn add(&mut self, a: usize, b: usize, path: Vec<usize>) -> usize {
        let id = self.edges.len();
        if a == b {
            self.loops.insert(id);
        } else {
            for &other in &self.adj[a] {
                if self.other(other, a) == b {
                    self.parallel.insert((other, id));
                }
            }
        }
        self.edges.push(ResEdge {
            a,
            b,
            path,
            alive: true,
        });
        self.adj[a].insert(id);
        self.adj[b].insert(id);
        self.set_deg(a, self.deg[a] + 1);
        self.set_deg(b, self.deg[b] + 1);
        self.alive_count += 1;
        id
    }

    fn remove(&mut self, id: usize) {
        let (a, b) = (self.edges[id].a, self.edges[id].b);
        self.edges[id].alive = false;
        self.loops.remove(&id);
        self.adj[a].remove(&id);
        self.adj[b].remove(&id);
        self.set_deg(a, self.deg[a] - 1);
        self.set_deg(b, self.deg[b] - 1);
        self.alive_count -= 1;
    }

    fn other(&self, id: usize, x: usize) -> usize {
        let e = &self.edges[id];
        if e.a == x {
            e.b
        } else {
            e.a
        }
    }

    /// Original edges of `id` read starting from vertex `from`.
    fn oriented_path(&self, id: usize, from: usize) -> Vec<usize> {
        let e = &self.edges[id];
        let mut p = e.path.clone();
        if e.a != from {
            p.reverse();
        }
        p
    }

    fn expand(&self, walk: &[Step]) -> Vec<usize> {
        let mut out = Vec::new();
        for &(id, fwd) in walk {
            let p = &self.edges[id].path;
            if fwd {
                out.extend(p.iter().copied());
            } else {
                out.extend(p.iter().rev().copied());
            }
        }
        out
    }

    fn peel<R: Rng>(mut self, rng: &mut R, out: &mut CycleBasis) {
        while self.alive_count > 0 {
            if let Some(&v) = self.deg1.first() {
                let id = *self.adj[v].first().expect("degree one");
                self.remove(id);
            } else if let Some(&v) = self.deg2.first() {
                let first = *self.adj[v].first().expect("degree two");
                let e = &self.edges[first];
                if e.a == e.b {
                    out.push(e.path.clone(), e.path[0]);
                    self.remove(first);
                } else {
                    let second = *self.adj[v].last().expect("degree two");
                    let x = self.other(first, v);
                    let y = self.other(second, v);
                    let mut path = self.oriented_path(first, x);
                    path.extend(self.oriented_path(second, v));
                    self.remove(first);
                    self.remove(second);
                    self.add(x, y, path);
                }
            } else {
                let walk = self.short_cycle(rng);
                let (id, _) = walk[rng.random_range(0..walk.len())];
                out.push(self.expand(&walk), self.edges[id].path[0]);
                self.remove(id);
            }
        }
    }

    fn shortest_cycle(&mut self) -> Option<Vec<Step>> {
        if let Some(&id) = self.loops.first() {
            return Some(vec![(id, true)]);
        }
        while let Some(&(p, q)) = self.parallel.first() {
            if self.edges[p].alive && self.edges[q].alive {
                let u = self.edges[p].a;
                return Some(vec![(p, true), (q, self.edges[q].a != u)]);
            }
            self.parallel.remove(&(p, q));
        }
        let mut best: Option<Vec<Step>> = None;
        for r in 0..self.deg.len() {
            if self.deg[r] == 0 {
                continue;
            }
            let limit = best.as_ref().map_or(usize::MAX, |b| b.len() - 1);
            if let Some(walk) = self.scratch.cycle_through(r, limit, &self.adj, &self.edges) {
                let done = walk.len() == 3;
                best = Some(walk);
                if done {
                    break;
                }
            }
        }
        best
    }

    /// A loop, a parallel pair, or else the shortest cycle closed by the
    /// first level of a breadth-first search from a random vertex that has a
    /// non-tree edge. With every degree at least three that level is at most
    /// `⌈log₂V⌉`, so the cycle has length at most `2⌈log₂V⌉ + 1`.
    fn short_cycle<R: Rng>(&mut self, rng: &mut R) -> Vec<Step> {
        if let Some(&id) = self.loops.first() {
            return vec![(id, true)];
        }
        while let Some(&(p, q)) = self.parallel.first() {
            if self.edges[p].alive && self.edges[q].alive {
                let u = self.edges[p].a;
                return vec![(p, true), (q, self.edges[q].a != u)];
            }
            self.parallel.remove(&(p, q));
        }
        let r = self.pool[rng.random_range(0..self.pool.len())];
        self.scratch
            .first_level_cycle(r, &self.adj, &self.edges)
            .expect("min degree three forces a cycle")
    }
}

/// Endpoint of residual edge `id` opposite `x`.
fn far(edges: &[ResEdge], id: usize, x: usize) -> usize {
    let e = &edges[id];
    if e.a == x {
        e.b
    } else {
        e.a
    }
}

/// Reusable breadth-first search state.
struct Bfs {
    dist: Vec<usize>,
    parent: Vec<usize>,
    branch: Vec<usize>,
    touched: Vec<usize>,
    queue: VecDeque<usize>,
}

impl Bfs {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![usize::MAX; n],
            parent: vec![usize::MAX; n],
            branch: vec![usize::MAX; n],
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    /// Shortest cycle through `r` in a graph without loops or parallel edges,
    /// if one of length at most `limit` exists.
    ///
    /// The search labels each vertex by the neighbour of `r` its tree path
    /// leaves through; an edge joining two labels (or returning to `r`)
    /// closes a simple cycle of length `dist[u] + dist[w] + 1`.
    fn cycle_through(
        &mut self,
        r: usize,
        limit: usize,
        adj: &[BTreeSet<usize>],
        edges: &[ResEdge],
    ) -> Option<Vec<Step>> {
        self.reset(r);
        let mut best: Option<(usize, usize, usize, usize)> = None;
        while let Some(u) = self.queue.pop_front() {
            let cap = best.map_or(limit, |b| b.0.min(limit));
            if 2 * self.dist[u] + 1 > cap {
                break;
            }
            for &id in &adj[u] {
                if id == self.parent[u] {
                    continue;
                }
                let w = far(edges, id, u);
                if self.dist[w] == usize::MAX {
                    self.dist[w] = self.dist[u] + 1;
                    self.parent[w] = id;
                    self.branch[w] = if u == r { w } else { self.branch[u] };
                    self.touched.push(w);
                    self.queue.push_back(w);
                } else if w == r || self.branch[w] != self.branch[u] {
                    let len = self.dist[u] + self.dist[w] + 1;
                    if len <= limit && best.is_none_or(|b| len < b.0) {
                        best = Some((len, u, w, id));
                    }
                }
            }
        }
        let (_, u, w, id) = best?;
        Some(self.close(u, w, id, edges))
    }

    /// Cycle through the tree edge-paths from `u` and `w` up to their common
    /// ancestor, closed by the non-tree edge `id` from `u` to `w`.
    fn close(&self, u: usize, w: usize, id: usize, edges: &[ResEdge]) -> Vec<Step> {
        let (mut a, mut b) = (u, w);
        let (mut up_a, mut up_b) = (Vec::new(), Vec::new());
        while a != b {
            if self.dist[a] >= self.dist[b] {
                let p = self.parent[a];
                up_a.push((p, edges[p].a != a));
                a = far(edges, p, a);
            } else {
                let p = self.parent[b];
                up_b.push((p, edges[p].a == b));
                b = far(edges, p, b);
            }
        }
        // up_a runs u → lca; traverse it lca → u, then u → w, then w → lca
        let mut walk: Vec<Step> = up_a.into_iter().rev().collect();
        walk.push((id, edges[id].a == u));
        walk.extend(up_b);
        walk
    }

    /// Breadth-first search from `r`, finishing the first level at which a
    /// non-tree edge appears and returning the shortest cycle those edges
    /// close with the tree.
    fn first_level_cycle(
        &mut self,
        r: usize,
        adj: &[BTreeSet<usize>],
        edges: &[ResEdge],
    ) -> Option<Vec<Step>> {
        self.reset(r);
        let mut best: Option<(usize, usize, usize, usize)> = None;
        while let Some(u) = self.queue.pop_front() {
            if best.is_some_and(|(_, bu, _, _)| self.dist[u] > self.dist[bu]) {
                break;
            }
            for &id in &adj[u] {
                if id == self.parent[u] {
                    continue;
                }
                let w = far(edges, id, u);
                if self.dist[w] == usize::MAX {
                    self.dist[w] = self.dist[u] + 1;
                    self.parent[w] = id;
                    self.touched.push(w);
                    self.queue.push_back(w);
                } else {
                    let len = self.tree_cycle_len(u, w, edges);
                    if best.is_none_or(|b| len < b.0) {
                        best = Some((len, u, w, id));
                    }
                }
            }
        }
        let (_, u, w, id) = best?;
        Some(self.close(u, w, id, edges))
    }

    fn tree_cycle_len(&self, u: usize, w: usize, edges: &[ResEdge]) -> usize {
        let (mut a, mut b) = (u, w);
        let mut len = 1;
        while a != b {
            let x = if self.dist[a] >= self.dist[b] { &mut a } else { &mut b };
            *x = far(edges, self.parent[*x], *x);
            len += 1;
        }
        len
    }

    fn reset(&mut self, r: usize) {
        for &t in &self.touched {
            self.dist[t] = usize::MAX;
            self.parent[t] = usize::MAX;
            self.branch[t] = usize::MAX;
        }
        self.touched.clear();
        self.queue.clear();
        self.dist[r] = 0;
        self.touched.push(r);
        self.queue.push_back(r);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Multigraph {
        Multigraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn log2_ceiling() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
        assert_eq!(default_multiplicity_ceiling(4096), 576);
    }

    #[test]
    fn preprocessing_cases() {
        let g = Multigraph::from_edges(2, [(0, 1), (0, 1), (0, 1)]).unwrap();
        let p = preprocess(&g);
        assert_eq!(p.extra.cycles, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(p.extra.certificates, vec![0, 1]);
        assert_eq!(p.remap, vec![2]);
        let l = Multigraph::from_edges(1, [(0, 0)]).unwrap();
        assert_eq!(preprocess(&l).extra.cycles, vec![vec![0]]);
        assert_eq!(preprocess(&k4()).remap, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn shortest_cycles() {
        assert_eq!(shortest_cycle(&k4()).unwrap().len(), 3);
        let c7 = Multigraph::from_edges(7, (0..7).map(|i| (i, (i + 1) % 7))).unwrap();
        assert_eq!(shortest_cycle(&c7).unwrap().len(), 7);
        let tree = Multigraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(shortest_cycle(&tree), Err(Error::Acyclic));
    }

    #[test]
    fn deterministic_per_seed() {
        let g = k4();
        let a = cycle_basis(&g, CycleBasisOptions::new(5)).unwrap();
        let b = cycle_basis(&g, CycleBasisOptions::new(5)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.basis.len(), 3);
    }

    #[test]
    fn degree_cap_is_enforced() {
        let star = Multigraph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        let opts = CycleBasisOptions {
            degree_cap: 3,
            ..CycleBasisOptions::new(0)
        };
        assert!(matches!(
            cycle_basis(&star, opts),
            Err(Error::DegreeCapExceeded { vertex: 0, degree: 4, cap: 3 })
        ));
    }
}
