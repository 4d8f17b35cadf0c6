//! Monte Carlo estimate of how much radial pushing to the boundary sphere
//! inflates area. For a center `p` the map sends `x` to the point of the unit
//! sphere on the ray that starts at `x` and passes through `p`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};

/// Samples drawn from each independent random substream.
const BLOCK: usize = 4096;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Determinant of a small dense matrix by elimination with partial pivoting.
fn det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
            .expect("nonempty range");
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    d
}

/// A flat k-simplex in the unit n-ball.
#[derive(Clone, Debug, PartialEq)]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
    /// Orthonormal basis of the tangent plane.
    tangent: Vec<Vec<f64>>,
    area: f64,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices.first().map_or(0, Vec::len);
        if vertices.len() < 2 || vertices.iter().any(|v| v.len() != n) || vertices.len() > n {
            return Err(Error::InvalidArgument(
                "a k-simplex in R^n needs k + 1 <= n points of dimension n, k >= 1".into(),
            ));
        }
        if let Some(v) = vertices.iter().find(|v| norm(v) >= 1.0) {
            return Err(Error::DegeneratePlacement(format!(
                "vertex at radius {:.4} is not inside the open unit ball",
                norm(v)
            )));
        }
        let mut tangent: Vec<Vec<f64>> = Vec::new();
        let mut scale = 1.0;
        for v in &vertices[1..] {
            let mut w: Vec<f64> = v.iter().zip(&vertices[0]).map(|(a, b)| a - b).collect();
            for t in &tangent {
                let c = dot(&w, t);
                w.iter_mut().zip(t).for_each(|(a, b)| *a -= c * b);
            }
            let len = norm(&w);
            if len < 1e-12 {
                return Err(Error::DegeneratePlacement("simplex vertices are affinely dependent".into()));
            }
            scale *= len;
            tangent.push(w.into_iter().map(|a| a / len).collect());
        }
        let k = tangent.len();
        let area = scale / (1..=k).map(|i| i as f64).product::<f64>();
        Ok(Self {
            vertices,
            tangent,
            area,
        })
    }

    /// Regular simplex of unit edge length with centroid at `offset · u`,
    /// where `u` is a unit vector orthogonal to the simplex.
    pub fn regular(k: usize, n: usize, offset: f64) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::InvalidArgument(format!("need 1 <= k < n, got k = {k}, n = {n}")));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = s / (k + 1) as f64;
        let u = 1.0 / ((k + 1) as f64).sqrt();
        let vertices = (0..=k)
            .map(|i| {
                let mut v = vec![0.0; n];
                for (j, x) in v.iter_mut().take(k + 1).enumerate() {
                    *x = if i == j { s } else { 0.0 } - c + offset * u;
                }
                v
            })
            .collect();
        Self::new(vertices)
    }

    pub fn dim(&self) -> usize {
        self.tangent.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    fn point(&self, bary: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.ambient_dim()];
        for (v, &b) in self.vertices.iter().zip(bary) {
            x.iter_mut().zip(v).for_each(|(a, c)| *a += b * c);
        }
        x
    }

    /// Area element of the pushed simplex at `x` relative to the simplex's
    /// own, with center `p`. Zero when `x` sits on `p`.
    pub fn jacobian(&self, p: &[f64], x: &[f64]) -> f64 {
        let d: Vec<f64> = p.iter().zip(x).map(|(a, b)| a - b).collect();
        let r = norm(&d);
        if r < 1e-12 {
            return 0.0;
        }
        let u: Vec<f64> = d.iter().map(|a| a / r).collect();
        let pu = dot(p, &u);
        let lambda = -pu + (pu * pu + 1.0 - dot(p, p)).sqrt();
        let images: Vec<Vec<f64>> = self
            .tangent
            .iter()
            .map(|t| {
                let tu = dot(t, &u);
                let du: Vec<f64> = t.iter().zip(&u).map(|(a, b)| -(a - b * tu) / r).collect();
                let dl = -lambda * dot(p, &du) / (lambda + pu);
                u.iter().zip(&du).map(|(a, b)| dl * a + lambda * b).collect()
            })
            .collect();
        let gram = images
            .iter()
            .map(|a| images.iter().map(|b| dot(a, b)).collect())
            .collect();
        det(gram).max(0.0).sqrt()
    }
}

/// Area of the pushed simplex for a fixed center, by the midpoint rule on a
/// barycentric grid of resolution `m`.
pub fn push_image_area(s: &Simplex, p: &[f64], m: usize) -> f64 {
    let k = s.dim();
    let mut total = 0.0;
    let mut count = 0usize;
    let mut idx = vec![0usize; k + 1];
    fn visit(pos: usize, left: usize, idx: &mut [usize], f: &mut dyn FnMut(&[usize])) {
        if pos + 1 == idx.len() {
            idx[pos] = left;
            f(idx);
            return;
        }
        for i in 0..=left {
            idx[pos] = i;
            visit(pos + 1, left - i, idx, f);
        }
    }
    let shift = 1.0 / (k + 1) as f64;
    visit(0, m, &mut idx, &mut |ix| {
        let bary: Vec<f64> = ix.iter().map(|&i| (i as f64 + shift) / (m + 1) as f64).collect();
        total += s.jacobian(p, &s.point(&bary));
        count += 1;
    });
    s.area() * total / count as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PushOptions {
    pub k: usize,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Distance of the simplex centroid from the ball's center.
    pub offset: f64,
    pub ceiling: f64,
}

impl PushOptions {
    pub fn new(k: usize, n: usize) -> Self {
        Self {
            k,
            n,
            samples: 100_000,
            seed: 0,
            offset: 0.25,
            ceiling: 50.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub k: usize,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Mean of (image area) / (source area) over centers.
    pub mean: f64,
    pub std_err: f64,
    pub ceiling: f64,
    pub finite: bool,
    pub below_ceiling: bool,
}

fn sample_center<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let len = norm(&g);
    let radius = 0.5 * rng.random::<f64>().powf(1.0 / n as f64);
    g.into_iter().map(|a| a * radius / len).collect()
}

fn sample_barycentric<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..=k).map(|_| Exp1.sample(rng)).collect();
    let sum: f64 = e.iter().sum();
    e.into_iter().map(|a| a / sum).collect()
}

/// Expected area inflation of the unit regular k-simplex pushed from a
/// center uniform in the ball of radius 1/2. Each sample draws a center and
/// a uniform point of the simplex; block `b` of samples uses stream `b` of
/// the seeded generator, so the result does not depend on evaluation order.
pub fn mc_push(opts: &PushOptions) -> Result<MonteCarloReport> {
    let PushOptions { k, n, samples, seed, .. } = *opts;
    if !(1 <= k && k < n && n <= 6) {
        return Err(Error::InvalidArgument(format!("need 1 <= k < n <= 6, got k = {k}, n = {n}")));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let s = Simplex::regular(k, n, opts.offset)?;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for block in 0..samples.div_ceil(BLOCK) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(block as u64);
        for _ in 0..BLOCK.min(samples - block * BLOCK) {
            let p = sample_center(n, &mut rng);
            let x = s.point(&sample_barycentric(k, &mut rng));
            let j = s.jacobian(&p, &x);
            sum += j;
            sum_sq += j * j;
        }
    }
    let m = samples as f64;
    let mean = sum / m;
    let var = (sum_sq / m - mean * mean).max(0.0);
    Ok(MonteCarloReport {
        k,
        n,
        samples,
        seed,
        mean,
        std_err: (var / m).sqrt(),
        ceiling: opts.ceiling,
        finite: mean.is_finite(),
        below_ceiling: mean < opts.ceiling,
    })
}
