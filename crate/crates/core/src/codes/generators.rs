use std::collections::BTreeMap;

use rand::Rng;

use crate::complex::ChainComplex2;
use crate::error::{Error, Result};
use crate::matrix::BinMatrix;

/// Cellulated circle with `m` vertices and `m` edges; edge `i` joins vertices
/// `i` and `(i + 1) mod m`. For `m = 1` the single edge is a loop and its
/// boundary vanishes mod 2.
pub fn gen_cycle(m: usize) -> ChainComplex2 {
    let entries = (0..m).flat_map(|i| [(i, i), ((i + 1) % m, i)]);
    let d = BinMatrix::from_parity(m, m, entries).expect("indices in range");
    ChainComplex2::new(vec![m, m], vec![d]).expect("square boundary")
}

/// Cell offsets of a tensor product: `offsets[n]` lists `(p, start)` for each
/// block `A_p ⊗ B_{n-p}` of degree `n`, highest `p` first.
pub(crate) fn tensor_layout(a: &[usize], b: &[usize]) -> (Vec<usize>, Vec<Vec<(usize, usize)>>) {
    let top = a.len() + b.len() - 2;
    let mut dims = vec![0; top + 1];
    let mut offsets = vec![Vec::new(); top + 1];
    for (n, (dim, offs)) in dims.iter_mut().zip(offsets.iter_mut()).enumerate() {
        for p in (0..a.len()).rev() {
            if n < p || n - p >= b.len() {
                continue;
            }
            offs.push((p, *dim));
            *dim += a[p] * b[n - p];
        }
    }
    (dims, offsets)
}

pub(crate) fn block_start(offsets: &[(usize, usize)], p: usize) -> usize {
    offsets
        .iter()
        .find(|o| o.0 == p)
        .map(|o| o.1)
        .expect("block present")
}

/// Tensor product of two complexes over F₂. Cell `α_i ⊗ β_j` of bidegree
/// `(p, q)` sits at `start(p) + i * dim(B_q) + j` within degree `p + q`, and the
/// blocks of one degree are ordered by decreasing `p`.
pub fn tensor_product(a: &ChainComplex2, b: &ChainComplex2) -> ChainComplex2 {
    let (da, db) = (a.dims(), b.dims());
    let (dims, offsets) = tensor_layout(da, db);
    let mut boundaries = Vec::with_capacity(dims.len().saturating_sub(1));
    for n in 1..dims.len() {
        let mut entries = Vec::new();
        for &(p, start) in &offsets[n] {
            let q = n - p;
            for i in 0..da[p] {
                for j in 0..db[q] {
                    let col = start + i * db[q] + j;
                    if p > 0 {
                        let tgt = block_start(&offsets[n - 1], p - 1);
                        for &i2 in a.boundary(p - 1).col(i) {
                            entries.push((tgt + i2 * db[q] + j, col));
                        }
                    }
                    if q > 0 {
                        let tgt = block_start(&offsets[n - 1], p);
                        for &j2 in b.boundary(q - 1).col(j) {
                            entries.push((tgt + i * db[q - 1] + j2, col));
                        }
                    }
                }
            }
        }
        boundaries.push(
            BinMatrix::from_parity(dims[n - 1], dims[n], entries).expect("indices in range"),
        );
    }
    ChainComplex2::new(dims, boundaries).expect("shapes agree by construction")
}

/// Hypergraph product of two 1-complexes: degree 1 is `A₁⊗B₀` followed by `A₀⊗B₁`.
pub fn gen_hypergraph_product(a: &ChainComplex2, b: &ChainComplex2) -> Result<ChainComplex2> {
    for (name, c) in [("first", a), ("second", b)] {
        if c.len() != 2 {
            return Err(Error::WrongShape(format!(
                "{name} factor must be a 1-complex, got {} degrees",
                c.len()
            )));
        }
    }
    Ok(tensor_product(a, b))
}

/// Toric code complex, the hypergraph product of two `L`-cycles.
pub fn gen_toric(l: usize) -> ChainComplex2 {
    let c = gen_cycle(l);
    tensor_product(&c, &c)
}

/// Twisted product of a base 1-complex with a circle of `fiber_len` cells.
///
/// The twist `φ(b, a)` is a cyclic shift of the fiber applied where base edge
/// `b` meets base vertex `a`. Twists are stored for every incident pair;
/// pairs left unspecified default to the identity shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberBundleSpec {
    base: ChainComplex2,
    fiber_len: usize,
    twists: BTreeMap<(usize, usize), usize>,
}

impl FiberBundleSpec {
    pub fn new(
        base: ChainComplex2,
        fiber_len: usize,
        twists: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        if base.len() != 2 {
            return Err(Error::WrongShape(format!(
                "bundle base must be a 1-complex, got {} degrees",
                base.len()
            )));
        }
        if fiber_len == 0 {
            return Err(Error::InvalidArgument("fiber length must be at least 1".into()));
        }
        let d = base.boundary(0);
        let mut map: BTreeMap<(usize, usize), usize> = (0..d.ncols())
            .flat_map(|e| d.col(e).iter().map(move |&v| ((e, v), 0)))
            .collect();
        let mut given = std::collections::BTreeSet::new();
        for (edge, vertex, shift) in twists {
            let bad = |reason: &str| Error::InvalidTwist {
                edge,
                vertex,
                reason: reason.into(),
            };
            if !map.contains_key(&(edge, vertex)) {
                return Err(bad("edge and vertex are not incident"));
            }
            if shift >= fiber_len {
                return Err(bad(&format!("shift {shift} not below fiber length {fiber_len}")));
            }
            if !given.insert((edge, vertex)) {
                return Err(bad("twist given twice"));
            }
            map.insert((edge, vertex), shift);
        }
        Ok(Self {
            base,
            fiber_len,
            twists: map,
        })
    }

    /// Uniformly random shifts on every incident pair.
    pub fn random<R: Rng + ?Sized>(base: ChainComplex2, fiber_len: usize, rng: &mut R) -> Result<Self> {
        let spec = Self::new(base, fiber_len, [])?;
        let twists: Vec<_> = spec
            .twists
            .keys()
            .map(|&(e, v)| (e, v, rng.random_range(0..fiber_len)))
            .collect();
        Self::new(spec.base, fiber_len, twists)
    }

    pub fn base(&self) -> &ChainComplex2 {
        &self.base
    }

    pub fn fiber_len(&self) -> usize {
        self.fiber_len
    }

    /// Shift for each incident `(base edge, base vertex)` pair.
    pub fn twists(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.twists
    }

    pub fn twist(&self, edge: usize, vertex: usize) -> usize {
        self.twists[&(edge, vertex)]
    }
}

/// Binary bundle complex. Cells follow the hypergraph-product layout with
/// the fiber as second factor, so zero twists reproduce that product exactly:
///
/// ```text
/// ∂(a ⊗ f)  = a ⊗ ∂f
/// ∂(b ⊗ f)  = b ⊗ ∂f + Σ_{a ∈ ∂b} a ⊗ φ(b, a) f
/// ```
pub fn gen_fiber_bundle(spec: &FiberBundleSpec) -> ChainComplex2 {
    let d = spec.base.boundary(0);
    let (b0, b1, m) = (d.nrows(), d.ncols(), spec.fiber_len);
    let v_cell = |a: usize, j: usize| a * m + j;
    let (ef0, af1) = (0, b1 * m);
    let mut d1 = Vec::new();
    let mut d2 = Vec::new();
    for e in 0..b1 {
        for j in 0..m {
            for &a in d.col(e) {
                let s = spec.twist(e, a);
                d1.push((v_cell(a, (j + s) % m), ef0 + e * m + j));
                d2.push((af1 + a * m + (j + s) % m, e * m + j));
            }
            d2.push((ef0 + e * m + j, e * m + j));
            d2.push((ef0 + e * m + (j + 1) % m, e * m + j));
        }
    }
    for a in 0..b0 {
        for j in 0..m {
            let col = af1 + a * m + j;
            d1.push((v_cell(a, j), col));
            d1.push((v_cell(a, (j + 1) % m), col));
        }
    }
    let dims = vec![b0 * m, b1 * m + b0 * m, b1 * m];
    let bd1 = BinMatrix::from_parity(dims[0], dims[1], d1).expect("indices in range");
    let bd2 = BinMatrix::from_parity(dims[1], dims[2], d2).expect("indices in range");
    ChainComplex2::new(dims, vec![bd1, bd2]).expect("shapes agree by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_basics() {
        let c1 = gen_cycle(1);
        assert!(c1.boundary(0).is_zero());
        assert_eq!(gen_cycle(3).boundary(0).rank(), 2);
        for m in 1..8 {
            assert_eq!(gen_cycle(m).betti(1).unwrap(), 1);
        }
    }

    #[test]
    fn toric_shapes() {
        let t = gen_toric(2);
        assert_eq!(t.dims(), &[4, 8, 4]);
        assert!(t.validate().ok);
        assert_eq!(gen_toric(3).betti(1).unwrap(), 2);
        assert_eq!(gen_toric(3).boundary(0).rank(), 8);
        assert_eq!(gen_toric(3).sparsity(), 4);
        assert!(gen_toric(1).validate().ok);
    }

    #[test]
    fn product_with_empty_is_empty() {
        let p = gen_hypergraph_product(&gen_cycle(4), &gen_cycle(0)).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn untwisted_bundle_is_the_product() {
        for (l, m) in [(2, 2), (3, 4), (4, 1)] {
            let spec = FiberBundleSpec::new(gen_cycle(l), m, []).unwrap();
            assert_eq!(
                gen_fiber_bundle(&spec),
                gen_hypergraph_product(&gen_cycle(l), &gen_cycle(m)).unwrap()
            );
        }
    }

    #[test]
    fn twisted_bundle_is_valid() {
        let spec = FiberBundleSpec::new(gen_cycle(3), 3, [(0, 1, 1)]).unwrap();
        let c = gen_fiber_bundle(&spec);
        assert!(c.validate().ok);
        assert_ne!(c, gen_hypergraph_product(&gen_cycle(3), &gen_cycle(3)).unwrap());
    }

    #[test]
    fn twist_errors() {
        assert!(matches!(
            FiberBundleSpec::new(gen_cycle(3), 3, [(0, 2, 1)]),
            Err(Error::InvalidTwist { .. })
        ));
        assert!(matches!(
            FiberBundleSpec::new(gen_cycle(3), 3, [(0, 1, 3)]),
            Err(Error::InvalidTwist { .. })
        ));
    }
}
