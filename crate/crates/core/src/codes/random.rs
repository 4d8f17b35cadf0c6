//! Random valid complexes for property tests and the acceptance corpus.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use super::generators::{gen_cycle, gen_fiber_bundle, tensor_product, FiberBundleSpec};
use crate::bits::Bits;
use crate::complex::ChainComplex2;
use crate::matrix::BinMatrix;

/// Random `rows × cols` boundary whose rows and columns have weight at most `max_weight`.
pub fn random_sparse_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    max_weight: usize,
) -> BinMatrix {
    let mut row_weight = vec![0; rows];
    let mut entries = Vec::new();
    for c in 0..cols {
        if rows == 0 {
            break;
        }
        let want = rng.random_range(0..=max_weight.min(rows));
        let mut picked: Vec<usize> = (0..rows).collect();
        picked.shuffle(rng);
        for &r in picked.iter().take(want) {
            if row_weight[r] < max_weight {
                row_weight[r] += 1;
                entries.push((r, c));
            }
        }
    }
    BinMatrix::new(rows, cols, entries).expect("distinct positions")
}

/// Single-boundary complex with random shape up to `max_dim`.
pub fn random_one_complex<R: Rng + ?Sized>(rng: &mut R, max_dim: usize, max_weight: usize) -> ChainComplex2 {
    let rows = rng.random_range(0..=max_dim);
    let cols = rng.random_range(0..=max_dim);
    let d = random_sparse_matrix(rng, rows, cols, max_weight);
    ChainComplex2::new(vec![rows, cols], vec![d]).expect("shape agrees")
}

/// Random graph with 2-cells glued along random cycles: a three-term complex
/// (vertices, edges, faces). Faces are sums of one or two fundamental cycles,
/// kept only when their length is at most `max_weight`.
pub fn random_cell_complex<R: Rng + ?Sized>(
    rng: &mut R,
    max_vertices: usize,
    max_weight: usize,
) -> ChainComplex2 {
    let v = rng.random_range(1..=max_vertices.max(1));
    let target = rng.random_range(0..=2 * v);
    let mut deg = vec![0usize; v];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for _ in 0..target {
        let a = rng.random_range(0..v);
        let b = rng.random_range(0..v);
        if a == b || deg[a] >= max_weight || deg[b] >= max_weight {
            continue;
        }
        deg[a] += 1;
        deg[b] += 1;
        edges.push((a, b));
    }
    let e = edges.len();
    let d1 = BinMatrix::new(
        v,
        e,
        edges.iter().enumerate().flat_map(|(i, &(a, b))| [(a, i), (b, i)]),
    )
    .expect("simple edges");
    let cycles = d1.kernel_basis();
    let mut faces: Vec<Bits> = Vec::new();
    let mut edge_load = vec![0usize; e];
    if !cycles.is_empty() {
        for _ in 0..rng.random_range(0..=cycles.len() + 2) {
            let mut f = cycles.choose(rng).expect("nonempty").clone();
            if rng.random_bool(0.5) {
                f.xor_assign(cycles.choose(rng).expect("nonempty"));
            }
            let len = f.count_ones();
            if len == 0 || len > max_weight || f.ones().any(|i| edge_load[i] >= max_weight) {
                continue;
            }
            for i in f.ones() {
                edge_load[i] += 1;
            }
            faces.push(f);
        }
    }
    let d2 = BinMatrix::new(
        e,
        faces.len(),
        faces.iter().enumerate().flat_map(|(k, f)| f.ones().map(move |i| (i, k))),
    )
    .expect("distinct positions");
    ChainComplex2::new(vec![v, e, faces.len()], vec![d1, d2]).expect("shapes agree")
}

/// Which family a corpus member was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    OneComplex,
    CellComplex,
    Product,
    Bundle,
    TripleProduct,
}

/// Random valid complex with every dimension at most `max_dim` and sparsity
/// at most `max_sparsity`, drawn from a mix of families. Draws violating the
/// limits are rejected and redrawn.
pub fn random_complex<R: Rng + ?Sized>(
    rng: &mut R,
    max_dim: usize,
    max_sparsity: usize,
) -> (Family, ChainComplex2) {
    let w = max_sparsity.max(1);
    loop {
        let family = *[
            Family::OneComplex,
            Family::CellComplex,
            Family::Product,
            Family::Bundle,
            Family::TripleProduct,
        ]
        .choose(rng)
        .expect("nonempty");
        let c = match family {
            Family::OneComplex => random_one_complex(rng, max_dim, w),
            Family::CellComplex => random_cell_complex(rng, max_dim.min(16), w),
            Family::Product => {
                let a = random_one_complex(rng, 5, (w / 2).max(1));
                let b = random_one_complex(rng, 5, (w / 2).max(1));
                tensor_product(&a, &b)
            }
            Family::Bundle => {
                let base = if rng.random_bool(0.5) {
                    gen_cycle(rng.random_range(1..=5))
                } else {
                    random_one_complex(rng, 4, 2)
                };
                let m = rng.random_range(1..=5);
                let spec = FiberBundleSpec::random(base, m, rng).expect("valid base");
                gen_fiber_bundle(&spec)
            }
            Family::TripleProduct => {
                let a = random_one_complex(rng, 3, 2);
                let b = random_cell_complex(rng, 4, 3);
                tensor_product(&a, &b)
            }
        };
        let fits = c.dims().iter().all(|&d| d <= max_dim) && c.sparsity() as usize <= max_sparsity;
        if fits {
            debug_assert!(c.validate().ok);
            return (family, c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn corpus_members_are_valid_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let (_, c) = random_complex(&mut rng, 40, 6);
            assert!(c.validate().ok);
            assert!(c.dims().iter().all(|&d| d <= 40));
            assert!(c.sparsity() <= 6);
        }
    }
}
