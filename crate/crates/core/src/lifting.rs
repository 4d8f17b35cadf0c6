//! Lifts of binary complexes to integer complexes.
//!
//! A lift keeps every entry's parity; it is admissible when consecutive
//! lifted boundaries still compose to zero over ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::bits::Bits;
use crate::codes::generators::{block_start, tensor_layout};
use crate::codes::FiberBundleSpec;
use crate::complex::{ChainComplex2, ChainComplexZ, Validation};
use crate::error::{Error, Result};
use crate::matrix::{BinMatrix, IntMatrix};
use crate::zhomology::{dense, snf, solve_integer};

/// A lifted complex together with the checks every lift is judged by.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftResult {
    #[serde(skip)]
    pub lifted: ChainComplexZ,
    /// `mod2(lifted)` equals the source entrywise.
    pub parity_ok: bool,
    pub admissible: bool,
    pub sparsity_in: u64,
    pub sparsity_out: u64,
    /// Largest `|v_z|₁` over 2-cells, for lifts built from local solutions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_local_l1: Option<u64>,
}

impl LiftResult {
    pub fn assess(source: &ChainComplex2, lifted: ChainComplexZ) -> Self {
        Self {
            parity_ok: lifted.mod2() == *source,
            admissible: lifted.validate().ok,
            sparsity_in: source.sparsity(),
            sparsity_out: lifted.sparsity(),
            max_local_l1: None,
            lifted,
        }
    }
}

pub fn naive_lift(c: &ChainComplex2) -> ChainComplexZ {
    c.naive_lift()
}

pub fn check_admissible(c: &ChainComplexZ) -> Validation {
    c.validate()
}

/// Torsion-free lift of a valid complex.
///
/// Each boundary is brought to a partial permutation matrix `D_j` by
/// elementary basis changes `e_a ← e_a + e_b`, processed from degree 0
/// upward so that later changes never disturb an already reduced boundary.
/// Lifting `D_j` and every basis change naively gives
/// `∂̃_j = T̃_j D̃_j T̃_{j+1}⁻¹`, whose Smith form is that of `D̃_j`.
pub fn general_lift(c: &ChainComplex2) -> LiftResult {
    let dims = c.dims().to_vec();
    let nb = c.boundaries().len();
    let mut work: Vec<Vec<Bits>> = c.boundaries().iter().map(BinMatrix::to_bit_rows).collect();
    // ops[s] lists basis changes (a, b) on space s, in order
    let mut ops: Vec<Vec<(usize, usize)>> = vec![Vec::new(); dims.len()];
    for j in 0..nb {
        let rows = dims[j];
        let mut row_done = vec![false; rows];
        while let Some(r) = (0..rows).find(|&r| !row_done[r] && !work[j][r].is_zero()) {
            row_done[r] = true;
            let prow = work[j][r].clone();
            let pc = prow.first_one().expect("nonzero row");
            for i in 0..rows {
                if i != r && work[j][i].get(pc) {
                    work[j][i].xor_assign(&prow);
                    ops[j].push((r, i));
                }
            }
            for k in prow.ones().filter(|&k| k != pc) {
                work[j][r].flip(k);
                ops[j + 1].push((k, pc));
                if j + 1 < nb {
                    let src = work[j + 1][k].clone();
                    work[j + 1][pc].xor_assign(&src);
                }
            }
        }
    }
    let transforms: Vec<(IntMatrix, IntMatrix)> = dims
        .iter()
        .zip(&ops)
        .map(|(&n, ops)| {
            let mut t = dense::identity(n);
            let mut t_inv = dense::identity(n);
            for &(a, b) in ops {
                dense::col_axpy(&mut t, a, b, &BigInt::one());
                dense::row_axpy(&mut t_inv, b, a, &-BigInt::one());
            }
            (IntMatrix::from_dense(n, n, &t), IntMatrix::from_dense(n, n, &t_inv))
        })
        .collect();
    let boundaries = (0..nb)
        .map(|j| {
            let d = BinMatrix::from_bit_rows(dims[j + 1], &work[j]).naive_lift();
            transforms[j].0.mul(&d).mul(&transforms[j + 1].1)
        })
        .collect();
    let lifted = ChainComplexZ::new(dims, boundaries).expect("shapes preserved");
    LiftResult::assess(c, lifted)
}

/// The lifted `∂₁` restricted to the cells around one 2-cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalLiftMatrix {
    pub two_cell: usize,
    /// 0-cells met by the boundary of any 1-cell in `col_cells`, ascending.
    pub row_cells: Vec<usize>,
    /// 1-cells in the boundary of the 2-cell, ascending.
    pub col_cells: Vec<usize>,
    pub mat: IntMatrix,
}

pub fn local_matrix(z: usize, lifted_d1: &IntMatrix, d2: &BinMatrix) -> LocalLiftMatrix {
    let col_cells = d2.col(z).to_vec();
    let mut row_cells: Vec<usize> = col_cells
        .iter()
        .flat_map(|&e| lifted_d1.col(e).iter().map(|(r, _)| *r))
        .collect();
    row_cells.sort_unstable();
    row_cells.dedup();
    LocalLiftMatrix {
        two_cell: z,
        mat: lifted_d1.submatrix(&row_cells, &col_cells),
        row_cells,
        col_cells,
    }
}

/// Some Smith invariant factor is even.
pub fn has_2torsion(a: &IntMatrix) -> bool {
    snf(a).invariant_factors.iter().any(Integer::is_even)
}

/// Bounds tried in turn by [`solve_lift_vector`].
pub const LIFT_BOUND_SCHEDULE: [u32; 6] = [3, 6, 12, 24, 48, 65];

/// Odd kernel vector `v ≡ 1` of the local matrix with minimal ℓ₁ norm,
/// searching bounds from [`LIFT_BOUND_SCHEDULE`] in turn.
pub fn solve_lift_vector(a: &LocalLiftMatrix) -> Result<Vec<BigInt>> {
    let mut last = Error::LiftBoundExceeded {
        cell: a.two_cell,
        bound: 0,
    };
    for bound in LIFT_BOUND_SCHEDULE {
        match solve_lift_vector_bounded(a, bound) {
            Err(e @ Error::LiftBoundExceeded { .. }) => last = e,
            other => return other,
        }
    }
    Err(last)
}

/// As [`solve_lift_vector`] with a single bound `‖v‖∞ ≤ bound`.
///
/// A base solution `v₀ = 1 − 2w` with `A w = A1/2` is found by integer
/// solving; the search then walks ℓ₁ levels upward from `n` and returns the
/// lexicographically smallest odd kernel vector on the first level that has
/// one. Levels stop at `ℓ₁(v₀)` when `v₀` is within the bound.
pub fn solve_lift_vector_bounded(a: &LocalLiftMatrix, bound: u32) -> Result<Vec<BigInt>> {
    let n = a.col_cells.len();
    let ones = vec![BigInt::one(); n];
    let image = a.mat.apply(&ones);
    if image.iter().all(Zero::is_zero) {
        return Ok(ones);
    }
    let no_lift = Error::NoSparseLift { cell: a.two_cell };
    if image.iter().any(Integer::is_odd) || has_2torsion(&a.mat) {
        return Err(no_lift);
    }
    let half: Vec<BigInt> = image.iter().map(|x| x / 2).collect();
    let w = solve_integer(&a.mat, &half).ok_or(no_lift)?;
    let v0: Vec<BigInt> = w.iter().map(|x| BigInt::one() - x * 2).collect();
    let b = i64::from(bound);
    let v0_inf = v0.iter().map(|x| x.abs()).max().unwrap_or_default();
    let mut top = n as i64 * b;
    if v0_inf <= BigInt::from(b) {
        let l1: BigInt = v0.iter().map(|x| x.abs()).sum();
        top = top.min(l1.to_i64().expect("bounded by n * bound"));
    }
    let dense_a: Vec<Vec<i64>> = a
        .mat
        .to_dense()
        .iter()
        .map(|row| row.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect())
        .collect();
    let mut level = n as i64;
    while level <= top {
        let mut v = vec![0i64; n];
        if odd_kernel_search(&dense_a, b, level, 0, &mut v) {
            return Ok(v.into_iter().map(BigInt::from).collect());
        }
        level += 2;
    }
    Err(Error::LiftBoundExceeded {
        cell: a.two_cell,
        bound,
    })
}

/// Depth-first search, in lexicographic order, for odd `v` with `|v_i| ≤ b`,
/// `|v|₁ = remaining + |v[..i]|₁`, and `A v = 0`.
fn odd_kernel_search(a: &[Vec<i64>], b: i64, remaining: i64, i: usize, v: &mut [i64]) -> bool {
    let n = v.len();
    if i == n {
        return remaining == 0
            && a.iter().all(|row| {
                row.iter()
                    .zip(v.iter())
                    .map(|(x, y)| i128::from(*x) * i128::from(*y))
                    .sum::<i128>()
                    == 0
            });
    }
    let rest = (n - i - 1) as i64;
    for x in (-b..=b).filter(|x| x % 2 != 0) {
        let left = remaining - x.abs();
        if left < rest || left > rest * b {
            continue;
        }
        v[i] = x;
        if odd_kernel_search(a, b, left, i + 1, v) {
            return true;
        }
    }
    false
}

/// Choice of lifted `∂₁` fed to [`sparse_lift`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum D1Lift {
    Naive,
    Given(IntMatrix),
}

/// Lift `∂₂` column by column from local odd kernel vectors, keeping the
/// chosen lift of `∂₁`.
pub fn sparse_lift(c: &ChainComplex2, d1: D1Lift) -> Result<LiftResult> {
    if c.len() != 3 {
        return Err(Error::WrongShape(format!(
            "sparse lift needs a three-term complex, got {} degrees",
            c.len()
        )));
    }
    let d1 = match d1 {
        D1Lift::Naive => c.boundary(0).naive_lift(),
        D1Lift::Given(m) => {
            if m.mod2() != *c.boundary(0) {
                return Err(Error::InvalidArgument(
                    "given lift of the first boundary does not reduce to it mod 2".into(),
                ));
            }
            m
        }
    };
    let d2 = c.boundary(1);
    let mut entries = Vec::with_capacity(d2.nnz());
    let mut max_l1 = 0u64;
    for z in 0..d2.ncols() {
        let local = local_matrix(z, &d1, d2);
        let v = solve_lift_vector(&local)?;
        let l1: BigInt = v.iter().map(|x| x.abs()).sum();
        max_l1 = max_l1.max(l1.to_u64().unwrap_or(u64::MAX));
        entries.extend(local.col_cells.iter().zip(v).map(|(&e, x)| (e, z, x)));
    }
    let d2 = IntMatrix::new(d2.nrows(), d2.ncols(), entries).expect("distinct positions");
    let lifted = ChainComplexZ::new(c.dims().to_vec(), vec![d1, d2]).expect("shapes agree");
    let mut res = LiftResult::assess(c, lifted);
    res.max_local_l1 = Some(max_l1);
    Ok(res)
}

/// Tensor product over ℤ with the Koszul sign
/// `∂(α ⊗ β) = ∂α ⊗ β + (−1)^{deg α} α ⊗ ∂β`, in the cell layout of
/// [`crate::codes::tensor_product`].
pub fn koszul_product(a: &ChainComplexZ, b: &ChainComplexZ) -> ChainComplexZ {
    let (da, db) = (a.dims(), b.dims());
    let (dims, offsets) = tensor_layout(da, db);
    let mut boundaries = Vec::with_capacity(dims.len().saturating_sub(1));
    for n in 1..dims.len() {
        let mut entries = Vec::new();
        for &(p, start) in &offsets[n] {
            let q = n - p;
            let sign = if p % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            for i in 0..da[p] {
                for j in 0..db[q] {
                    let col = start + i * db[q] + j;
                    if p > 0 {
                        let tgt = block_start(&offsets[n - 1], p - 1);
                        for (i2, v) in a.boundary(p - 1).col(i) {
                            entries.push((tgt + i2 * db[q] + j, col, v.clone()));
                        }
                    }
                    if q > 0 {
                        let tgt = block_start(&offsets[n - 1], p);
                        for (j2, v) in b.boundary(q - 1).col(j) {
                            entries.push((tgt + i * db[q - 1] + j2, col, &sign * v));
                        }
                    }
                }
            }
        }
        boundaries.push(IntMatrix::from_sum(dims[n - 1], dims[n], entries).expect("in range"));
    }
    ChainComplexZ::new(dims, boundaries).expect("shapes agree by construction")
}

/// Koszul-signed product of the naive lifts of two 1-complexes.
pub fn product_lift(a: &ChainComplex2, b: &ChainComplex2) -> Result<ChainComplexZ> {
    for (name, c) in [("first", a), ("second", b)] {
        if c.len() != 2 {
            return Err(Error::WrongShape(format!(
                "{name} factor must be a 1-complex, got {} degrees",
                c.len()
            )));
        }
    }
    Ok(koszul_product(&a.naive_lift(), &b.naive_lift()))
}

/// Signed bundle lift. The fiber edge `f¹_j` gets boundary `f⁰_{j+1} − f⁰_j`,
/// the base is lifted naively, and
///
/// ```text
/// ∂̃(b ⊗ f⁰) =               Σ_a a ⊗ φ(b, a) f⁰
/// ∂̃(b ⊗ f¹) = b ⊗ ∂̃f¹  −  Σ_a a ⊗ φ(b, a) f¹
/// ```
///
/// Cells follow [`crate::codes::gen_fiber_bundle`].
pub fn fiber_bundle_lift(spec: &FiberBundleSpec) -> ChainComplexZ {
    let d = spec.base().boundary(0);
    let (b0, b1, m) = (d.nrows(), d.ncols(), spec.fiber_len());
    let one = BigInt::one;
    let vertex = |a: usize, j: usize| a * m + j;
    let base_edge = |e: usize, j: usize| e * m + j;
    let fiber_edge = |a: usize, j: usize| b1 * m + a * m + j;
    let mut d1 = Vec::new();
    let mut d2 = Vec::new();
    for e in 0..b1 {
        for j in 0..m {
            for &a in d.col(e) {
                let s = spec.twist(e, a);
                d1.push((vertex(a, (j + s) % m), base_edge(e, j), one()));
                d2.push((fiber_edge(a, (j + s) % m), base_edge(e, j), -one()));
            }
            d2.push((base_edge(e, (j + 1) % m), base_edge(e, j), one()));
            d2.push((base_edge(e, j), base_edge(e, j), -one()));
        }
    }
    for a in 0..b0 {
        for j in 0..m {
            d1.push((vertex(a, (j + 1) % m), fiber_edge(a, j), one()));
            d1.push((vertex(a, j), fiber_edge(a, j), -one()));
        }
    }
    let dims = vec![b0 * m, b1 * m + b0 * m, b1 * m];
    let bd1 = IntMatrix::from_sum(dims[0], dims[1], d1).expect("in range");
    let bd2 = IntMatrix::from_sum(dims[1], dims[2], d2).expect("in range");
    ChainComplexZ::new(dims, vec![bd1, bd2]).expect("shapes agree by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{gen_cycle, gen_fiber_bundle, gen_hypergraph_product, gen_toric};
    use crate::zhomology::homology_z;

    fn single(rows: &[&[i64]]) -> ChainComplex2 {
        let m = IntMatrix::from_rows_i64(rows).mod2();
        ChainComplex2::from_boundaries(vec![m]).unwrap()
    }

    fn factors(m: &IntMatrix) -> Vec<i64> {
        snf(m)
            .invariant_factors
            .iter()
            .map(|d| d.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn naive_lift_of_toric_is_not_admissible() {
        let t = gen_toric(2);
        assert!(!check_admissible(&naive_lift(&t)).ok);
        assert!(check_admissible(&naive_lift(&gen_cycle(5))).ok);
    }

    #[test]
    fn general_lift_small_examples() {
        let r = general_lift(&single(&[&[1, 1], &[1, 1]]));
        assert!(r.parity_ok && r.admissible);
        assert_eq!(factors(r.lifted.boundary(0)), vec![1]);

        let circ = single(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let naive = circ.naive_lift();
        assert_eq!(factors(naive.boundary(0)), vec![1, 1, 2]);
        let r = general_lift(&circ);
        assert!(r.parity_ok && r.admissible);
        assert_eq!(factors(r.lifted.boundary(0)), vec![1, 1]);
        assert_eq!(homology_z(&r.lifted).unwrap().free_ranks(), vec![1, 1]);

        let z = ChainComplex2::zero(vec![3, 2, 1]).unwrap();
        assert_eq!(general_lift(&z).lifted, z.naive_lift());
    }

    #[test]
    fn general_lift_of_toric_is_torsion_free() {
        for l in 1..=4 {
            let t = gen_toric(l);
            let r = general_lift(&t);
            assert!(r.parity_ok && r.admissible, "L={l}");
            let h = homology_z(&r.lifted).unwrap();
            assert!(h.is_torsion_free());
            assert_eq!(h.free_ranks(), t.betti_numbers());
        }
    }

    #[test]
    fn local_vectors() {
        let local = |rows: &[&[i64]]| {
            let mat = IntMatrix::from_rows_i64(rows);
            LocalLiftMatrix {
                two_cell: 0,
                row_cells: (0..mat.nrows()).collect(),
                col_cells: (0..mat.ncols()).collect(),
                mat,
            }
        };
        let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(solve_lift_vector(&local(&[&[1, -1], &[1, -1]])).unwrap(), big(&[1, 1]));
        assert_eq!(solve_lift_vector(&local(&[&[1, 1], &[1, 1]])).unwrap(), big(&[-1, 1]));
        assert_eq!(
            solve_lift_vector(&local(&[&[2]])),
            Err(Error::NoSparseLift { cell: 0 })
        );
    }

    #[test]
    fn two_torsion_flags() {
        assert!(has_2torsion(&IntMatrix::from_rows_i64(&[&[2]])));
        assert!(!has_2torsion(&IntMatrix::identity(3)));
        assert!(!has_2torsion(&IntMatrix::from_rows_i64(&[&[1, -1], &[1, -1]])));
    }

    #[test]
    fn sparse_lift_matches_product_on_toric() {
        for l in 2..=4 {
            let c = gen_cycle(l);
            let p = product_lift(&c, &c).unwrap();
            let t = gen_toric(l);
            let r = sparse_lift(&t, D1Lift::Given(p.boundary(0).clone())).unwrap();
            assert!(r.parity_ok && r.admissible);
            assert_eq!(r.sparsity_out, r.sparsity_in);
            let naive = sparse_lift(&t, D1Lift::Naive).unwrap();
            assert!(naive.parity_ok && naive.admissible);
        }
    }

    #[test]
    fn engineered_two_torsion_fails() {
        let c = ChainComplex2::from_boundaries(vec![
            BinMatrix::zeros(1, 1),
            BinMatrix::identity(1),
        ])
        .unwrap();
        let d1 = IntMatrix::from_rows_i64(&[&[2]]);
        assert_eq!(
            sparse_lift(&c, D1Lift::Given(d1)),
            Err(Error::NoSparseLift { cell: 0 })
        );
    }

    #[test]
    fn no_two_cells_keeps_d1() {
        let c = ChainComplex2::from_boundaries(vec![
            BinMatrix::new(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap(),
            BinMatrix::zeros(2, 0),
        ])
        .unwrap();
        let r = sparse_lift(&c, D1Lift::Naive).unwrap();
        assert_eq!(r.lifted.boundary(0), &c.boundary(0).naive_lift());
    }

    #[test]
    fn product_and_bundle_lifts() {
        let c = gen_cycle(3);
        let p = product_lift(&c, &c).unwrap();
        assert!(p.validate().ok);
        assert_eq!(p.mod2(), gen_hypergraph_product(&c, &c).unwrap());
        for (l, m, tw) in [(2, 2, vec![]), (4, 1, vec![]), (4, 3, vec![(0, 1, 2), (2, 3, 1)])] {
            let spec = FiberBundleSpec::new(gen_cycle(l), m, tw).unwrap();
            let z = fiber_bundle_lift(&spec);
            let b = gen_fiber_bundle(&spec);
            assert!(z.validate().ok);
            assert_eq!(z.mod2(), b);
            assert_eq!(z.sparsity(), b.sparsity());
        }
    }
}
