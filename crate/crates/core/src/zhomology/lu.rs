//! Sparse LU over F₂ with Markowitz pivoting, as a probe for determinant-one lifts.

use num_bigint::BigInt;
use serde::Serialize;

use super::dense;
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::matrix::{BinMatrix, IntMatrix};

/// `A[row_perm, col_perm] = L · U` over F₂ with `L` unit lower trapezoidal
/// (`rows × rank`) and `U` unit upper trapezoidal (`rank × cols`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LuFactors {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub rank: usize,
    pub l: BinMatrix,
    pub u: BinMatrix,
    /// Positions that turned from zero to nonzero during elimination.
    pub fill: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LuSummary {
    pub rank: usize,
    pub fill: usize,
    pub nnz_l: usize,
    pub nnz_u: usize,
}

impl LuFactors {
    pub fn summary(&self) -> LuSummary {
        LuSummary {
            rank: self.rank,
            fill: self.fill,
            nnz_l: self.l.nnz(),
            nnz_u: self.u.nnz(),
        }
    }

    /// `A` with rows and columns reordered by the permutations.
    pub fn permute(&self, a: &BinMatrix) -> BinMatrix {
        let mut row_pos = vec![0; a.nrows()];
        for (k, &r) in self.row_perm.iter().enumerate() {
            row_pos[r] = k;
        }
        let mut col_pos = vec![0; a.ncols()];
        for (k, &c) in self.col_perm.iter().enumerate() {
            col_pos[c] = k;
        }
        BinMatrix::new(
            a.nrows(),
            a.ncols(),
            a.entries().map(|(r, c)| (row_pos[r], col_pos[c])),
        )
        .expect("permutation of valid entries")
    }

    /// Product of the naive lifts of the leading `rank × rank` blocks of `L`
    /// and `U`: an integer matrix reducing mod 2 to the pivot block of the
    /// permuted input.
    pub fn lifted_pivot_block(&self) -> IntMatrix {
        let r = self.rank;
        let lead = |m: &BinMatrix, rows: usize, cols: usize| {
            BinMatrix::new(
                rows,
                cols,
                m.entries().filter(|&(i, j)| i < rows && j < cols),
            )
            .expect("subset of valid entries")
            .naive_lift()
        };
        lead(&self.l, r, r).mul(&lead(&self.u, r, r))
    }

    /// Determinant of [`Self::lifted_pivot_block`]; unit triangular factors make it one.
    pub fn certificate_determinant(&self) -> BigInt {
        dense::bareiss(self.lifted_pivot_block().to_dense())
            .1
            .expect("square block")
    }
}

/// Size of a maximum matching between rows and columns of the support.
pub fn structural_rank(m: &BinMatrix) -> usize {
    fn augment(
        r: usize,
        m: &BinMatrix,
        seen: &mut [bool],
        match_col: &mut [Option<usize>],
    ) -> bool {
        for &c in m.row(r) {
            if seen[c] {
                continue;
            }
            seen[c] = true;
            if match_col[c].is_none_or(|r2| augment(r2, m, seen, match_col)) {
                match_col[c] = Some(r);
                return true;
            }
        }
        false
    }
    let mut match_col = vec![None; m.ncols()];
    let mut size = 0;
    for r in 0..m.nrows() {
        let mut seen = vec![false; m.ncols()];
        if augment(r, m, &mut seen, &mut match_col) {
            size += 1;
        }
    }
    size
}

/// Rank-revealing sparse LU with Markowitz pivot choice `(r − 1)(c − 1)`,
/// ties broken by original `(row, col)`.
///
/// Inputs whose support admits no matching of size `min(rows, cols)` are
/// rejected as structurally singular before any elimination; numerical rank
/// deficiency beyond that is reported through `rank`.
pub fn try_sparse_lu(m: &BinMatrix, fill_budget: Option<usize>) -> Result<LuFactors> {
    let (rows, cols) = (m.nrows(), m.ncols());
    let needed = rows.min(cols);
    let sr = structural_rank(m);
    if sr < needed {
        return Err(Error::StructurallySingular {
            structural_rank: sr,
            needed,
        });
    }
    let mut work = m.to_bit_rows();
    let mut row_active = vec![true; rows];
    let mut col_count: Vec<usize> = (0..cols).map(|c| m.col(c).len()).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut u_rows: Vec<Bits> = Vec::new();
    let mut eliminated_at: Vec<Vec<usize>> = Vec::new();
    let mut fill = 0usize;
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for r in (0..rows).filter(|&r| row_active[r]) {
            let rc = work[r].count_ones();
            if rc == 0 {
                continue;
            }
            for c in work[r].ones() {
                let cost = (rc - 1) * (col_count[c] - 1);
                if best.is_none_or(|b| cost < b.0) {
                    best = Some((cost, r, c));
                }
            }
        }
        let Some((_, pr, pc)) = best else {
            break;
        };
        let prow = work[pr].clone();
        row_active[pr] = false;
        for c in prow.ones() {
            col_count[c] -= 1;
        }
        let mut hit = Vec::new();
        for r in (0..rows).filter(|&r| row_active[r]) {
            if !work[r].get(pc) {
                continue;
            }
            for c in prow.ones() {
                if work[r].get(c) {
                    col_count[c] -= 1;
                } else {
                    col_count[c] += 1;
                    fill += 1;
                }
            }
            work[r].xor_assign(&prow);
            hit.push(r);
        }
        if let Some(b) = fill_budget {
            if fill > b {
                return Err(Error::FillBudgetExceeded { budget: b });
            }
        }
        pivots.push((pr, pc));
        u_rows.push(prow);
        eliminated_at.push(hit);
    }
    let rank = pivots.len();
    let mut row_perm: Vec<usize> = pivots.iter().map(|p| p.0).collect();
    row_perm.extend((0..rows).filter(|&r| row_active[r]));
    let mut is_pivot_col = vec![false; cols];
    for p in &pivots {
        is_pivot_col[p.1] = true;
    }
    let mut col_perm: Vec<usize> = pivots.iter().map(|p| p.1).collect();
    col_perm.extend((0..cols).filter(|&c| !is_pivot_col[c]));
    let mut row_pos = vec![0; rows];
    for (k, &r) in row_perm.iter().enumerate() {
        row_pos[r] = k;
    }
    let mut col_pos = vec![0; cols];
    for (k, &c) in col_perm.iter().enumerate() {
        col_pos[c] = k;
    }
    let mut l_entries: Vec<(usize, usize)> = (0..rank).map(|k| (k, k)).collect();
    for (k, hit) in eliminated_at.iter().enumerate() {
        l_entries.extend(hit.iter().map(|&r| (row_pos[r], k)));
    }
    let u_entries = u_rows
        .iter()
        .enumerate()
        .flat_map(|(k, row)| row.ones().map(move |c| (k, c)))
        .map(|(k, c)| (k, col_pos[c]));
    Ok(LuFactors {
        l: BinMatrix::new(rows, rank, l_entries).expect("distinct positions"),
        u: BinMatrix::new(rank, cols, u_entries).expect("distinct positions"),
        row_perm,
        col_perm,
        rank,
        fill,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check(m: &BinMatrix) -> LuFactors {
        let f = try_sparse_lu(m, None).unwrap();
        assert_eq!(f.permute(m), f.l.mul(&f.u));
        assert_eq!(f.rank, m.rank());
        assert!(f.certificate_determinant().is_one());
        f
    }

    #[test]
    fn identity_has_no_fill() {
        let f = check(&BinMatrix::identity(6));
        assert_eq!(f.fill, 0);
        assert_eq!(f.rank, 6);
    }

    #[test]
    fn all_ones_is_rank_one() {
        let m = BinMatrix::new(4, 4, (0..4).flat_map(|r| (0..4).map(move |c| (r, c)))).unwrap();
        let f = check(&m);
        assert_eq!(f.rank, 1);
        assert_eq!(f.fill, 0);
    }

    #[test]
    fn markowitz_avoids_the_hub() {
        // pivoting on (0, 0) first would fill (n - 1)(n - 3) positions
        let n = 8;
        let mut e: Vec<_> = (0..n).map(|i| (i, i)).collect();
        e.extend((1..n).flat_map(|i| [(0, i), (i, 0)]));
        let f = check(&BinMatrix::new(n, n, e).unwrap());
        assert!(f.fill < (n - 1) * (n - 3) / 4, "fill {}", f.fill);
    }

    #[test]
    fn structural_singularity_is_distinct() {
        let m = BinMatrix::new(2, 2, [(0, 0), (1, 0)]).unwrap();
        assert!(matches!(
            try_sparse_lu(&m, None),
            Err(Error::StructurallySingular { structural_rank: 1, needed: 2 })
        ));
        let mut e: Vec<_> = (0..5).map(|i| (i, i)).collect();
        e.extend((1..5).flat_map(|i| [(0, i), (i, 0)]));
        let arrow = BinMatrix::new(5, 5, e).unwrap();
        assert!(try_sparse_lu(&BinMatrix::identity(5), Some(0)).is_ok());
        let fill = try_sparse_lu(&arrow, None).unwrap().fill;
        assert!(fill > 0);
        assert_eq!(
            try_sparse_lu(&arrow, Some(fill - 1)),
            Err(Error::FillBudgetExceeded { budget: fill - 1 })
        );
    }
}
