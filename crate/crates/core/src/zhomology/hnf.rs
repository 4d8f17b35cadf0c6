use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dense::{self, Dense};
use crate::matrix::IntMatrix;

/// Row-style Hermite normal form `H = U · A`.
///
/// `H` is in row echelon form with positive pivots, and every entry above a
/// pivot lies in `[0, pivot)`. `U` is unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// `(row, col)` of each pivot, rows in increasing order.
    pub pivots: Vec<(usize, usize)>,
}

impl HnfResult {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn hnf(m: &IntMatrix) -> HnfResult {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut a = m.to_dense();
    let mut u = dense::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let Some(p) = (r..rows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()).then(i.cmp(&j)))
            else {
                break;
            };
            a.swap(r, p);
            u.swap(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                dense::row_axpy(&mut a, i, r, &-&q);
                dense::row_axpy(&mut u, i, r, &-&q);
                clean &= a[i][c].is_zero();
            }
            if clean {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            dense::row_scale(&mut a, r, &-BigInt::one());
            dense::row_scale(&mut u, r, &-BigInt::one());
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                dense::row_axpy(&mut a, i, r, &-&q);
                dense::row_axpy(&mut u, i, r, &-&q);
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    HnfResult {
        h: IntMatrix::from_dense(rows, cols, &a),
        u: IntMatrix::from_dense(rows, rows, &u),
        pivots,
    }
}

/// Some integer solution of `A x = b`, or `None` when none exists.
///
/// Uses the HNF of `Aᵀ`: with `H = U Aᵀ` we have `A = Hᵀ U⁻ᵀ`, so solving the
/// lower-triangular system `Hᵀ y = b` and setting `x = Uᵀ y` suffices.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.nrows(), b.len());
    let res = hnf(&a.transpose());
    let h: Dense = res.h.to_dense();
    let mut y = vec![BigInt::zero(); a.ncols()];
    for &(r, c) in &res.pivots {
        let mut rhs = b[c].clone();
        for &(r2, _) in res.pivots.iter().take_while(|p| p.0 < r) {
            rhs -= &h[r2][c] * &y[r2];
        }
        let (q, rem) = rhs.div_rem(&h[r][c]);
        if !rem.is_zero() {
            return None;
        }
        y[r] = q;
    }
    let x = res.u.transpose().apply(&y);
    (a.apply(&x) == b).then_some(x)
}
