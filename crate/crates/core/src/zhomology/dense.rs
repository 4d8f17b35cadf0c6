//! Small dense integer helpers shared by the normal-form routines.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type Dense = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// `row[dst] += k · row[src]`.
pub fn row_axpy(a: &mut Dense, dst: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s) {
        if !y.is_zero() {
            *x += k * y;
        }
    }
}

/// `col[dst] += k · col[src]`.
pub fn col_axpy(a: &mut Dense, dst: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        if !row[src].is_zero() {
            let t = k * &row[src];
            row[dst] += t;
        }
    }
}

pub fn row_scale(a: &mut Dense, r: usize, k: &BigInt) {
    for x in a[r].iter_mut() {
        *x *= k;
    }
}

pub fn col_swap(a: &mut Dense, i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Fraction-free Gaussian elimination. Returns the rank and, for square
/// input, the determinant.
pub fn bareiss(mut a: Dense) -> (usize, Option<BigInt>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let square = rows == cols;
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    let det = square.then(|| {
        if r < rows {
            BigInt::zero()
        } else if rows == 0 {
            BigInt::one()
        } else {
            sign * &a[rows - 1][cols - 1]
        }
    });
    (r, det)
}
