use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dense::{self, Dense};
use crate::matrix::IntMatrix;

/// Smith normal form data: `U · A · V = diag(d₁, …, d_r, 0, …)` with
/// `d₁ | d₂ | … | d_r` all positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    /// Unimodular `(U, V)`, present when requested.
    pub transforms: Option<(IntMatrix, IntMatrix)>,
}

impl SnfResult {
    /// Factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

pub fn snf(m: &IntMatrix) -> SnfResult {
    run(m, false)
}

pub fn snf_with_transforms(m: &IntMatrix) -> SnfResult {
    run(m, true)
}

struct State {
    a: Dense,
    u: Option<Dense>,
    v: Option<Dense>,
}

impl State {
    fn row_axpy(&mut self, dst: usize, src: usize, k: &BigInt) {
        dense::row_axpy(&mut self.a, dst, src, k);
        if let Some(u) = &mut self.u {
            dense::row_axpy(u, dst, src, k);
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, k: &BigInt) {
        dense::col_axpy(&mut self.a, dst, src, k);
        if let Some(v) = &mut self.v {
            dense::col_axpy(v, dst, src, k);
        }
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if let Some(u) = &mut self.u {
                u.swap(i, j);
            }
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i != j {
            dense::col_swap(&mut self.a, i, j);
            if let Some(v) = &mut self.v {
                dense::col_swap(v, i, j);
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        dense::row_scale(&mut self.a, r, &-BigInt::one());
        if let Some(u) = &mut self.u {
            dense::row_scale(u, r, &-BigInt::one());
        }
    }
}

/// Smallest nonzero magnitude in the trailing block; ties go to the lowest
/// Markowitz count `(row nnz − 1)(col nnz − 1)`, then to position.
fn choose_pivot(a: &Dense, t: usize) -> Option<(usize, usize)> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let row_nnz: Vec<usize> = (t..rows)
        .map(|i| (t..cols).filter(|&j| !a[i][j].is_zero()).count())
        .collect();
    let col_nnz: Vec<usize> = (t..cols)
        .map(|j| (t..rows).filter(|&i| !a[i][j].is_zero()).count())
        .collect();
    let mut best: Option<(BigInt, usize, usize, usize)> = None;
    for i in t..rows {
        for j in t..cols {
            if a[i][j].is_zero() {
                continue;
            }
            let mag = a[i][j].abs();
            let cost = (row_nnz[i - t] - 1) * (col_nnz[j - t] - 1);
            let better = match &best {
                None => true,
                Some((bm, bc, _, _)) => mag < *bm || (mag == *bm && cost < *bc),
            };
            if better {
                best = Some((mag, cost, i, j));
            }
        }
    }
    best.map(|(_, _, i, j)| (i, j))
}

fn run(m: &IntMatrix, track: bool) -> SnfResult {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut s = State {
        a: m.to_dense(),
        u: track.then(|| dense::identity(rows)),
        v: track.then(|| dense::identity(cols)),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = choose_pivot(&s.a, t) else {
            break;
        };
        s.row_swap(t, pi);
        s.col_swap(t, pj);
        loop {
            // clear column t below the pivot
            let mut again = false;
            for i in t + 1..rows {
                if !s.a[i][t].is_zero() {
                    let q = s.a[i][t].div_floor(&s.a[t][t]);
                    s.row_axpy(i, t, &-q);
                    again |= !s.a[i][t].is_zero();
                }
            }
            if again {
                let i = (t + 1..rows)
                    .filter(|&i| !s.a[i][t].is_zero())
                    .min_by(|&x, &y| s.a[x][t].abs().cmp(&s.a[y][t].abs()))
                    .expect("nonzero remainder");
                s.row_swap(t, i);
                continue;
            }
            // clear row t right of the pivot
            for j in t + 1..cols {
                if !s.a[t][j].is_zero() {
                    let q = s.a[t][j].div_floor(&s.a[t][t]);
                    s.col_axpy(j, t, &-q);
                    again |= !s.a[t][j].is_zero();
                }
            }
            if again {
                let j = (t + 1..cols)
                    .filter(|&j| !s.a[t][j].is_zero())
                    .min_by(|&x, &y| s.a[t][x].abs().cmp(&s.a[t][y].abs()))
                    .expect("nonzero remainder");
                s.col_swap(t, j);
                continue;
            }
            // enforce divisibility of the trailing block
            let p = s.a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s.a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => s.row_axpy(t, i, &BigInt::one()),
                None => break,
            }
        }
        if s.a[t][t].is_negative() {
            s.negate_row(t);
        }
        t += 1;
    }
    let invariant_factors: Vec<BigInt> = (0..t).map(|i| s.a[i][i].clone()).collect();
    let transforms = match (s.u, s.v) {
        (Some(u), Some(v)) => Some((
            IntMatrix::from_dense(rows, rows, &u),
            IntMatrix::from_dense(cols, cols, &v),
        )),
        _ => None,
    };
    SnfResult {
        rank: invariant_factors.len(),
        invariant_factors,
        transforms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(rows: &[&[i64]]) -> Vec<i64> {
        snf(&IntMatrix::from_rows_i64(rows))
            .invariant_factors
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(factors(&[&[2]]), vec![2]);
        assert_eq!(factors(&[&[1, -1], &[1, -1]]), vec![1]);
        assert_eq!(factors(&[&[6, 0], &[0, 4]]), vec![2, 12]);
        assert_eq!(factors(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]), vec![1, 1, 2]);
        assert!(factors(&[&[0, 0], &[0, 0]]).is_empty());
    }

    #[test]
    fn witnesses_reproduce_diagonal() {
        let a = IntMatrix::from_rows_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let r = snf_with_transforms(&a);
        let (u, v) = r.transforms.clone().unwrap();
        let d = u.mul(&a).mul(&v);
        for (i, f) in r.invariant_factors.iter().enumerate() {
            assert_eq!(&d.get(i, i), f);
        }
        assert_eq!(d.nnz(), r.rank);
        assert_eq!(
            r.invariant_factors,
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
    }
}
