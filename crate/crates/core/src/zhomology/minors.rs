use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::dense::{self, Dense};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorGcdReport {
    /// gcd of the sampled maximal minors; an upper bound on the gcd of all of them.
    #[serde(serialize_with = "crate::zhomology::ser_bigint")]
    pub gcd: BigInt,
    pub trials_run: usize,
    /// Column sets of each sampled minor, in sampling order.
    pub samples: Vec<Vec<usize>>,
}

fn columns(m: &IntMatrix, cols: &[usize]) -> Dense {
    let d = m.to_dense();
    d.iter()
        .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
        .collect()
}

/// Determinant of a square matrix.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if m.nrows() != m.ncols() {
        return Err(Error::WrongShape(format!(
            "determinant of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(dense::bareiss(m.to_dense()).1.expect("square"))
}

/// Samples maximal nonsingular square submatrices of a full-row-rank matrix
/// and returns the running gcd of their determinants, stopping at 1.
///
/// Each trial shuffles the column order and greedily keeps columns that raise
/// the rank until `rows` are chosen.
pub fn probe_minor_gcd(m: &IntMatrix, trials: usize, seed: u64) -> Result<MinorGcdReport> {
    let rows = m.nrows();
    let (rank, _) = dense::bareiss(m.to_dense());
    if rank < rows {
        return Err(Error::RankDeficient { rank, rows });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gcd = BigInt::zero();
    let mut samples = Vec::new();
    let mut trials_run = 0;
    for _ in 0..trials {
        trials_run += 1;
        let mut order: Vec<usize> = (0..m.ncols()).collect();
        order.shuffle(&mut rng);
        let mut chosen = Vec::with_capacity(rows);
        for c in order {
            if chosen.len() == rows {
                break;
            }
            chosen.push(c);
            if dense::bareiss(columns(m, &chosen)).0 < chosen.len() {
                chosen.pop();
            }
        }
        chosen.sort_unstable();
        let det = dense::bareiss(columns(m, &chosen)).1.expect("square");
        gcd = gcd.gcd(&det.abs());
        samples.push(chosen);
        if gcd.is_one() {
            break;
        }
    }
    Ok(MinorGcdReport {
        gcd,
        trials_run,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_minors_give_one() {
        let m = IntMatrix::from_rows_i64(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(probe_minor_gcd(&m, 10, 1).unwrap().gcd, BigInt::one());
        assert_eq!(probe_minor_gcd(&IntMatrix::identity(4), 1, 0).unwrap().gcd, BigInt::one());
    }

    #[test]
    fn single_minor_is_found() {
        let m = IntMatrix::from_rows_i64(&[&[2, 0, 0], &[0, 2, 0]]);
        let r = probe_minor_gcd(&m, 5, 3).unwrap();
        assert_eq!(r.gcd, BigInt::from(4));
        assert!(r.samples.iter().all(|s| s == &[0, 1]));
    }

    #[test]
    fn rank_deficiency_is_an_error() {
        let m = IntMatrix::from_rows_i64(&[&[1, 1], &[2, 2]]);
        assert_eq!(
            probe_minor_gcd(&m, 3, 0),
            Err(Error::RankDeficient { rank: 1, rows: 2 })
        );
    }
}
