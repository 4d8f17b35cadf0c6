//! Exact integer linear algebra: normal forms, homology with torsion, and
//! probes for determinant-one structure.

pub(crate) mod dense;
mod hnf;
mod lu;
mod minors;
mod snf;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::complex::ChainComplexZ;
use crate::error::{Error, Result};

pub use hnf::{hnf, solve_integer, HnfResult};
pub use lu::{structural_rank, try_sparse_lu, LuFactors, LuSummary};
pub use minors::{determinant, probe_minor_gcd, MinorGcdReport};
pub use snf::{snf, snf_with_transforms, SnfResult};

pub(crate) fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn ser_bigints<S: Serializer>(
    v: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(BigInt::to_string))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    pub degree: usize,
    pub free_rank: usize,
    /// Invariant factors above one of the incoming boundary.
    #[serde(serialize_with = "ser_bigints")]
    pub torsion: Vec<BigInt>,
    /// Torsion of the cohomology in this degree, read from the outgoing boundary.
    #[serde(serialize_with = "ser_bigints")]
    pub cohomology_torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub degrees: Vec<DegreeHomology>,
}

impl HomologySummary {
    pub fn free_ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.free_rank).collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.degrees.iter().all(|d| d.torsion.is_empty())
    }
}

/// Integer homology of an admissible complex.
pub fn homology_z(c: &ChainComplexZ) -> Result<HomologySummary> {
    if let Some((j, row, col)) = c.validate().violation {
        return Err(Error::NotAdmissible { j, row, col });
    }
    let forms: Vec<SnfResult> = c.boundaries().iter().map(snf).collect();
    let degrees = (0..c.len())
        .map(|j| {
            let out = j.checked_sub(1).map(|k| &forms[k]);
            let inc = forms.get(j);
            let rank = |f: Option<&SnfResult>| f.map_or(0, |f| f.rank);
            let torsion = |f: Option<&SnfResult>| f.map_or_else(Vec::new, SnfResult::torsion);
            DegreeHomology {
                degree: j,
                free_rank: c.dims()[j] - rank(out) - rank(inc),
                torsion: torsion(inc),
                cohomology_torsion: torsion(out),
            }
        })
        .collect();
    Ok(HomologySummary { degrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::IntMatrix;

    #[test]
    fn circulant_naive_lift_has_two_torsion() {
        let d = IntMatrix::from_rows_i64(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let c = ChainComplexZ::from_boundaries(vec![d]).unwrap();
        let h = homology_z(&c).unwrap();
        assert_eq!(h.free_ranks(), vec![0, 0]);
        assert_eq!(h.degrees[0].torsion, vec![BigInt::from(2)]);
        assert_eq!(h.degrees[1].cohomology_torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn zero_complex_is_free() {
        let c = ChainComplexZ::zero(vec![2, 5, 1]).unwrap();
        let h = homology_z(&c).unwrap();
        assert_eq!(h.free_ranks(), vec![2, 5, 1]);
        assert!(h.is_torsion_free());
    }

    #[test]
    fn rejects_non_admissible() {
        let one = IntMatrix::from_rows_i64(&[&[1]]);
        let c = ChainComplexZ::from_boundaries(vec![one.clone(), one]).unwrap();
        assert_eq!(
            homology_z(&c),
            Err(Error::NotAdmissible { j: 0, row: 0, col: 0 })
        );
    }
}
