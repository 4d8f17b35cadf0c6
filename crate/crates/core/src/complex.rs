//! Chain complexes over F₂ and over ℤ.
//!
//! Index convention, used everywhere in the crate: `dims[j]` is the dimension
//! of degree `j`, and `boundaries[j]` maps degree `j + 1` to degree `j`, so it
//! has `dims[j]` rows and `dims[j + 1]` columns. A code complex therefore has
//! `dims = [x, q, z]` with `boundaries[0] = ∂′` (X-checks by qubits) and
//! `boundaries[1] = ∂` (qubits by Z-checks).

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{BinMatrix, IntMatrix};

/// Outcome of checking that consecutive boundaries compose to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub ok: bool,
    /// First nonzero entry `(j, row, col)` of `boundaries[j] * boundaries[j + 1]`,
    /// in order of `j`, then row, then column.
    pub violation: Option<(usize, usize, usize)>,
}

impl Validation {
    fn from_violation(violation: Option<(usize, usize, usize)>) -> Self {
        Self {
            ok: violation.is_none(),
            violation,
        }
    }
}

fn check_shapes(dims: &[usize], shapes: impl Iterator<Item = (usize, usize)>) -> Result<()> {
    let shapes: Vec<_> = shapes.collect();
    if dims.is_empty() {
        return Err(Error::DimensionMismatch(
            "a complex needs at least one degree".into(),
        ));
    }
    if shapes.len() + 1 != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} degrees need {} boundaries, got {}",
            dims.len(),
            dims.len() - 1,
            shapes.len()
        )));
    }
    for (j, &(r, c)) in shapes.iter().enumerate() {
        if r != dims[j] || c != dims[j + 1] {
            return Err(Error::DimensionMismatch(format!(
                "boundary {j} is {r}x{c}, expected {}x{}",
                dims[j],
                dims[j + 1]
            )));
        }
    }
    Ok(())
}

fn dims_from_shapes(shapes: &[(usize, usize)]) -> Result<Vec<usize>> {
    let Some(&(r0, _)) = shapes.first() else {
        return Err(Error::DimensionMismatch(
            "cannot infer dimensions from zero boundaries".into(),
        ));
    };
    let mut dims = vec![r0];
    for (j, &(r, c)) in shapes.iter().enumerate() {
        if r != dims[j] {
            return Err(Error::DimensionMismatch(format!(
                "boundary {j} has {r} rows but degree {j} has dimension {}",
                dims[j]
            )));
        }
        dims.push(c);
    }
    Ok(dims)
}

/// Chain complex over the two-element field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex2 {
    dims: Vec<usize>,
    boundaries: Vec<BinMatrix>,
}

impl ChainComplex2 {
    /// Build from explicit dimensions and boundaries; shapes must agree.
    /// Composition is not checked here, see [`ChainComplex2::validate`].
    pub fn new(dims: Vec<usize>, boundaries: Vec<BinMatrix>) -> Result<Self> {
        check_shapes(&dims, boundaries.iter().map(|b| (b.nrows(), b.ncols())))?;
        Ok(Self { dims, boundaries })
    }

    /// Build from at least one boundary, inferring dimensions.
    pub fn from_boundaries(boundaries: Vec<BinMatrix>) -> Result<Self> {
        let shapes: Vec<_> = boundaries.iter().map(|b| (b.nrows(), b.ncols())).collect();
        let dims = dims_from_shapes(&shapes)?;
        Ok(Self { dims, boundaries })
    }

    /// All boundaries zero.
    pub fn zero(dims: Vec<usize>) -> Result<Self> {
        let boundaries = dims.windows(2).map(|w| BinMatrix::zeros(w[0], w[1])).collect();
        Self::new(dims, boundaries)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundaries(&self) -> &[BinMatrix] {
        &self.boundaries
    }

    /// `boundaries[j]`, mapping degree `j + 1` to degree `j`.
    pub fn boundary(&self, j: usize) -> &BinMatrix {
        &self.boundaries[j]
    }

    /// Number of degrees.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn validate(&self) -> Validation {
        for j in 0..self.boundaries.len().saturating_sub(1) {
            let p = self.boundaries[j].mul(&self.boundaries[j + 1]);
            let first = p.entries().next();
            if let Some((r, c)) = first {
                return Validation::from_violation(Some((j, r, c)));
            }
        }
        Validation::from_violation(None)
    }

    /// Largest row or column weight over all boundaries.
    pub fn sparsity(&self) -> u64 {
        self.boundaries
            .iter()
            .map(|b| b.max_weight() as u64)
            .max()
            .unwrap_or(0)
    }

    /// F₂ Betti number of degree `j`.
    pub fn betti(&self, j: usize) -> Result<usize> {
        if j >= self.dims.len() {
            return Err(Error::DegreeOutOfRange {
                degree: j,
                len: self.dims.len(),
            });
        }
        let out = if j > 0 { self.boundaries[j - 1].rank() } else { 0 };
        let inc = self.boundaries.get(j).map_or(0, BinMatrix::rank);
        Ok(self.dims[j] - out - inc)
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..self.dims.len())
            .map(|j| self.betti(j).expect("degree in range"))
            .collect()
    }

    /// Entrywise 0 ↦ 0, 1 ↦ 1 over ℤ.
    pub fn naive_lift(&self) -> ChainComplexZ {
        ChainComplexZ {
            dims: self.dims.clone(),
            boundaries: self.boundaries.iter().map(BinMatrix::naive_lift).collect(),
        }
    }
}

/// Chain complex over the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexZ {
    dims: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplexZ {
    pub fn new(dims: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        check_shapes(&dims, boundaries.iter().map(|b| (b.nrows(), b.ncols())))?;
        Ok(Self { dims, boundaries })
    }

    pub fn from_boundaries(boundaries: Vec<IntMatrix>) -> Result<Self> {
        let shapes: Vec<_> = boundaries.iter().map(|b| (b.nrows(), b.ncols())).collect();
        let dims = dims_from_shapes(&shapes)?;
        Ok(Self { dims, boundaries })
    }

    pub fn zero(dims: Vec<usize>) -> Result<Self> {
        let boundaries = dims.windows(2).map(|w| IntMatrix::zeros(w[0], w[1])).collect();
        Self::new(dims, boundaries)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundaries(&self) -> &[IntMatrix] {
        &self.boundaries
    }

    pub fn boundary(&self, j: usize) -> &IntMatrix {
        &self.boundaries[j]
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Checks that consecutive products vanish over ℤ (admissibility).
    pub fn validate(&self) -> Validation {
        for j in 0..self.boundaries.len().saturating_sub(1) {
            let p = self.boundaries[j].mul(&self.boundaries[j + 1]);
            let first = p.entries().next().map(|(r, c, _)| (r, c));
            if let Some((r, c)) = first {
                return Validation::from_violation(Some((j, r, c)));
            }
        }
        Validation::from_violation(None)
    }

    /// Largest ℓ₁ norm of any row or column of any boundary, saturating at `u64::MAX`.
    pub fn sparsity(&self) -> u64 {
        self.boundaries
            .iter()
            .map(IntMatrix::max_l1)
            .max()
            .unwrap_or_else(BigInt::zero)
            .to_u64()
            .unwrap_or(u64::MAX)
    }

    pub fn mod2(&self) -> ChainComplex2 {
        ChainComplex2 {
            dims: self.dims.clone(),
            boundaries: self.boundaries.iter().map(IntMatrix::mod2).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_errors_are_distinct_from_validation() {
        let b = BinMatrix::zeros(2, 3);
        assert!(matches!(
            ChainComplex2::new(vec![2, 4], vec![b.clone()]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(ChainComplex2::new(vec![2, 3], vec![b]).unwrap().validate().ok);
    }

    #[test]
    fn zero_complex_betti_equals_dims() {
        let c = ChainComplex2::zero(vec![0, 5, 0]).unwrap();
        assert_eq!(c.betti_numbers(), vec![0, 5, 0]);
        assert!(matches!(
            c.betti(3),
            Err(Error::DegreeOutOfRange { degree: 3, len: 3 })
        ));
        assert_eq!(c.sparsity(), 0);
    }

    #[test]
    fn first_violation_is_reported() {
        let one = BinMatrix::identity(1);
        let c = ChainComplex2::from_boundaries(vec![one.clone(), one]).unwrap();
        assert_eq!(c.validate().violation, Some((0, 0, 0)));
    }

    #[test]
    fn weighted_column_contributes_its_l1_norm() {
        // a qubit column 2·X₁ + 3·X₂
        let d = IntMatrix::from_rows_i64(&[&[2], &[3]]);
        let c = ChainComplexZ::from_boundaries(vec![d]).unwrap();
        assert_eq!(c.sparsity(), 5);
    }
}
