//! CSS codes, their dictionary with three-term complexes, generators, and distances.

mod distance;
pub(crate) mod generators;
pub mod random;

pub use distance::{distance, distance_with, systolic_ratio, DistanceOptions, DistanceResult, Side, Strategy, SystolicReport};
pub use generators::{gen_cycle, gen_fiber_bundle, gen_hypergraph_product, gen_toric, tensor_product, FiberBundleSpec};

use serde::Serialize;

use crate::complex::ChainComplex2;
use crate::error::{Error, Result};
use crate::matrix::BinMatrix;

/// A CSS code given by the supports of its stabilizer generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    q: usize,
    x_stabs: Vec<Vec<usize>>,
    z_stabs: Vec<Vec<usize>>,
}

impl CssCode {
    /// Supports are sorted on construction. Repeated or out-of-range qubits,
    /// and X/Z pairs with odd overlap, are rejected.
    pub fn new(q: usize, x_stabs: Vec<Vec<usize>>, z_stabs: Vec<Vec<usize>>) -> Result<Self> {
        let hx = support_matrix(q, &x_stabs)?;
        let hz = support_matrix(q, &z_stabs)?;
        if let Some((x, z)) = hx.mul(&hz.transpose()).entries().next() {
            return Err(Error::CommutationViolation { x, z });
        }
        let sorted = |m: &BinMatrix| (0..m.nrows()).map(|r| m.row(r).to_vec()).collect();
        Ok(Self {
            q,
            x_stabs: sorted(&hx),
            z_stabs: sorted(&hz),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.q
    }

    pub fn x_stabs(&self) -> &[Vec<usize>] {
        &self.x_stabs
    }

    pub fn z_stabs(&self) -> &[Vec<usize>] {
        &self.z_stabs
    }
}

fn support_matrix(q: usize, stabs: &[Vec<usize>]) -> Result<BinMatrix> {
    let entries = stabs
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.iter().map(move |&j| (i, j)));
    BinMatrix::new(stabs.len(), q, entries).map_err(|e| match e {
        Error::IndexOutOfRange { row, col, .. } => Error::InvalidArgument(format!(
            "stabilizer {row} names qubit {col}, but the code has {q} qubits"
        )),
        Error::DuplicateEntry { row, col } => Error::InvalidArgument(format!(
            "stabilizer {row} lists qubit {col} twice"
        )),
        other => other,
    })
}

/// Complex with `dims = [x, q, z]`: `boundaries[0]` has a 1 at `(i, j)` when
/// X-stabilizer `i` acts on qubit `j`, `boundaries[1]` has a 1 at `(j, k)` when
/// Z-stabilizer `k` acts on qubit `j`.
pub fn css_to_complex(code: &CssCode) -> ChainComplex2 {
    let hx = support_matrix(code.q, &code.x_stabs).expect("validated on construction");
    let hz = support_matrix(code.q, &code.z_stabs).expect("validated on construction");
    ChainComplex2::new(
        vec![code.x_stabs.len(), code.q, code.z_stabs.len()],
        vec![hx, hz.transpose()],
    )
    .expect("shapes agree by construction")
}

/// Inverse of [`css_to_complex`]; the complex must have exactly three degrees.
pub fn complex_to_css(c: &ChainComplex2) -> Result<CssCode> {
    if c.len() != 3 {
        return Err(Error::WrongShape(format!(
            "a code needs a three-term complex, got {} degrees",
            c.len()
        )));
    }
    let dx = c.boundary(0);
    let dz = c.boundary(1);
    CssCode::new(
        c.dims()[1],
        (0..dx.nrows()).map(|i| dx.row(i).to_vec()).collect(),
        (0..dz.ncols()).map(|k| dz.col(k).to_vec()).collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LdpcReport {
    pub ok: bool,
    /// Largest stabilizer weight or qubit degree, over both stabilizer types.
    pub worst: usize,
}

pub fn check_ldpc(code: &CssCode, bound: usize) -> LdpcReport {
    let c = css_to_complex(code);
    let worst = c.sparsity() as usize;
    LdpcReport {
        ok: worst <= bound,
        worst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubit_example() {
        let code = CssCode::new(2, vec![vec![0, 1], vec![1, 0]], vec![]).unwrap();
        let c = css_to_complex(&code);
        assert_eq!(c.dims(), &[2, 2, 0]);
        assert_eq!(c.boundary(0).nnz(), 4);
        assert!(c.validate().ok);
    }

    #[test]
    fn empty_code() {
        let code = CssCode::new(0, vec![], vec![]).unwrap();
        let c = css_to_complex(&code);
        assert!(c.is_empty());
        assert_eq!(complex_to_css(&c).unwrap(), code);
        assert_eq!(check_ldpc(&code, 4), LdpcReport { ok: true, worst: 0 });
    }

    #[test]
    fn odd_overlap_rejected() {
        assert_eq!(
            CssCode::new(3, vec![vec![0, 1]], vec![vec![1, 2]]),
            Err(Error::CommutationViolation { x: 0, z: 0 })
        );
    }

    #[test]
    fn heavy_stabilizer_fails_ldpc() {
        let code = CssCode::new(10, vec![(0..10).collect()], vec![]).unwrap();
        assert_eq!(check_ldpc(&code, 4), LdpcReport { ok: false, worst: 10 });
    }

    #[test]
    fn toric_roundtrip_and_ldpc() {
        let c = gen_toric(2);
        let code = complex_to_css(&c).unwrap();
        assert_eq!(css_to_complex(&code), c);
        assert!(check_ldpc(&complex_to_css(&gen_toric(3)).unwrap(), 4).ok);
    }

    #[test]
    fn wrong_shape() {
        assert!(matches!(
            complex_to_css(&gen_cycle(3)),
            Err(Error::WrongShape(_))
        ));
    }
}
