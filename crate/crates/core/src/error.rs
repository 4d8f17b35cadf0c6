use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Domain failures (a complex that cannot be sparsely lifted, an exhausted
/// retry budget) are kept distinct from malformed input so that callers can
/// map them to different exit statuses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree {degree} out of range (complex has {len} degrees)")]
    DegreeOutOfRange { degree: usize, len: usize },
    #[error("X-stabilizer {x} and Z-stabilizer {z} overlap on an odd number of qubits")]
    CommutationViolation { x: usize, z: usize },
    #[error("wrong shape: {0}")]
    WrongShape(String),
    #[error("twist for base edge {edge} at vertex {vertex} is invalid: {reason}")]
    InvalidTwist {
        edge: usize,
        vertex: usize,
        reason: String,
    },
    #[error("complex has no nontrivial middle homology")]
    NoLogical,
    #[error("no nontrivial representative of weight <= {budget}")]
    ExceedsBudget { budget: usize },
    #[error("no sparse lift: local matrix of 2-cell {cell} has 2-torsion")]
    NoSparseLift { cell: usize },
    #[error("no odd kernel vector with max entry <= {bound} for 2-cell {cell}")]
    LiftBoundExceeded { cell: usize, bound: u32 },
    #[error("complex is not admissible: boundary product {j} is nonzero at ({row}, {col})")]
    NotAdmissible { j: usize, row: usize, col: usize },
    #[error("matrix is rank deficient (rank {rank} < {rows} rows)")]
    RankDeficient { rank: usize, rows: usize },
    #[error("matrix is structurally singular (structural rank {structural_rank} < {needed})")]
    StructurallySingular {
        structural_rank: usize,
        needed: usize,
    },
    #[error("fill-in exceeded budget {budget}")]
    FillBudgetExceeded { budget: usize },
    #[error("cycle basis retries exhausted after {attempts} attempts (best max multiplicity {best})")]
    RetriesExhausted { attempts: usize, best: usize },
    #[error("vertex {vertex} has degree {degree}, above cap {cap}")]
    DegreeCapExceeded {
        vertex: usize,
        degree: usize,
        cap: usize,
    },
    #[error("graph is acyclic")]
    Acyclic,
    #[error("signed half-edge sum at X-stabilizer {x} is {sum} for Z-stabilizer {z}")]
    NonZeroSignedSum { z: usize, x: usize, sum: i64 },
    #[error("operation requires stage {expected}, skeleton is at stage {found}")]
    WrongStage { expected: String, found: String },
    #[error("degenerate placement: {0}")]
    DegeneratePlacement(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
