use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("orbitals must be distinct (got {0} twice)")]
    SameOrbital(usize),

    #[error("unsupported number of spatial orbitals: {0} (allowed 1..={1})")]
    OrbitalCount(usize, usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("trace is not one (got {0})")]
    BadTrace(f64),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("state breaks the required symmetry: {0}")]
    SymmetryViolation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate Fermi level: levels {below} and {above} coincide within {tol:e}")]
    DegenerateFermiLevel { below: f64, above: f64, tol: f64 },

    #[error("one-particle density matrix is not spin symmetric (deviation {0:e})")]
    SpinAsymmetric(f64),

    #[error("FCIDUMP line {line}: {msg}")]
    Fcidump { line: usize, msg: String },

    #[error("sector ({n_up}, {n_down}) is empty")]
    EmptySector { n_up: usize, n_down: usize },

    #[error("Hamiltonian too large: {0} nonzeros exceeds cap {1}")]
    SectorTooLarge(usize, usize),

    #[error("eigensolver did not converge: residual {0:e}")]
    NoConvergence(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
