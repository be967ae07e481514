use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of order {p}^{degree} exceeds the 2^26 table cap")]
    FieldTooLarge { p: u64, degree: u32 },
    #[error("no Conway polynomial of degree {degree} over GF({p}) is available")]
    NoConwayPolynomialShipped { p: u64, degree: u32 },
    #[error("modulus for GF({p}^{degree}) does not define a primitive element")]
    BadModulus { p: u64, degree: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    ContextMismatch,
    #[error("element has no (q+1)-th root: it is not in GF(q)")]
    NoRoot,
    #[error("zero has no nonzero (q+1)-th root")]
    ZeroInput,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix size {0} is too small")]
    SizeTooSmall(usize),
    #[error("T_(u,theta) needs n >= 4, got n = {0}")]
    TuUnavailable(usize),
    #[error("transvection system has no admissible solution")]
    NoSolution,
    #[error("enumeration cost {cost} exceeds budget {budget}")]
    BudgetExceeded { cost: u128, budget: u128 },
    #[error("{count} column subsets exceed the cap {cap}")]
    SubsetCountTooLarge { count: u128, cap: u128 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("scaling constant does not satisfy a^(q+1) = -1")]
    BadAlpha,
    #[error("n = {n} violates the congruence {requirement} (mod {p})")]
    CongruenceViolated { n: usize, p: u64, requirement: String },
    #[error("bordered parameter system violated at equation {0}")]
    SystemViolated(u8),
    #[error("generator has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("guard violated: {0}")]
    GuardViolated(String),
    #[error("no root for the gamma norm equation")]
    NoGammaRoot,
    #[error("extension vector violates: {0}")]
    SpecViolated(String),
    #[error("degenerate extension: echelon entry m(1,n+2) is zero")]
    DegenerateExtension,
    #[error("no isotropic vector outside the code was found")]
    NoIsotropicVector,
    #[error("mixing matrix does not have full row rank")]
    RankDeficientA,
    #[error("inner codes have mismatched lengths or count")]
    LengthMismatch,
    #[error("mixing matrix has no right conjugate inverse")]
    NoRightInverse,
    #[error("minimum distance of an inner code is unavailable within budget")]
    InnerDistanceUnavailable,
    #[error("no data file for table {0}")]
    TableFileMissing(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
