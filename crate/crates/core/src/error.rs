use thiserror::Error;

/// Every failure the library can report.
///
/// The `Display` form of the axiom variants starts with the axiom name so the
/// CLI diagnostics can be matched by prefix.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("CompositeModulus: {0} is not prime")]
    NotPrime(u64),
    #[error("EvenPrime: p odd required for unit square roots and pairing normalization")]
    EvenPrime,
    #[error("InvalidRing: {0}")]
    InvalidRing(String),
    #[error("ReducibleModulus: minimal polynomial is not irreducible mod p")]
    ReducibleModulus,
    #[error("NotAUnit")]
    NotAUnit,
    #[error("NotASquare: residue is not a square in the residue field")]
    NotASquare,
    #[error("NoSmallQuotient: level 1 ring has no further quotient within its family")]
    NoSmallQuotient,
    #[error("WrongFamily: {0}")]
    WrongFamily(&'static str),
    #[error("RingMismatch")]
    RingMismatch,
    #[error("SingularMatrix")]
    SingularMatrix,
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),

    #[error("SingularPhi block {block}")]
    SingularPhi { block: usize },
    #[error("WeightOutOfBounds block {block} index {index}")]
    WeightOutOfBounds { block: usize, index: usize },
    #[error("UnsortedWeights block {block}")]
    UnsortedWeights { block: usize },
    #[error("BlockRankMismatch block {block}")]
    BlockRankMismatch { block: usize },
    #[error("ResidueDegreeMismatch: {witt_degree} blocks need a residue field containing F_p^{witt_degree}")]
    ResidueDegreeMismatch { witt_degree: usize },
    #[error("RangeViolation: weight interval of length {length} exceeds {limit}")]
    RangeViolation { length: i64, limit: String },

    #[error("NotPerfect block {block}")]
    NotPerfect { block: usize },
    #[error("SymmetryViolation block {block} entry ({i},{j})")]
    SymmetryViolation { block: usize, i: usize, j: usize },
    #[error("FiltrationViolation block {block} entry ({i},{j})")]
    FiltrationViolation { block: usize, i: usize, j: usize },
    #[error("PhiIncompatible block {block} entry ({i},{j})")]
    PhiIncompatible { block: usize, i: usize, j: usize },
    #[error("OddRankSymplectic")]
    OddRankSymplectic,
    #[error("InvalidLData: {0}")]
    InvalidLData(String),
    #[error("MultiplicityNotFree block {block}")]
    MultiplicityNotFree { block: usize },
    #[error("NotResidueField: operation requires coefficients in the residue field")]
    NotResidueField,

    #[error("InternalRankFailure: {0}")]
    InternalRankFailure(String),

    #[error("NonMinimalPeriod: weight function has period {period} < {h}")]
    NonMinimalPeriod { h: usize, period: usize },
    #[error("IndexOutOfRange: {0}")]
    IndexOutOfRange(String),
    #[error("MissingRootsOfUnity: F_{q} has no primitive {order}-th root of unity")]
    MissingRootsOfUnity { q: u64, order: usize },
    #[error("SizeGuardExceeded: {0}")]
    SizeGuardExceeded(String),
    #[error("EnumerationTooLarge: {0}")]
    EnumerationTooLarge(String),

    #[error("InvalidGroup: {0}")]
    InvalidGroup(String),
    #[error("InvalidInput: {0}")]
    InvalidInput(String),

    #[error("Parse: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
