use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-unit divisor")]
    NonUnitDivisor,
    #[error("truncation too short: need exponent {needed}, known through {known}")]
    TruncationTooShort { needed: i64, known: i64 },
    #[error("truncation exhausted at (h,n)=({h},{n}): need series order {required}")]
    TruncationExhausted { h: usize, n: usize, required: i64 },
    #[error("non-rational critical point")]
    NonRationalCriticalPoint,
    #[error("non-square normalization at critical point {0}; use the numeric module or allow local rescaling")]
    NonSquareNormalization(String),
    #[error("non-simple ramification: {0}")]
    NonSimpleRamification(String),
    #[error("degenerate denominator at chart {0}")]
    DegenerateDenominator(usize),
    #[error("label clash: {0}")]
    LabelClash(String),
    #[error("non-integrable: {0}")]
    NonIntegrable(String),
    #[error("symmetry violation in S_({h},{n}) at {index:?}")]
    SymmetryViolation { h: usize, n: usize, index: Vec<i64> },
    #[error("omega_({h},{n}) has a pole beyond the expected order")]
    PoleBound { h: usize, n: usize },
    #[error("undefined for h<2 in this artifact")]
    FreeEnergyUndefined,
    #[error("dictionary violation: {0}")]
    DictionaryViolation(String),
    #[error("inconsistent system: {0}")]
    InconsistentSystem(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("degenerate curve: {0}")]
    Degenerate(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}
