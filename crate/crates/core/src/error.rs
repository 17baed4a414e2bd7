use thiserror::Error;

use crate::formlang::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("prime {0} is too large (limit 2^31)")]
    PrimeTooLarge(u64),
    #[error("zero has no square class")]
    ZeroElement,
    #[error("exhaustive search over {0} vectors exceeds the 10^8 limit")]
    SearchSpaceTooLarge(u128),
    #[error("operands live over different base fields")]
    FieldMismatch,
    #[error("operands have different numbers of variables ({0} vs {1})")]
    ArityMismatch(usize, usize),
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("exact division failed: divisor does not divide dividend")]
    NotDivisible,
    #[error("at most {max} variables are supported, got {got}")]
    TooManyVariables { got: usize, max: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("matrix is not square")]
    NotSquare,
    #[error("quadratic form is degenerate")]
    DegenerateForm,
    #[error("residue level {level} unsupported for ambient {vars} (only the outermost level)")]
    LevelOutOfRange { level: usize, vars: usize },
    #[error("forms live over different ambient rings")]
    AmbientMismatch,
    #[error("bad exponent data: {0}")]
    BadExponent(String),
    #[error("cover is not split over the base field: {0}")]
    NonSplitData(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "E_NOT_PRIME",
            Error::EvenCharacteristic => "E_EVEN_CHARACTERISTIC",
            Error::PrimeTooLarge(_) => "E_PRIME_TOO_LARGE",
            Error::ZeroElement => "E_ZERO_ELEMENT",
            Error::SearchSpaceTooLarge(_) => "E_SEARCH_SPACE_TOO_LARGE",
            Error::FieldMismatch => "E_FIELD_MISMATCH",
            Error::ArityMismatch(..) => "E_ARITY_MISMATCH",
            Error::ZeroPolynomial => "E_ZERO_POLYNOMIAL",
            Error::NotDivisible => "E_NOT_DIVISIBLE",
            Error::TooManyVariables { .. } => "E_TOO_MANY_VARIABLES",
            Error::NotSymmetric(..) => "E_NOT_SYMMETRIC",
            Error::NotSquare => "E_NOT_SQUARE",
            Error::DegenerateForm => "E_DEGENERATE_FORM",
            Error::LevelOutOfRange { .. } => "E_LEVEL_OUT_OF_RANGE",
            Error::AmbientMismatch => "E_AMBIENT_MISMATCH",
            Error::BadExponent(_) => "E_BAD_EXPONENT",
            Error::NonSplitData(_) => "E_NON_SPLIT_DATA",
            Error::NotACocycle(_) => "E_NOT_A_COCYCLE",
            Error::Parse(e) => e.kind.code(),
        }
    }

    pub fn is_syntax(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
