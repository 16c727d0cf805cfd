use thiserror::Error;

/// Errors raised by the library. Every variant has a stable machine-readable
/// code (see [`Error::code`]) that the CLI puts in its reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of order {0} exceeds the supported table size")]
    FieldTooLarge(u64),
    #[error("square class of zero is undefined")]
    ZeroInSquareClass,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("operation requires odd characteristic")]
    OddCharacteristicRequired,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("discriminant is not defined in characteristic 2")]
    CharTwoDiscriminant,
    #[error("spinor norm is not defined in characteristic 2")]
    SpinorNormCharTwo,
    #[error("degenerate form")]
    DegenerateForm,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("field mismatch")]
    FieldMismatch,
    #[error("matrix is not an isometry of the form")]
    NotAnIsometry,
    #[error("group of order {order} exceeds cap {cap}")]
    GroupTooLarge { order: u128, cap: u128 },
    #[error("search in dimension {dim} exceeded the node cap {cap}")]
    SearchTooLarge { dim: usize, cap: u64 },
    #[error("failed to split off a nondegenerate block: {0}")]
    DecompositionFailure(String),
    #[error("operation not defined for this ambient group: {0}")]
    WrongAmbient(String),
    #[error("construction requires q = 3 (mod 4), got q = {0}")]
    WrongFieldClass(u64),
    #[error("no suitable eta element found")]
    EtaConstructionFailed,
    #[error("automorphism is not an involution")]
    NotInvolutory,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("character table computation failed: {0}")]
    CharTable(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrimePower(_) => "NotPrimePower",
            Error::FieldTooLarge(_) => "FieldTooLarge",
            Error::ZeroInSquareClass => "ZeroInSquareClass",
            Error::ZeroConstantTerm => "ZeroConstantTerm",
            Error::NotIrreducible => "NotIrreducible",
            Error::OddCharacteristicRequired => "OddCharacteristicRequired",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::Singular => "Singular",
            Error::CharTwoDiscriminant => "CharTwoDiscriminant",
            Error::SpinorNormCharTwo => "SpinorNormCharTwo",
            Error::DegenerateForm => "DegenerateForm",
            Error::DependentBasis => "DependentBasis",
            Error::FieldMismatch => "FieldMismatch",
            Error::NotAnIsometry => "NotAnIsometry",
            Error::GroupTooLarge { .. } => "GroupTooLarge",
            Error::SearchTooLarge { .. } => "SearchTooLarge",
            Error::DecompositionFailure(_) => "DecompositionFailure",
            Error::WrongAmbient(_) => "WrongAmbient",
            Error::WrongFieldClass(_) => "WrongFieldClass",
            Error::EtaConstructionFailed => "EtaConstructionFailed",
            Error::NotInvolutory => "NotInvolutory",
            Error::Parse(_) => "Parse",
            Error::CharTable(_) => "CharTable",
            Error::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
