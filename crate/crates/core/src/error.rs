use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("operands live in different residue rings ({0} vs {1})")]
    ModulusMismatch(u64, u64),
    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u64, modulus: u64 },
    #[error("{a} and {b} are not coprime")]
    NotCoprime { a: u64, b: u64 },
    #[error("leading coefficient {0} of the divisor is not a unit")]
    NonUnitLeading(u64),
    #[error("expanded minimal polynomial has a coefficient outside the prime field")]
    NotInBaseField,
    #[error("factor is not simple in the reduction of the target; its lift is not unique")]
    NotSimpleFactor,
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("prime {0} occurs in more than one component")]
    DuplicatePrime(u64),
    #[error("component over prime {0} is not admissible")]
    ComponentNotAdmissible(u64),
    #[error("component valences are incompatible: x^{0}+1 is not in the composed ideal")]
    IncompatibleValences(u64),
    #[error("ideal is not admissible: clause {0}")]
    NotAdmissible(AdmissibilityClause),
    #[error("generating set is degenerate: {0}")]
    DegenerateOmega(String),
    #[error("maps have different types")]
    TypeMismatch,
    #[error("invalid group specification: {0}")]
    InvalidGroup(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Variant name, used by the command-line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::ModulusMismatch(..) => "ModulusMismatch",
            Error::NotAUnit { .. } => "NotAUnit",
            Error::NotCoprime { .. } => "NotCoprime",
            Error::NonUnitLeading(_) => "NonUnitLeading",
            Error::NotInBaseField => "NotInBaseField",
            Error::NotSimpleFactor => "NotSimpleFactor",
            Error::TooLarge(_) => "TooLarge",
            Error::DuplicatePrime(_) => "DuplicatePrime",
            Error::ComponentNotAdmissible(_) => "ComponentNotAdmissible",
            Error::IncompatibleValences(_) => "IncompatibleValences",
            Error::NotAdmissible(_) => "NotAdmissible",
            Error::DegenerateOmega(_) => "DegenerateOmega",
            Error::TypeMismatch => "TypeMismatch",
            Error::InvalidGroup(_) => "InvalidGroup",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}

/// The three defining clauses of an admissible ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum AdmissibilityClause {
    /// `x^n + 1` must lie in the ideal.
    ContainsTarget,
    /// `x^m + 1` must not lie in the ideal for `1 <= m < n`.
    SmallerExponent(u64),
    /// No nonzero constant may lie in the ideal.
    NonzeroConstant,
}

impl std::fmt::Display for AdmissibilityClause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AdmissibilityClause::ContainsTarget => write!(f, "(i) x^n+1 not in Q"),
            AdmissibilityClause::SmallerExponent(m) => write!(f, "(ii) x^{m}+1 in Q"),
            AdmissibilityClause::NonzeroConstant => write!(f, "(iii) nonzero constant in Q"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
