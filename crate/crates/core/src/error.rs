use thiserror::Error;

use crate::rat::Rat;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {modulus} is reducible over F_{p}")]
    ReducibleModulus { modulus: String, p: u64 },
    #[error("modulus must be monic of degree {expected}")]
    BadModulus { expected: u32 },
    #[error("field F_{p}^{e} exceeds the supported size")]
    FieldTooLarge { p: u64, e: u32 },
    #[error("field size {q} exceeds the exhaustive-search bound")]
    ExhaustiveBound { q: u64 },
    #[error("operation requires positive characteristic")]
    CharacteristicZero,
    #[error("operands live over different coefficient fields")]
    FieldMismatch,
    #[error("{0} has no rational root of the requested order")]
    IrrationalRoot(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator of {0} is divisible by the characteristic")]
    DenominatorDivisibleByP(String),
    #[error("zero coefficient at exponent {0}")]
    ZeroCoefficient(Rat),
    #[error("exponent {exponent} is not below the cap {cap}")]
    TermAtOrAboveCap { exponent: Box<Rat>, cap: Box<Rat> },
    #[error("duplicate exponent {0}")]
    DuplicateExponent(Rat),
    #[error("coefficient at exponent {0} is not certified")]
    Uncertified(Rat),
    #[error("series has no visible leading term")]
    NoLeadingTerm,
    #[error("series is not monic")]
    NotMonic,
    #[error("substitution requires positive valuation, found {0}")]
    NonPositiveValuation(Rat),
    #[error("additive polynomial must have a nonzero leading coefficient")]
    ZeroAdditivePoly,
    #[error("{0} is not an additive polynomial")]
    NotAdditive(String),
    #[error("additive polynomials of degree > 1 do not exist in characteristic 0")]
    NonlinearInCharZero,
    #[error("no solution: constant term {0} is not in the image of the polynomial")]
    NoSolution(String),
    #[error("target cap {0} cannot be reached: solutions accumulate at 0 from below")]
    UnreachableCap(Rat),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("trace of the argument is {0}, expected 0")]
    NonzeroTrace(String),
    #[error("exponent {0} is outside the committed lattice of the homomorphism")]
    Unqueryable(Rat),
    #[error("incompatible root choices for denominators {0} and {1}")]
    IncompatibleHom(u64, u64),
    #[error("scale factor must be positive")]
    NonPositiveScale,
    #[error("valuation sign is not decidable at the current cap")]
    Undecidable,
    #[error("argument is a constant; orbits are classified on the complement of k")]
    BareConstant,
    #[error("leading coefficient {0} is not reachable by a constructible rescaling")]
    UnreachableCoefficient(String),
    #[error("syntax error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("{0}")]
    Eval(String),
    #[error("invalid JSON: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            column,
            message: message.into(),
        }
    }

    /// Malformed input, as opposed to a well-formed request the mathematics refuses.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Json(_))
    }
}
