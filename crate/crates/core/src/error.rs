use thiserror::Error;

/// Errors raised by the library. Report-valued operations (identity checks,
/// congruence checks, the verifier) never use this type for a mathematical
/// "no"; they return a report instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("NON_UNIT: {value} is divisible by {p}")]
    NonUnit { value: i64, p: u64 },
    #[error("BAD_PARITY: expected an even integer, got {0}")]
    BadParity(u32),
    #[error("BAD_WEIGHT: weight {0} is not an even integer >= 2")]
    BadWeight(i64),
    #[error("NONZERO_CONSTANT: exp needs a series with zero constant term")]
    NonzeroConstant,
    #[error("NONUNIT_CONSTANT: log needs a series with constant term 1")]
    NonunitConstant,
    #[error("NOT_INVERTIBLE: constant term is not a unit")]
    NotInvertible,
    #[error("NOT_REVERTIBLE: need zero constant term and a unit linear term")]
    NotRevertible,
    #[error("NONZERO_INNER_CONSTANT: inner series of a composition must have zero constant term")]
    NonzeroInnerConstant,
    #[error("LEVEL_CONFLICT: p = {p} divides the level {level}")]
    LevelConflict { p: u64, level: u64 },
    #[error("DUPLICATE_PRIME: {0} listed twice")]
    DuplicatePrime(u64),
    #[error("NOT_IN_SPAN: image of basis element {index} is not in the span at q-order {q_order}")]
    NotInSpan { index: usize, q_order: usize },
    #[error("DEGENERATE_BASIS: basis is linearly dependent at q-order {0}")]
    DegenerateBasis(usize),
    #[error(
        "NOT_P_INTEGRAL: moment x^{exponent} has {p}-adic valuation {valuation} at q^{q_index}"
    )]
    NotPIntegral {
        p: u64,
        exponent: u32,
        q_index: usize,
        valuation: i64,
    },
    #[error(
        "MISSING_EXPONENT_CLASS: uncovered even exponent classes {missing:?} modulo {modulus}"
    )]
    MissingExponentClass { modulus: u64, missing: Vec<u64> },
    #[error("WEIGHT_OVERFLOW: weight {weight} exceeds the cap {cap}")]
    WeightOverflow { weight: u64, cap: u64 },
    #[error("PRIME_CLASH: p and l must be distinct (both {0})")]
    PrimeClash(u64),
    #[error("SHAPE_VIOLATION: quartic identity fails at x^{u_index} q^{q_index}")]
    ShapeViolation { u_index: usize, q_index: usize },
    #[error("BAD_MODULUS: {0}")]
    BadModulus(String),
    #[error("CONFIG_INVALID: {0}")]
    ConfigInvalid(String),
    #[error("PARSE: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
