use thiserror::Error;

/// Errors shared across the whole engine. The leading token of each message
/// is the stable error name surfaced by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ZeroPolynomial: root extraction requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("BadPrime: modulus must be a prime greater than 3, got {0}")]
    BadPrime(u64),
    #[error("BadDegree: {0}")]
    BadDegree(String),
    #[error("NotSquarefree: defining polynomial has a repeated root")]
    NotSquarefree,
    #[error("NonSplitSupport: a zero or pole lies at a place of degree > 1; choose a split configuration")]
    NonSplitSupport,
    #[error("ZeroFunction: the zero function has no divisor")]
    ZeroFunction,
    #[error("CurveMismatch: operands live on different curves")]
    CurveMismatch,
    #[error("NotEffective: {0}")]
    NotEffective(String),
    #[error("InternalBoundError: {0}")]
    InternalBoundError(String),
    #[error("SizeCapExceeded: Koszul slot needs {needed} matrix entries, cap is {cap}")]
    SizeCapExceeded { needed: u128, cap: u128 },
    #[error("NotBasePointFree: duality requires a base point free line bundle")]
    NotBasePointFree,
    #[error("Inconclusive: rational-place testing cannot certify behavior at non-rational places here")]
    Inconclusive,
    #[error("NotMinimal: a place carries v(A) >= 4 and v(B) >= 6 relative to the L-trivialization")]
    NotMinimal,
    #[error("DegenerateDisc: 4A^3 + 27B^2 vanishes identically")]
    DegenerateDisc,
    #[error("InconsistentInvariants: {0}")]
    InconsistentInvariants(String),
    #[error("OracleMismatch: {0}")]
    OracleMismatch(String),
    #[error("NoTwistFound: not enough rational 2-torsion; choose a fully split defining polynomial")]
    NoTwistFound,
    #[error("RetryExhausted: random search gave up after {0} attempts")]
    RetryExhausted(usize),
    #[error("BadCubic: {0}")]
    BadCubic(String),
    #[error("NotTorsion: class order is not in {{2, 3, 4, 6}}")]
    NotTorsion,
    #[error("TrivialClass: the twisting class is principal; use the rule engine with an h1 parity instead")]
    TrivialClass,
    #[error("NotReduced: the discriminant divisor must be reduced and effective")]
    NotReduced,
    #[error("MalformedInput: {0}")]
    MalformedInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
