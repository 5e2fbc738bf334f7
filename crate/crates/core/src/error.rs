use thiserror::Error;

/// Errors raised by the core library.
///
/// Budget exhaustion inside [`crate::factor::factorize`] is not an error: it
/// is encoded in the returned cofactor status.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Frobenius parameters (q = {q}, a = {a}): {reason}")]
    InvalidParams { q: String, a: String, reason: &'static str },

    #[error("factorization budget exhausted while factoring {0}")]
    FactorizationExceeded(String),

    #[error("precondition violated in {op}: {detail}")]
    PreconditionViolation { op: &'static str, detail: String },

    #[error("argument outside the domain of {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("arithmetic mismatch in {op}: {detail}")]
    Mismatch { op: &'static str, detail: String },

    #[error("congruence violation for p = {p}, n = {n} ({kind}): {detail}")]
    CongruenceViolation { p: String, n: u64, kind: String, detail: String },

    #[error("factorization of {what} is incomplete")]
    IncompleteFactorization { what: String },

    #[error("{d} is not a unitary divisor of {modulus}")]
    NotUnitary { d: u64, modulus: u64 },

    #[error("S-unit enumeration exceeds the cap of {cap} elements")]
    EnumerationTooLarge { cap: u64 },

    #[error("q^n for n = {n} needs {bits} bits, over the budget of {max_bits}")]
    BitBudgetExceeded { n: u64, bits: u64, max_bits: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition(op: &'static str, detail: impl Into<String>) -> Error {
    Error::PreconditionViolation { op, detail: detail.into() }
}

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain { op, detail: detail.into() }
}
