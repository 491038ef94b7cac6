//! Error and rejection types shared across the crate.
//!
//! Proof verification itself is a boolean outcome (a bad transcript is a
//! rejection, not an error); [`Error`] covers misuse, malformed inputs, and
//! protocol-level rejections that carry a [`RejectReason`].

use thiserror::Error;

/// Why a protocol step refused to proceed.
///
/// Each variant maps to a distinct CLI exit code so scripted runs can tell
/// rejection classes apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    /// Authority response failed its own signature or verdict check.
    AuthInvalid,
    /// Authority response and issue query disagree (wallet id or schema).
    AuthMismatch,
    /// A zero-knowledge proof failed verification.
    BadProof(&'static str),
    /// Document or attribute vector does not match the registered schema.
    SchemaMismatch,
    /// Credential serial appears on the published revocation list.
    Revoked,
    /// Proof was built against an epoch other than the current publication.
    StaleEpoch,
    /// Presentation nonce was already consumed by this verifier.
    ReplayedNonce,
    /// Presentation does not cover every disclosure/predicate the criterion demands.
    CoverageMissing,
}

impl RejectReason {
    /// Stable process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            RejectReason::AuthInvalid => 10,
            RejectReason::AuthMismatch => 11,
            RejectReason::BadProof(_) => 12,
            RejectReason::SchemaMismatch => 13,
            RejectReason::Revoked => 14,
            RejectReason::StaleEpoch => 15,
            RejectReason::ReplayedNonce => 16,
            RejectReason::CoverageMissing => 17,
        }
    }
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RejectReason::AuthInvalid => write!(f, "authority response invalid"),
            RejectReason::AuthMismatch => write!(f, "authority response does not match query"),
            RejectReason::BadProof(what) => write!(f, "proof verification failed: {what}"),
            RejectReason::SchemaMismatch => write!(f, "schema mismatch"),
            RejectReason::Revoked => write!(f, "credential revoked"),
            RejectReason::StaleEpoch => write!(f, "stale revocation epoch"),
            RejectReason::ReplayedNonce => write!(f, "nonce already seen"),
            RejectReason::CoverageMissing => write!(f, "criterion coverage missing"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown backend `{0}`")]
    UnknownBackend(String),
    #[error("unknown security level `{0}`")]
    UnknownLevel(String),
    #[error("invalid vector length: expected {expected}, got {got}")]
    InvalidLength { expected: usize, got: usize },
    #[error("position {position} out of range 1..={len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("key mismatch: {0}")]
    KeyMismatch(String),
    #[error("decode error at offset {offset}: {what}")]
    Decode { offset: usize, what: String },
    #[error("unsupported format version {0}")]
    Version(u8),
    #[error("payload digest mismatch")]
    DigestMismatch,
    #[error("schema error: {0}")]
    Schema(String),
    #[error("policy violation: {0}")]
    Policy(String),
    #[error("cannot satisfy predicate: {0}")]
    CannotSatisfy(String),
    #[error("predicate exceeds range capacity: {0}")]
    Capacity(String),
    #[error("predicate on disclosed position {0} is redundant")]
    RedundantPredicate(usize),
    #[error("serial degenerates at epoch {0}")]
    DegenerateSerial(u64),
    #[error("rejected: {0}")]
    Reject(RejectReason),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Config(String),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 3,
            Error::Decode { .. } | Error::Version(_) => 4,
            Error::DigestMismatch => 5,
            Error::Reject(r) => r.exit_code(),
            Error::Schema(_) => 13,
            Error::Policy(_) | Error::RedundantPredicate(_) => 18,
            Error::CannotSatisfy(_) | Error::Capacity(_) => 19,
            _ => 20,
        }
    }

    pub(crate) fn decode(offset: usize, what: impl Into<String>) -> Self {
        Error::Decode {
            offset,
            what: what.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
