//! Anonymous credentials from CL signatures over hiding vector commitments.
//!
//! A claimant gets an official document validated by an authority, commits to
//! the document's attributes, and receives a blind CL signature on the
//! commitment from an issuer who never sees the attributes. The resulting
//! credential supports:
//!
//! * zero-knowledge presentations with selective disclosure,
//! * range predicates (e.g. proving an age threshold without revealing the
//!   birth date),
//! * epoch-based revocation with zero-knowledge non-membership, and
//! * in-place attribute update without restarting the protocol.
//!
//! Every construction runs over an abstract pairing backend: BLS12-381 in
//! production and a transparent exponent-representation mock whose arithmetic
//! can be checked against integer oracles.
//!
//! Start with the runnable examples (`cargo run --example end_to_end`) or the
//! `zkfaith` CLI binary, which drives all four protocol roles through files.

pub mod backend;
pub mod cl;
pub mod proofs;
pub mod revocation;
pub mod schema;
pub mod vc;
pub(crate) mod sigma;
pub mod error;

pub use backend::{setup_any, AnyParams, BackendId, Engine, GroupOps, PublicParams, ScalarOps, SecurityLevel};
pub use backend::{BlsEngine, MockEngine};
pub use error::{Error, RejectReason, Result};
