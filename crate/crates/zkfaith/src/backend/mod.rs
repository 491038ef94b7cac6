//! Bilinear group abstraction with two interchangeable backends.
//!
//! [`Engine`] captures an asymmetric (type-3 friendly) pairing triple
//! `e: G1 x G2 -> GT` over a prime-order scalar field. Two implementations
//! exist:
//!
//! * [`BlsEngine`](bls::BlsEngine) — BLS12-381, the production curve.
//! * [`MockEngine`](mock::MockEngine) — a transparent group where every
//!   element is represented by its discrete log to the generator, so every
//!   protocol equation has an exact integer oracle.
//!
//! All group notation in this crate is additive; `a.mul(&s)` is the paper-style
//! exponentiation `a^s`.

use rand::RngCore;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub mod bls;
pub mod mock;

pub use bls::BlsEngine;
pub use mock::MockEngine;

/// Scalar field element operations. Values are canonical representatives in `[0, q)`.
pub trait ScalarOps: Clone + PartialEq + Eq + std::fmt::Debug + Send + Sync + 'static {
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn invert(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// Canonical big-endian encoding, fixed width for the field.
    fn to_bytes(&self) -> Vec<u8>;
}

/// Group element operations, uniform across G1, G2 and GT.
pub trait GroupOps<S>: Clone + PartialEq + Eq + std::fmt::Debug + Send + Sync + 'static {
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, scalar: &S) -> Self;
    fn is_identity(&self) -> bool;
    /// Canonical encoding (compressed points on the curve backend).
    fn to_bytes(&self) -> Vec<u8>;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
}

/// A pairing backend. Construction and parsing of elements go through
/// [`PublicParams`] because the mock backend carries its modulus at runtime.
pub trait Engine: Sized + Clone + std::fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Scalar: ScalarOps;
    type G1: GroupOps<Self::Scalar>;
    type G2: GroupOps<Self::Scalar>;
    type Gt: GroupOps<Self::Scalar>;

    /// Stable identifier used in serialized artifacts.
    const NAME: &'static str;

    fn pair(u: &Self::G1, v: &Self::G2) -> Self::Gt;

    /// Sum of pairings over the slice pairs. Backends may batch this.
    fn multi_pair(g1s: &[Self::G1], g2s: &[Self::G2]) -> Self::Gt {
        debug_assert_eq!(g1s.len(), g2s.len());
        let mut acc: Option<Self::Gt> = None;
        for (u, v) in g1s.iter().zip(g2s.iter()) {
            let t = Self::pair(u, v);
            acc = Some(match acc {
                Some(a) => a.add(&t),
                None => t,
            });
        }
        acc.expect("multi_pair on empty input")
    }

    fn scalar_from_u64(pp: &PublicParams<Self>, v: u64) -> Self::Scalar;
    fn random_scalar<R: RngCore + ?Sized>(pp: &PublicParams<Self>, rng: &mut R) -> Self::Scalar;
    /// Reduce a 64-byte big-endian integer into the scalar field.
    fn scalar_from_wide_bytes(pp: &PublicParams<Self>, wide: &[u8; 64]) -> Self::Scalar;

    /// Big-endian bytes of the group order.
    fn order_bytes(pp: &PublicParams<Self>) -> Vec<u8>;
    fn scalar_len(pp: &PublicParams<Self>) -> usize;
    fn g1_len(pp: &PublicParams<Self>) -> usize;
    fn g2_len(pp: &PublicParams<Self>) -> usize;
    fn gt_len(pp: &PublicParams<Self>) -> usize;

    fn scalar_from_bytes(pp: &PublicParams<Self>, bytes: &[u8]) -> Result<Self::Scalar>;
    fn g1_from_bytes(pp: &PublicParams<Self>, bytes: &[u8]) -> Result<Self::G1>;
    fn g2_from_bytes(pp: &PublicParams<Self>, bytes: &[u8]) -> Result<Self::G2>;
    fn gt_from_bytes(pp: &PublicParams<Self>, bytes: &[u8]) -> Result<Self::Gt>;

    /// Deterministic non-identity G1 element for a domain tag; no party knows
    /// its discrete log on the curve backend.
    fn hash_to_g1(pp: &PublicParams<Self>, domain: &[u8], parts: &[&[u8]]) -> Self::G1;
}

/// Parameter presets. `Toy` exists for hand-checkable mock arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecurityLevel {
    Toy,
    Standard,
}

impl SecurityLevel {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "toy" => Ok(SecurityLevel::Toy),
            "standard" => Ok(SecurityLevel::Standard),
            other => Err(Error::UnknownLevel(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SecurityLevel::Toy => "toy",
            SecurityLevel::Standard => "standard",
        }
    }

    pub(crate) fn tag(&self) -> u8 {
        match self {
            SecurityLevel::Toy => 0,
            SecurityLevel::Standard => 1,
        }
    }
}

/// Which backend a parameter set belongs to, including the mock modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendId {
    Mock { modulus: u64 },
    Bls12_381,
}

impl BackendId {
    pub fn name(&self) -> &'static str {
        match self {
            BackendId::Mock { .. } => "mock",
            BackendId::Bls12_381 => "curve",
        }
    }
}

/// System parameters: the group description plus derived bases. Input to
/// every other operation in the crate. Immutable once constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicParams<E: Engine> {
    pub backend: BackendId,
    pub level: SecurityLevel,
    /// Generator of G1.
    pub g: E::G1,
    /// Generator of G2.
    pub h: E::G2,
    /// `e(g, h)`, generator of GT.
    pub gt: E::Gt,
    /// Independent G1 base for auxiliary Pedersen commitments (range proofs).
    pub pedersen_base: E::G1,
}

impl<E: Engine> PublicParams<E> {
    /// Big-endian bytes of the prime group order `q`.
    pub fn order_bytes(&self) -> Vec<u8> {
        E::order_bytes(self)
    }

    /// Claimed security in bits. The mock backend is transparent by design
    /// and carries a nominal figure.
    pub fn security_bits(&self) -> u32 {
        match (&self.backend, self.level) {
            (BackendId::Bls12_381, _) => 128,
            (BackendId::Mock { .. }, SecurityLevel::Toy) => 0,
            (BackendId::Mock { .. }, SecurityLevel::Standard) => 0,
        }
    }

    pub fn scalar_from_u64(&self, v: u64) -> E::Scalar {
        E::scalar_from_u64(self, v)
    }

    pub fn random_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> E::Scalar {
        E::random_scalar(self, rng)
    }

    /// Random scalar guaranteed nonzero (resamples).
    pub fn random_nonzero_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> E::Scalar {
        loop {
            let s = E::random_scalar(self, rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Deterministic scalar from a domain-separated, length-prefixed hash of
    /// `parts`. Distinct domain tags give independent functions.
    pub fn hash_to_scalar(&self, domain: &[u8], parts: &[&[u8]]) -> E::Scalar {
        assert!(!domain.is_empty(), "hash domain tag must be non-empty");
        let wide = hash_wide(domain, parts);
        E::scalar_from_wide_bytes(self, &wide)
    }

    pub fn hash_to_g1(&self, domain: &[u8], parts: &[&[u8]]) -> E::G1 {
        E::hash_to_g1(self, domain, parts)
    }

    /// Digest binding the full parameter set; folded into every challenge.
    pub fn digest(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"zkfaith/pp/v1");
        h.update([match self.backend {
            BackendId::Mock { .. } => 0u8,
            BackendId::Bls12_381 => 1u8,
        }]);
        h.update([self.level.tag()]);
        let order = self.order_bytes();
        h.update((order.len() as u32).to_be_bytes());
        h.update(&order);
        for bytes in [
            self.g.to_bytes(),
            self.pedersen_base.to_bytes(),
            self.h.to_bytes(),
            self.gt.to_bytes(),
        ] {
            h.update((bytes.len() as u32).to_be_bytes());
            h.update(&bytes);
        }
        h.finalize().into()
    }
}

/// Parameter set with the backend chosen at runtime (CLI entry point).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyParams {
    Mock(PublicParams<MockEngine>),
    Bls(PublicParams<BlsEngine>),
}

impl AnyParams {
    pub fn backend_name(&self) -> &'static str {
        match self {
            AnyParams::Mock(pp) => pp.backend.name(),
            AnyParams::Bls(pp) => pp.backend.name(),
        }
    }

    pub fn level(&self) -> SecurityLevel {
        match self {
            AnyParams::Mock(pp) => pp.level,
            AnyParams::Bls(pp) => pp.level,
        }
    }
}

/// Deterministic setup from textual identifiers. Unknown identifiers are
/// configuration errors; equal inputs always yield byte-identical parameters.
pub fn setup_any(level: &str, backend: &str) -> Result<AnyParams> {
    let level = SecurityLevel::parse(level)?;
    match backend {
        "mock" => Ok(AnyParams::Mock(MockEngine::setup(level))),
        "curve" | "production-curve" => Ok(AnyParams::Bls(BlsEngine::setup(level))),
        other => Err(Error::UnknownBackend(other.to_string())),
    }
}

/// Run one expression against whichever backend `AnyParams` holds.
#[macro_export]
macro_rules! with_params {
    ($any:expr, |$pp:ident| $body:expr) => {
        match $any {
            $crate::backend::AnyParams::Mock($pp) => $body,
            $crate::backend::AnyParams::Bls($pp) => $body,
        }
    };
}

/// 64-byte expansion of a domain-separated, length-prefixed multi-part input.
/// Every variable-length part is prefixed with its 4-byte big-endian length,
/// so no two distinct part lists collide.
pub(crate) fn hash_wide(domain: &[u8], parts: &[&[u8]]) -> [u8; 64] {
    let mut pre = Vec::with_capacity(64);
    pre.extend_from_slice(&(domain.len() as u32).to_be_bytes());
    pre.extend_from_slice(domain);
    for p in parts {
        pre.extend_from_slice(&(p.len() as u32).to_be_bytes());
        pre.extend_from_slice(p);
    }
    let mut out = [0u8; 64];
    let mut h0 = Sha256::new();
    h0.update(&pre);
    h0.update([0u8]);
    out[..32].copy_from_slice(&h0.finalize());
    let mut h1 = Sha256::new();
    h1.update(&pre);
    h1.update([1u8]);
    out[32..].copy_from_slice(&h1.finalize());
    out
}

#[cfg(test)]
mod tests;
