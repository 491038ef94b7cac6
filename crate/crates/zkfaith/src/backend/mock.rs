//! Transparent test backend: elements are their discrete logs.
//!
//! A `MockPoint` in any of the three groups is just its exponent relative to
//! the group generator, reduced modulo a runtime prime `q`. The pairing is
//! exponent multiplication, so `e(a*g, b*h) = (a*b)*gt` holds exactly and
//! every higher-level formula can be checked against integer arithmetic.
//!
//! The toy preset uses `q = 101`; the standard preset uses the Mersenne prime
//! `2^61 - 1` so encoded attribute values (day counts, hashes) fit without
//! wrapping. Nothing here is constant-time or hiding; the backend exists as
//! an oracle, not as a cryptosystem.

use rand::Rng;
use rand::RngCore;

use super::{BackendId, Engine, GroupOps, PublicParams, ScalarOps, SecurityLevel};
use crate::error::{Error, Result};

/// Prime modulus of the standard mock preset: `2^61 - 1`.
pub const MOCK_STANDARD_MODULUS: u64 = (1 << 61) - 1;
/// Prime modulus of the toy mock preset.
pub const MOCK_TOY_MODULUS: u64 = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MockScalar {
    value: u64,
    modulus: u64,
}

/// Group element represented by its exponent. The const parameter only
/// distinguishes G1/G2/GT at the type level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MockPoint<const GROUP: u8> {
    exp: u64,
    modulus: u64,
}

pub type MockG1 = MockPoint<1>;
pub type MockG2 = MockPoint<2>;
pub type MockGt = MockPoint<3>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MockEngine;

fn check_same(q1: u64, q2: u64) {
    assert_eq!(q1, q2, "mock elements from different moduli mixed");
}

fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1u64 % q;
    base %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        e >>= 1;
    }
    acc
}

/// Byte width of canonical encodings for modulus `q`: enough for `q - 1`.
fn width(q: u64) -> usize {
    let bits = 64 - (q - 1).leading_zeros() as usize;
    bits.div_ceil(8).max(1)
}

fn to_be_fixed(v: u64, q: u64) -> Vec<u8> {
    let w = width(q);
    v.to_be_bytes()[8 - w..].to_vec()
}

fn from_be_fixed(bytes: &[u8], q: u64, what: &str) -> Result<u64> {
    let w = width(q);
    if bytes.len() != w {
        return Err(Error::decode(0, format!("{what}: expected {w} bytes, got {}", bytes.len())));
    }
    let mut buf = [0u8; 8];
    buf[8 - w..].copy_from_slice(bytes);
    let v = u64::from_be_bytes(buf);
    if v >= q {
        return Err(Error::decode(0, format!("{what}: value not canonical mod {q}")));
    }
    Ok(v)
}

impl MockScalar {
    pub fn new(value: u64, modulus: u64) -> Self {
        MockScalar {
            value: value % modulus,
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl<const G: u8> MockPoint<G> {
    pub fn from_exponent(exp: u64, modulus: u64) -> Self {
        MockPoint {
            exp: exp % modulus,
            modulus,
        }
    }

    /// The discrete log this element stands for.
    pub fn exponent(&self) -> u64 {
        self.exp
    }
}

impl ScalarOps for MockScalar {
    fn add(&self, rhs: &Self) -> Self {
        check_same(self.modulus, rhs.modulus);
        MockScalar::new(
            ((self.value as u128 + rhs.value as u128) % self.modulus as u128) as u64,
            self.modulus,
        )
    }

    fn sub(&self, rhs: &Self) -> Self {
        check_same(self.modulus, rhs.modulus);
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        check_same(self.modulus, rhs.modulus);
        MockScalar::new(mul_mod(self.value, rhs.value, self.modulus), self.modulus)
    }

    fn neg(&self) -> Self {
        MockScalar::new((self.modulus - self.value) % self.modulus, self.modulus)
    }

    fn invert(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        // q is prime, so a^(q-2) is the inverse.
        Some(MockScalar::new(
            pow_mod(self.value, self.modulus - 2, self.modulus),
            self.modulus,
        ))
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn to_bytes(&self) -> Vec<u8> {
        to_be_fixed(self.value, self.modulus)
    }
}

impl<const G: u8> GroupOps<MockScalar> for MockPoint<G> {
    fn add(&self, rhs: &Self) -> Self {
        check_same(self.modulus, rhs.modulus);
        MockPoint::from_exponent(
            ((self.exp as u128 + rhs.exp as u128) % self.modulus as u128) as u64,
            self.modulus,
        )
    }

    fn neg(&self) -> Self {
        MockPoint::from_exponent((self.modulus - self.exp) % self.modulus, self.modulus)
    }

    fn mul(&self, scalar: &MockScalar) -> Self {
        check_same(self.modulus, scalar.modulus);
        MockPoint::from_exponent(mul_mod(self.exp, scalar.value, self.modulus), self.modulus)
    }

    fn is_identity(&self) -> bool {
        self.exp == 0
    }

    fn to_bytes(&self) -> Vec<u8> {
        to_be_fixed(self.exp, self.modulus)
    }
}

/// The type-2 homomorphism `psi: G2 -> G1` with `psi(a*h) = a*g`. It exists
/// only on this backend; the curve backend arranges all equations to use
/// pairings instead.
pub fn psi(v: &MockG2) -> MockG1 {
    MockPoint::from_exponent(v.exp, v.modulus)
}

fn mock_modulus<E: Engine>(pp: &PublicParams<E>) -> u64 {
    match pp.backend {
        BackendId::Mock { modulus } => modulus,
        BackendId::Bls12_381 => unreachable!("mock engine with curve params"),
    }
}

impl MockEngine {
    /// Deterministic parameters: generators are exponent 1, the auxiliary
    /// Pedersen base is hash-derived.
    pub fn setup(level: SecurityLevel) -> PublicParams<MockEngine> {
        let q = match level {
            SecurityLevel::Toy => MOCK_TOY_MODULUS,
            SecurityLevel::Standard => MOCK_STANDARD_MODULUS,
        };
        Self::setup_with_modulus(level, q)
    }

    /// Parameters over an explicit small prime, for oracle tests that want a
    /// second hand-checkable field (e.g. q = 1009).
    pub fn setup_with_modulus(level: SecurityLevel, modulus: u64) -> PublicParams<MockEngine> {
        assert!(modulus >= 3 && is_prime(modulus), "mock modulus must be prime");
        let mut pp = PublicParams {
            backend: BackendId::Mock { modulus },
            level,
            g: MockPoint::from_exponent(1, modulus),
            h: MockPoint::from_exponent(1, modulus),
            gt: MockPoint::from_exponent(1, modulus),
            pedersen_base: MockPoint::from_exponent(1, modulus),
        };
        pp.pedersen_base = MockEngine::hash_to_g1(&pp, b"zkfaith/base/pedersen", &[]);
        pp
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Engine for MockEngine {
    type Scalar = MockScalar;
    type G1 = MockG1;
    type G2 = MockG2;
    type Gt = MockGt;

    const NAME: &'static str = "mock";

    fn pair(u: &Self::G1, v: &Self::G2) -> Self::Gt {
        check_same(u.modulus, v.modulus);
        MockPoint::from_exponent(mul_mod(u.exp, v.exp, u.modulus), u.modulus)
    }

    fn scalar_from_u64(pp: &PublicParams<Self>, v: u64) -> Self::Scalar {
        MockScalar::new(v, mock_modulus(pp))
    }

    fn random_scalar<R: RngCore + ?Sized>(pp: &PublicParams<Self>, rng: &mut R) -> Self::Scalar {
        let q = mock_modulus(pp);
        MockScalar::new(rng.gen_range(0..q), q)
    }

    fn scalar_from_wide_bytes(pp: &PublicParams<Self>, wide: &[u8; 64]) -> Self::Scalar {
        let q = mock_modulus(pp) as u128;
        let mut acc: u128 = 0;
        for b in wide {
            acc = (acc << 8 | *b as u128) % q;
        }
        MockScalar::new(acc as u64, q as u64)
    }

    fn order_bytes(pp: &PublicParams<Self>) -> Vec<u8> {
        let q = mock_modulus(pp);
        let w = width(q);
        // q itself may need one byte more than q-1 (e.g. q = 257).
        let full = q.to_be_bytes();
        let lead = full.iter().position(|b| *b != 0).unwrap_or(7);
        full[lead.min(8 - w)..].to_vec()
    }

    fn scalar_len(pp: &PublicParams<Self>) -> usize {
        width(mock_modulus(pp))
    }

    fn g1_len(pp: &PublicParams<Self>) -> usize {
        width(mock_modulus(pp))
    }

    fn g2_len(pp: &PublicParams<Self>) -> usize {
        width(mock_modulus(pp))
    }

    fn gt_len(pp: &PublicParams<Self>) -> usize {
        width(mock_modulus(pp))
    }

    fn scalar_from_bytes(pp: &PublicParams<Self>, bytes: &[u8]) -> Result<Self::Scalar> {
        let q = mock_modulus(pp);
        Ok(MockScalar::new(from_be_fixed(bytes, q, "mock scalar")?, q))
    }

    fn g1_from_bytes(pp: &PublicParams<Self>, bytes: &[u8]) -> Result<Self::G1> {
        let q = mock_modulus(pp);
        Ok(MockPoint::from_exponent(from_be_fixed(bytes, q, "mock g1")?, q))
    }

    fn g2_from_bytes(pp: &PublicParams<Self>, bytes: &[u8]) -> Result<Self::G2> {
        let q = mock_modulus(pp);
        Ok(MockPoint::from_exponent(from_be_fixed(bytes, q, "mock g2")?, q))
    }

    fn gt_from_bytes(pp: &PublicParams<Self>, bytes: &[u8]) -> Result<Self::Gt> {
        let q = mock_modulus(pp);
        Ok(MockPoint::from_exponent(from_be_fixed(bytes, q, "mock gt")?, q))
    }

    fn hash_to_g1(pp: &PublicParams<Self>, domain: &[u8], parts: &[&[u8]]) -> Self::G1 {
        let q = mock_modulus(pp);
        // Resample with a counter until the exponent is nonzero; with q = 101
        // a zero draw is entirely possible.
        for counter in 0u32..=u32::MAX {
            let mut all: Vec<&[u8]> = parts.to_vec();
            let ctr = counter.to_be_bytes();
            all.push(&ctr);
            let s = pp.hash_to_scalar(domain, &all);
            if !s.is_zero() {
                return MockPoint::from_exponent(s.value, q);
            }
        }
        unreachable!("hash_to_g1 exhausted counters")
    }
}
