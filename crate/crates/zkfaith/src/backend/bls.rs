//! Production backend over BLS12-381.

use ark_bls12_381::{g1, g2, Bls12_381, Fr, G1Affine, G1Projective, G2Affine, G2Projective};
use ark_ec::hashing::{curve_maps::wb::WBMap, map_to_curve_hasher::MapToCurveBasedHasher, HashToCurve};
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::{CurveGroup, PrimeGroup};
use ark_ff::{field_hashers::DefaultFieldHasher, BigInteger, Field, PrimeField, UniformRand, Zero};
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize};
use rand::RngCore;
use sha2::Sha256;

use super::{BackendId, Engine, GroupOps, PublicParams, ScalarOps, SecurityLevel};
use crate::error::{Error, Result};

/// Decimal string of the BLS12-381 scalar field order, as published in the
/// curve standard.
pub const BLS12_381_ORDER_DECIMAL: &str =
    "52435875175126190479447740508185965837690552500527637822603658699938581184513";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlsEngine;

impl BlsEngine {
    /// Deterministic parameters on the standard generators. The auxiliary
    /// Pedersen base comes from hash-to-curve under a fixed tag, so no party
    /// knows its discrete log and no trusted setup is involved.
    pub fn setup(level: SecurityLevel) -> PublicParams<BlsEngine> {
        let g = G1Projective::generator();
        let h = G2Projective::generator();
        let mut pp = PublicParams {
            backend: BackendId::Bls12_381,
            level,
            g,
            h,
            gt: Bls12_381::pairing(g, h),
            pedersen_base: g,
        };
        pp.pedersen_base = BlsEngine::hash_to_g1(&pp, b"zkfaith/base/pedersen", &[]);
        pp
    }
}

impl ScalarOps for Fr {
    fn add(&self, rhs: &Self) -> Self {
        *self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        *self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        *self * rhs
    }

    fn neg(&self) -> Self {
        -*self
    }

    fn invert(&self) -> Option<Self> {
        Field::inverse(self)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn to_bytes(&self) -> Vec<u8> {
        self.into_bigint().to_bytes_be()
    }
}

macro_rules! curve_group_ops {
    ($cfg:ty) => {
        impl GroupOps<Fr> for ark_ec::short_weierstrass::Projective<$cfg> {
            fn add(&self, rhs: &Self) -> Self {
                *self + rhs
            }

            fn neg(&self) -> Self {
                -*self
            }

            fn mul(&self, scalar: &Fr) -> Self {
                *self * scalar
            }

            fn is_identity(&self) -> bool {
                Zero::is_zero(self)
            }

            fn to_bytes(&self) -> Vec<u8> {
                let mut out = Vec::new();
                self.into_affine()
                    .serialize_compressed(&mut out)
                    .expect("point serialization cannot fail");
                out
            }
        }
    };
}

curve_group_ops!(g1::Config);
curve_group_ops!(g2::Config);

impl GroupOps<Fr> for PairingOutput<Bls12_381> {
    fn add(&self, rhs: &Self) -> Self {
        *self + rhs
    }

    fn neg(&self) -> Self {
        -*self
    }

    fn mul(&self, scalar: &Fr) -> Self {
        *self * scalar
    }

    fn is_identity(&self) -> bool {
        Zero::is_zero(self)
    }

    fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.serialize_compressed(&mut out)
            .expect("gt serialization cannot fail");
        out
    }
}

const G1_LEN: usize = 48;
const G2_LEN: usize = 96;
const GT_LEN: usize = 576;
const SCALAR_LEN: usize = 32;

impl Engine for BlsEngine {
    type Scalar = Fr;
    type G1 = G1Projective;
    type G2 = G2Projective;
    type Gt = PairingOutput<Bls12_381>;

    const NAME: &'static str = "curve";

    fn pair(u: &Self::G1, v: &Self::G2) -> Self::Gt {
        Bls12_381::pairing(*u, *v)
    }

    fn multi_pair(g1s: &[Self::G1], g2s: &[Self::G2]) -> Self::Gt {
        debug_assert_eq!(g1s.len(), g2s.len());
        Bls12_381::multi_pairing(g1s.iter().copied(), g2s.iter().copied())
    }

    fn scalar_from_u64(_pp: &PublicParams<Self>, v: u64) -> Self::Scalar {
        Fr::from(v)
    }

    fn random_scalar<R: RngCore + ?Sized>(_pp: &PublicParams<Self>, rng: &mut R) -> Self::Scalar {
        Fr::rand(rng)
    }

    fn scalar_from_wide_bytes(_pp: &PublicParams<Self>, wide: &[u8; 64]) -> Self::Scalar {
        Fr::from_be_bytes_mod_order(wide)
    }

    fn order_bytes(_pp: &PublicParams<Self>) -> Vec<u8> {
        Fr::MODULUS.to_bytes_be()
    }

    fn scalar_len(_pp: &PublicParams<Self>) -> usize {
        SCALAR_LEN
    }

    fn g1_len(_pp: &PublicParams<Self>) -> usize {
        G1_LEN
    }

    fn g2_len(_pp: &PublicParams<Self>) -> usize {
        G2_LEN
    }

    fn gt_len(_pp: &PublicParams<Self>) -> usize {
        GT_LEN
    }

    fn scalar_from_bytes(_pp: &PublicParams<Self>, bytes: &[u8]) -> Result<Self::Scalar> {
        if bytes.len() != SCALAR_LEN {
            return Err(Error::decode(0, "scalar: wrong length"));
        }
        let s = Fr::from_be_bytes_mod_order(bytes);
        // Reject non-canonical encodings: re-serialize and compare.
        if ScalarOps::to_bytes(&s) != bytes {
            return Err(Error::decode(0, "scalar: not canonical"));
        }
        Ok(s)
    }

    fn g1_from_bytes(_pp: &PublicParams<Self>, bytes: &[u8]) -> Result<Self::G1> {
        let a = G1Affine::deserialize_compressed(bytes)
            .map_err(|_| Error::decode(0, "g1: invalid compressed point"))?;
        Ok(a.into())
    }

    fn g2_from_bytes(_pp: &PublicParams<Self>, bytes: &[u8]) -> Result<Self::G2> {
        let a = G2Affine::deserialize_compressed(bytes)
            .map_err(|_| Error::decode(0, "g2: invalid compressed point"))?;
        Ok(a.into())
    }

    fn gt_from_bytes(_pp: &PublicParams<Self>, bytes: &[u8]) -> Result<Self::Gt> {
        PairingOutput::deserialize_compressed(bytes)
            .map_err(|_| Error::decode(0, "gt: invalid element"))
    }

    fn hash_to_g1(_pp: &PublicParams<Self>, domain: &[u8], parts: &[&[u8]]) -> Self::G1 {
        let hasher = MapToCurveBasedHasher::<
            G1Projective,
            DefaultFieldHasher<Sha256, 128>,
            WBMap<g1::Config>,
        >::new(domain)
        .expect("hash-to-curve setup");
        let mut msg = Vec::new();
        for p in parts {
            msg.extend_from_slice(&(p.len() as u32).to_be_bytes());
            msg.extend_from_slice(p);
        }
        let point: G1Affine = hasher.hash(&msg).expect("hash-to-curve");
        point.into()
    }
}

/// Hash an arbitrary tag to G2; used only by tests that exercise both source
/// groups symmetrically.
pub fn hash_to_g2(domain: &[u8], parts: &[&[u8]]) -> G2Projective {
    let hasher = MapToCurveBasedHasher::<
        G2Projective,
        DefaultFieldHasher<Sha256, 128>,
        WBMap<g2::Config>,
    >::new(domain)
    .expect("hash-to-curve setup");
    let mut msg = Vec::new();
    for p in parts {
        msg.extend_from_slice(&(p.len() as u32).to_be_bytes());
        msg.extend_from_slice(p);
    }
    let point: G2Affine = hasher.hash(&msg).expect("hash-to-curve");
    point.into()
}
