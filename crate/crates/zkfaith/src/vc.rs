//! Hiding, position-binding vector commitments.
//!
//! A commitment to the vector `(m_1, .., m_l)` with hiding randomness `m_0`
//! is `com = m_0*g + sum_i m_i*Z_i`. Positional openings are Fiat-Shamir
//! sigma proofs that bind one position to a public value while keeping the
//! rest hidden. Updates replace one position (and refresh `m_0`, so pre- and
//! post-update commitments stay unlinkable).
//!
//! In standalone mode the bases `Z_i` are hash-derived; inside signature
//! issuance they are the issuer's public key bases instead (see
//! [`crate::cl`]).

use rand::RngCore;

use crate::backend::{Engine, GroupOps, PublicParams, ScalarOps};
use crate::error::{Error, Result};
use crate::sigma;

const OPEN_DOMAIN: &[u8] = b"zkfaith/vc/open/v1";

/// Commitment bases: `g` carries the hiding exponent, `bases[i-1]` carries
/// position `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcParams<E: Engine> {
    pub g: E::G1,
    pub bases: Vec<E::G1>,
}

impl<E: Engine> VcParams<E> {
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// Base for 1-based position `i`.
    pub fn base(&self, i: usize) -> Result<&E::G1> {
        self.bases
            .get(i.checked_sub(1).ok_or(Error::PositionOutOfRange {
                position: i,
                len: self.bases.len(),
            })?)
            .ok_or(Error::PositionOutOfRange {
                position: i,
                len: self.bases.len(),
            })
    }

    pub fn digest_bytes(&self) -> Vec<u8> {
        let mut out = self.g.to_bytes();
        for b in &self.bases {
            out.extend_from_slice(&b.to_bytes());
        }
        out
    }
}

/// The committed messages at positions `1..=l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeVector<E: Engine>(pub Vec<E::Scalar>);

impl<E: Engine> AttributeVector<E> {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value at 1-based position `i`.
    pub fn at(&self, i: usize) -> Result<&E::Scalar> {
        self.0
            .get(i.checked_sub(1).ok_or(Error::PositionOutOfRange {
                position: i,
                len: self.0.len(),
            })?)
            .ok_or(Error::PositionOutOfRange {
                position: i,
                len: self.0.len(),
            })
    }

    /// Copy with 1-based position `i` replaced.
    pub fn with(&self, i: usize, value: E::Scalar) -> Result<Self> {
        let mut v = self.0.clone();
        *v.get_mut(i - 1).ok_or(Error::PositionOutOfRange {
            position: i,
            len: self.0.len(),
        })? = value;
        Ok(AttributeVector(v))
    }
}

/// Hiding randomness; the advice the committer keeps alongside the vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Opening<E: Engine> {
    pub m0: E::Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Commitment<E: Engine>(pub E::G1);

/// Fiat-Shamir proof that position `i` of a commitment opens to a public
/// value: knowledge of `m_0` and the other `l-1` messages such that
/// `com - m*Z_i` is spanned by the remaining bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionProof<E: Engine> {
    pub position: usize,
    pub commit_msg: E::G1,
    pub challenge: E::Scalar,
    pub responses: Vec<E::Scalar>,
}

/// Deterministic standalone bases for `(pp, l)`: pairwise distinct,
/// non-identity, and distinct from the fixed bases in `pp`.
pub fn vc_setup<E: Engine>(pp: &PublicParams<E>, l: usize) -> Result<VcParams<E>> {
    if l == 0 {
        return Err(Error::InvalidLength { expected: 1, got: 0 });
    }
    let mut bases: Vec<E::G1> = Vec::with_capacity(l);
    for i in 0..l {
        let mut counter = 0u32;
        loop {
            let b = pp.hash_to_g1(
                b"zkfaith/vc/base",
                &[&(i as u32).to_be_bytes(), &counter.to_be_bytes()],
            );
            let fresh = !b.is_identity()
                && b != pp.g
                && b != pp.pedersen_base
                && bases.iter().all(|prev| *prev != b);
            if fresh {
                bases.push(b);
                break;
            }
            counter += 1;
        }
    }
    Ok(VcParams { g: pp.g.clone(), bases })
}

/// Commit with caller-supplied hiding randomness. Deterministic; also the
/// oracle-test hook for pinned `m_0`.
pub fn vc_commit_with<E: Engine>(
    params: &VcParams<E>,
    messages: &AttributeVector<E>,
    m0: &E::Scalar,
) -> Result<Commitment<E>> {
    if messages.len() != params.len() {
        return Err(Error::InvalidLength {
            expected: params.len(),
            got: messages.len(),
        });
    }
    let mut acc = params.g.mul(m0);
    for (base, m) in params.bases.iter().zip(messages.0.iter()) {
        acc = acc.add(&base.mul(m));
    }
    Ok(Commitment(acc))
}

/// Commit with fresh uniform hiding randomness.
pub fn vc_commit<E: Engine, R: RngCore + ?Sized>(
    pp: &PublicParams<E>,
    params: &VcParams<E>,
    messages: &AttributeVector<E>,
    rng: &mut R,
) -> Result<(Commitment<E>, Opening<E>)> {
    let m0 = pp.random_scalar(rng);
    let com = vc_commit_with(params, messages, &m0)?;
    Ok((com, Opening { m0 }))
}

/// Replace position `j` and pin the new hiding randomness. The result equals
/// a fresh commitment of the mutated vector under `new_m0`.
pub fn vc_update_with<E: Engine>(
    params: &VcParams<E>,
    com: &Commitment<E>,
    old_mj: &E::Scalar,
    new_mj: &E::Scalar,
    j: usize,
    opening: &Opening<E>,
    new_m0: &E::Scalar,
) -> Result<(Commitment<E>, Opening<E>)> {
    let base = params.base(j)?.clone();
    let shifted = com
        .0
        .add(&base.mul(&new_mj.sub(old_mj)))
        .add(&params.g.mul(&new_m0.sub(&opening.m0)));
    Ok((Commitment(shifted), Opening { m0: new_m0.clone() }))
}

/// Replace position `j`, refreshing the hiding randomness.
pub fn vc_update<E: Engine, R: RngCore + ?Sized>(
    pp: &PublicParams<E>,
    params: &VcParams<E>,
    com: &Commitment<E>,
    old_mj: &E::Scalar,
    new_mj: &E::Scalar,
    j: usize,
    opening: &Opening<E>,
    rng: &mut R,
) -> Result<(Commitment<E>, Opening<E>)> {
    let new_m0 = pp.random_scalar(rng);
    vc_update_with(params, com, old_mj, new_mj, j, opening, &new_m0)
}

fn open_challenge<E: Engine>(
    pp: &PublicParams<E>,
    params: &VcParams<E>,
    com: &Commitment<E>,
    value: &E::Scalar,
    i: usize,
    commit_msg: &E::G1,
) -> E::Scalar {
    pp.hash_to_scalar(
        OPEN_DOMAIN,
        &[
            &pp.digest(),
            &params.digest_bytes(),
            &com.0.to_bytes(),
            &(i as u32).to_be_bytes(),
            &value.to_bytes(),
            &commit_msg.to_bytes(),
        ],
    )
}

/// Bases and witnesses of the opening relation for position `i`:
/// `com - m_i*Z_i = m0*g + sum_{k != i} m_k*Z_k`.
fn open_bases<E: Engine>(params: &VcParams<E>, i: usize) -> Vec<E::G1> {
    let mut bases = Vec::with_capacity(params.len());
    bases.push(params.g.clone());
    for (k, b) in params.bases.iter().enumerate() {
        if k + 1 != i {
            bases.push(b.clone());
        }
    }
    bases
}

/// Prove the value at position `i`. Inconsistent inputs still produce a
/// transcript; it simply will not verify.
pub fn vc_open<E: Engine, R: RngCore + ?Sized>(
    pp: &PublicParams<E>,
    params: &VcParams<E>,
    com: &Commitment<E>,
    messages: &AttributeVector<E>,
    opening: &Opening<E>,
    i: usize,
    rng: &mut R,
) -> Result<PositionProof<E>> {
    if i == 0 || i > params.len() {
        return Err(Error::PositionOutOfRange {
            position: i,
            len: params.len(),
        });
    }
    if messages.len() != params.len() {
        return Err(Error::InvalidLength {
            expected: params.len(),
            got: messages.len(),
        });
    }
    let bases = open_bases::<E>(params, i);
    let mut witnesses = Vec::with_capacity(params.len());
    witnesses.push(opening.m0.clone());
    for (k, m) in messages.0.iter().enumerate() {
        if k + 1 != i {
            witnesses.push(m.clone());
        }
    }
    let (nonces, commit_msg) = sigma::commit(pp, &bases, rng);
    let challenge = open_challenge(pp, params, com, messages.at(i)?, i, &commit_msg);
    let responses = sigma::respond(&nonces, &challenge, &witnesses);
    Ok(PositionProof {
        position: i,
        commit_msg,
        challenge,
        responses,
    })
}

/// Accepts iff `proof` demonstrates that position `i` of `com` opens to
/// `value`. Malformed transcripts reject rather than error.
pub fn vc_verify<E: Engine>(
    pp: &PublicParams<E>,
    params: &VcParams<E>,
    com: &Commitment<E>,
    value: &E::Scalar,
    i: usize,
    proof: &PositionProof<E>,
) -> bool {
    if proof.position != i || i == 0 || i > params.len() {
        return false;
    }
    let expected = open_challenge(pp, params, com, value, i, &proof.commit_msg);
    if expected != proof.challenge {
        return false;
    }
    let bases = open_bases::<E>(params, i);
    let target = match params.base(i) {
        Ok(base) => com.0.sub(&base.mul(value)),
        Err(_) => return false,
    };
    sigma::check(&bases, &proof.responses, &proof.commit_msg, &target, &proof.challenge)
}
