//! Linkage proof for commitment updates.
//!
//! Given `com` and `com'` the prover shows knowledge of openings of both
//! such that every position except `j` carries the same message. The proof
//! is an AND-composition of two opening proofs under one challenge where the
//! response scalar of each unchanged position is shared between the two
//! verification equations — equal responses under a common challenge force
//! equal witnesses, so `com'` can differ from `com` only at position `j` and
//! in the hiding randomness.

use rand::RngCore;

use crate::backend::{Engine, GroupOps, PublicParams, ScalarOps};
use crate::error::{Error, Result};
use crate::vc::{AttributeVector, Commitment, Opening, VcParams};

const LINK_DOMAIN: &[u8] = b"zkfaith/update-link/v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateLinkProof<E: Engine> {
    /// Updated position.
    pub position: usize,
    pub commit_old: E::G1,
    pub commit_new: E::G1,
    pub challenge: E::Scalar,
    pub s_m0_old: E::Scalar,
    pub s_m0_new: E::Scalar,
    pub s_j_old: E::Scalar,
    pub s_j_new: E::Scalar,
    /// Shared responses for the unchanged positions, ascending.
    pub shared: Vec<E::Scalar>,
}

fn link_challenge<E: Engine>(
    pp: &PublicParams<E>,
    params: &VcParams<E>,
    com: &Commitment<E>,
    com_new: &Commitment<E>,
    j: usize,
    t_old: &E::G1,
    t_new: &E::G1,
    context: &[u8],
) -> E::Scalar {
    pp.hash_to_scalar(
        LINK_DOMAIN,
        &[
            &pp.digest(),
            &params.digest_bytes(),
            &com.0.to_bytes(),
            &com_new.0.to_bytes(),
            &(j as u32).to_be_bytes(),
            &t_old.to_bytes(),
            &t_new.to_bytes(),
            context,
        ],
    )
}

/// Evaluate one side's verification equation.
fn side_holds<E: Engine>(
    params: &VcParams<E>,
    com: &Commitment<E>,
    j: usize,
    t_msg: &E::G1,
    s_m0: &E::Scalar,
    s_j: &E::Scalar,
    shared: &[E::Scalar],
    challenge: &E::Scalar,
) -> bool {
    let mut lhs = params.g.mul(s_m0);
    lhs = lhs.add(&params.bases[j - 1].mul(s_j));
    let mut it = shared.iter();
    for (k, base) in params.bases.iter().enumerate() {
        if k + 1 == j {
            continue;
        }
        let s = match it.next() {
            Some(s) => s,
            None => return false,
        };
        lhs = lhs.add(&base.mul(s));
    }
    if it.next().is_some() {
        return false;
    }
    lhs == t_msg.add(&com.0.mul(challenge))
}

/// Prove that `com` and `com_new` open to vectors agreeing everywhere except
/// position `j`. Refuses if the supplied vectors differ elsewhere.
#[allow(clippy::too_many_arguments)]
pub fn prove_update_link<E: Engine, R: RngCore + ?Sized>(
    pp: &PublicParams<E>,
    params: &VcParams<E>,
    com: &Commitment<E>,
    com_new: &Commitment<E>,
    messages: &AttributeVector<E>,
    messages_new: &AttributeVector<E>,
    opening: &Opening<E>,
    opening_new: &Opening<E>,
    j: usize,
    context: &[u8],
    rng: &mut R,
) -> Result<UpdateLinkProof<E>> {
    let l = params.len();
    if messages.len() != l || messages_new.len() != l {
        return Err(Error::InvalidLength {
            expected: l,
            got: messages.len().max(messages_new.len()),
        });
    }
    if j == 0 || j > l {
        return Err(Error::PositionOutOfRange { position: j, len: l });
    }
    for k in 1..=l {
        if k != j && messages.at(k)? != messages_new.at(k)? {
            return Err(Error::Policy(format!(
                "vectors differ at position {k}, not only at {j}"
            )));
        }
    }

    let t_m0_old = pp.random_scalar(rng);
    let t_m0_new = pp.random_scalar(rng);
    let t_j_old = pp.random_scalar(rng);
    let t_j_new = pp.random_scalar(rng);
    let t_shared: Vec<E::Scalar> = (0..l - 1).map(|_| pp.random_scalar(rng)).collect();

    let build_msg = |t_m0: &E::Scalar, t_j: &E::Scalar| {
        let mut msg = params.g.mul(t_m0);
        msg = msg.add(&params.bases[j - 1].mul(t_j));
        let mut it = t_shared.iter();
        for (k, base) in params.bases.iter().enumerate() {
            if k + 1 == j {
                continue;
            }
            msg = msg.add(&base.mul(it.next().expect("sized above")));
        }
        msg
    };
    let commit_old = build_msg(&t_m0_old, &t_j_old);
    let commit_new = build_msg(&t_m0_new, &t_j_new);

    let challenge = link_challenge(pp, params, com, com_new, j, &commit_old, &commit_new, context);

    let respond = |t: &E::Scalar, w: &E::Scalar| t.add(&challenge.mul(w));
    let mut shared = Vec::with_capacity(l - 1);
    let mut it = t_shared.iter();
    for k in 1..=l {
        if k == j {
            continue;
        }
        shared.push(respond(it.next().expect("sized above"), messages.at(k)?));
    }
    let s_m0_old = respond(&t_m0_old, &opening.m0);
    let s_m0_new = respond(&t_m0_new, &opening_new.m0);
    let s_j_old = respond(&t_j_old, messages.at(j)?);
    let s_j_new = respond(&t_j_new, messages_new.at(j)?);

    Ok(UpdateLinkProof {
        position: j,
        commit_old,
        commit_new,
        challenge,
        s_m0_old,
        s_m0_new,
        s_j_old,
        s_j_new,
        shared,
    })
}

/// Accepts iff the prover knows openings of both commitments agreeing on
/// every position except `j`.
pub fn verify_update_link<E: Engine>(
    pp: &PublicParams<E>,
    params: &VcParams<E>,
    com: &Commitment<E>,
    com_new: &Commitment<E>,
    j: usize,
    proof: &UpdateLinkProof<E>,
    context: &[u8],
) -> bool {
    let l = params.len();
    if proof.position != j || j == 0 || j > l || proof.shared.len() != l - 1 {
        return false;
    }
    let expected = link_challenge(
        pp,
        params,
        com,
        com_new,
        j,
        &proof.commit_old,
        &proof.commit_new,
        context,
    );
    if expected != proof.challenge {
        return false;
    }
    side_holds(
        params,
        com,
        j,
        &proof.commit_old,
        &proof.s_m0_old,
        &proof.s_j_old,
        &proof.shared,
        &proof.challenge,
    ) && side_holds(
        params,
        com_new,
        j,
        &proof.commit_new,
        &proof.s_m0_new,
        &proof.s_j_new,
        &proof.shared,
        &proof.challenge,
    )
}
