//! Fiat-Shamir sigma-protocol proofs used throughout the protocol:
//!
//! * [`ProofOfOpening`] — knowledge of all exponents of a vector commitment,
//!   bound to a caller context (wallet id, session nonce).
//! * [`range`] — bit-decomposition range predicates over Pedersen-committed
//!   attribute values.
//! * [`presentation`] — proof of knowledge of a CL signature with selective
//!   disclosure, embedded range predicates and the revocation-tag link, all
//!   under one shared challenge.
//! * [`link`] — the update linkage proof tying two commitments that differ in
//!   a single position.
//!
//! Transcripts are explicit `(commit message, challenge, responses)` tuples;
//! verifiers recompute the challenge from the statement and reject on any
//! mismatch, so every transcript field is covered by mutation tests.

use rand::RngCore;

use crate::backend::{Engine, GroupOps, PublicParams, ScalarOps};
use crate::error::{Error, Result};
use crate::sigma;
use crate::vc::{AttributeVector, Commitment, Opening, VcParams};

pub mod link;
pub mod presentation;
pub mod range;

pub use link::{prove_update_link, verify_update_link, UpdateLinkProof};
pub use presentation::{
    prove_presentation, verify_presentation, PresentOptions, PresentationProof, SerialTagPart,
    VerifyOptions,
};
pub use range::{prove_range, verify_range, PredicateOp, PredicateSpec, RangeProof};

const OPENING_DOMAIN: &[u8] = b"zkfaith/opening/v1";

/// NIZK of all `l + 1` exponents of a commitment: `m0` first, then the
/// messages in position order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofOfOpening<E: Engine> {
    pub commit_msg: E::G1,
    pub challenge: E::Scalar,
    pub responses: Vec<E::Scalar>,
}

fn opening_bases<E: Engine>(params: &VcParams<E>) -> Vec<E::G1> {
    let mut bases = Vec::with_capacity(params.len() + 1);
    bases.push(params.g.clone());
    bases.extend(params.bases.iter().cloned());
    bases
}

fn opening_challenge<E: Engine>(
    pp: &PublicParams<E>,
    params: &VcParams<E>,
    com: &Commitment<E>,
    commit_msg: &E::G1,
    context: &[u8],
) -> E::Scalar {
    pp.hash_to_scalar(
        OPENING_DOMAIN,
        &[
            &pp.digest(),
            &params.digest_bytes(),
            &com.0.to_bytes(),
            &commit_msg.to_bytes(),
            context,
        ],
    )
}

/// Prove knowledge of `(m0, m_1..m_l)` opening `com`, with `context` bound
/// into the challenge.
pub fn prove_opening<E: Engine, R: RngCore + ?Sized>(
    pp: &PublicParams<E>,
    params: &VcParams<E>,
    com: &Commitment<E>,
    messages: &AttributeVector<E>,
    opening: &Opening<E>,
    context: &[u8],
    rng: &mut R,
) -> Result<ProofOfOpening<E>> {
    if messages.len() != params.len() {
        return Err(Error::InvalidLength {
            expected: params.len(),
            got: messages.len(),
        });
    }
    let bases = opening_bases(params);
    let mut witnesses = Vec::with_capacity(params.len() + 1);
    witnesses.push(opening.m0.clone());
    witnesses.extend(messages.0.iter().cloned());
    let (nonces, commit_msg) = sigma::commit(pp, &bases, rng);
    let challenge = opening_challenge(pp, params, com, &commit_msg, context);
    let responses = sigma::respond(&nonces, &challenge, &witnesses);
    Ok(ProofOfOpening {
        commit_msg,
        challenge,
        responses,
    })
}

/// Accepts iff the sigma equation holds and the challenge recomputes under
/// the same context.
pub fn verify_opening<E: Engine>(
    pp: &PublicParams<E>,
    params: &VcParams<E>,
    com: &Commitment<E>,
    proof: &ProofOfOpening<E>,
    context: &[u8],
) -> bool {
    let expected = opening_challenge(pp, params, com, &proof.commit_msg, context);
    if expected != proof.challenge {
        return false;
    }
    sigma::check(
        &opening_bases(params),
        &proof.responses,
        &proof.commit_msg,
        &com.0,
        &proof.challenge,
    )
}

/// Honest-verifier zero-knowledge simulator: given only the statement and a
/// programmable challenge, produce a transcript with the same field shape
/// whose sigma equation verifies. The Fiat-Shamir hash link is necessarily
/// absent (that is what makes it a simulation).
pub fn simulate_opening<E: Engine, R: RngCore + ?Sized>(
    pp: &PublicParams<E>,
    params: &VcParams<E>,
    com: &Commitment<E>,
    challenge: &E::Scalar,
    rng: &mut R,
) -> ProofOfOpening<E> {
    let bases = opening_bases(params);
    let (commit_msg, responses) = sigma::simulate(pp, &bases, &com.0, challenge, rng);
    ProofOfOpening {
        commit_msg,
        challenge: challenge.clone(),
        responses,
    }
}

/// The algebraic part of opening verification, without the hash link; what a
/// simulated transcript satisfies.
pub fn opening_equation_holds<E: Engine>(
    pp: &PublicParams<E>,
    params: &VcParams<E>,
    com: &Commitment<E>,
    proof: &ProofOfOpening<E>,
) -> bool {
    let _ = pp;
    sigma::check(
        &opening_bases(params),
        &proof.responses,
        &proof.commit_msg,
        &com.0,
        &proof.challenge,
    )
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    use super::*;
    use crate::backend::{BlsEngine, MockEngine, SecurityLevel};
    use crate::vc::{vc_commit, vc_setup};

    fn rng(seed: u64) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(seed)
    }

    fn sample<E: Engine>(
        pp: &PublicParams<E>,
        l: usize,
        seed: u64,
    ) -> (VcParams<E>, AttributeVector<E>, Commitment<E>, Opening<E>) {
        let mut r = rng(seed);
        let params = vc_setup(pp, l).unwrap();
        let m = AttributeVector((0..l).map(|_| pp.random_scalar(&mut r)).collect());
        let (com, opening) = vc_commit(pp, &params, &m, &mut r).unwrap();
        (params, m, com, opening)
    }

    #[test]
    fn opening_roundtrip_and_context_binding() {
        for seed in [1u64, 2] {
            let pp = MockEngine::setup(SecurityLevel::Standard);
            let (params, m, com, opening) = sample(&pp, 4, seed);
            let mut r = rng(seed + 100);
            let proof = prove_opening(&pp, &params, &com, &m, &opening, b"ctx-A", &mut r).unwrap();
            assert!(verify_opening(&pp, &params, &com, &proof, b"ctx-A"));
            assert!(!verify_opening(&pp, &params, &com, &proof, b"ctx-B"));
        }
    }

    #[test]
    fn two_proofs_of_one_statement_differ() {
        let pp = BlsEngine::setup(SecurityLevel::Standard);
        let (params, m, com, opening) = sample(&pp, 3, 3);
        let mut r = rng(33);
        let p1 = prove_opening(&pp, &params, &com, &m, &opening, b"ctx", &mut r).unwrap();
        let p2 = prove_opening(&pp, &params, &com, &m, &opening, b"ctx", &mut r).unwrap();
        assert_ne!(p1, p2);
        assert!(verify_opening(&pp, &params, &com, &p1, b"ctx"));
        assert!(verify_opening(&pp, &params, &com, &p2, b"ctx"));
    }

    #[test]
    fn response_mutation_rejects() {
        let pp = MockEngine::setup(SecurityLevel::Standard);
        let (params, m, com, opening) = sample(&pp, 2, 4);
        let mut r = rng(44);
        let proof = prove_opening(&pp, &params, &com, &m, &opening, b"ctx", &mut r).unwrap();
        let one = pp.scalar_from_u64(1);
        for k in 0..proof.responses.len() {
            let mut bad = proof.clone();
            bad.responses[k] = bad.responses[k].add(&one);
            assert!(!verify_opening(&pp, &params, &com, &bad, b"ctx"));
        }
        let mut bad = proof.clone();
        bad.challenge = bad.challenge.add(&one);
        assert!(!verify_opening(&pp, &params, &com, &bad, b"ctx"));
        let mut bad = proof;
        bad.commit_msg = bad.commit_msg.add(&pp.g);
        assert!(!verify_opening(&pp, &params, &com, &bad, b"ctx"));
    }

    #[test]
    fn mock_verification_matches_exponent_recomputation() {
        // On the mock backend the whole check is integer arithmetic mod q;
        // recompute it directly and compare with the verifier.
        let pp = MockEngine::setup(SecurityLevel::Toy);
        let (params, m, com, opening) = sample(&pp, 3, 5);
        let mut r = rng(55);
        let proof = prove_opening(&pp, &params, &com, &m, &opening, b"ctx", &mut r).unwrap();
        assert!(verify_opening(&pp, &params, &com, &proof, b"ctx"));
        let q = 101u128;
        let lhs: u128 = std::iter::once(&params.g)
            .chain(params.bases.iter())
            .zip(proof.responses.iter())
            .map(|(b, s)| b.exponent() as u128 * s.value() as u128 % q)
            .sum::<u128>()
            % q;
        let rhs = (proof.commit_msg.exponent() as u128
            + com.0.exponent() as u128 * proof.challenge.value() as u128)
            % q;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn simulator_matches_honest_shape_without_witness() {
        let pp = BlsEngine::setup(SecurityLevel::Standard);
        let (params, m, com, opening) = sample(&pp, 3, 6);
        let mut r = rng(66);
        let honest = prove_opening(&pp, &params, &com, &m, &opening, b"ctx", &mut r).unwrap();
        let mut equal_fields = 0usize;
        let trials = 1000;
        for _ in 0..trials {
            let c = pp.random_scalar(&mut r);
            let simulated = simulate_opening(&pp, &params, &com, &c, &mut r);
            assert!(opening_equation_holds(&pp, &params, &com, &simulated));
            assert_eq!(simulated.responses.len(), honest.responses.len());
            assert_eq!(
                simulated.commit_msg.to_bytes().len(),
                honest.commit_msg.to_bytes().len()
            );
            if simulated.responses[0] == honest.responses[0] {
                equal_fields += 1;
            }
        }
        // field equality between honest and simulated transcripts stays at
        // chance level (essentially never for a 255-bit field)
        assert_eq!(equal_fields, 0);
    }
}
