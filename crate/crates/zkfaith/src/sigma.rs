//! Small multi-base Schnorr building blocks shared by all proof modules.
//!
//! Relations have the shape `sum_j w_j * B_j = target` for bases `B_j` and
//! witnesses `w_j` (written additively; `w * B` is `B^w` in multiplicative
//! notation). The prover commits `msg = sum_j t_j * B_j` with fresh nonces,
//! derives a challenge `c`, and responds `s_j = t_j + c * w_j`; the verifier
//! checks `sum_j s_j * B_j = msg + c * target`.

use rand::RngCore;

use crate::backend::{Engine, GroupOps, PublicParams, ScalarOps};

/// `sum_j scalars[j] * bases[j]`. Panics on length mismatch or empty input.
pub(crate) fn msm<S: ScalarOps, G: GroupOps<S>>(bases: &[G], scalars: &[S]) -> G {
    assert_eq!(bases.len(), scalars.len(), "msm length mismatch");
    assert!(!bases.is_empty(), "msm on empty input");
    let mut acc = bases[0].mul(&scalars[0]);
    for (b, s) in bases.iter().zip(scalars.iter()).skip(1) {
        acc = acc.add(&b.mul(s));
    }
    acc
}

/// Fresh nonces plus the commit message over the given bases.
pub(crate) fn commit<E: Engine, G: GroupOps<E::Scalar>, R: RngCore + ?Sized>(
    pp: &PublicParams<E>,
    bases: &[G],
    rng: &mut R,
) -> (Vec<E::Scalar>, G) {
    let nonces: Vec<E::Scalar> = (0..bases.len()).map(|_| pp.random_scalar(rng)).collect();
    let msg = msm(bases, &nonces);
    (nonces, msg)
}

/// `s_j = t_j + c * w_j`.
pub(crate) fn respond<S: ScalarOps>(nonces: &[S], challenge: &S, witnesses: &[S]) -> Vec<S> {
    assert_eq!(nonces.len(), witnesses.len(), "response length mismatch");
    nonces
        .iter()
        .zip(witnesses.iter())
        .map(|(t, w)| t.add(&challenge.mul(w)))
        .collect()
}

/// `sum_j s_j * B_j == msg + c * target`, tolerating malformed lengths as a
/// rejection rather than a panic.
pub(crate) fn check<S: ScalarOps, G: GroupOps<S>>(
    bases: &[G],
    responses: &[S],
    msg: &G,
    target: &G,
    challenge: &S,
) -> bool {
    if bases.len() != responses.len() || bases.is_empty() {
        return false;
    }
    msm(bases, responses) == msg.add(&target.mul(challenge))
}

/// Simulated transcript for a statement without its witnesses: sample the
/// responses, then solve for the commit message `msg = sum_j s_j*B_j - c*target`.
/// The result satisfies [`check`] for the supplied challenge but no hash link,
/// which is exactly the honest-verifier zero-knowledge simulator.
pub(crate) fn simulate<E: Engine, G: GroupOps<E::Scalar>, R: RngCore + ?Sized>(
    pp: &PublicParams<E>,
    bases: &[G],
    target: &G,
    challenge: &E::Scalar,
    rng: &mut R,
) -> (G, Vec<E::Scalar>) {
    let responses: Vec<E::Scalar> = (0..bases.len()).map(|_| pp.random_scalar(rng)).collect();
    let msg = msm(bases, &responses).sub(&target.mul(challenge));
    (msg, responses)
}
