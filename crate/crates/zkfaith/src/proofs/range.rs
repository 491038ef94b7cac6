//! Bit-decomposition range predicates over Pedersen-committed values.
//!
//! For a commitment `C = v*g + rho*u` (with `u` the independent base from
//! the public parameters) the prover shows `v >= bound` or `v <= bound` by
//! committing to the bits of the difference `d` and proving:
//!
//! 1. each bit commitment opens to 0 or 1 (a two-branch OR proof),
//! 2. the bit commitments recompose to the shifted statement
//!    `C - bound*g` (or `bound*g - C`), i.e. `d < 2^n_bits`,
//! 3. `C` opens to the same value the surrounding proof uses (the value
//!    response scalar is shared with the caller's transcript).
//!
//! The protocol is split into a commit phase and a response phase so a
//! presentation can fold many predicates under one challenge; the standalone
//! [`prove_range`]/[`verify_range`] pair wraps the phases with its own
//! Fiat-Shamir challenge.

use rand::RngCore;

use crate::backend::{Engine, GroupOps, PublicParams, ScalarOps};
use crate::error::{Error, Result};

const RANGE_DOMAIN: &[u8] = b"zkfaith/range/v1";

/// Direction of a threshold predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredicateOp {
    AtLeast,
    AtMost,
}

impl PredicateOp {
    pub fn tag(&self) -> u8 {
        match self {
            PredicateOp::AtLeast => 0,
            PredicateOp::AtMost => 1,
        }
    }

    pub fn from_tag(t: u8) -> Result<Self> {
        match t {
            0 => Ok(PredicateOp::AtLeast),
            1 => Ok(PredicateOp::AtMost),
            other => Err(Error::decode(0, format!("unknown predicate op {other}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PredicateOp::AtLeast => "at_least",
            PredicateOp::AtMost => "at_most",
        }
    }
}

/// A threshold predicate over one attribute position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PredicateSpec {
    /// 1-based attribute position the predicate constrains.
    pub position: usize,
    pub op: PredicateOp,
    /// Threshold in the integer encoding of the attribute.
    pub bound: u64,
    /// Capacity: the difference must fit in this many bits.
    pub n_bits: u32,
}

impl PredicateSpec {
    pub fn statement_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(17);
        out.extend_from_slice(&(self.position as u32).to_be_bytes());
        out.push(self.op.tag());
        out.extend_from_slice(&self.bound.to_be_bytes());
        out.extend_from_slice(&self.n_bits.to_be_bytes());
        out
    }
}

/// Challenge-agnostic body of a range proof; the value response scalar and
/// the challenge come from the enclosing transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeBody<E: Engine> {
    /// Pedersen commitment to the attribute value.
    pub attr_com: E::G1,
    /// Commit message of the `C = v*g + rho*u` opening.
    pub link_t: E::G1,
    /// Response for `rho` (the value response is shared with the caller).
    pub link_s_rho: E::Scalar,
    pub bit_coms: Vec<E::G1>,
    pub bit_t0: Vec<E::G1>,
    pub bit_t1: Vec<E::G1>,
    /// Challenge share of the bit-0 branch; the bit-1 share is `c - c0`.
    pub bit_c0: Vec<E::Scalar>,
    pub bit_s0: Vec<E::Scalar>,
    pub bit_s1: Vec<E::Scalar>,
    pub recomp_t: E::G1,
    pub recomp_s: E::Scalar,
}

impl<E: Engine> RangeBody<E> {
    /// Bytes every party folds into the challenge, in fixed order. Only the
    /// commit-phase fields participate.
    pub fn commit_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&self.attr_com.to_bytes());
        out.extend_from_slice(&self.link_t.to_bytes());
        for c in &self.bit_coms {
            out.extend_from_slice(&c.to_bytes());
        }
        for t in &self.bit_t0 {
            out.extend_from_slice(&t.to_bytes());
        }
        for t in &self.bit_t1 {
            out.extend_from_slice(&t.to_bytes());
        }
        out.extend_from_slice(&self.recomp_t.to_bytes());
        out
    }
}

struct BitSecrets<E: Engine> {
    bit: bool,
    randomness: E::Scalar,
    real_nonce: E::Scalar,
    fake_challenge: E::Scalar,
    fake_response: E::Scalar,
}

/// Commit-phase state of one predicate.
pub(crate) struct RangeProver<E: Engine> {
    rho: E::Scalar,
    t_value: E::Scalar,
    t_rho: E::Scalar,
    t_recomp: E::Scalar,
    recomp_witness: E::Scalar,
    bits: Vec<BitSecrets<E>>,
    body: RangeBody<E>,
}

/// If the group order fits in a `u128`, predicates must leave headroom:
/// `bound + 2^n_bits < q` keeps the decomposition free of wraparound.
fn capacity_check<E: Engine>(pp: &PublicParams<E>, spec: &PredicateSpec) -> Result<()> {
    if spec.n_bits == 0 || spec.n_bits > 48 {
        return Err(Error::Capacity(format!(
            "n_bits {} outside supported 1..=48",
            spec.n_bits
        )));
    }
    let order = pp.order_bytes();
    if order.len() <= 16 {
        let mut q: u128 = 0;
        for b in &order {
            q = (q << 8) | *b as u128;
        }
        let reach = spec.bound as u128 + (1u128 << spec.n_bits);
        if reach >= q {
            return Err(Error::Capacity(format!(
                "bound {} + 2^{} reaches past group order",
                spec.bound, spec.n_bits
            )));
        }
    }
    Ok(())
}

impl<E: Engine> RangeProver<E> {
    /// Start a proof that the committed `value` satisfies `spec`, for a
    /// commitment `attr_com = value*g + rho*u`, with a fresh value nonce.
    pub(crate) fn new<R: RngCore + ?Sized>(
        pp: &PublicParams<E>,
        spec: PredicateSpec,
        attr_com: E::G1,
        value: u64,
        rho: E::Scalar,
        rng: &mut R,
    ) -> Result<Self> {
        let t_value = pp.random_scalar(rng);
        Self::with_value_nonce(pp, spec, attr_com, value, rho, t_value, rng)
    }

    /// Commit phase with an externally supplied value nonce, so the
    /// enclosing transcript can share the value's response scalar.
    pub(crate) fn with_value_nonce<R: RngCore + ?Sized>(
        pp: &PublicParams<E>,
        spec: PredicateSpec,
        attr_com: E::G1,
        value: u64,
        rho: E::Scalar,
        t_value: E::Scalar,
        rng: &mut R,
    ) -> Result<Self> {
        capacity_check(pp, &spec)?;
        let d = match spec.op {
            PredicateOp::AtLeast => {
                if value < spec.bound {
                    return Err(Error::CannotSatisfy(format!(
                        "value {value} below bound {}",
                        spec.bound
                    )));
                }
                value - spec.bound
            }
            PredicateOp::AtMost => {
                if value > spec.bound {
                    return Err(Error::CannotSatisfy(format!(
                        "value {value} above bound {}",
                        spec.bound
                    )));
                }
                spec.bound - value
            }
        };
        if spec.n_bits < 64 && d >> spec.n_bits != 0 {
            return Err(Error::Capacity(format!(
                "difference {d} needs more than {} bits",
                spec.n_bits
            )));
        }

        let u = &pp.pedersen_base;
        let n = spec.n_bits as usize;
        let mut bits = Vec::with_capacity(n);
        let mut bit_coms = Vec::with_capacity(n);
        let mut bit_t0 = Vec::with_capacity(n);
        let mut bit_t1 = Vec::with_capacity(n);
        let mut sum_weighted_r = pp.scalar_from_u64(0);
        for k in 0..n {
            let bit = (d >> k) & 1 == 1;
            let r_k = pp.random_scalar(rng);
            let com_k = if bit {
                pp.g.add(&u.mul(&r_k))
            } else {
                u.mul(&r_k)
            };
            let real_nonce = pp.random_scalar(rng);
            let fake_challenge = pp.random_scalar(rng);
            let fake_response = pp.random_scalar(rng);
            // Real branch commits u^t; the fake branch is simulated so that
            // its verification equation closes under the fake challenge.
            let real_t = u.mul(&real_nonce);
            let (t0, t1) = if bit {
                let target0 = com_k.clone();
                let fake_t = u.mul(&fake_response).sub(&target0.mul(&fake_challenge));
                (fake_t, real_t)
            } else {
                let target1 = com_k.sub(&pp.g);
                let fake_t = u.mul(&fake_response).sub(&target1.mul(&fake_challenge));
                (real_t, fake_t)
            };
            let two_k = pp.scalar_from_u64(1u64 << k);
            sum_weighted_r = sum_weighted_r.add(&two_k.mul(&r_k));
            bits.push(BitSecrets {
                bit,
                randomness: r_k,
                real_nonce,
                fake_challenge,
                fake_response,
            });
            bit_coms.push(com_k);
            bit_t0.push(t0);
            bit_t1.push(t1);
        }

        let xi = match spec.op {
            PredicateOp::AtLeast => rho.clone(),
            PredicateOp::AtMost => rho.neg(),
        };
        let recomp_witness = xi.sub(&sum_weighted_r);
        let t_recomp = pp.random_scalar(rng);
        let t_rho = pp.random_scalar(rng);
        let link_t = pp.g.mul(&t_value).add(&u.mul(&t_rho));

        let body = RangeBody {
            attr_com,
            link_t,
            link_s_rho: pp.scalar_from_u64(0),
            bit_coms,
            bit_t0,
            bit_t1,
            bit_c0: Vec::new(),
            bit_s0: Vec::new(),
            bit_s1: Vec::new(),
            recomp_t: u.mul(&t_recomp),
            recomp_s: pp.scalar_from_u64(0),
        };
        Ok(RangeProver {
            rho,
            t_value,
            t_rho,
            t_recomp,
            recomp_witness,
            bits,
            body,
        })
    }

    /// Commit-phase body (response fields still zero).
    pub(crate) fn body_view(&self) -> &RangeBody<E> {
        &self.body
    }

    /// Close the proof under `challenge`. `s_value = t_value + c*value` is
    /// returned for the caller to place (or share) in its transcript.
    pub(crate) fn finish(
        mut self,
        pp: &PublicParams<E>,
        challenge: &E::Scalar,
        value: u64,
    ) -> (RangeBody<E>, E::Scalar) {
        let n = self.bits.len();
        let mut c0 = Vec::with_capacity(n);
        let mut s0 = Vec::with_capacity(n);
        let mut s1 = Vec::with_capacity(n);
        for secrets in &self.bits {
            let fake_response = secrets.fake_response.clone();
            if secrets.bit {
                // branch 0 is simulated, branch 1 real
                let c1 = challenge.sub(&secrets.fake_challenge);
                c0.push(secrets.fake_challenge.clone());
                s0.push(fake_response);
                s1.push(secrets.real_nonce.add(&c1.mul(&secrets.randomness)));
            } else {
                // branch 0 real, branch 1 simulated
                let c0_real = challenge.sub(&secrets.fake_challenge);
                c0.push(c0_real.clone());
                s0.push(secrets.real_nonce.add(&c0_real.mul(&secrets.randomness)));
                s1.push(fake_response);
            }
        }
        self.body.bit_c0 = c0;
        self.body.bit_s0 = s0;
        self.body.bit_s1 = s1;
        self.body.recomp_s = self.t_recomp.add(&challenge.mul(&self.recomp_witness));
        self.body.link_s_rho = self.t_rho.add(&challenge.mul(&self.rho));
        let s_value = self
            .t_value
            .add(&challenge.mul(&pp.scalar_from_u64(value)));
        (self.body, s_value)
    }
}

/// Verify a range body against the enclosing challenge and shared value
/// response. Also re-runs the capacity checks the prover was held to.
pub(crate) fn verify_range_body<E: Engine>(
    pp: &PublicParams<E>,
    spec: &PredicateSpec,
    body: &RangeBody<E>,
    challenge: &E::Scalar,
    s_value: &E::Scalar,
) -> bool {
    if capacity_check(pp, spec).is_err() {
        return false;
    }
    let n = spec.n_bits as usize;
    if body.bit_coms.len() != n
        || body.bit_t0.len() != n
        || body.bit_t1.len() != n
        || body.bit_c0.len() != n
        || body.bit_s0.len() != n
        || body.bit_s1.len() != n
    {
        return false;
    }
    let u = &pp.pedersen_base;
    // value link: s_value*g + s_rho*u == link_t + c*C
    let lhs = pp.g.mul(s_value).add(&u.mul(&body.link_s_rho));
    if lhs != body.link_t.add(&body.attr_com.mul(challenge)) {
        return false;
    }
    // per-bit OR proofs
    for k in 0..n {
        let c0 = &body.bit_c0[k];
        let c1 = challenge.sub(c0);
        let target0 = &body.bit_coms[k];
        if u.mul(&body.bit_s0[k]) != body.bit_t0[k].add(&target0.mul(c0)) {
            return false;
        }
        let target1 = body.bit_coms[k].sub(&pp.g);
        if u.mul(&body.bit_s1[k]) != body.bit_t1[k].add(&target1.mul(&c1)) {
            return false;
        }
    }
    // recomposition: the weighted bit commitments absorb the g-component of
    // the shifted statement, leaving a pure u-power.
    let bound = pp.scalar_from_u64(spec.bound);
    let shifted = match spec.op {
        PredicateOp::AtLeast => body.attr_com.sub(&pp.g.mul(&bound)),
        PredicateOp::AtMost => pp.g.mul(&bound).sub(&body.attr_com),
    };
    let mut weighted = shifted;
    for (k, com_k) in body.bit_coms.iter().enumerate() {
        let two_k = pp.scalar_from_u64(1u64 << k);
        weighted = weighted.sub(&com_k.mul(&two_k));
    }
    u.mul(&body.recomp_s) == body.recomp_t.add(&weighted.mul(challenge))
}

/// Standalone range proof with its own Fiat-Shamir challenge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeProof<E: Engine> {
    pub spec: PredicateSpec,
    pub body: RangeBody<E>,
    pub challenge: E::Scalar,
    pub s_value: E::Scalar,
}

fn standalone_challenge<E: Engine>(
    pp: &PublicParams<E>,
    spec: &PredicateSpec,
    body: &RangeBody<E>,
    context: &[u8],
) -> E::Scalar {
    pp.hash_to_scalar(
        RANGE_DOMAIN,
        &[&pp.digest(), &spec.statement_bytes(), &body.commit_bytes(), context],
    )
}

/// Prove that the value inside `attr_com = value*g + rho*u` satisfies the
/// predicate. The caller must supply the commitment's opening.
pub fn prove_range<E: Engine, R: RngCore + ?Sized>(
    pp: &PublicParams<E>,
    attr_com: &E::G1,
    value: u64,
    rho: &E::Scalar,
    spec: PredicateSpec,
    context: &[u8],
    rng: &mut R,
) -> Result<RangeProof<E>> {
    let expected = pp
        .g
        .mul(&pp.scalar_from_u64(value))
        .add(&pp.pedersen_base.mul(rho));
    if &expected != attr_com {
        return Err(Error::Policy(
            "attr_com does not open to (value, rho)".into(),
        ));
    }
    let prover = RangeProver::new(pp, spec, attr_com.clone(), value, rho.clone(), rng)?;
    let challenge = standalone_challenge(pp, &spec, &prover.body, context);
    let (body, s_value) = prover.finish(pp, &challenge, value);
    Ok(RangeProof {
        spec,
        body,
        challenge,
        s_value,
    })
}

/// Accepts iff the committed value satisfies the predicate.
pub fn verify_range<E: Engine>(
    pp: &PublicParams<E>,
    attr_com: &E::G1,
    proof: &RangeProof<E>,
    context: &[u8],
) -> bool {
    if &proof.body.attr_com != attr_com {
        return false;
    }
    let expected = standalone_challenge(pp, &proof.spec, &proof.body, context);
    if expected != proof.challenge {
        return false;
    }
    verify_range_body(pp, &proof.spec, &proof.body, &proof.challenge, &proof.s_value)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    use super::*;
    use crate::backend::{BlsEngine, MockEngine, SecurityLevel};

    fn rng(seed: u64) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(seed)
    }

    fn commit<E: Engine>(pp: &PublicParams<E>, value: u64, rho: &E::Scalar) -> E::G1 {
        pp.g
            .mul(&pp.scalar_from_u64(value))
            .add(&pp.pedersen_base.mul(rho))
    }

    fn spec(op: PredicateOp, bound: u64, n_bits: u32) -> PredicateSpec {
        PredicateSpec {
            position: 3,
            op,
            bound,
            n_bits,
        }
    }

    #[test]
    fn boundary_value_equals_threshold() {
        let pp = BlsEngine::setup(SecurityLevel::Standard);
        let mut r = rng(1);
        let rho = pp.random_scalar(&mut r);
        let com = commit(&pp, 18, &rho);
        let s = spec(PredicateOp::AtLeast, 18, 4);
        let proof = prove_range(&pp, &com, 18, &rho, s, b"ctx", &mut r).unwrap();
        assert!(verify_range(&pp, &com, &proof, b"ctx"));
    }

    #[test]
    fn below_threshold_prover_refuses() {
        let pp = BlsEngine::setup(SecurityLevel::Standard);
        let mut r = rng(2);
        let rho = pp.random_scalar(&mut r);
        let com = commit(&pp, 17, &rho);
        let s = spec(PredicateOp::AtLeast, 18, 4);
        assert!(matches!(
            prove_range(&pp, &com, 17, &rho, s, b"ctx", &mut r),
            Err(Error::CannotSatisfy(_))
        ));
    }

    #[test]
    fn at_most_direction_roundtrip() {
        let pp = MockEngine::setup(SecurityLevel::Standard);
        let mut r = rng(3);
        let rho = pp.random_scalar(&mut r);
        let com = commit(&pp, 7000, &rho);
        let s = spec(PredicateOp::AtMost, 7300, 10);
        let proof = prove_range(&pp, &com, 7000, &rho, s, b"ctx", &mut r).unwrap();
        assert!(verify_range(&pp, &com, &proof, b"ctx"));
        // above the bound refuses
        let com2 = commit(&pp, 7301, &rho);
        assert!(matches!(
            prove_range(&pp, &com2, 7301, &rho, s, b"ctx", &mut r),
            Err(Error::CannotSatisfy(_))
        ));
    }

    #[test]
    fn capacity_errors() {
        let pp = MockEngine::setup(SecurityLevel::Toy);
        let mut r = rng(4);
        let rho = pp.random_scalar(&mut r);
        // difference needs more bits than allowed
        let com = commit(&pp, 40, &rho);
        let s = spec(PredicateOp::AtLeast, 10, 4);
        assert!(matches!(
            prove_range(&pp, &com, 40, &rho, s, b"ctx", &mut r),
            Err(Error::Capacity(_))
        ));
        // 2^n reaches past the toy order q=101
        let s = spec(PredicateOp::AtLeast, 10, 7);
        let com = commit(&pp, 12, &rho);
        assert!(matches!(
            prove_range(&pp, &com, 12, &rho, s, b"ctx", &mut r),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn exhaustive_n4_against_brute_force_on_mock() {
        // All satisfiable differences 0..16 accept; unsatisfiable values
        // refuse at the prover, and a forged proof built by wrapping the
        // difference mod q rejects at the verifier.
        let pp = MockEngine::setup(SecurityLevel::Toy);
        let mut r = rng(5);
        let bound = 20u64;
        let s = spec(PredicateOp::AtLeast, bound, 4);
        for value in 20..36u64 {
            let rho = pp.random_scalar(&mut r);
            let com = commit(&pp, value, &rho);
            let proof = prove_range(&pp, &com, value, &rho, s, b"ctx", &mut r).unwrap();
            assert!(verify_range(&pp, &com, &proof, b"ctx"), "value {value}");
        }
        for value in 4..20u64 {
            let rho = pp.random_scalar(&mut r);
            let com = commit(&pp, value, &rho);
            assert!(prove_range(&pp, &com, value, &rho, s, b"ctx", &mut r).is_err());
            // forge: commit to the wrapped difference's low bits anyway
            let wrapped = (value + 101 - bound) % 101;
            let forged_value = bound + (wrapped & 0xf);
            let proof = prove_range(
                &pp,
                &commit(&pp, forged_value, &rho),
                forged_value,
                &rho,
                s,
                b"ctx",
                &mut r,
            )
            .unwrap();
            // the forged proof talks about a different commitment
            assert!(!verify_range(&pp, &com, &proof, b"ctx"), "value {value}");
        }
    }

    #[test]
    fn transcript_mutations_reject() {
        let pp = MockEngine::setup(SecurityLevel::Standard);
        let mut r = rng(6);
        let rho = pp.random_scalar(&mut r);
        let com = commit(&pp, 25, &rho);
        let s = spec(PredicateOp::AtLeast, 20, 4);
        let proof = prove_range(&pp, &com, 25, &rho, s, b"ctx", &mut r).unwrap();
        assert!(verify_range(&pp, &com, &proof, b"ctx"));
        let one = pp.scalar_from_u64(1);
        let mut mutants: Vec<RangeProof<MockEngine>> = Vec::new();
        macro_rules! mutate {
            ($f:expr) => {{
                let mut m = proof.clone();
                $f(&mut m);
                mutants.push(m);
            }};
        }
        mutate!(|m: &mut RangeProof<MockEngine>| m.s_value = m.s_value.add(&one));
        mutate!(|m: &mut RangeProof<MockEngine>| m.challenge = m.challenge.add(&one));
        mutate!(|m: &mut RangeProof<MockEngine>| m.body.link_s_rho = m.body.link_s_rho.add(&one));
        mutate!(|m: &mut RangeProof<MockEngine>| m.body.recomp_s = m.body.recomp_s.add(&one));
        mutate!(|m: &mut RangeProof<MockEngine>| m.body.link_t = m.body.link_t.add(&pp.g));
        mutate!(|m: &mut RangeProof<MockEngine>| m.body.recomp_t = m.body.recomp_t.add(&pp.g));
        for k in 0..4 {
            mutate!(|m: &mut RangeProof<MockEngine>| m.body.bit_coms[k] =
                m.body.bit_coms[k].add(&pp.g));
            mutate!(|m: &mut RangeProof<MockEngine>| m.body.bit_c0[k] = m.body.bit_c0[k].add(&one));
            mutate!(|m: &mut RangeProof<MockEngine>| m.body.bit_s0[k] = m.body.bit_s0[k].add(&one));
            mutate!(|m: &mut RangeProof<MockEngine>| m.body.bit_s1[k] = m.body.bit_s1[k].add(&one));
        }
        for (n, m) in mutants.iter().enumerate() {
            assert!(!verify_range(&pp, &com, m, b"ctx"), "mutant {n} accepted");
        }
    }
}
