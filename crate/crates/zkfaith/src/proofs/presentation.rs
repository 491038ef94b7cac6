//! Proof of knowledge of a CL signature with selective disclosure.
//!
//! The prover blinds the signature (fresh `r`, `r'`) and proves, in GT,
//! knowledge of `rho = 1/r'`, the hiding exponent `m0`, and every hidden
//! message satisfying
//!
//! ```text
//! e(c_hat, h)^rho = e(a~, X) * e(b~, X)^{m0} * prod_i e(B_i~, X)^{m_i}
//! ```
//!
//! with disclosed positions substituted as public exponents. Range
//! predicates, the revocation-tag link, and (for updates) an opening of the
//! signed commitment ride on the same transcript: their commit messages are
//! folded into one Fiat-Shamir challenge and the response scalar of a shared
//! witness appears exactly once. Splicing parts of two transcripts therefore
//! changes the challenge and rejects.

use std::collections::{BTreeMap, BTreeSet};

use rand::RngCore;

use crate::backend::{Engine, GroupOps, PublicParams, ScalarOps};
use crate::cl::{cl_randomize, structural_check, IssuerPublicKey, RandomizedSignature, Signature};
use crate::error::{Error, Result};
use crate::proofs::range::{verify_range_body, PredicateSpec, RangeBody, RangeProver};
use crate::sigma;
use crate::vc::{AttributeVector, Commitment};

const PRESENTATION_DOMAIN: &[u8] = b"zkfaith/presentation/v1";

/// Revocation-tag statement bound into a presentation: the prover shows the
/// tag satisfies `e(tag, h)^{serial} = gt * e(tag, h)^{-epoch}` for the same
/// hidden serial the signature proof uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerialTagPart<E: Engine> {
    /// 1-based attribute position holding the serial.
    pub position: usize,
    pub epoch: u64,
    pub tag: E::G1,
    /// GT commit message of the tag link.
    pub link_t: E::Gt,
}

/// Prover-side inputs for the optional transcript extensions.
#[derive(Debug, Clone)]
pub struct PresentOptions<E: Engine> {
    /// Positions whose values are revealed to the verifier.
    pub disclose: BTreeSet<usize>,
    /// Threshold predicates, each over a hidden position.
    pub predicates: Vec<PredicateSpec>,
    /// Integer value of each predicate position (its scalar encoding must
    /// match the signed attribute).
    pub predicate_values: BTreeMap<usize, u64>,
    /// `(position, epoch, tag)` for the revocation link, if any.
    pub serial_link: Option<(usize, u64, E::G1)>,
    /// Also prove that this commitment opens to the signed vector (update
    /// flow). Requires an empty disclosure set.
    pub bind_commitment: Option<Commitment<E>>,
}

impl<E: Engine> Default for PresentOptions<E> {
    fn default() -> Self {
        PresentOptions {
            disclose: BTreeSet::new(),
            predicates: Vec::new(),
            predicate_values: BTreeMap::new(),
            serial_link: None,
            bind_commitment: None,
        }
    }
}

/// Verifier-side expectations that are not part of the transcript itself.
#[derive(Debug, Clone)]
pub struct VerifyOptions<E: Engine> {
    /// Require a serial-tag link at this position and epoch.
    pub expect_serial_link: Option<(usize, u64)>,
    /// Require and check a commitment binding against this commitment.
    pub expect_binding: Option<Commitment<E>>,
}

impl<E: Engine> Default for VerifyOptions<E> {
    fn default() -> Self {
        VerifyOptions {
            expect_serial_link: None,
            expect_binding: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationProof<E: Engine> {
    pub sig: RandomizedSignature<E>,
    /// GT commit message of the main signature equation.
    pub gt_commit: E::Gt,
    pub challenge: E::Scalar,
    /// Response for the blinding exponent `rho`.
    pub s_rho: E::Scalar,
    /// Response for the hiding exponent `m0`.
    pub s_m0: E::Scalar,
    /// Responses for hidden positions, keyed by position.
    pub hidden_responses: BTreeMap<usize, E::Scalar>,
    /// Revealed positions and their values.
    pub disclosed: BTreeMap<usize, E::Scalar>,
    pub ranges: Vec<(PredicateSpec, RangeBody<E>)>,
    pub serial_tag: Option<SerialTagPart<E>>,
    /// Commit message of the commitment-opening link (update flow).
    pub com_binding: Option<E::G1>,
}

impl<E: Engine> PresentationProof<E> {
    pub fn len(&self) -> usize {
        self.hidden_responses.len() + self.disclosed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Canonical bytes of every group element and scalar in the transcript,
    /// used by unlinkability sweeps. The revocation tag is deterministic per
    /// `(serial, epoch)` — a per-epoch pseudonym — so sweeps may exclude it.
    pub fn transcript_atoms(&self, include_tag: bool) -> Vec<Vec<u8>> {
        let mut atoms: Vec<Vec<u8>> = Vec::new();
        for slot in self.sig.slots() {
            atoms.push(slot.to_bytes());
        }
        atoms.push(self.gt_commit.to_bytes());
        atoms.push(self.challenge.to_bytes());
        atoms.push(self.s_rho.to_bytes());
        atoms.push(self.s_m0.to_bytes());
        for s in self.hidden_responses.values() {
            atoms.push(s.to_bytes());
        }
        for (_, body) in &self.ranges {
            atoms.push(body.attr_com.to_bytes());
            atoms.push(body.link_t.to_bytes());
            atoms.push(body.link_s_rho.to_bytes());
            for c in &body.bit_coms {
                atoms.push(c.to_bytes());
            }
            for t in &body.bit_t0 {
                atoms.push(t.to_bytes());
            }
            for t in &body.bit_t1 {
                atoms.push(t.to_bytes());
            }
            for s in body.bit_c0.iter().chain(&body.bit_s0).chain(&body.bit_s1) {
                atoms.push(s.to_bytes());
            }
            atoms.push(body.recomp_t.to_bytes());
            atoms.push(body.recomp_s.to_bytes());
        }
        if let Some(tag_part) = &self.serial_tag {
            if include_tag {
                atoms.push(tag_part.tag.to_bytes());
            }
            atoms.push(tag_part.link_t.to_bytes());
        }
        if let Some(t) = &self.com_binding {
            atoms.push(t.to_bytes());
        }
        atoms
    }
}

/// Everything the challenge covers, in fixed order.
#[allow(clippy::too_many_arguments)]
fn challenge_input<E: Engine>(
    pp: &PublicParams<E>,
    pk: &IssuerPublicKey<E>,
    sig: &RandomizedSignature<E>,
    disclosed: &BTreeMap<usize, E::Scalar>,
    ranges: &[(PredicateSpec, RangeBody<E>)],
    serial_tag: &Option<SerialTagPart<E>>,
    bind_com: Option<&Commitment<E>>,
    com_binding_msg: &Option<E::G1>,
    gt_commit: &E::Gt,
    context: &[u8],
) -> E::Scalar {
    let mut statement = Vec::new();
    statement.extend_from_slice(&pk.fingerprint(pp).to_bytes());
    for slot in sig.slots() {
        statement.extend_from_slice(&slot.to_bytes());
    }
    statement.extend_from_slice(&(disclosed.len() as u32).to_be_bytes());
    for (pos, value) in disclosed {
        statement.extend_from_slice(&(*pos as u32).to_be_bytes());
        statement.extend_from_slice(&value.to_bytes());
    }
    statement.extend_from_slice(&(ranges.len() as u32).to_be_bytes());
    for (spec, body) in ranges {
        statement.extend_from_slice(&spec.statement_bytes());
        statement.extend_from_slice(&body.commit_bytes());
    }
    match serial_tag {
        None => statement.push(0),
        Some(part) => {
            statement.push(1);
            statement.extend_from_slice(&(part.position as u32).to_be_bytes());
            statement.extend_from_slice(&part.epoch.to_be_bytes());
            statement.extend_from_slice(&part.tag.to_bytes());
            statement.extend_from_slice(&part.link_t.to_bytes());
        }
    }
    match (bind_com, com_binding_msg) {
        (Some(com), Some(msg)) => {
            statement.push(1);
            statement.extend_from_slice(&com.0.to_bytes());
            statement.extend_from_slice(&msg.to_bytes());
        }
        _ => statement.push(0),
    }
    pp.hash_to_scalar(
        PRESENTATION_DOMAIN,
        &[&pp.digest(), context, &statement, &gt_commit.to_bytes()],
    )
}

/// GT bases of the main equation for the given hidden positions:
/// `[V, -P, -Q_i ..]` with `V = e(c_hat, h)`, `P = e(b~, X)`,
/// `Q_i = e(B_i~, X)`.
fn hidden_bases<E: Engine>(
    pp: &PublicParams<E>,
    pk: &IssuerPublicKey<E>,
    sig: &RandomizedSignature<E>,
    hidden: &BTreeSet<usize>,
) -> Vec<E::Gt> {
    let mut bases = Vec::with_capacity(hidden.len() + 2);
    bases.push(E::pair(&sig.c_hat, &pp.h));
    bases.push(E::pair(&sig.b, &pk.big_x).neg());
    for i in hidden {
        bases.push(E::pair(&sig.b_parts[i - 1], &pk.big_x).neg());
    }
    bases
}

/// Prove knowledge of `sig` on `(messages, m0)` with the requested
/// disclosures and extensions. The signature must verify and predicate
/// positions must stay hidden.
pub fn prove_presentation<E: Engine, R: RngCore + ?Sized>(
    pp: &PublicParams<E>,
    pk: &IssuerPublicKey<E>,
    sig: &Signature<E>,
    messages: &AttributeVector<E>,
    m0: &E::Scalar,
    options: &PresentOptions<E>,
    context: &[u8],
    rng: &mut R,
) -> Result<PresentationProof<E>> {
    let l = pk.len();
    if messages.len() != l || sig.len() != l {
        return Err(Error::InvalidLength {
            expected: l,
            got: messages.len(),
        });
    }
    for pos in &options.disclose {
        if *pos == 0 || *pos > l {
            return Err(Error::PositionOutOfRange {
                position: *pos,
                len: l,
            });
        }
    }
    if options.bind_commitment.is_some() && !options.disclose.is_empty() {
        return Err(Error::Policy(
            "commitment binding requires an empty disclosure set".into(),
        ));
    }
    let hidden: BTreeSet<usize> = (1..=l).filter(|i| !options.disclose.contains(i)).collect();
    for spec in &options.predicates {
        if options.disclose.contains(&spec.position) {
            return Err(Error::RedundantPredicate(spec.position));
        }
        if spec.position == 0 || spec.position > l {
            return Err(Error::PositionOutOfRange {
                position: spec.position,
                len: l,
            });
        }
    }
    if let Some((pos, _, _)) = &options.serial_link {
        if !hidden.contains(pos) {
            return Err(Error::Policy("serial position must stay hidden".into()));
        }
    }

    let (rsig, blinding) = cl_randomize(pp, sig, rng);

    // Nonces: rho, m0, one per hidden position.
    let t_rho = pp.random_scalar(rng);
    let t_m0 = pp.random_scalar(rng);
    let t_hidden: BTreeMap<usize, E::Scalar> = hidden
        .iter()
        .map(|i| (*i, pp.random_scalar(rng)))
        .collect();

    let bases = hidden_bases(pp, pk, &rsig, &hidden);
    let mut nonces = Vec::with_capacity(bases.len());
    nonces.push(t_rho.clone());
    nonces.push(t_m0.clone());
    for i in &hidden {
        nonces.push(t_hidden[i].clone());
    }
    let gt_commit = sigma::msm(&bases, &nonces);

    // Range predicates share the hidden-position nonce as their value nonce.
    let mut range_provers: Vec<(PredicateSpec, RangeProver<E>, u64)> = Vec::new();
    for spec in &options.predicates {
        let value = *options
            .predicate_values
            .get(&spec.position)
            .ok_or_else(|| {
                Error::CannotSatisfy(format!("no integer value for position {}", spec.position))
            })?;
        if &pp.scalar_from_u64(value) != messages.at(spec.position)? {
            return Err(Error::CannotSatisfy(format!(
                "claimed value at position {} does not match the signed attribute",
                spec.position
            )));
        }
        let rho_j = pp.random_scalar(rng);
        let attr_com = pp
            .g
            .mul(messages.at(spec.position)?)
            .add(&pp.pedersen_base.mul(&rho_j));
        let prover = RangeProver::with_value_nonce(
            pp,
            *spec,
            attr_com,
            value,
            rho_j,
            t_hidden[&spec.position].clone(),
            rng,
        )?;
        range_provers.push((*spec, prover, value));
    }

    // Serial-tag link commit: e(tag, h)^{t_serial}.
    let serial_tag_commit = match &options.serial_link {
        None => None,
        Some((pos, epoch, tag)) => {
            if tag.is_identity() {
                return Err(Error::Policy("identity revocation tag".into()));
            }
            let bt = E::pair(tag, &pp.h);
            Some(SerialTagPart {
                position: *pos,
                epoch: *epoch,
                tag: tag.clone(),
                link_t: bt.mul(&t_hidden[pos]),
            })
        }
    };

    // Commitment binding commit: same nonces over the commitment bases.
    let com_binding_msg = match &options.bind_commitment {
        None => None,
        Some(_) => {
            let mut msg = pp.g.mul(&t_m0);
            for i in 1..=l {
                msg = msg.add(&pk.z_bases[i - 1].mul(&t_hidden[&i]));
            }
            Some(msg)
        }
    };

    let disclosed: BTreeMap<usize, E::Scalar> = options
        .disclose
        .iter()
        .map(|i| Ok((*i, messages.at(*i)?.clone())))
        .collect::<Result<_>>()?;

    // Bodies are complete for hashing purposes after the commit phase; the
    // response fields do not enter the hash.
    let range_commit_view: Vec<(PredicateSpec, RangeBody<E>)> = range_provers
        .iter()
        .map(|(spec, prover, _)| (*spec, prover.body_view().clone()))
        .collect();

    let challenge = challenge_input(
        pp,
        pk,
        &rsig,
        &disclosed,
        &range_commit_view,
        &serial_tag_commit,
        options.bind_commitment.as_ref(),
        &com_binding_msg,
        &gt_commit,
        context,
    );

    // Responses.
    let s_rho = t_rho.add(&challenge.mul(&blinding.rho));
    let s_m0 = t_m0.add(&challenge.mul(m0));
    let mut hidden_responses = BTreeMap::new();
    for i in &hidden {
        hidden_responses.insert(
            *i,
            t_hidden[i].add(&challenge.mul(messages.at(*i)?)),
        );
    }
    let mut ranges = Vec::with_capacity(range_provers.len());
    for (spec, prover, value) in range_provers {
        let (body, s_value) = prover.finish(pp, &challenge, value);
        // shared witness: the range value response must equal the hidden
        // response of its position
        debug_assert_eq!(&s_value, &hidden_responses[&spec.position]);
        ranges.push((spec, body));
    }

    Ok(PresentationProof {
        sig: rsig,
        gt_commit,
        challenge,
        s_rho,
        s_m0,
        hidden_responses,
        disclosed,
        ranges,
        serial_tag: serial_tag_commit,
        com_binding: com_binding_msg,
    })
}

/// Verify a presentation against the same context. List membership of the
/// revocation tag is the caller's job (the tag link here only proves the tag
/// matches the hidden serial).
pub fn verify_presentation<E: Engine>(
    pp: &PublicParams<E>,
    pk: &IssuerPublicKey<E>,
    proof: &PresentationProof<E>,
    options: &VerifyOptions<E>,
    context: &[u8],
) -> bool {
    let l = pk.len();
    if proof.sig.len() != l {
        return false;
    }
    // Disclosed and hidden positions must partition 1..=l.
    if proof.hidden_responses.len() + proof.disclosed.len() != l {
        return false;
    }
    for i in 1..=l {
        let h = proof.hidden_responses.contains_key(&i);
        let d = proof.disclosed.contains_key(&i);
        if h == d {
            return false;
        }
    }
    // Expectations about the optional parts.
    match (&options.expect_serial_link, &proof.serial_tag) {
        (None, None) => {}
        (Some((pos, epoch)), Some(part)) => {
            if part.position != *pos || part.epoch != *epoch {
                return false;
            }
        }
        _ => return false,
    }
    if options.expect_binding.is_some() != proof.com_binding.is_some() {
        return false;
    }
    if proof.com_binding.is_some() && !proof.disclosed.is_empty() {
        return false;
    }
    if let Some(part) = &proof.serial_tag {
        if !proof.hidden_responses.contains_key(&part.position) || part.tag.is_identity() {
            return false;
        }
    }
    for (spec, _) in &proof.ranges {
        if !proof.hidden_responses.contains_key(&spec.position) {
            return false;
        }
    }

    if !structural_check(pp, pk, &proof.sig.a, &proof.sig.a_parts, &proof.sig.b, &proof.sig.b_parts)
    {
        return false;
    }

    let expected = challenge_input(
        pp,
        pk,
        &proof.sig,
        &proof.disclosed,
        &proof.ranges,
        &proof.serial_tag,
        options.expect_binding.as_ref(),
        &proof.com_binding,
        &proof.gt_commit,
        context,
    );
    if expected != proof.challenge {
        return false;
    }

    // Main GT equation.
    let hidden: BTreeSet<usize> = proof.hidden_responses.keys().copied().collect();
    let bases = hidden_bases(pp, pk, &proof.sig, &hidden);
    let mut responses = Vec::with_capacity(bases.len());
    responses.push(proof.s_rho.clone());
    responses.push(proof.s_m0.clone());
    for i in &hidden {
        responses.push(proof.hidden_responses[i].clone());
    }
    // target R = e(a~, X) + sum over disclosed of m_i * e(B_i~, X)
    let mut target = E::pair(&proof.sig.a, &pk.big_x);
    for (i, value) in &proof.disclosed {
        if *i == 0 || *i > l {
            return false;
        }
        target = target.add(&E::pair(&proof.sig.b_parts[i - 1].mul(value), &pk.big_x));
    }
    if !sigma::check(&bases, &responses, &proof.gt_commit, &target, &proof.challenge) {
        return false;
    }

    // Range predicates, sharing the hidden responses.
    for (spec, body) in &proof.ranges {
        let s_value = &proof.hidden_responses[&spec.position];
        if !verify_range_body(pp, spec, body, &proof.challenge, s_value) {
            return false;
        }
    }

    // Serial tag link: e(tag,h)^{s_serial} == link_t + c*(gt - epoch*e(tag,h)).
    if let Some(part) = &proof.serial_tag {
        let bt = E::pair(&part.tag, &pp.h);
        let epoch_scalar = pp.scalar_from_u64(part.epoch);
        let r_t = pp.gt.sub(&bt.mul(&epoch_scalar));
        let s_serial = &proof.hidden_responses[&part.position];
        if bt.mul(s_serial) != part.link_t.add(&r_t.mul(&proof.challenge)) {
            return false;
        }
    }

    // Commitment binding: same responses must open the bound commitment.
    if let (Some(com), Some(msg)) = (&options.expect_binding, &proof.com_binding) {
        let mut bases: Vec<E::G1> = Vec::with_capacity(l + 1);
        bases.push(pp.g.clone());
        bases.extend(pk.z_bases.iter().cloned());
        let mut responses = Vec::with_capacity(l + 1);
        responses.push(proof.s_m0.clone());
        for i in 1..=l {
            responses.push(proof.hidden_responses[&i].clone());
        }
        if !sigma::check(&bases, &responses, msg, &com.0, &proof.challenge) {
            return false;
        }
    }

    true
}

/// The algebraic main-equation check alone, for simulator tests.
pub fn presentation_equation_holds<E: Engine>(
    pp: &PublicParams<E>,
    pk: &IssuerPublicKey<E>,
    rsig: &RandomizedSignature<E>,
    disclosed: &BTreeMap<usize, E::Scalar>,
    gt_commit: &E::Gt,
    challenge: &E::Scalar,
    s_rho: &E::Scalar,
    s_m0: &E::Scalar,
    hidden_responses: &BTreeMap<usize, E::Scalar>,
) -> bool {
    let hidden: BTreeSet<usize> = hidden_responses.keys().copied().collect();
    let bases = hidden_bases(pp, pk, rsig, &hidden);
    let mut responses = Vec::with_capacity(bases.len());
    responses.push(s_rho.clone());
    responses.push(s_m0.clone());
    for i in &hidden {
        responses.push(hidden_responses[i].clone());
    }
    let mut target = E::pair(&rsig.a, &pk.big_x);
    for (i, value) in disclosed {
        target = target.add(&E::pair(&rsig.b_parts[i - 1].mul(value), &pk.big_x));
    }
    sigma::check(&bases, &responses, gt_commit, &target, challenge)
}

/// Honest-verifier simulator for the signature-equation part: given a
/// blinded signature (the statement) and a programmable challenge, sample
/// responses and solve for the GT commit message. The output satisfies the
/// main equation check but carries no hash link.
pub fn simulate_presentation_sigma<E: Engine, R: RngCore + ?Sized>(
    pp: &PublicParams<E>,
    pk: &IssuerPublicKey<E>,
    rsig: &RandomizedSignature<E>,
    disclosed: &BTreeMap<usize, E::Scalar>,
    challenge: &E::Scalar,
    rng: &mut R,
) -> (E::Gt, E::Scalar, E::Scalar, BTreeMap<usize, E::Scalar>) {
    let l = pk.len();
    let hidden: BTreeSet<usize> = (1..=l).filter(|i| !disclosed.contains_key(i)).collect();
    let bases = hidden_bases(pp, pk, rsig, &hidden);
    let mut target = E::pair(&rsig.a, &pk.big_x);
    for (i, value) in disclosed {
        target = target.add(&E::pair(&rsig.b_parts[i - 1].mul(value), &pk.big_x));
    }
    let (msg, responses) = sigma::simulate(pp, &bases, &target, challenge, rng);
    let s_rho = responses[0].clone();
    let s_m0 = responses[1].clone();
    let mut hidden_responses = BTreeMap::new();
    for (k, i) in hidden.iter().enumerate() {
        hidden_responses.insert(*i, responses[k + 2].clone());
    }
    (msg, s_rho, s_m0, hidden_responses)
}
