//! Revocation registry and zero-knowledge non-membership.
//!
//! Every credential carries a hidden serial `s`. For epoch `e` the serial's
//! tag is `tag(s, e) = (s + e)^{-1} * g`, satisfying
//! `e(tag, (s+e)*h) = e(g, h)`. The issuer publishes, per epoch, the sorted
//! tags of all revoked serials; a presentation carries its own tag plus a
//! proof (the serial link inside [`PresentationProof`]) that the tag matches
//! the hidden serial. The verifier accepts when the tag is absent from the
//! current epoch's list.
//!
//! Within one epoch a credential's tag is a stable pseudonym; across epochs
//! tags are unlinkable. Revocations take effect at the next publication.

use sha2::{Digest, Sha256};

use crate::backend::{Engine, GroupOps, PublicParams, ScalarOps};
use crate::error::{Error, RejectReason, Result};
use crate::proofs::presentation::PresentationProof;

/// One epoch's public revocation data; the content of a published epoch file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpochPublication<E: Engine> {
    pub epoch: u64,
    /// Tags of every serial revoked at publication time, sorted by canonical
    /// encoding.
    pub tags: Vec<E::G1>,
    /// Digest chaining the whole publication history up to this epoch.
    pub registry_digest: [u8; 32],
}

impl<E: Engine> EpochPublication<E> {
    pub fn contains(&self, tag: &E::G1) -> bool {
        let needle = tag.to_bytes();
        self.tags
            .binary_search_by(|t| t.to_bytes().cmp(&needle))
            .is_ok()
    }
}

/// Issuer-side registry: the private revoked-serial set plus the publication
/// history. Single writer; verifiers only ever see [`EpochPublication`]s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevocationRegistry<E: Engine> {
    epoch: u64,
    revoked: Vec<E::Scalar>,
    published: Vec<EpochPublication<E>>,
    digest: [u8; 32],
}

/// `tag(s, e) = (s + e)^{-1} * g`; fails when `s + e = 0`.
pub fn epoch_tag<E: Engine>(
    pp: &PublicParams<E>,
    serial: &E::Scalar,
    epoch: u64,
) -> Result<E::G1> {
    let sum = serial.add(&pp.scalar_from_u64(epoch));
    let inv = sum.invert().ok_or(Error::DegenerateSerial(epoch))?;
    Ok(pp.g.mul(&inv))
}

impl<E: Engine> RevocationRegistry<E> {
    /// Fresh registry: epoch 0 is pre-published with an empty revocation
    /// list so verifiers always have a publication to check against.
    pub fn new(pp: &PublicParams<E>) -> Self {
        let mut h = Sha256::new();
        h.update(b"zkfaith/registry-genesis/v1");
        h.update(pp.digest());
        let digest: [u8; 32] = h.finalize().into();
        RevocationRegistry {
            epoch: 0,
            revoked: Vec::new(),
            published: vec![EpochPublication {
                epoch: 0,
                tags: Vec::new(),
                registry_digest: digest,
            }],
            digest,
        }
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn revoked_serials(&self) -> &[E::Scalar] {
        &self.revoked
    }

    pub fn registry_digest(&self) -> [u8; 32] {
        self.digest
    }

    /// Mark a serial revoked, effective at the next publication. Returns
    /// `false` (a warning, not an error) when the serial was already listed.
    pub fn revoke(&mut self, serial: E::Scalar) -> bool {
        let key = serial.to_bytes();
        match self.revoked.binary_search_by(|s| s.to_bytes().cmp(&key)) {
            Ok(_) => false,
            Err(at) => {
                self.revoked.insert(at, serial);
                true
            }
        }
    }

    /// Advance the epoch and publish tags for every currently revoked
    /// serial. The digest chains over the published history.
    pub fn publish_epoch(&mut self, pp: &PublicParams<E>) -> Result<&EpochPublication<E>> {
        let epoch = self.epoch + 1;
        let mut tags: Vec<E::G1> = self
            .revoked
            .iter()
            .map(|s| epoch_tag(pp, s, epoch))
            .collect::<Result<_>>()?;
        tags.sort_by_key(|t| t.to_bytes());
        let mut h = Sha256::new();
        h.update(self.digest);
        h.update(epoch.to_be_bytes());
        h.update((tags.len() as u32).to_be_bytes());
        for t in &tags {
            h.update(t.to_bytes());
        }
        let digest: [u8; 32] = h.finalize().into();
        self.epoch = epoch;
        self.digest = digest;
        self.published.push(EpochPublication {
            epoch,
            tags,
            registry_digest: digest,
        });
        Ok(self.published.last().expect("just pushed"))
    }

    pub fn publication(&self, epoch: u64) -> Option<&EpochPublication<E>> {
        self.published.iter().find(|p| p.epoch == epoch)
    }

    pub fn latest(&self) -> &EpochPublication<E> {
        self.published.last().expect("genesis always present")
    }

    /// Recompute the digest chain from the stored history.
    pub fn digest_recomputes(&self, pp: &PublicParams<E>) -> bool {
        let mut h = Sha256::new();
        h.update(b"zkfaith/registry-genesis/v1");
        h.update(pp.digest());
        let mut digest: [u8; 32] = h.finalize().into();
        for publication in &self.published {
            if publication.epoch == 0 {
                if publication.registry_digest != digest {
                    return false;
                }
                continue;
            }
            let mut h = Sha256::new();
            h.update(digest);
            h.update(publication.epoch.to_be_bytes());
            h.update((publication.tags.len() as u32).to_be_bytes());
            for t in &publication.tags {
                h.update(t.to_bytes());
            }
            digest = h.finalize().into();
            if publication.registry_digest != digest {
                return false;
            }
        }
        digest == self.digest
    }

    /// Test/ops hook: rebuild a registry from parts (used by state-file IO).
    pub fn from_parts(
        epoch: u64,
        revoked: Vec<E::Scalar>,
        published: Vec<EpochPublication<E>>,
        digest: [u8; 32],
    ) -> Self {
        RevocationRegistry {
            epoch,
            revoked,
            published,
            digest,
        }
    }

    pub fn published_history(&self) -> &[EpochPublication<E>] {
        &self.published
    }
}

/// Prover-side input for the non-membership part of a show: the tag for the
/// current epoch, ready to pass to the presentation as its serial link.
pub fn non_membership_input<E: Engine>(
    pp: &PublicParams<E>,
    serial: &E::Scalar,
    serial_position: usize,
    publication: &EpochPublication<E>,
) -> Result<(usize, u64, E::G1)> {
    let tag = epoch_tag(pp, serial, publication.epoch)?;
    Ok((serial_position, publication.epoch, tag))
}

/// Verifier-side list checks for the tag carried by a presentation. The
/// algebraic serial link is checked by presentation verification; this
/// enforces epoch freshness and non-membership, with distinct rejections.
pub fn verify_non_membership<E: Engine>(
    proof: &PresentationProof<E>,
    publication: &EpochPublication<E>,
) -> Result<()> {
    let part = proof
        .serial_tag
        .as_ref()
        .ok_or(Error::Reject(RejectReason::BadProof("missing revocation tag")))?;
    if part.epoch != publication.epoch {
        return Err(Error::Reject(RejectReason::StaleEpoch));
    }
    if publication.contains(&part.tag) {
        return Err(Error::Reject(RejectReason::Revoked));
    }
    Ok(())
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

    #[test]
    fn toy_tag_matches_modular_inverse_oracle() {
        // q = 101, s = 9, e = 2: tag exponent is the inverse of 11 mod 101.
        let pp = MockEngine::setup(SecurityLevel::Toy);
        let tag = epoch_tag(&pp, &pp.scalar_from_u64(9), 2).unwrap();
        // extended-euclid oracle, independent of the backend's inverse
        let (mut a, mut b, mut x0, mut x1) = (101i64, 11i64, 0i64, 1i64);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (x0, x1) = (x1, x0 - q * x1);
        }
        let inv = ((x0 % 101) + 101) % 101;
        assert_eq!(inv, 46);
        assert_eq!(tag.exponent(), 46);
    }

    #[test]
    fn degenerate_serial_errors() {
        let pp = MockEngine::setup(SecurityLevel::Toy);
        // s + e = 99 + 2 = 101 = 0 mod 101
        assert!(matches!(
            epoch_tag(&pp, &pp.scalar_from_u64(99), 2),
            Err(Error::DegenerateSerial(2))
        ));
    }

    fn tag_equation_trials<E: Engine>(pp: &PublicParams<E>, seed: u64) {
        let mut r = rng(seed);
        for t in 0..100u64 {
            let s = pp.random_scalar(&mut r);
            let e = t % 17;
            let Ok(tag) = epoch_tag(pp, &s, e) else { continue };
            let sum = s.add(&pp.scalar_from_u64(e));
            assert_eq!(E::pair(&tag, &pp.h.mul(&sum)), E::pair(&pp.g, &pp.h));
            // determinism
            assert_eq!(epoch_tag(pp, &s, e).unwrap(), tag);
        }
    }

    #[test]
    fn tag_equation_and_determinism_both_backends() {
        tag_equation_trials(&MockEngine::setup(SecurityLevel::Standard), 1);
        tag_equation_trials(&BlsEngine::setup(SecurityLevel::Standard), 2);
    }

    #[test]
    fn revoke_publish_and_idempotence() {
        let pp = BlsEngine::setup(SecurityLevel::Standard);
        let mut reg = RevocationRegistry::new(&pp);
        assert_eq!(reg.epoch(), 0);
        assert!(reg.latest().tags.is_empty());

        let mut r = rng(3);
        let s1 = pp.random_scalar(&mut r);
        let s2 = pp.random_scalar(&mut r);
        assert!(reg.revoke(s1.clone()));
        assert!(!reg.revoke(s1.clone()), "double revoke flags a warning");
        assert!(reg.revoke(s2.clone()));

        let publication = reg.publish_epoch(&pp).unwrap().clone();
        assert_eq!(publication.epoch, 1);
        assert_eq!(publication.tags.len(), 2);
        // sorted by canonical bytes
        assert!(publication.tags[0].to_bytes() < publication.tags[1].to_bytes());
        let t1 = epoch_tag(&pp, &s1, 1).unwrap();
        assert!(publication.contains(&t1));

        // publishing again with no changes: same count, different epoch,
        // different tag values
        let second = reg.publish_epoch(&pp).unwrap().clone();
        assert_eq!(second.epoch, 2);
        assert_eq!(second.tags.len(), 2);
        for t in &second.tags {
            assert!(!publication.contains(t));
        }
        assert!(reg.digest_recomputes(&pp));
    }

    #[test]
    fn tags_across_epochs_are_unlinkable_elements() {
        let pp = BlsEngine::setup(SecurityLevel::Standard);
        let mut r = rng(4);
        for _ in 0..100 {
            let s = pp.random_scalar(&mut r);
            let t1 = epoch_tag(&pp, &s, 5).unwrap();
            let t2 = epoch_tag(&pp, &s, 6).unwrap();
            assert_ne!(t1, t2);
        }
    }

    #[test]
    fn empty_registry_accepts_any_tag() {
        let pp = MockEngine::setup(SecurityLevel::Standard);
        let reg = RevocationRegistry::new(&pp);
        let tag = epoch_tag(&pp, &pp.scalar_from_u64(42), 0).unwrap();
        assert!(!reg.latest().contains(&tag));
    }
}
