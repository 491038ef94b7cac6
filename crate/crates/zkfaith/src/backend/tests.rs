use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use super::*;
use crate::backend::bls::BLS12_381_ORDER_DECIMAL;
use crate::backend::mock::{psi, MOCK_TOY_MODULUS};

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn be_bytes_to_decimal(bytes: &[u8]) -> String {
    // Schoolbook base conversion; plenty for a 32-byte integer.
    let mut digits = vec![0u8];
    for byte in bytes {
        let mut carry = *byte as u32;
        for d in digits.iter_mut() {
            let v = (*d as u32) * 256 + carry;
            *d = (v % 10) as u8;
            carry = v / 10;
        }
        while carry > 0 {
            digits.push((carry % 10) as u8);
            carry /= 10;
        }
    }
    digits.iter().rev().map(|d| (b'0' + d) as char).collect()
}

#[test]
fn toy_mock_setup_uses_unit_generators() {
    let pp = MockEngine::setup(SecurityLevel::Toy);
    assert_eq!(pp.backend, BackendId::Mock { modulus: 101 });
    assert_eq!(pp.g.exponent(), 1);
    assert_eq!(pp.h.exponent(), 1);
    assert_eq!(pp.gt.exponent(), 1);
    assert!(!pp.pedersen_base.is_identity());
}

#[test]
fn curve_order_matches_published_constant() {
    let pp = BlsEngine::setup(SecurityLevel::Standard);
    assert_eq!(be_bytes_to_decimal(&pp.order_bytes()), BLS12_381_ORDER_DECIMAL);
}

#[test]
fn setup_is_deterministic() {
    let a = setup_any("toy", "mock").unwrap();
    let b = setup_any("toy", "mock").unwrap();
    assert_eq!(a, b);
    let a = setup_any("standard", "curve").unwrap();
    let b = setup_any("standard", "curve").unwrap();
    assert_eq!(a, b);
}

#[test]
fn unknown_backend_is_config_error() {
    assert!(matches!(setup_any("toy", "quantum"), Err(Error::UnknownBackend(_))));
    assert!(matches!(setup_any("huge", "mock"), Err(Error::UnknownLevel(_))));
}

#[test]
fn mock_pairing_hand_values() {
    let pp = MockEngine::setup(SecurityLevel::Toy);
    let three = pp.scalar_from_u64(3);
    let five = pp.scalar_from_u64(5);
    // e(3g, 5h) = 15 gt with q = 101.
    let out = MockEngine::pair(&pp.g.mul(&three), &pp.h.mul(&five));
    assert_eq!(out.exponent(), 15);
    // e(identity, v) is the GT identity.
    let id = pp.g.mul(&pp.scalar_from_u64(0));
    assert!(MockEngine::pair(&id, &pp.h).is_identity());
    // e(2g,3h) = e(3g,2h) = e(6g,h).
    let two = pp.scalar_from_u64(2);
    let six = pp.scalar_from_u64(6);
    let lhs = MockEngine::pair(&pp.g.mul(&two), &pp.h.mul(&three));
    assert_eq!(lhs, MockEngine::pair(&pp.g.mul(&three), &pp.h.mul(&two)));
    assert_eq!(lhs, MockEngine::pair(&pp.g.mul(&six), &pp.h));
}

fn bilinearity_trials<E: Engine>(pp: &PublicParams<E>, seed: u64) {
    let mut rng = rng(seed);
    for _ in 0..100 {
        let a = pp.random_scalar(&mut rng);
        let b = pp.random_scalar(&mut rng);
        let lhs = E::pair(&pp.g.mul(&a), &pp.h.mul(&b));
        let rhs = pp.gt.mul(&a.mul(&b));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn bilinearity_holds_on_both_backends() {
    bilinearity_trials(&MockEngine::setup(SecurityLevel::Toy), 1);
    bilinearity_trials(&MockEngine::setup(SecurityLevel::Standard), 2);
    bilinearity_trials(&BlsEngine::setup(SecurityLevel::Standard), 3);
}

#[test]
fn psi_law_on_mock_and_pairing_restatement_on_curve() {
    let pp = MockEngine::setup(SecurityLevel::Toy);
    let mut r = rng(4);
    for _ in 0..50 {
        let a = pp.random_scalar(&mut r);
        assert_eq!(psi(&pp.h.mul(&a)), pp.g.mul(&a));
    }
    // Curve restatement: e(a*g, h) = e(g, a*h).
    let pp = BlsEngine::setup(SecurityLevel::Standard);
    let mut r = rng(5);
    for _ in 0..20 {
        let a = pp.random_scalar(&mut r);
        assert_eq!(
            BlsEngine::pair(&pp.g.mul(&a), &pp.h),
            BlsEngine::pair(&pp.g, &pp.h.mul(&a))
        );
    }
}

fn roundtrip_trials<E: Engine>(pp: &PublicParams<E>, seed: u64, trials: usize) {
    let mut rng = rng(seed);
    for _ in 0..trials {
        let s = pp.random_scalar(&mut rng);
        assert_eq!(E::scalar_from_bytes(pp, &s.to_bytes()).unwrap(), s);
        let p1 = pp.g.mul(&s);
        assert_eq!(E::g1_from_bytes(pp, &p1.to_bytes()).unwrap(), p1);
        let p2 = pp.h.mul(&s);
        assert_eq!(E::g2_from_bytes(pp, &p2.to_bytes()).unwrap(), p2);
        let pt = pp.gt.mul(&s);
        assert_eq!(E::gt_from_bytes(pp, &pt.to_bytes()).unwrap(), pt);
        // identity representable and detectable
        let zero = pp.scalar_from_u64(0);
        assert!(pp.g.mul(&zero).is_identity());
        assert_eq!(
            E::g1_from_bytes(pp, &pp.g.mul(&zero).to_bytes()).unwrap(),
            pp.g.mul(&zero)
        );
    }
}

#[test]
fn serialization_roundtrip_1000_elements_per_group() {
    roundtrip_trials(&MockEngine::setup(SecurityLevel::Toy), 6, 1000);
    roundtrip_trials(&BlsEngine::setup(SecurityLevel::Standard), 7, 1000);
}

#[test]
fn hash_to_scalar_is_deterministic_and_length_separated() {
    let pp = MockEngine::setup(SecurityLevel::Toy);
    let a = pp.hash_to_scalar(b"tag", &[b"m"]);
    let b = pp.hash_to_scalar(b"tag", &[b"m"]);
    assert_eq!(a, b);
    let c = pp.hash_to_scalar(b"tag", &[b"m", b""]);
    assert_ne!(a, c);
    let d = pp.hash_to_scalar(b"other", &[b"m"]);
    assert_ne!(a, d);
}

#[test]
fn hash_to_scalar_statistical_sweep_stays_in_range() {
    let pp = MockEngine::setup(SecurityLevel::Toy);
    for i in 0..10_000u32 {
        let s = pp.hash_to_scalar(b"sweep", &[&i.to_be_bytes()]);
        assert!(s.value() < MOCK_TOY_MODULUS);
    }
    // Curve scalars are canonical by construction; spot-check a re-parse.
    let pp = BlsEngine::setup(SecurityLevel::Standard);
    for i in 0..100u32 {
        let s = pp.hash_to_scalar(b"sweep", &[&i.to_be_bytes()]);
        assert_eq!(BlsEngine::scalar_from_bytes(&pp, &s.to_bytes()).unwrap(), s);
    }
}

#[test]
fn mock_scalar_width_follows_modulus() {
    let toy = MockEngine::setup(SecurityLevel::Toy);
    assert_eq!(MockEngine::scalar_len(&toy), 1);
    let mid = MockEngine::setup_with_modulus(SecurityLevel::Toy, 1009);
    assert_eq!(MockEngine::scalar_len(&mid), 2);
    let std = MockEngine::setup(SecurityLevel::Standard);
    assert_eq!(MockEngine::scalar_len(&std), 8);
}

#[test]
fn non_canonical_scalar_bytes_rejected() {
    let pp = MockEngine::setup(SecurityLevel::Toy);
    assert!(MockEngine::scalar_from_bytes(&pp, &[200]).is_err());
    let pp = BlsEngine::setup(SecurityLevel::Standard);
    let over = [0xffu8; 32];
    assert!(BlsEngine::scalar_from_bytes(&pp, &over).is_err());
}

#[test]
fn multi_pair_matches_pair_sum() {
    let pp = BlsEngine::setup(SecurityLevel::Standard);
    let mut r = rng(8);
    let xs: Vec<_> = (0..4).map(|_| pp.g.mul(&pp.random_scalar(&mut r))).collect();
    let ys: Vec<_> = (0..4).map(|_| pp.h.mul(&pp.random_scalar(&mut r))).collect();
    let batched = BlsEngine::multi_pair(&xs, &ys);
    let mut sum = BlsEngine::pair(&xs[0], &ys[0]);
    for i in 1..4 {
        sum = sum.add(&BlsEngine::pair(&xs[i], &ys[i]));
    }
    assert_eq!(batched, sum);
}
