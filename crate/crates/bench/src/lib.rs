//! Shared fixtures for the benchmark suite.

use gds_core::{FieldSpec, FieldValue, GroupParams, Letter, Word};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn modular() -> GroupParams {
    let q = FieldSpec::Rational;
    GroupParams::new(
        FieldValue::from_integer(1, q),
        FieldValue::from_integer(6, q),
    )
    .unwrap()
}

pub fn pseudomodular() -> GroupParams {
    let q = FieldSpec::Rational;
    GroupParams::new(
        FieldValue::from_ratio(3, 5, q).unwrap(),
        FieldValue::from_integer(4, q),
    )
    .unwrap()
}

pub fn quadratic_group() -> GroupParams {
    let spec = FieldSpec::quadratic(13).unwrap();
    GroupParams::new(
        FieldValue::one(spec),
        FieldValue::from_parts(1, 1, 1, spec).unwrap(),
    )
    .unwrap()
}

/// Deterministic random word over the full alphabet of Γ.
pub fn random_word(seed: u64, len: usize) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = [
        Letter::G1,
        Letter::G1Inv,
        Letter::G2,
        Letter::G2Inv,
        Letter::Tau,
    ];
    Word::from_letters((0..len).map(|_| *alphabet.choose(&mut rng).unwrap()))
}
