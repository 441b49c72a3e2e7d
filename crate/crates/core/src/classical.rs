//! Classical Dedekind sums, used as an independent oracle for the modular
//! case `Δ(1, 6)`.
//!
//! `s(a, b) = Σ_{k=1}^{|b|-1} ((k/b))((ka/b))` with the sawtooth
//! `((x)) = x - ⌊x⌋ - 1/2` away from integers and `((x)) = 0` at integers,
//! and the associated symbol `S(a/c) = 12·sign(c)·s(a, c)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactfield::{FieldSpec, FieldValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("arguments must be coprime")]
    NotCoprime,
    #[error("modulus must be nonzero")]
    ZeroDenominator,
}

/// A pair of coprime integers `(a, b)` with `b ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimePair {
    a: BigInt,
    b: BigInt,
}

impl CoprimePair {
    pub fn new<T: Into<BigInt>, U: Into<BigInt>>(a: T, b: U) -> Result<Self, ClassicalError> {
        let a = a.into();
        let b = b.into();
        if b.is_zero() {
            return Err(ClassicalError::ZeroDenominator);
        }
        if !a.gcd(&b).is_one() {
            return Err(ClassicalError::NotCoprime);
        }
        Ok(CoprimePair { a, b })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }
}

/// The sawtooth `((x))`: zero at integers, else `x - ⌊x⌋ - 1/2`.
pub fn sawtooth(x: &FieldValue) -> FieldValue {
    debug_assert!(x.is_rational_value(), "sawtooth is defined on rationals");
    if x.is_integer() {
        return FieldValue::zero(x.spec());
    }
    let floor = FieldValue::from_integer(x.floor(), x.spec());
    let half = FieldValue::from_ratio(1, 2, x.spec()).expect("2 is nonzero");
    x.sub(&floor).sub(&half)
}

/// The classical Dedekind sum `s(a, b)`, evaluated term by term in exact
/// rational arithmetic; `O(|b|)` time.
///
/// Both sawtooth arguments flip sign with `b`, so the sum may be taken over
/// the modulus `|b|`.
pub fn dedekind_sum(p: &CoprimePair) -> FieldValue {
    let spec = FieldSpec::Rational;
    let b_abs = p.b.abs();
    let mut sum = FieldValue::zero(spec);
    let mut k = BigInt::one();
    while k < b_abs {
        let first = sawtooth(
            &FieldValue::from_ratio(k.clone(), b_abs.clone(), spec).expect("b nonzero"),
        );
        let second = sawtooth(
            &FieldValue::from_ratio(&k * &p.a, b_abs.clone(), spec).expect("b nonzero"),
        );
        sum = sum.add(&first.mul(&second));
        k += BigInt::one();
    }
    sum
}

/// The modular symbol `12·sign(c)·s(a, c)`.
pub fn classical_symbol(a: &BigInt, c: &BigInt) -> Result<FieldValue, ClassicalError> {
    let pair = CoprimePair::new(a.clone(), c.clone())?;
    let sign = if c.is_negative() { -12 } else { 12 };
    Ok(dedekind_sum(&pair).mul(&FieldValue::from_integer(sign, FieldSpec::Rational)))
}

/// Checks Rademacher's cotangent formula
/// `s(a, b) = (1/4|b|)·Σ_{k=1}^{|b|-1} cot(πk/b)·cot(πka/b)`
/// against the exact sawtooth sum, within `tol`.
///
/// The cotangent side is evaluated in `f64` with argument reduction mod `b`
/// and Neumaier-compensated summation, which keeps the error orders of
/// magnitude below the tolerances used here.
pub fn cotangent_check(p: &CoprimePair, tol: f64) -> bool {
    let b_abs = p.b.abs();
    let b = b_abs.to_i64().expect("modulus fits in i64 for the numeric check");
    debug_assert!(b >= 2);
    let a_mod = p.a.mod_floor(&b_abs).to_i64().expect("residue fits in i64");
    let bf = b as f64;

    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    for k in 1..b {
        // cot has period π, so reduce ka mod b before forming the argument
        let r = (k as i128 * a_mod as i128).rem_euclid(b as i128) as i64;
        if r == 0 {
            continue; // cannot occur for coprime (a, b); keep the guard anyway
        }
        let term = cot(std::f64::consts::PI * k as f64 / bf)
            * cot(std::f64::consts::PI * r as f64 / bf);
        let t = sum + term;
        if sum.abs() >= term.abs() {
            compensation += (sum - t) + term;
        } else {
            compensation += (term - t) + sum;
        }
        sum = t;
    }
    let cot_side = (sum + compensation) / (4.0 * bf);

    let exact = dedekind_sum(p);
    let exact_f = exact.numer_rational().to_f64().expect("finite")
        / exact.denom().to_f64().expect("finite");
    // s(a, -b) = s(a, b): the modulus sign drops out of both sides
    (cot_side - exact_f).abs() < tol
}

fn cot(x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    c / s
}
