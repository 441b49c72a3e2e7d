//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with its runtime. Run with
//! `cargo test -p gds-core --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use gds_core::{
    classical_symbol, dedekind_symbol, reduce_cusp, CochainContext, CoprimePair, FieldSpec,
    FieldValue, GroupParams, Letter, ProjPoint, ReductionConfig, Word,
};

fn modular() -> GroupParams {
    let q = FieldSpec::Rational;
    GroupParams::new(
        FieldValue::from_integer(1, q),
        FieldValue::from_integer(6, q),
    )
    .unwrap()
}

fn pseudomodular() -> GroupParams {
    let q = FieldSpec::Rational;
    GroupParams::new(
        FieldValue::from_ratio(3, 5, q).unwrap(),
        FieldValue::from_integer(4, q),
    )
    .unwrap()
}

fn quadratic_group() -> GroupParams {
    let spec = FieldSpec::quadratic(13).unwrap();
    GroupParams::new(
        FieldValue::one(spec),
        FieldValue::from_parts(1, 1, 1, spec).unwrap(),
    )
    .unwrap()
}

const GAMMA_ALPHABET: [Letter; 5] = [
    Letter::G1,
    Letter::G1Inv,
    Letter::G2,
    Letter::G2Inv,
    Letter::Tau,
];
const DELTA_ALPHABET: [Letter; 4] = [Letter::G1, Letter::G1Inv, Letter::G2, Letter::G2Inv];

fn random_word(rng: &mut ChaCha8Rng, max_len: usize, alphabet: &[Letter]) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_letters((0..len).map(|_| *alphabet.choose(rng).unwrap()))
}

fn repeat_word(block: &Word, k: i64) -> Word {
    let unit = if k >= 0 { block.clone() } else { block.inverse() };
    (0..k.abs()).fold(Word::empty(), |acc, _| acc.concat(&unit))
}

fn report(criterion: usize, detail: &str, started: Instant, limit: Duration) {
    let elapsed = started.elapsed();
    println!("acceptance criterion {criterion}: PASS — {detail} [{elapsed:.2?}]");
    assert!(
        elapsed < limit,
        "criterion {criterion} exceeded its runtime budget: {elapsed:.2?} >= {limit:.2?}"
    );
}

#[test]
fn criterion_01_cocycle_identity() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut checked = 0usize;
    for params in [modular(), pseudomodular()] {
        let ctx = CochainContext::new(&params);
        for _ in 0..1000 {
            let a = random_word(&mut rng, 12, &GAMMA_ALPHABET);
            let b = random_word(&mut rng, 12, &GAMMA_ALPHABET);
            let c = random_word(&mut rng, 12, &GAMMA_ALPHABET);
            let delta = ctx.epsilon(&b, &c) - ctx.epsilon(&a.concat(&b), &c)
                + ctx.epsilon(&a, &b.concat(&c))
                - ctx.epsilon(&a, &b);
            assert_eq!(delta, 0, "δε != 0 at A={a} B={b} C={c}");
            checked += 1;
        }
    }
    report(
        1,
        &format!("δε(A,B,C) = 0 on {checked} random word triples"),
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_02_phi_defining_relation() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut checked = 0usize;
    for params in [modular(), pseudomodular(), quadratic_group()] {
        let ctx = CochainContext::new(&params);
        for _ in 0..1000 {
            let a = random_word(&mut rng, 12, &GAMMA_ALPHABET);
            let b = random_word(&mut rng, 12, &GAMMA_ALPHABET);
            let lhs = ctx.phi(&a.concat(&b)).sub(&ctx.phi(&a)).sub(&ctx.phi(&b));
            let rhs = FieldValue::from_integer(ctx.epsilon(&a, &b), params.spec())
                .mul(params.t());
            assert_eq!(lhs, rhs, "relation fails at A={a} B={b}");
            checked += 1;
        }
    }
    report(
        2,
        &format!("φ(AB)-φ(A)-φ(B) = t·ε(A,B) on {checked} random word pairs"),
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_03_phi_structure() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    for params in [modular(), pseudomodular(), quadratic_group()] {
        let ctx = CochainContext::new(&params);
        let zero = FieldValue::zero(params.spec());

        for _ in 0..500 {
            let w = random_word(&mut rng, 12, &GAMMA_ALPHABET);
            assert_eq!(ctx.phi(&w.inverse()), ctx.phi(&w).neg(), "inverse rule at {w}");
        }

        let involutions = [
            Word::from_letters([Letter::Tau]),
            Word::from_letters([Letter::G1, Letter::Tau]),
            Word::from_letters([Letter::Tau, Letter::G2]),
        ];
        for xi in &involutions {
            assert_eq!(ctx.phi(xi), zero);
        }
        for _ in 0..50 {
            let w = random_word(&mut rng, 10, &GAMMA_ALPHABET);
            let xi = involutions.choose(&mut rng).unwrap();
            let conj = w.concat(xi).concat(&w.inverse());
            assert_eq!(ctx.phi(&conj), zero, "conjugated involution {conj}");
        }

        let t_word = Word::from_letters([Letter::G1, Letter::G2Inv, Letter::Tau]);
        for k in -10i64..=10 {
            let expected = FieldValue::from_integer(k, params.spec()).mul(params.t());
            assert_eq!(ctx.phi(&repeat_word(&t_word, k)), expected, "φ(T^{k})");
        }
    }
    report(
        3,
        "inverse rule (1500 words), involutions and conjugates, φ(T^k) = k·t for |k| <= 10",
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_04_symbol_well_definedness() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let p_word = Word::from_letters([Letter::G1, Letter::G2Inv, Letter::G1Inv, Letter::G2]);
    for params in [modular(), pseudomodular(), quadratic_group()] {
        let ctx = CochainContext::new(&params);

        // S(w·P^k) = S(w)
        let mut checked = 0;
        while checked < 200 {
            let w = random_word(&mut rng, 10, &DELTA_ALPHABET);
            let Ok(s) = ctx.symbol(&w) else {
                continue; // w stabilizes infinity; resample
            };
            let k = rng.gen_range(-5i64..=5);
            assert_eq!(
                ctx.symbol(&w.concat(&repeat_word(&p_word, k))).unwrap(),
                s,
                "S not parabolic-invariant at {w}, k={k}"
            );
            checked += 1;
        }

        // φ invariant under cancelling-pair insertion, and under rewriting
        // a letter g^±1 as τ g∓1 τ (a different word for the same element)
        for _ in 0..200 {
            let w = random_word(&mut rng, 10, &GAMMA_ALPHABET);
            let phi = ctx.phi(&w);
            let mut letters = w.letters().to_vec();
            let l = *GAMMA_ALPHABET.choose(&mut rng).unwrap();
            let pos = rng.gen_range(0..=letters.len());
            letters.insert(pos, l.inverse());
            letters.insert(pos, l);
            assert_eq!(ctx.phi(&Word::from_letters(letters)), phi);

            if let Some(pos) = w
                .letters()
                .iter()
                .position(|l| !matches!(l, Letter::Tau))
            {
                let mut rewritten: Vec<Letter> = w.letters()[..pos].to_vec();
                rewritten.extend([Letter::Tau, w.letters()[pos].inverse(), Letter::Tau]);
                rewritten.extend(&w.letters()[pos + 1..]);
                assert_eq!(
                    ctx.phi(&Word::from_letters(rewritten)),
                    phi,
                    "word independence at {w}"
                );
            }
        }
    }
    report(
        4,
        "S(w·P^k) = S(w) (600 pairs); φ stable under pair insertion and τ-rewrites (600 words)",
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_05_fixed_values() {
    let started = Instant::now();
    let cfg = ReductionConfig::default();
    let mut exploratory = String::new();
    for (name, params, gated) in [
        ("Δ(1,6)", modular(), true),
        ("Δ(3/5,4)", pseudomodular(), true),
        ("Δ(1,1+√13)", quadratic_group(), false),
    ] {
        let spec = params.spec();
        let zero = ProjPoint::Finite(FieldValue::zero(spec));
        let points = [
            FieldValue::zero(spec),
            params.u2().clone(),
            params.t().sub(&FieldValue::one(spec)),
        ];
        for kappa in points {
            match dedekind_symbol(&params, &ProjPoint::Finite(kappa.clone()), &cfg) {
                Ok(value) => assert_eq!(value, zero, "{name}: S({kappa}) != 0"),
                Err(err) if !gated => {
                    exploratory = format!("; exploratory {name}: {kappa} not reduced ({err})");
                }
                Err(err) => panic!("{name}: reduction of {kappa} failed: {err}"),
            }
        }
    }
    let detail = format!(
        "S(0) = S(u²) = S(t-1) = 0 in all three groups{}",
        if exploratory.is_empty() {
            " (quadratic reductions succeeded)"
        } else {
            exploratory.as_str()
        }
    );
    report(5, &detail, started, Duration::from_secs(10));
}

#[test]
fn criterion_06_periodicity() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    let cfg = ReductionConfig::default();
    let mut checked = 0usize;
    for params in [modular(), pseudomodular()] {
        for _ in 0..100 {
            let p = rng.gen_range(-200i64..=200);
            let q = rng.gen_range(1i64..=60);
            let kappa = FieldValue::from_ratio(p, q, params.spec()).unwrap();
            let shifted = kappa.add(params.two_t());
            let s1 = dedekind_symbol(&params, &ProjPoint::Finite(kappa), &cfg).unwrap();
            let s2 = dedekind_symbol(&params, &ProjPoint::Finite(shifted), &cfg).unwrap();
            assert_eq!(s1, s2, "S(κ + 2t) != S(κ) at {p}/{q}");
            checked += 1;
        }
    }
    report(
        6,
        &format!("S(κ + 2t) = S(κ) on {checked} random rational cusps"),
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_07_modular_proportionality() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    let params = modular();
    let cfg = ReductionConfig::default();
    let mut rho: Option<FieldValue> = None;
    let mut checked = 0usize;
    while checked < 200 {
        let c = rng.gen_range(1i64..=500);
        let a = rng.gen_range(-500i64..=500);
        if BigInt::from(a).gcd(&BigInt::from(c)) != BigInt::one() {
            continue;
        }
        let kappa = FieldValue::from_ratio(a, c, FieldSpec::Rational).unwrap();
        let s_delta = dedekind_symbol(&params, &ProjPoint::Finite(kappa), &cfg)
            .unwrap_or_else(|e| panic!("reduction failed at {a}/{c}: {e}"));
        let ProjPoint::Finite(s_delta) = s_delta else {
            panic!("finite cusp produced infinite symbol");
        };
        let classical = classical_symbol(&BigInt::from(a), &BigInt::from(c)).unwrap();
        if rho.is_none() && !classical.is_zero() {
            rho = Some(s_delta.div(&classical));
        }
        match &rho {
            Some(rho) => assert_eq!(
                s_delta,
                rho.mul(&classical),
                "proportionality fails at {a}/{c}"
            ),
            None => assert!(
                s_delta.is_zero(),
                "classical symbol vanishes but S = {s_delta} at {a}/{c}"
            ),
        }
        checked += 1;
    }
    let rho = rho.expect("some sample had a nonzero classical value");
    // ρ is empirical; under this implementation's orientation it is -1
    assert_eq!(rho, FieldValue::from_integer(-1, FieldSpec::Rational));
    report(
        7,
        &format!("S_Δ(1,6)(a/c) = ρ·12·sign(c)·s(a,c) on 200 samples, ρ = {rho}"),
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_08_classical_oracle_self_checks() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1008);
    let q = FieldSpec::Rational;
    let rat = |n: i64, d: i64| FieldValue::from_ratio(n, d, q).unwrap();
    let s = |a: i64, b: i64| gds_core::dedekind_sum(&CoprimePair::new(a, b).unwrap());

    for _ in 0..500 {
        let b = rng.gen_range(2i64..=500);
        let mut a = rng.gen_range(1i64..b);
        while a.gcd(&b) != 1 {
            a = rng.gen_range(1i64..b);
        }
        let lhs = s(a, b).add(&s(b, a));
        let rhs = rat(-1, 4).add(
            &rat(a, b)
                .add(&rat(b, a))
                .add(&rat(1, a * b))
                .div(&rat(12, 1)),
        );
        assert_eq!(lhs, rhs, "reciprocity fails at ({a}, {b})");
    }

    let mut cot_pairs = 0usize;
    for b in 2i64..=200 {
        for a in 1..b {
            if a.gcd(&b) != 1 {
                continue;
            }
            let pair = CoprimePair::new(a, b).unwrap();
            assert!(
                gds_core::cotangent_check(&pair, 1e-9),
                "cotangent formula off at ({a}, {b})"
            );
            cot_pairs += 1;
        }
    }
    report(
        8,
        &format!("reciprocity on 500 random pairs; cotangent formula on all {cot_pairs} pairs with b <= 200"),
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_09_pseudomodular_coverage() {
    let started = Instant::now();
    let params = pseudomodular();
    let cfg = ReductionConfig::default();
    let mut reduced = 0usize;
    for q in 1i64..=40 {
        for p in -40i64..=40 {
            if p.gcd(&q) != 1 {
                continue;
            }
            let kappa = ProjPoint::Finite(
                FieldValue::from_ratio(p, q, FieldSpec::Rational).unwrap(),
            );
            let r = reduce_cusp(&params, &kappa, &cfg)
                .unwrap_or_else(|e| panic!("NotReduced at {p}/{q}: {e}"));
            assert_eq!(r.matrix.apply(&ProjPoint::Infinity), kappa);
            reduced += 1;
        }
    }
    report(
        9,
        &format!("Δ(3/5,4): all {reduced} reduced p/q with |p| <= 40, 0 < q <= 40 reduced"),
        started,
        Duration::from_secs(60),
    );
}

/// 100-digit scaled-integer oracle for sign and floor over ℚ(√13),
/// independent of the exact-arithmetic implementation under test.
struct NumericOracle {
    scale: BigInt,
    sqrt_d_scaled: BigInt,
}

impl NumericOracle {
    fn new(d: u32) -> Self {
        let scale = BigInt::from(10).pow(110);
        let sqrt_d_scaled = (BigInt::from(d) * &scale * &scale).sqrt();
        NumericOracle {
            scale,
            sqrt_d_scaled,
        }
    }

    fn scaled_numer(&self, v: &FieldValue) -> BigInt {
        v.numer_rational() * &self.scale + v.coeff_radical() * &self.sqrt_d_scaled
    }

    fn sign(&self, v: &FieldValue) -> i32 {
        if v.numer_rational().is_zero() && v.coeff_radical().is_zero() {
            return 0;
        }
        let n = self.scaled_numer(v);
        if n.is_negative() {
            -1
        } else {
            1
        }
    }

    fn floor(&self, v: &FieldValue) -> BigInt {
        self.scaled_numer(v).div_floor(&(v.denom() * &self.scale))
    }
}

#[test]
fn criterion_10_quadratic_arithmetic_oracle() {
    let started = Instant::now();
    let spec = FieldSpec::quadratic(13).unwrap();
    let oracle = NumericOracle::new(13);
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    for i in 0..10_000 {
        let a = rng.gen_range(-1_000_000i64..=1_000_000);
        let b = rng.gen_range(-1_000_000i64..=1_000_000);
        let c = rng.gen_range(1i64..=1_000_000);
        let v = FieldValue::from_parts(a, b, c, spec).unwrap();
        assert_eq!(v.sign(), oracle.sign(&v), "sign mismatch at sample {i}: {v}");
        assert_eq!(v.floor(), oracle.floor(&v), "floor mismatch at sample {i}: {v}");
    }
    report(
        10,
        "sign and floor agree with the 100-digit oracle on 10^4 random elements of ℚ(√13)",
        started,
        Duration::from_secs(10),
    );
}
