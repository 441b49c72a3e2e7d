//! Exact arithmetic over `K = ℚ` or `K = ℚ(√d)` for a square-free `d ≥ 2`.
//!
//! Every value is a triple of arbitrary-precision integers `(a, b, c)`
//! representing `(a + b√d)/c`, kept in a canonical form (`c > 0`,
//! `gcd(a, b, c) = 1`, `b = 0` in the rational case) so that equality of
//! values is equality of representations. Signs, floors and decimal
//! approximations are decided by integer arithmetic alone; there is no
//! floating-point fallback anywhere in this module.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Errors produced by field construction and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    /// The input text does not match the value grammar.
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    /// A `rt<d>` term was supplied under a rational spec, or with the wrong
    /// radicand for the quadratic spec in force.
    #[error("value does not belong to the requested field")]
    WrongField,
    /// A denominator of zero appeared in the input.
    #[error("zero denominator")]
    ZeroDenominator,
    /// The requested radicand is not square-free or is below 2.
    #[error("radicand {0} is not a square-free integer >= 2")]
    NotSquarefree(u32),
}

/// Describes the field `K`: the rationals, or a real quadratic field `ℚ(√d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Quadratic { d: u32 },
}

impl FieldSpec {
    pub fn rational() -> Self {
        FieldSpec::Rational
    }

    /// Builds the spec for `ℚ(√d)`. Non-square-free radicands are rejected
    /// rather than silently reduced, so that a spec value names exactly one
    /// presentation of the field.
    pub fn quadratic(d: u32) -> Result<Self, FieldError> {
        if d < 2 || !is_squarefree(d) {
            return Err(FieldError::NotSquarefree(d));
        }
        Ok(FieldSpec::Quadratic { d })
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self, FieldSpec::Quadratic { .. })
    }

    /// The radicand, when quadratic.
    pub fn radicand(&self) -> Option<u32> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Quadratic { d } => Some(*d),
        }
    }
}

fn is_squarefree(d: u32) -> bool {
    let mut f = 2u64;
    let d = u64::from(d);
    while f * f <= d {
        if d % (f * f) == 0 {
            return false;
        }
        f += 1;
    }
    true
}

/// An exact element `(a + b√d)/c` of `K`, in canonical form.
///
/// Canonical form: `c > 0`, `gcd(a, b, c) = 1`, and `b = 0` whenever the
/// spec is rational. Two values are equal iff their representations are
/// identical, which also makes hashing sound.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldValue {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    spec: FieldSpec,
}

impl FieldValue {
    fn normalized(mut a: BigInt, mut b: BigInt, mut c: BigInt, spec: FieldSpec) -> Self {
        assert!(!c.is_zero(), "denominator must be nonzero");
        if spec == FieldSpec::Rational {
            assert!(b.is_zero(), "rational values carry no radical part");
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        FieldValue { a, b, c, spec }
    }

    pub fn zero(spec: FieldSpec) -> Self {
        FieldValue {
            a: BigInt::zero(),
            b: BigInt::zero(),
            c: BigInt::one(),
            spec,
        }
    }

    pub fn one(spec: FieldSpec) -> Self {
        FieldValue {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::one(),
            spec,
        }
    }

    pub fn from_integer<T: Into<BigInt>>(n: T, spec: FieldSpec) -> Self {
        FieldValue {
            a: n.into(),
            b: BigInt::zero(),
            c: BigInt::one(),
            spec,
        }
    }

    pub fn from_ratio<T: Into<BigInt>, U: Into<BigInt>>(
        num: T,
        den: U,
        spec: FieldSpec,
    ) -> Result<Self, FieldError> {
        let den = den.into();
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        Ok(Self::normalized(num.into(), BigInt::zero(), den, spec))
    }

    /// Builds `(a + b√d)/c` under a quadratic spec.
    pub fn from_parts<T: Into<BigInt>, U: Into<BigInt>, V: Into<BigInt>>(
        a: T,
        b: U,
        c: V,
        spec: FieldSpec,
    ) -> Result<Self, FieldError> {
        let b = b.into();
        if !b.is_zero() && !spec.is_quadratic() {
            return Err(FieldError::WrongField);
        }
        let c = c.into();
        if c.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        Ok(Self::normalized(a.into(), b, c, spec))
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn numer_rational(&self) -> &BigInt {
        &self.a
    }

    pub fn coeff_radical(&self) -> &BigInt {
        &self.b
    }

    pub fn denom(&self) -> &BigInt {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True when the value lies in `ℚ` (no radical part).
    pub fn is_rational_value(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.c.is_one()
    }

    fn d_bigint(&self) -> BigInt {
        match self.spec {
            FieldSpec::Rational => BigInt::zero(),
            FieldSpec::Quadratic { d } => BigInt::from(d),
        }
    }

    fn assert_same_spec(&self, other: &FieldValue) {
        assert_eq!(
            self.spec, other.spec,
            "cannot combine values from different fields"
        );
    }

    pub fn add(&self, other: &FieldValue) -> FieldValue {
        self.assert_same_spec(other);
        FieldValue::normalized(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            &self.c * &other.c,
            self.spec,
        )
    }

    pub fn sub(&self, other: &FieldValue) -> FieldValue {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldValue {
        FieldValue {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            spec: self.spec,
        }
    }

    pub fn mul(&self, other: &FieldValue) -> FieldValue {
        self.assert_same_spec(other);
        let d = self.d_bigint();
        FieldValue::normalized(
            &self.a * &other.a + &self.b * &other.b * &d,
            &self.a * &other.b + &self.b * &other.a,
            &self.c * &other.c,
            self.spec,
        )
    }

    /// Multiplicative inverse. Panics on zero; callers guard poles themselves.
    pub fn inverse(&self) -> FieldValue {
        assert!(!self.is_zero(), "inverse of zero");
        // 1 / ((a + b√d)/c) = c(a - b√d) / (a² - b²d); the norm a² - b²d is
        // nonzero because d is square-free.
        let d = self.d_bigint();
        let norm = &self.a * &self.a - &self.b * &self.b * &d;
        FieldValue::normalized(&self.c * &self.a, -(&self.c * &self.b), norm, self.spec)
    }

    pub fn div(&self, other: &FieldValue) -> FieldValue {
        self.mul(&other.inverse())
    }

    /// Exact sign in `{-1, 0, +1}`, decided by integer comparisons only.
    ///
    /// For `a + b√d` with mixed signs the comparison of `|a|` against
    /// `|b|√d` is settled by squaring: `a² <=> b²·d`.
    pub fn sign(&self) -> i32 {
        let sa = bigint_sign(&self.a);
        if self.b.is_zero() {
            return sa;
        }
        let sb = bigint_sign(&self.b);
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        let d = self.d_bigint();
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * &d;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    /// Compares `self` with the integer `m` exactly.
    fn cmp_integer(&self, m: &BigInt) -> Ordering {
        // sign of (a - m·c) + b√d, the positive denominator c is irrelevant
        let shifted = FieldValue {
            a: &self.a - m * &self.c,
            b: self.b.clone(),
            c: BigInt::one(),
            spec: self.spec,
        };
        shifted.sign().cmp(&0)
    }

    /// Greatest integer `n <= self`, decided exactly.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.div_floor(&self.c);
        }
        // Bracket the radical part: floor(b√d) via the integer square root
        // of b²d (never a perfect square for b != 0, d square-free).
        let d = self.d_bigint();
        let sq = &self.b * &self.b * &d;
        let root = sq.sqrt();
        let radical_floor = if self.b.is_positive() {
            root
        } else {
            -root - BigInt::one()
        };
        let mut n = (&self.a + radical_floor).div_floor(&self.c);
        // The bracket is off by at most one; refine with exact comparisons.
        while self.cmp_integer(&(&n + BigInt::one())) != Ordering::Less {
            n += BigInt::one();
        }
        while self.cmp_integer(&n) == Ordering::Less {
            n -= BigInt::one();
        }
        n
    }

    /// Decimal expansion with `digits` places after the point, rounded
    /// half-to-even at the last digit. Computed from integer arithmetic;
    /// every printed digit is correct.
    pub fn approx(&self, digits: usize) -> String {
        assert!(
            (1..=1000).contains(&digits),
            "digits must lie in 1..=1000"
        );
        let scale = pow10(digits);
        let scaled = self.mul(&FieldValue::from_integer(scale.clone(), self.spec));
        let n = round_half_even(&scaled);
        let (sign, mag) = if n.is_negative() {
            ("-", -&n)
        } else {
            ("", n.clone())
        };
        let (int_part, frac_part) = mag.div_rem(&scale);
        let frac_str = frac_part.to_string();
        format!(
            "{sign}{int_part}.{}{frac_str}",
            "0".repeat(digits - frac_str.len())
        )
    }
}

/// Nearest integer to `x`, ties to even. Exact.
fn round_half_even(x: &FieldValue) -> BigInt {
    let f = x.floor();
    // compare the fractional part against 1/2 via sign(2x - 2f - 1)
    let two = FieldValue::from_integer(2, x.spec);
    let twice = x.mul(&two);
    let threshold = FieldValue::from_integer(&f * BigInt::from(2) + BigInt::one(), x.spec);
    match twice.sub(&threshold).sign() {
        s if s < 0 => f,
        s if s > 0 => f + BigInt::one(),
        _ => {
            if f.is_even() {
                f
            } else {
                f + BigInt::one()
            }
        }
    }
}

fn pow10(digits: usize) -> BigInt {
    let mut out = BigInt::one();
    let ten = BigInt::from(10);
    for _ in 0..digits {
        out *= &ten;
    }
    out
}

fn bigint_sign(x: &BigInt) -> i32 {
    match x.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

impl PartialOrd for FieldValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.spec != other.spec {
            return None;
        }
        Some(self.sub(other).sign().cmp(&0))
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            }
        } else {
            let d = self.spec.radicand().expect("radical part implies quadratic spec");
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(
                f,
                "({}{}{}*rt{})/{}",
                self.a,
                sign,
                self.b.magnitude(),
                d,
                self.c
            )
        }
    }
}

/// A point of the boundary `K ∪ {∞}`; the coordinate of a cusp.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Finite(FieldValue),
    Infinity,
}

impl ProjPoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn finite(&self) -> Option<&FieldValue> {
        match self {
            ProjPoint::Finite(v) => Some(v),
            ProjPoint::Infinity => None,
        }
    }
}

impl From<FieldValue> for ProjPoint {
    fn from(v: FieldValue) -> Self {
        ProjPoint::Finite(v)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(v) => v.fmt(f),
            ProjPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Parses `text` against the exact value grammar:
///
/// ```text
/// RATIONAL   := INT | INT "/" POSINT
/// QUAD       := "(" INT SIGNEDTERM ")" "/" POSINT | RATIONAL
/// SIGNEDTERM := ("+" | "-") INT "*" "rt" POSINT
/// ```
///
/// Examples: `3/5`, `-7`, `(1+1*rt13)/2`. The result is canonical, so
/// parsing then formatting round-trips.
pub fn parse(text: &str, spec: FieldSpec) -> Result<FieldValue, FieldError> {
    let mut cur = Cursor::new(text.trim());
    let value = if cur.peek() == Some(b'(') {
        cur.bump();
        let a = cur.int()?;
        let sign = match cur.peek() {
            Some(b'+') => 1,
            Some(b'-') => -1,
            _ => return Err(cur.syntax("expected '+' or '-' before the radical term")),
        };
        cur.bump();
        let b_mag = cur.int()?;
        cur.expect(b'*')?;
        cur.expect(b'r')?;
        cur.expect(b't')?;
        let d = cur.posint()?;
        cur.expect(b')')?;
        cur.expect(b'/')?;
        let c = cur.posint()?;
        if c.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        let b = b_mag * BigInt::from(sign);
        // the radicand must name the field of the spec, even when b = 0
        match spec {
            FieldSpec::Quadratic { d: want } if BigInt::from(want) == d => {}
            _ => return Err(FieldError::WrongField),
        }
        FieldValue::normalized(a, b, c, spec)
    } else {
        let a = cur.int()?;
        let c = if cur.peek() == Some(b'/') {
            cur.bump();
            let c = cur.posint()?;
            if c.is_zero() {
                return Err(FieldError::ZeroDenominator);
            }
            c
        } else {
            BigInt::one()
        };
        FieldValue::normalized(a, BigInt::zero(), c, spec)
    };
    if !cur.at_end() {
        return Err(cur.syntax("trailing input after value"));
    }
    Ok(value)
}

/// Parses a boundary point: `inf` or a field value.
pub fn parse_point(text: &str, spec: FieldSpec) -> Result<ProjPoint, FieldError> {
    if text.trim() == "inf" {
        return Ok(ProjPoint::Infinity);
    }
    parse(text, spec).map(ProjPoint::Finite)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn at_end(&self) -> bool {
        self.pos == self.bytes.len()
    }

    fn syntax(&self, msg: &str) -> FieldError {
        FieldError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), FieldError> {
        if self.peek() == Some(byte) {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(&format!("expected '{}'", byte as char)))
        }
    }

    fn digits(&mut self) -> Result<BigInt, FieldError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.bump();
        }
        if self.pos == start {
            return Err(self.syntax("expected a digit"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digit run parses as integer"))
    }

    fn int(&mut self) -> Result<BigInt, FieldError> {
        let negative = self.peek() == Some(b'-');
        if negative {
            self.bump();
        }
        let mag = self.digits()?;
        Ok(if negative { -mag } else { mag })
    }

    fn posint(&mut self) -> Result<BigInt, FieldError> {
        self.digits()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for &FieldValue {
            type Output = FieldValue;
            fn $method(self, rhs: &FieldValue) -> FieldValue {
                FieldValue::$method(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl std::ops::Neg for &FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        FieldValue::neg(self)
    }
}
