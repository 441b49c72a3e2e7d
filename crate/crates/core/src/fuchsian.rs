//! The once-punctured-torus groups `Δ(u², 2t)` and their extension by the
//! hyperelliptic involution.
//!
//! Group elements are carried as words over the letters
//! `{g₁±1, g₂±1, τ}`; projective matrix representatives with entries in `K`
//! are derived from words. Matrices are canonically normalized so that
//! equality of representatives is equality of group elements in `PGL(2, K)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::exactfield::{FieldSpec, FieldValue, ProjPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    /// Parameters violate `u² > 0` or `t > u² + 1`.
    #[error("parameter constraint violated: {0}")]
    ConstraintViolation(String),
    /// Parameters drawn from different fields.
    #[error("parameters must belong to the same field")]
    FieldMismatch,
    /// A matrix with zero determinant cannot represent a group element.
    #[error("matrix is singular")]
    SingularMatrix,
    /// The commutator consistency check failed during construction.
    #[error("generator self-check failed: commutator is not the expected parabolic")]
    SelfCheckFailed,
    /// An unknown character in a serialized word.
    #[error("invalid word token {0:?}")]
    InvalidToken(char),
}

/// A 2×2 matrix over `K` with nonzero determinant, canonically normalized,
/// representing an element of `PGL(2, K)`.
///
/// Normalization divides by the first nonzero entry in the order
/// `(m21, m11, m12, m22)` and then clears denominators, which leaves all
/// entries with denominator one, integer coordinates of overall gcd one,
/// and a positive pivot. Two matrices represent the same projective element
/// iff their canonical forms are identical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjMatrix {
    m11: FieldValue,
    m12: FieldValue,
    m21: FieldValue,
    m22: FieldValue,
}

impl ProjMatrix {
    pub fn new(
        m11: FieldValue,
        m12: FieldValue,
        m21: FieldValue,
        m22: FieldValue,
    ) -> Result<Self, GroupError> {
        let spec = m11.spec();
        if [&m12, &m21, &m22].iter().any(|m| m.spec() != spec) {
            return Err(GroupError::FieldMismatch);
        }
        let det = m11.mul(&m22).sub(&m12.mul(&m21));
        if det.is_zero() {
            return Err(GroupError::SingularMatrix);
        }
        Ok(Self::canonicalize(m11, m12, m21, m22))
    }

    fn canonicalize(
        m11: FieldValue,
        m12: FieldValue,
        m21: FieldValue,
        m22: FieldValue,
    ) -> Self {
        let spec = m11.spec();
        let pivot = [&m21, &m11, &m12, &m22]
            .into_iter()
            .find(|e| !e.is_zero())
            .expect("nonsingular matrix has a nonzero entry")
            .clone();
        let inv = pivot.inverse();
        let mut entries = [m11.mul(&inv), m12.mul(&inv), m21.mul(&inv), m22.mul(&inv)];
        let mut lcm = BigInt::one();
        for e in &entries {
            lcm = lcm.lcm(e.denom());
        }
        if !lcm.is_one() {
            let scale = FieldValue::from_integer(lcm, spec);
            for e in &mut entries {
                *e = e.mul(&scale);
            }
        }
        let [m11, m12, m21, m22] = entries;
        ProjMatrix { m11, m12, m21, m22 }
    }

    pub fn identity(spec: FieldSpec) -> Self {
        ProjMatrix {
            m11: FieldValue::one(spec),
            m12: FieldValue::zero(spec),
            m21: FieldValue::zero(spec),
            m22: FieldValue::one(spec),
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.m11.spec()
    }

    pub fn entries(&self) -> [&FieldValue; 4] {
        [&self.m11, &self.m12, &self.m21, &self.m22]
    }

    pub fn m11(&self) -> &FieldValue {
        &self.m11
    }

    pub fn m12(&self) -> &FieldValue {
        &self.m12
    }

    pub fn m21(&self) -> &FieldValue {
        &self.m21
    }

    pub fn m22(&self) -> &FieldValue {
        &self.m22
    }

    /// Determinant of the canonical representative. Its sign is projectively
    /// meaningful (scaling multiplies the determinant by a square).
    pub fn det(&self) -> FieldValue {
        self.m11.mul(&self.m22).sub(&self.m12.mul(&self.m21))
    }

    pub fn mul(&self, other: &ProjMatrix) -> ProjMatrix {
        Self::canonicalize(
            self.m11.mul(&other.m11).add(&self.m12.mul(&other.m21)),
            self.m11.mul(&other.m12).add(&self.m12.mul(&other.m22)),
            self.m21.mul(&other.m11).add(&self.m22.mul(&other.m21)),
            self.m21.mul(&other.m12).add(&self.m22.mul(&other.m22)),
        )
    }

    /// Projective inverse via the adjugate.
    pub fn inverse(&self) -> ProjMatrix {
        Self::canonicalize(
            self.m22.clone(),
            self.m12.neg(),
            self.m21.neg(),
            self.m11.clone(),
        )
    }

    /// The fractional-linear action on `K ∪ {∞}`:
    /// `∞ ↦ m11/m21` (or `∞` when `m21 = 0`), and
    /// `x ↦ (m11·x + m12)/(m21·x + m22)` with the pole sent to `∞`.
    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        match p {
            ProjPoint::Infinity => {
                if self.m21.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(self.m11.div(&self.m21))
                }
            }
            ProjPoint::Finite(x) => {
                let den = self.m21.mul(x).add(&self.m22);
                if den.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(self.m11.mul(x).add(&self.m12).div(&den))
                }
            }
        }
    }
}

impl fmt::Display for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m11, self.m12, self.m21, self.m22
        )
    }
}

/// Generator alphabet of `Γ = ⟨g₁, g₂, τ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    G1,
    G1Inv,
    G2,
    G2Inv,
    Tau,
}

impl Letter {
    /// τ is its own inverse projectively.
    pub fn inverse(self) -> Letter {
        match self {
            Letter::G1 => Letter::G1Inv,
            Letter::G1Inv => Letter::G1,
            Letter::G2 => Letter::G2Inv,
            Letter::G2Inv => Letter::G2,
            Letter::Tau => Letter::Tau,
        }
    }

    pub fn token(self) -> char {
        match self {
            Letter::G1 => 'a',
            Letter::G1Inv => 'A',
            Letter::G2 => 'b',
            Letter::G2Inv => 'B',
            Letter::Tau => 's',
        }
    }

    pub fn from_token(c: char) -> Result<Letter, GroupError> {
        match c {
            'a' => Ok(Letter::G1),
            'A' => Ok(Letter::G1Inv),
            'b' => Ok(Letter::G2),
            'B' => Ok(Letter::G2Inv),
            's' => Ok(Letter::Tau),
            other => Err(GroupError::InvalidToken(other)),
        }
    }
}

/// A freely reduced word over the generator alphabet.
///
/// Free reduction cancels adjacent inverse pairs, including `τ τ` (τ squares
/// to a scalar). Reduction never changes the group element, so evaluation via
/// [`GroupParams::word_matrix`] is reduction-invariant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Word {
        Word::default()
    }

    /// Builds a word, freely reducing the letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut stack: Vec<Letter> = Vec::new();
        for letter in letters {
            if stack.last().copied() == Some(letter.inverse()) {
                stack.pop();
            } else {
                stack.push(letter);
            }
        }
        Word { letters: stack }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Whether the element lies in `Δ` (the index-two subgroup not moved by
    /// τ). Since τ conjugates `Δ` to itself, membership is the parity of the
    /// τ count, and an even-τ word can always be rewritten without τ.
    pub fn in_delta(&self) -> bool {
        self.letters.iter().filter(|l| **l == Letter::Tau).count() % 2 == 0
    }

    pub fn contains_tau(&self) -> bool {
        self.letters.contains(&Letter::Tau)
    }

    /// Token form: `a A b B s` for `g₁ g₁⁻¹ g₂ g₂⁻¹ τ`; the empty word is `e`.
    pub fn tokens(&self) -> String {
        if self.letters.is_empty() {
            "e".to_string()
        } else {
            self.letters.iter().map(|l| l.token()).collect()
        }
    }

    pub fn parse_tokens(text: &str) -> Result<Word, GroupError> {
        if text == "e" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            letters.push(Letter::from_token(c)?);
        }
        Ok(Word::from_letters(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tokens())
    }
}

/// Freely reduces a letter sequence. Evaluation through
/// [`GroupParams::word_matrix`] is unchanged by the reduction.
pub fn free_reduce(letters: &[Letter]) -> Word {
    Word::from_letters(letters.iter().copied())
}

/// Canonical projective representatives of the generators and the parabolics.
///
/// With `s = √(t - 1 - u²)` the scalars dropped from the shipped
/// representatives are: `g₁` by `s`, `g₂` by `u·s`, `τ` by `u/2`. All four
/// have entries in `K` and positive determinant.
#[derive(Debug, Clone)]
pub struct Generators {
    pub g1: ProjMatrix,
    pub g2: ProjMatrix,
    pub tau: ProjMatrix,
    /// `T = g₁g₂⁻¹τ = [[1, t], [0, 1]]`, generating the parabolic subgroup
    /// of `Γ` fixing `∞`.
    pub t_mat: ProjMatrix,
    /// `P = T² = [[1, 2t], [0, 1]]`, generating the stabilizer of `∞` in `Δ`.
    pub p_mat: ProjMatrix,
    pub g1_inv: ProjMatrix,
    pub g2_inv: ProjMatrix,
}

/// Validated parameters `(u², 2t)` of `Δ(u², 2t)`, with the generator
/// matrices precomputed.
#[derive(Debug, Clone)]
pub struct GroupParams {
    u2: FieldValue,
    t: FieldValue,
    two_t: FieldValue,
    spec: FieldSpec,
    gens: Generators,
}

impl GroupParams {
    /// Builds the group from `u²` and the cusp width `2t`, checking
    /// `u² > 0` and `t > u² + 1` by exact sign, and verifying that the
    /// commutator `g₁g₂⁻¹g₁⁻¹g₂` evaluates to the parabolic `[[1, 2t], [0, 1]]`.
    pub fn new(u2: FieldValue, two_t: FieldValue) -> Result<GroupParams, GroupError> {
        if u2.spec() != two_t.spec() {
            return Err(GroupError::FieldMismatch);
        }
        let spec = u2.spec();
        if u2.sign() <= 0 {
            return Err(GroupError::ConstraintViolation(format!(
                "u² must be positive, got {u2}"
            )));
        }
        let two = FieldValue::from_integer(2, spec);
        let t = two_t.div(&two);
        let one = FieldValue::one(spec);
        if t.sub(&u2).sub(&one).sign() <= 0 {
            return Err(GroupError::ConstraintViolation(format!(
                "t must exceed u² + 1, got t = {t}, u² = {u2}"
            )));
        }

        let zero = FieldValue::zero(spec);
        let t_minus_1 = t.sub(&one);
        let g1 = ProjMatrix::new(t_minus_1.clone(), u2.clone(), one.clone(), one.clone())?;
        let g2 = ProjMatrix::new(u2.clone(), u2.clone(), one.clone(), t.sub(&u2))?;
        let tau = ProjMatrix::new(zero.clone(), u2.clone(), one.neg(), zero.clone())?;
        let t_mat = ProjMatrix::new(one.clone(), t.clone(), zero.clone(), one.clone())?;
        let p_mat = ProjMatrix::new(one.clone(), two_t.clone(), zero, one)?;
        let gens = Generators {
            g1_inv: g1.inverse(),
            g2_inv: g2.inverse(),
            g1,
            g2,
            tau,
            t_mat,
            p_mat,
        };

        let params = GroupParams {
            u2,
            t,
            two_t,
            spec,
            gens,
        };
        let commutator = params.word_matrix(&Word::from_letters([
            Letter::G1,
            Letter::G2Inv,
            Letter::G1Inv,
            Letter::G2,
        ]));
        if commutator != params.gens.p_mat {
            return Err(GroupError::SelfCheckFailed);
        }
        Ok(params)
    }

    pub fn u2(&self) -> &FieldValue {
        &self.u2
    }

    pub fn t(&self) -> &FieldValue {
        &self.t
    }

    pub fn two_t(&self) -> &FieldValue {
        &self.two_t
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn generators(&self) -> &Generators {
        &self.gens
    }

    pub fn letter_matrix(&self, letter: Letter) -> &ProjMatrix {
        match letter {
            Letter::G1 => &self.gens.g1,
            Letter::G1Inv => &self.gens.g1_inv,
            Letter::G2 => &self.gens.g2,
            Letter::G2Inv => &self.gens.g2_inv,
            Letter::Tau => &self.gens.tau,
        }
    }

    /// Left-to-right product of the letter representatives; the empty word
    /// maps to the identity.
    pub fn word_matrix(&self, word: &Word) -> ProjMatrix {
        let mut out = ProjMatrix::identity(self.spec);
        for letter in word.letters() {
            out = out.mul(self.letter_matrix(*letter));
        }
        out
    }
}
