//! The area cocycle `ε`, the `K`-valued cochain `φ`, the entry function `χ`
//! and the symbol `S = φ - χ`.
//!
//! `ε(A, B)` is the oriented ideal-triangle area `area(∞, A∞, AB∞)/π`,
//! computed here through its sign reformulation `sign(AB∞ - A∞)` (zero when
//! either point is `∞`). `φ` is the unique `K`-valued 1-cochain on
//! `Γ = ⟨g₁, g₂, τ⟩` with coboundary `t·ε`; uniqueness makes the value of a
//! word independent of the word chosen for a group element, so `φ` is
//! evaluated by peeling letters:
//!
//! ```text
//! φ(e) = 0,    φ(ℓ·R) = φ(ℓ) + φ(R) + t·sign((ℓR)∞ - ℓ∞)
//! ```
//!
//! with base values `φ(g₁) = φ(g₂) = t`, `φ(g₁⁻¹) = φ(g₂⁻¹) = -t` (inverse
//! rule) and `φ(τ) = 0` (projective involution).

use thiserror::Error;

use crate::exactfield::{FieldValue, ProjPoint};
use crate::fuchsian::{GroupParams, Letter, ProjMatrix, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CochainError {
    /// `χ` (and hence `S`) is undefined on the stabilizer of `∞`.
    #[error("matrix stabilizes infinity (lower-left entry is zero)")]
    StabilizesInfinity,
}

/// Evaluation context: the group together with the forced constants of the
/// cochain, `λ = -t` and the base table on letters.
#[derive(Debug, Clone)]
pub struct CochainContext<'a> {
    params: &'a GroupParams,
    lambda: FieldValue,
}

impl<'a> CochainContext<'a> {
    pub fn new(params: &'a GroupParams) -> Self {
        CochainContext {
            lambda: params.t().neg(),
            params,
        }
    }

    pub fn params(&self) -> &GroupParams {
        self.params
    }

    /// The cocycle scale constant, always `-t`.
    pub fn lambda(&self) -> &FieldValue {
        &self.lambda
    }

    /// Base values of `φ` on single letters. Inverse letters carry the
    /// negated value; τ carries zero.
    pub fn base_phi(&self, letter: Letter) -> FieldValue {
        match letter {
            Letter::G1 | Letter::G2 => self.params.t().clone(),
            Letter::G1Inv | Letter::G2Inv => self.lambda.clone(),
            Letter::Tau => FieldValue::zero(self.params.spec()),
        }
    }

    /// The area cocycle: `sign(AB∞ - A∞)`, zero when either term is `∞`.
    pub fn epsilon(&self, a: &Word, b: &Word) -> i32 {
        let ma = self.params.word_matrix(a);
        let mb = self.params.word_matrix(b);
        self.epsilon_matrices(&ma, &mb)
    }

    fn epsilon_matrices(&self, ma: &ProjMatrix, mb: &ProjMatrix) -> i32 {
        let a_inf = ma.apply(&ProjPoint::Infinity);
        let Some(a_inf) = a_inf.finite() else {
            return 0;
        };
        let ab_inf = ma.mul(mb).apply(&ProjPoint::Infinity);
        let Some(ab_inf) = ab_inf.finite() else {
            return 0;
        };
        ab_inf.sub(a_inf).sign()
    }

    /// Evaluates `φ` on a freely reduced word in `O(len)` matrix products,
    /// accumulating suffix matrices right to left.
    pub fn phi(&self, w: &Word) -> FieldValue {
        let spec = self.params.spec();
        let t = self.params.t();
        let mut acc = FieldValue::zero(spec);
        let mut suffix = ProjMatrix::identity(spec);
        for letter in w.letters().iter().rev() {
            let lm = self.params.letter_matrix(*letter);
            suffix = lm.mul(&suffix);
            acc = acc.add(&self.base_phi(*letter));
            let l_inf = lm.apply(&ProjPoint::Infinity);
            let s_inf = suffix.apply(&ProjPoint::Infinity);
            if let (Some(l_inf), Some(s_inf)) = (l_inf.finite(), s_inf.finite()) {
                match s_inf.sub(l_inf).sign() {
                    1 => acc = acc.add(t),
                    -1 => acc = acc.sub(t),
                    _ => {}
                }
            }
        }
        acc
    }

    /// `S(w) = φ(w) - χ(matrix of w)`; requires `w(∞) ≠ ∞`.
    ///
    /// Invariant under right-appending of parabolic words, so on witnesses
    /// in `Δ` the value depends only on the cusp `w(∞)`.
    pub fn symbol(&self, w: &Word) -> Result<FieldValue, CochainError> {
        let matrix = self.params.word_matrix(w);
        self.symbol_with_matrix(w, &matrix)
    }

    /// As [`CochainContext::symbol`], for callers that already hold the
    /// matrix of `w`.
    pub fn symbol_with_matrix(
        &self,
        w: &Word,
        matrix: &ProjMatrix,
    ) -> Result<FieldValue, CochainError> {
        debug_assert_eq!(self.params.word_matrix(w), *matrix, "matrix must witness w");
        let chi_value = chi(matrix)?;
        Ok(self.phi(w).sub(&chi_value))
    }
}

/// `χ(M) = (M₁₁ + M₂₂)/M₂₁`, defined off the stabilizer of `∞`.
///
/// Scalar-invariant, hence well defined on the projective representative,
/// and satisfies `χ(M·[[1, k], [0, 1]]) = χ(M) + k`.
pub fn chi(m: &ProjMatrix) -> Result<FieldValue, CochainError> {
    if m.m21().is_zero() {
        return Err(CochainError::StabilizesInfinity);
    }
    Ok(m.m11().add(m.m22()).div(m.m21()))
}
