//! Exact computation of generalized Dedekind symbols on the cusp sets of
//! the once-punctured-torus Fuchsian groups `Δ(u², 2t)`.
//!
//! The pipeline: [`exactfield`] supplies exact arithmetic over `ℚ` or a real
//! quadratic field `ℚ(√d)`; [`fuchsian`] builds the group, its projective
//! matrix representatives and the word machinery; [`cochain`] evaluates the
//! Rademacher-style function `φ`, the entry function `χ` and the symbol
//! `S = φ - χ`; [`reduction`] finds a witness word sending `∞` to a given
//! cusp by height descent and evaluates the symbol `S_Δ` on `K ∪ {∞}`;
//! [`classical`] provides classical Dedekind sums as an independent oracle
//! for the modular case `Δ(1, 6)`.

pub mod classical;
pub mod cochain;
pub mod exactfield;
pub mod fuchsian;
pub mod reduction;


pub use classical::{classical_symbol, cotangent_check, dedekind_sum, sawtooth, ClassicalError, CoprimePair};
pub use cochain::{chi, CochainContext, CochainError};
pub use exactfield::{parse, parse_point, FieldError, FieldSpec, FieldValue, ProjPoint};
pub use fuchsian::{free_reduce, Generators, GroupError, GroupParams, Letter, ProjMatrix, Word};
pub use reduction::{
    dedekind_symbol, height, reduce_cusp, ReductionConfig, ReductionError, ReductionResult,
    TraceStep,
};
