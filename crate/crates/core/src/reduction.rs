//! Cusp reduction: finds a witness word `W` over `{g₁±1, g₂±1}` with
//! `W(∞) = κ`, then evaluates the generalized Dedekind symbol
//! `S_Δ(κ) = φ(W) - χ(W)`.
//!
//! The engine is a height descent. Each iteration first translates the cusp
//! into the window `[-1, 2t-1)` by a power of the parabolic
//! `P = [[1, 2t], [0, 1]]`, then greedily applies the first side pairing
//! (or pairing composed with `P^±1`) that strictly lowers the height. When
//! no single move descends, a bounded breadth-first search over short
//! `Δ`-words looks for any strict decrease before greedy descent resumes.
//! Success is reaching `∞`; exhausting the step budget or the search yields
//! an inconclusive [`ReductionError::NotReduced`] — the engine never claims
//! that a point is not a cusp.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::cochain::CochainContext;
use crate::exactfield::{FieldSpec, FieldValue, ProjPoint};
use crate::fuchsian::{GroupParams, Letter, ProjMatrix, Word};

/// Tuning knobs for the descent loop.
#[derive(Debug, Clone)]
pub struct ReductionConfig {
    /// Hard cap on applied moves before giving up.
    pub max_steps: usize,
    /// Depth of the breadth-first fallback search (pairing moves per word).
    pub fallback_depth: usize,
    /// Record a per-move trace in the result.
    pub trace: bool,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig {
            max_steps: 10_000,
            fallback_depth: 8,
            trace: false,
        }
    }
}

/// One applied move of the descent, for `--trace` rendering.
#[derive(Debug, Clone)]
pub struct TraceStep {
    /// Token form of the move that was applied to the cusp.
    pub move_token: String,
    /// The cusp after the move.
    pub cusp: ProjPoint,
    /// Height of that cusp.
    pub height: BigUint,
}

/// A successful reduction: `mobius(matrix, ∞)` equals the input cusp
/// exactly, and `word` contains no τ.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub word: Word,
    pub matrix: ProjMatrix,
    pub steps: usize,
    pub trace: Option<Vec<TraceStep>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    /// The step budget ran out or the fallback search found no descent.
    /// Inconclusive by design: the input may not be a cusp of the group
    /// (possible for non-maximally-cusped parameters), or the search
    /// strategy may simply be insufficient; the error does not distinguish.
    #[error(
        "no witness found after {steps} steps (stuck at {last_cusp}); \
         either the point is not a cusp of this group or the descent \
         strategy is insufficient — the outcome is inconclusive"
    )]
    NotReduced { steps: usize, last_cusp: ProjPoint },
}

/// The descent progress measure: `0` at `∞`; the reduced denominator `|q|`
/// for rationals; `max(|a|, |b|, c)` of the canonical coordinates in a
/// quadratic field.
pub fn height(p: &ProjPoint) -> BigUint {
    match p {
        ProjPoint::Infinity => BigUint::zero(),
        ProjPoint::Finite(v) => match v.spec() {
            FieldSpec::Rational => v.denom().magnitude().clone(),
            FieldSpec::Quadratic { .. } => v
                .numer_rational()
                .magnitude()
                .max(v.coeff_radical().magnitude())
                .max(v.denom().magnitude())
                .clone(),
        },
    }
}

const P_LETTERS: [Letter; 4] = [Letter::G1, Letter::G2Inv, Letter::G1Inv, Letter::G2];
const P_INV_LETTERS: [Letter; 4] = [Letter::G2Inv, Letter::G1, Letter::G2, Letter::G1Inv];

fn p_power_letters(k: i64) -> Vec<Letter> {
    let (reps, block) = if k >= 0 {
        (k as usize, P_LETTERS)
    } else {
        ((-k) as usize, P_INV_LETTERS)
    };
    let mut out = Vec::with_capacity(4 * reps);
    for _ in 0..reps {
        out.extend_from_slice(&block);
    }
    out
}

/// A candidate move of the descent: a short element of `Δ` applied to the
/// cusp, with the letters of its inverse ready to append to the witness.
struct Move {
    matrix: ProjMatrix,
    fwd_letters: Vec<Letter>,
    inv_letters: Vec<Letter>,
    /// Index of the move undoing this one, for free-reduction pruning in
    /// the fallback search (only meaningful within the search move list).
    inverse_index: usize,
}

impl Move {
    fn token(&self) -> String {
        Word::from_letters(self.fwd_letters.iter().copied()).tokens()
    }
}

struct Engine<'a> {
    params: &'a GroupParams,
    /// Greedy candidates: the four pairings, then the pairings composed
    /// with `P⁻¹` and with `P` (whose poles cover the right part of the
    /// translation window).
    greedy_moves: Vec<Move>,
    /// Fallback search alphabet: the four pairings plus `P^±1`, so the
    /// search can walk across translates of the window.
    search_moves: Vec<Move>,
}

impl<'a> Engine<'a> {
    fn new(params: &'a GroupParams) -> Self {
        let pairings: [(Vec<Letter>, usize); 4] = [
            (vec![Letter::G1Inv], 2),
            (vec![Letter::G2Inv], 3),
            (vec![Letter::G1], 0),
            (vec![Letter::G2], 1),
        ];
        let make = |letters: &[Letter], inverse_index: usize| Move {
            matrix: params.word_matrix(&Word::from_letters(letters.iter().copied())),
            fwd_letters: letters.to_vec(),
            inv_letters: letters.iter().rev().map(|l| l.inverse()).collect(),
            inverse_index,
        };

        let mut greedy_moves = Vec::with_capacity(12);
        for (letters, inv) in &pairings {
            greedy_moves.push(make(letters, *inv));
        }
        for shift in [-1i64, 1] {
            for (letters, _) in &pairings {
                let mut fwd = letters.clone();
                fwd.extend(p_power_letters(shift));
                greedy_moves.push(make(&fwd, usize::MAX));
            }
        }

        let mut search_moves = Vec::with_capacity(6);
        for (letters, inv) in &pairings {
            search_moves.push(make(letters, *inv));
        }
        search_moves.push(make(&p_power_letters(1), 5));
        search_moves.push(make(&p_power_letters(-1), 4));

        Engine {
            params,
            greedy_moves,
            search_moves,
        }
    }

    /// `k = ⌊(x + 1)/(2t)⌋`, so that `x - 2t·k` lies in `[-1, 2t-1)`.
    fn window_shift(&self, x: &FieldValue) -> (FieldValue, BigInt) {
        let spec = self.params.spec();
        let k = x
            .add(&FieldValue::one(spec))
            .div(self.params.two_t())
            .floor();
        if k.is_zero() {
            return (x.clone(), k);
        }
        let shift = FieldValue::from_integer(k.clone(), spec).mul(self.params.two_t());
        (x.sub(&shift), k)
    }

    /// The descent measure: the height of the window representative of the
    /// `P`-orbit. Translation by `2t` never changes it, so every accepted
    /// move is strict progress regardless of the field.
    fn normalized_height(&self, p: &ProjPoint) -> BigUint {
        match p {
            ProjPoint::Infinity => BigUint::zero(),
            ProjPoint::Finite(x) => {
                let (shifted, _) = self.window_shift(x);
                height(&ProjPoint::Finite(shifted))
            }
        }
    }
}

/// Finds a word `W` in `Δ` with `W(∞) = kappa`.
pub fn reduce_cusp(
    params: &GroupParams,
    kappa: &ProjPoint,
    cfg: &ReductionConfig,
) -> Result<ReductionResult, ReductionError> {
    if let ProjPoint::Finite(v) = kappa {
        assert_eq!(v.spec(), params.spec(), "cusp must lie in the group's field");
    }
    let engine = Engine::new(params);
    let mut cusp = kappa.clone();
    let mut letters: Vec<Letter> = Vec::new();
    let mut steps = 0usize;
    let mut trace: Option<Vec<TraceStep>> = cfg.trace.then(Vec::new);

    let log = |trace: &mut Option<Vec<TraceStep>>, token: String, cusp: &ProjPoint| {
        if let Some(t) = trace {
            t.push(TraceStep {
                move_token: token,
                cusp: cusp.clone(),
                height: height(cusp),
            });
        }
    };

    loop {
        let ProjPoint::Finite(x) = &cusp else {
            break;
        };
        if steps >= cfg.max_steps {
            return Err(ReductionError::NotReduced {
                steps,
                last_cusp: cusp,
            });
        }

        // Stage 1: translate into the window [-1, 2t-1).
        let (shifted, k) = engine.window_shift(x);
        if !k.is_zero() {
            let Some(k) = k.to_i64() else {
                // The witness would need more parabolic letters than we can
                // represent; give up honestly.
                return Err(ReductionError::NotReduced {
                    steps,
                    last_cusp: cusp,
                });
            };
            cusp = ProjPoint::Finite(shifted);
            letters.extend(p_power_letters(k));
            steps += 1;
            log(
                &mut trace,
                Word::from_letters(p_power_letters(-k)).tokens(),
                &cusp,
            );
            continue;
        }

        // cusp is in the window here, so this is also its normalized height
        let h = height(&cusp);

        // Stage 2: a single candidate move. A move landing exactly on ∞
        // (a pole hit) finishes the descent and is taken first; otherwise
        // take the first move that strictly lowers the normalized height.
        let applied: Vec<ProjPoint> = engine
            .greedy_moves
            .iter()
            .map(|mv| mv.matrix.apply(&cusp))
            .collect();
        let chosen = applied
            .iter()
            .position(ProjPoint::is_infinity)
            .or_else(|| {
                applied
                    .iter()
                    .position(|next| engine.normalized_height(next) < h)
            });
        if let Some(i) = chosen {
            let mv = &engine.greedy_moves[i];
            letters.extend_from_slice(&mv.inv_letters);
            steps += 1;
            log(&mut trace, mv.token(), &applied[i]);
            cusp = applied[i].clone();
            continue;
        }

        // Stage 3: bounded breadth-first search for any strict decrease.
        match bfs_descent(&engine, &cusp, &h, cfg.fallback_depth) {
            Some(path) => {
                for (edge_inv_letters, edge_token, state) in path {
                    letters.extend(edge_inv_letters);
                    steps += 1;
                    log(&mut trace, edge_token, &state);
                    cusp = state;
                }
            }
            None => {
                return Err(ReductionError::NotReduced {
                    steps,
                    last_cusp: cusp,
                });
            }
        }
    }

    let word = Word::from_letters(letters);
    let matrix = params.word_matrix(&word);
    // Soundness is unconditional: the witness must reproduce the input.
    assert_eq!(
        matrix.apply(&ProjPoint::Infinity),
        *kappa,
        "reduction produced an unsound witness"
    );
    debug_assert!(!word.contains_tau());
    Ok(ReductionResult {
        word,
        matrix,
        steps,
        trace,
    })
}

type BfsEdge = (Vec<Letter>, String, ProjPoint);

/// Searches products of at most `depth_limit` moves from the search
/// alphabet (pairings and `P^±1`) for a state of normalized height strictly
/// below `goal`, pruning freely reducible paths and revisited states.
/// Returns the edges from the start to the found state, in application
/// order.
fn bfs_descent(
    engine: &Engine<'_>,
    start: &ProjPoint,
    goal: &BigUint,
    depth_limit: usize,
) -> Option<Vec<BfsEdge>> {
    struct Node {
        cusp: ProjPoint,
        parent: usize,
        edge_move: usize,
        depth: usize,
    }

    let mut nodes = vec![Node {
        cusp: start.clone(),
        parent: 0,
        edge_move: usize::MAX,
        depth: 0,
    }];
    let mut visited: HashSet<ProjPoint> = HashSet::new();
    visited.insert(start.clone());
    let mut head = 0;

    while head < nodes.len() {
        let (cusp, depth, last_move, parent_idx) = {
            let n = &nodes[head];
            (n.cusp.clone(), n.depth, n.edge_move, head)
        };
        head += 1;
        if depth >= depth_limit {
            continue;
        }
        let pruned = engine
            .search_moves
            .get(last_move)
            .map_or(usize::MAX, |m| m.inverse_index);
        for (idx, mv) in engine.search_moves.iter().enumerate() {
            if idx == pruned {
                continue;
            }
            let state = mv.matrix.apply(&cusp);
            if !visited.insert(state.clone()) {
                continue;
            }
            nodes.push(Node {
                cusp: state.clone(),
                parent: parent_idx,
                edge_move: idx,
                depth: depth + 1,
            });
            if &engine.normalized_height(&state) < goal {
                // reconstruct the path root -> state
                let mut edges: Vec<BfsEdge> = Vec::new();
                let mut at = nodes.len() - 1;
                while nodes[at].edge_move != usize::MAX {
                    let mv = &engine.search_moves[nodes[at].edge_move];
                    edges.push((mv.inv_letters.clone(), mv.token(), nodes[at].cusp.clone()));
                    at = nodes[at].parent;
                }
                edges.reverse();
                return Some(edges);
            }
        }
    }
    None
}

/// The generalized Dedekind symbol `S_Δ` on `K ∪ {∞}`: `∞ ↦ ∞`, and
/// otherwise `S(W) = φ(W) - χ(W)` for a reduction witness `W`. The value
/// does not depend on the witness found, because witnesses differ by right
/// multiplication by the parabolic subgroup.
pub fn dedekind_symbol(
    params: &GroupParams,
    kappa: &ProjPoint,
    cfg: &ReductionConfig,
) -> Result<ProjPoint, ReductionError> {
    if kappa.is_infinity() {
        return Ok(ProjPoint::Infinity);
    }
    let reduced = reduce_cusp(params, kappa, cfg)?;
    let ctx = CochainContext::new(params);
    let value = ctx
        .symbol_with_matrix(&reduced.word, &reduced.matrix)
        .expect("a witness of a finite cusp cannot stabilize infinity");
    Ok(ProjPoint::Finite(value))
}
