//! Height measures for polynomials, curve models, and projective points,
//! and a deterministic height-reduction search over integral model moves.
//!
//! The model height of `y^n = f(x)` is the largest absolute coefficient of
//! the primitive part of `f`.  The scalar content is deliberately ignored:
//! two models that differ only by a scalar twist measure the same, so the
//! reduction below concentrates on the coordinate choices that actually
//! inflate coefficients.
//!
//! [`reduce_model`] walks the graph generated by three kinds of integral
//! substitutions — `x -> x + t` for bounded integer `t`, `x -> -x`, and
//! `x -> 1/x` — always jumping to the best strictly-smaller model found
//! within a bounded number of composed moves, until no improvement exists.
//! "Best" is a total order (height, then degree, then coefficients), so
//! the result is deterministic and the search cannot cycle.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::curve::SuperellipticCurve;
use crate::error::{Error, Result};
use crate::poly::{IntPoly, MobiusMap};

/// Largest absolute coefficient of the primitive part of `f`.
///
/// The content is ignored, so scalar multiples of a polynomial all have
/// the same height.  The zero polynomial has height zero.
pub fn poly_height(f: &IntPoly) -> BigInt {
    f.prim_coeffs()
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

/// Height of a curve model: the height of its defining polynomial.
pub fn curve_height(curve: &SuperellipticCurve) -> BigInt {
    poly_height(curve.f())
}

/// Height of a projective point given by rational coordinates: clear
/// denominators, remove the common integer factor, and take the largest
/// absolute coordinate.
///
/// Errors when no coordinate is nonzero, since such a tuple names no
/// projective point.
pub fn projective_height(coords: &[BigRational]) -> Result<BigInt> {
    if coords.iter().all(|c| c.is_zero()) {
        return Err(Error::InvariantViolation(
            "projective height needs a nonzero coordinate".into(),
        ));
    }
    let lcm = coords
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coords
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    Ok(ints
        .iter()
        .map(|v| (v / &gcd).abs())
        .max()
        .expect("nonempty"))
}

/// One integral change of coordinates applied to a curve model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "lowercase")]
pub enum ModelMove {
    /// `x -> x + t`.
    Translate { t: i64 },
    /// `x -> -x`.
    Negate,
    /// `x -> 1/x`.
    Invert,
}

impl ModelMove {
    pub fn to_mobius(self) -> MobiusMap {
        match self {
            ModelMove::Translate { t } => {
                MobiusMap::translation(&BigRational::from_integer(BigInt::from(t)))
            }
            ModelMove::Negate => MobiusMap::negation(),
            ModelMove::Invert => MobiusMap::inversion(),
        }
    }
}

impl fmt::Display for ModelMove {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelMove::Translate { t } if *t < 0 => write!(out, "x -> x - {}", -t),
            ModelMove::Translate { t } => write!(out, "x -> x + {t}"),
            ModelMove::Negate => write!(out, "x -> -x"),
            ModelMove::Invert => write!(out, "x -> 1/x"),
        }
    }
}

/// Outcome of a height-reduction search.
#[derive(Debug, Clone)]
pub struct ReductionReport {
    /// The model the search started from.
    pub original: SuperellipticCurve,
    /// The best model found; equal to `original` when already minimal.
    pub reduced: SuperellipticCurve,
    /// Moves that carry `original` to `reduced`, in application order.
    pub moves: Vec<ModelMove>,
    /// Height of the original model.
    pub initial_height: BigInt,
    /// Height of the reduced model.
    pub final_height: BigInt,
    /// Height after each accepted improvement; never increasing.
    pub jump_heights: Vec<BigInt>,
}

/// Total order on models: height, then degree, then coefficients from the
/// leading term down (absolute value first, preferring the nonnegative
/// sign), then the scalar content.  Strictly smaller keys are strictly
/// better models.
#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct ModelKey {
    height: BigInt,
    degree: usize,
    coeffs: Vec<(BigInt, u8)>,
    content: (BigInt, BigInt),
}

fn model_key(curve: &SuperellipticCurve) -> ModelKey {
    let f = curve.f();
    let coeffs: Vec<(BigInt, u8)> = f
        .prim_coeffs()
        .iter()
        .rev()
        .map(|c| (c.abs(), u8::from(c.is_negative())))
        .collect();
    let content = f.content_factor();
    ModelKey {
        height: poly_height(f),
        degree: f.deg(),
        coeffs,
        content: (content.numer().clone(), content.denom().clone()),
    }
}

fn fingerprint(curve: &SuperellipticCurve) -> String {
    let f = curve.f();
    let coeffs: Vec<String> = f.prim_coeffs().iter().map(|c| c.to_string()).collect();
    format!("{}|{}|{}", curve.n(), f.content_factor(), coeffs.join(","))
}

/// Deterministic greedy height reduction.
///
/// From the current model the search explores every composition of at
/// most `depth` moves, where a single move is a translation `x -> x + t`
/// with `1 <= |t| <= radius`, the flip `x -> -x`, or the reversal
/// `x -> 1/x`.  If the exploration finds a strictly better model under
/// the total model order, the search jumps to the best one and restarts;
/// otherwise it stops.  The accepted jumps never increase the height, and
/// the result is a fixed point: reducing it again changes nothing.
pub fn reduce_model(curve: &SuperellipticCurve, radius: i64, depth: u32) -> ReductionReport {
    let mut moves = Vec::new();
    for t in -radius..=radius {
        if t != 0 {
            moves.push(ModelMove::Translate { t });
        }
    }
    moves.push(ModelMove::Negate);
    moves.push(ModelMove::Invert);

    let initial_height = curve_height(curve);
    let mut current = curve.clone();
    let mut trail: Vec<ModelMove> = Vec::new();
    let mut jump_heights: Vec<BigInt> = Vec::new();

    while let Some((next, path)) = best_within(&current, &moves, depth) {
        trail.extend(path);
        jump_heights.push(curve_height(&next));
        current = next;
    }

    ReductionReport {
        original: curve.clone(),
        reduced: current.clone(),
        moves: trail,
        initial_height,
        final_height: curve_height(&current),
        jump_heights,
    }
}

/// Best strictly-improving model reachable from `start` within `depth`
/// composed moves, together with the move path, if any improvement exists.
fn best_within(
    start: &SuperellipticCurve,
    moves: &[ModelMove],
    depth: u32,
) -> Option<(SuperellipticCurve, Vec<ModelMove>)> {
    let start_key = model_key(start);
    let mut visited: BTreeSet<String> = BTreeSet::new();
    visited.insert(fingerprint(start));
    let mut frontier: Vec<(SuperellipticCurve, Vec<ModelMove>)> = vec![(start.clone(), Vec::new())];
    let mut best: Option<(ModelKey, SuperellipticCurve, Vec<ModelMove>)> = None;

    for _ in 0..depth {
        let mut next_frontier = Vec::new();
        for (model, path) in &frontier {
            for &mv in moves {
                let Ok(next) = model.apply_transform_unchecked(&mv.to_mobius()) else {
                    continue;
                };
                if !visited.insert(fingerprint(&next)) {
                    continue;
                }
                let key = model_key(&next);
                let mut full_path = path.clone();
                full_path.push(mv);
                if key < start_key && best.as_ref().is_none_or(|(bk, _, _)| key < *bk) {
                    best = Some((key, next.clone(), full_path.clone()));
                }
                next_frontier.push((next, full_path));
            }
        }
        frontier = next_frontier;
    }
    best.map(|(_, model, path)| (model, path))
}
