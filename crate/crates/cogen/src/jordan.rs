//! Classification of Jordan elements and searches for Jordan powers.
//!
//! A non-identity permutation of degree `n ≥ 12` is a *Jordan element* when
//! it matches one of three shapes:
//!
//! 1. a product of exactly two transpositions (cycle type `2²·1^(n−4)`);
//! 2. a single nontrivial cycle fixing at least three points;
//! 3. any permutation whose support has size at most `2(√n − 1)`.
//!
//! Their significance: a primitive subgroup of the symmetric group that
//! contains a Jordan element must contain the full alternating group. The
//! witness builder exploits this by locating Jordan elements inside cyclic
//! groups `⟨x⟩`, so alongside the classifier this module provides
//! [`jordan_power`], which finds the least positive exponent `m` with `x^m`
//! a Jordan element.
//!
//! The definition is stated only for `n ≥ 12`; smaller degrees are rejected
//! outright rather than extrapolated.

use crate::perm::Permutation;
use serde::Serialize;
use thiserror::Error;

/// Errors from the Jordan classifiers.
#[derive(Debug, Error)]
pub enum JordanError {
    /// Jordan elements are only defined for degree at least 12.
    #[error("Jordan classification requires degree >= 12, got {degree}")]
    DegreeTooSmall {
        /// The offending degree.
        degree: u16,
    },
}

/// Which defining clause a Jordan element matched, with its witnessing
/// datum.
///
/// When several clauses apply, the first in the order below wins; the
/// mathematics never needs the distinction, but a fixed precedence keeps
/// reported classifications deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum JordanKind {
    /// Product of exactly two transpositions.
    TwoTranspositions {
        /// The full cycle type, in exponent notation.
        cycle_type: String,
    },
    /// A single nontrivial cycle fixing at least three points.
    CycleFixingThree {
        /// How many points the cycle fixes.
        fixed_points: u16,
    },
    /// Support size at most `2(√n − 1)`, decided exactly as
    /// `(|supp| + 2)² ≤ 4n`.
    SmallSupport {
        /// The support size.
        support_size: u16,
    },
}

/// Classifies `p` as a Jordan element, or `None` when no clause matches.
///
/// Clauses are tried in the order two-transpositions, cycle-fixing-three,
/// small-support, and the first match is reported. The identity never
/// matches (it carries no group-theoretic information, so it is excluded
/// from every clause, including the small-support one its empty support
/// would otherwise satisfy vacuously).
///
/// The square-root bound is evaluated in exact integer arithmetic:
/// `|supp| ≤ 2(√n − 1)` if and only if `(|supp| + 2)² ≤ 4n`.
///
/// # Errors
///
/// [`JordanError::DegreeTooSmall`] when `p` has degree below 12.
pub fn is_jordan(p: &Permutation) -> Result<Option<JordanKind>, JordanError> {
    let n = p.degree();
    if n < 12 {
        return Err(JordanError::DegreeTooSmall { degree: n });
    }
    if p.is_identity() {
        return Ok(None);
    }
    let cycles = p.cycles();
    let support_size = cycles.iter().map(|c| c.len() as u16).sum::<u16>();

    // Clause 1: product of exactly two transpositions.
    if cycles.len() == 2 && cycles.iter().all(|c| c.len() == 2) {
        return Ok(Some(JordanKind::TwoTranspositions {
            cycle_type: p.cycle_type().to_string(),
        }));
    }
    // Clause 2: one nontrivial cycle fixing at least three points.
    if cycles.len() == 1 && n - support_size >= 3 {
        return Ok(Some(JordanKind::CycleFixingThree {
            fixed_points: n - support_size,
        }));
    }
    // Clause 3: support at most 2(√n − 1), via (|supp| + 2)² ≤ 4n.
    let s = u64::from(support_size) + 2;
    if s * s <= 4 * u64::from(n) {
        return Ok(Some(JordanKind::SmallSupport { support_size }));
    }
    Ok(None)
}

/// Finds the least `m` with `1 ≤ m < order(x)` such that `x^m` is a Jordan
/// element, together with its classification, or `None` when no power
/// qualifies.
///
/// # Errors
///
/// [`JordanError::DegreeTooSmall`] when `x` has degree below 12.
pub fn jordan_power(x: &Permutation) -> Result<Option<(u64, JordanKind)>, JordanError> {
    if x.degree() < 12 {
        return Err(JordanError::DegreeTooSmall { degree: x.degree() });
    }
    let order = x.order();
    let mut acc = x.clone();
    for m in 1..order {
        if let Some(kind) = is_jordan(&acc)? {
            return Ok(Some((m, kind)));
        }
        acc = acc
            .compose(x)
            .expect("powers of a permutation share its degree");
    }
    Ok(None)
}
