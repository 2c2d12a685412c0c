//! Majorization order on Schmidt spectra and the optimal conversion
//! probability.
//!
//! Nielsen's criterion: a deterministic local transformation `x → y` exists
//! iff `x` is majorized by `y`, i.e. every prefix sum of `x` is bounded by
//! the matching prefix sum of `y` (spectra padded with zeros to a common
//! length, ties allowed). When majorization fails, the best achievable
//! success probability is Vidal's ratio
//!
//! ```text
//! p_max(x → y) = min_l  E_l(x) / E_l(y),      E_l(ψ) = Σ_{i ≥ l} ψ_i ,
//! ```
//!
//! the minimum running over levels where `E_l(y) > 0`. The tails `E_l` are
//! computed as suffix sums of the stored (strictly positive) coefficients:
//! that makes `E_l` exactly zero beyond the Schmidt rank instead of leaving
//! a rounding residue, which is what keeps rank comparisons exact even in
//! float mode.

use thiserror::Error;

use crate::spectra::{Coefficient, Spectrum};

/// Errors from the tail accessor.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MajorizationError {
    /// `tail(x, l)` is defined for `1 ≤ l ≤ rank + 1` only.
    #[error("tail index {index} out of range 1..={max}")]
    TailIndexOutOfRange { index: usize, max: usize },
}

/// How a source/target pair relates under deterministic local conversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Identical spectra (up to padding): interconvertible.
    Equivalent,
    /// Source is majorized by target: source → target is deterministic.
    SourceToTarget,
    /// Target is majorized by source: target → source is deterministic.
    TargetToSource,
    /// Neither direction is deterministic.
    Incomparable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Equivalent => "Equivalent",
            Verdict::SourceToTarget => "SourceToTarget",
            Verdict::TargetToSource => "TargetToSource",
            Verdict::Incomparable => "Incomparable",
        })
    }
}

/// Full classification of a pair, with the first failing prefix length in
/// each direction for diagnostics (1-based; `None` when the direction
/// holds).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClassification {
    pub verdict: Verdict,
    /// First `l` at which `Σ_{i≤l} x_i ≤ Σ_{i≤l} y_i` fails.
    pub forward_violation: Option<usize>,
    /// First `l` at which the reverse direction fails.
    pub backward_violation: Option<usize>,
}

/// First prefix length at which `x ≼ y` fails, or `None` when `x` is
/// majorized by `y`. Ties count as satisfied (the inequality is
/// non-strict), and float mode allows [`Coefficient::cmp_slack`] of slack.
pub fn first_violation<T: Coefficient>(x: &Spectrum<T>, y: &Spectrum<T>) -> Option<usize> {
    let len = x.rank().max(y.rank());
    let slack = T::cmp_slack();
    let mut px = T::zero();
    let mut py = T::zero();
    for l in 1..=len {
        if let Some(c) = x.coefficients().get(l - 1) {
            px = px + c.clone();
        }
        if let Some(c) = y.coefficients().get(l - 1) {
            py = py + c.clone();
        }
        if px.clone() - py.clone() > slack {
            return Some(l);
        }
    }
    None
}

/// Nielsen's criterion: true iff `x → y` is possible deterministically,
/// i.e. `x` is majorized by `y` on zero-padded spectra.
pub fn check_majorization<T: Coefficient>(x: &Spectrum<T>, y: &Spectrum<T>) -> bool {
    first_violation(x, y).is_none()
}

/// Runs both majorization directions and labels the pair.
pub fn classify_pair<T: Coefficient>(x: &Spectrum<T>, y: &Spectrum<T>) -> PairClassification {
    let forward_violation = first_violation(x, y);
    let backward_violation = first_violation(y, x);
    let verdict = match (&forward_violation, &backward_violation) {
        (None, None) => Verdict::Equivalent,
        (None, Some(_)) => Verdict::SourceToTarget,
        (Some(_), None) => Verdict::TargetToSource,
        (Some(_), Some(_)) => Verdict::Incomparable,
    };
    PairClassification {
        verdict,
        forward_violation,
        backward_violation,
    }
}

/// Suffix-sum tail with implicit zero padding: `E_1 = 1`, `E_l = Σ_{i≥l}`
/// over whatever coefficients exist, `0` past the rank. No bounds check —
/// this is the form the optimizers iterate with.
pub(crate) fn tail_at<T: Coefficient>(coeffs: &[T], l: usize) -> T {
    debug_assert!(l >= 1);
    if l == 1 {
        return T::one();
    }
    if l > coeffs.len() {
        return T::zero();
    }
    // Summing smallest-first loses nothing in rational mode and slightly
    // less in float mode.
    coeffs[l - 1..]
        .iter()
        .rev()
        .fold(T::zero(), |s, c| s + c.clone())
}

/// The tail quantity `E_l(x) = 1 − Σ_{i<l} x_i`, computed as a suffix sum.
///
/// `E_1 = 1` identically; `E_{rank+1} = 0`. Valid for `1 ≤ l ≤ rank + 1`.
pub fn tail<T: Coefficient>(x: &Spectrum<T>, l: usize) -> Result<T, MajorizationError> {
    if l < 1 || l > x.rank() + 1 {
        return Err(MajorizationError::TailIndexOutOfRange {
            index: l,
            max: x.rank() + 1,
        });
    }
    Ok(tail_at(x.coefficients(), l))
}

/// The greatest success probability of converting `x` into `y` by local
/// operations: `min_l E_l(x)/E_l(y)`.
///
/// Levels with `E_l(y) = 0` are skipped (the ratio is `+∞` there); if some
/// level has `E_l(x) = 0` while `E_l(y) > 0`, the target's Schmidt rank
/// exceeds the source's and the result is 0 — the transformation is
/// impossible with any probability, but the function stays total. The
/// `l = 1` ratio is exactly 1, so the result never exceeds 1, and it
/// equals 1 precisely when `x` is majorized by `y`.
pub fn p_max<T: Coefficient>(x: &Spectrum<T>, y: &Spectrum<T>) -> T {
    let len = x.rank().max(y.rank());
    let mut best = T::one();
    for l in 2..=len {
        let ty = tail_at(y.coefficients(), l);
        if ty.is_zero() {
            continue;
        }
        let ratio = tail_at(x.coefficients(), l) / ty;
        if ratio < best {
            best = ratio;
        }
    }
    best
}
