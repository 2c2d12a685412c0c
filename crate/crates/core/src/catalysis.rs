//! Catalyst gates and searches.
//!
//! A transformation `x → y` that is forbidden deterministically can become
//! possible when both parties also share an auxiliary entangled pair `c`
//! that the protocol returns intact: `x ⊗ c → y ⊗ c` may satisfy the
//! majorization criterion even though `x → y` does not. The auxiliary
//! state acts as a catalyst — it enables the reaction without being
//! consumed.
//!
//! This module has two layers:
//!
//! * **Gates** ([`gate_lemma1`] … [`gate_lemma4`],
//!   [`check_interconvertible_elqcc`]) are cheap certificates. Each one,
//!   when it fires, *proves* something about every catalyst at once — no
//!   catalyst can help, or no catalyst can raise the conversion
//!   probability — so the searches consult them before touching the grid.
//! * **Searches** ([`find_deterministic_catalyst`],
//!   [`find_boost_catalyst`], [`enumerate_deterministic_catalysts`]) scan
//!   candidate catalyst spectra on a simplex grid. A hit is always
//!   re-verifiable by tensoring and re-checking; a miss is *inconclusive*
//!   unless a gate fired, and the result says which of the two happened.
//!
//! Candidate evaluations share no mutable state, and the grid walk is a
//! fixed deterministic order (lexicographically ascending sorted
//! compositions), so results are reproducible run to run.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::majorization::{check_majorization, classify_pair, p_max, Verdict};
use crate::spectra::{tensor_sorted, Coefficient, SchmidtSpectrum, Spectrum};

/// Pattern-search refinement stops once the transfer step drops below this.
const REFINE_FLOOR: f64 = 1e-7;

/// A boost must beat the baseline by more than this to count as found.
const BOOST_MARGIN: f64 = 1e-9;

/// Which impossibility certificate ended a search early.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneGate {
    /// Interconvertibility: reaching the target deterministically with a
    /// catalyst would force identical spectra, and the pair's verdict
    /// already rules that out.
    Lemma2,
    /// Edge-coefficient conditions: catalysed deterministic conversion
    /// requires `x_1 ≤ y_1` and `x_n ≥ y_n` on padded spectra.
    Lemma3,
    /// Tail-ratio cap: when the bare conversion probability equals
    /// `x_n / y_n`, no catalyst of any dimension can raise it.
    Lemma4,
}

impl std::fmt::Display for PruneGate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PruneGate::Lemma2 => "Lemma2",
            PruneGate::Lemma3 => "Lemma3",
            PruneGate::Lemma4 => "Lemma4",
        })
    }
}

/// Why a search returned without scanning, or what the scan concluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchNote {
    /// A gate proved no catalyst can achieve the goal.
    Pruned(PruneGate),
    /// The bare transformation already succeeds with certainty; there is
    /// nothing for a catalyst to do.
    AlreadyDeterministic,
    /// The grid was scanned without a certificate. This does **not** prove
    /// nonexistence — a finer grid or higher dimension may still succeed.
    GridExhausted,
}

impl std::fmt::Display for SearchNote {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SearchNote::Pruned(gate) => write!(f, "pruned by {gate}"),
            SearchNote::AlreadyDeterministic => f.write_str("already deterministic"),
            SearchNote::GridExhausted => f.write_str("grid exhausted"),
        }
    }
}

/// Outcome of a catalyst search.
///
/// Invariants: `found` implies `catalyst` is present and
/// `achieved_probability` re-evaluates on the tensor products to within
/// 1e-9; `achieved_probability ≥ baseline_probability` always; a search
/// ended by a gate has `found = false` and the gate named in
/// `gate_report`.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalystSearchResult {
    /// Whether the search goal was achieved (a verifying catalyst for the
    /// deterministic search, a strict improvement for the boost search).
    pub found: bool,
    /// The witness catalyst when `found`.
    pub catalyst: Option<SchmidtSpectrum>,
    /// Conversion probability attained: 1.0 for a deterministic hit, the
    /// best catalysed probability for a boost, the baseline otherwise.
    pub achieved_probability: f64,
    /// Conversion probability of the bare pair, with no catalyst.
    pub baseline_probability: f64,
    /// Number of candidate catalysts actually evaluated (gate-skipped
    /// candidates are not counted).
    pub evaluations: u64,
    /// Gate prunes and scan outcomes, in the order they occurred.
    pub gate_report: Vec<SearchNote>,
}

impl CatalystSearchResult {
    /// The gate that pruned this search, if one did.
    pub fn pruned_gate(&self) -> Option<PruneGate> {
        self.gate_report.iter().find_map(|note| match note {
            SearchNote::Pruned(gate) => Some(*gate),
            _ => None,
        })
    }

    fn pruned(gate: PruneGate, baseline: f64) -> Self {
        CatalystSearchResult {
            found: false,
            catalyst: None,
            achieved_probability: baseline,
            baseline_probability: baseline,
            evaluations: 0,
            gate_report: vec![SearchNote::Pruned(gate)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalysisError {
    /// The rank-3 incomparability gate saw a spectrum of the wrong rank.
    #[error("gate requires two rank-3 spectra, got ranks {len_x} and {len_y}")]
    InvalidDimension { len_x: usize, len_y: usize },
    /// The rank-3 incomparability gate only applies to incomparable pairs.
    #[error("gate requires an incomparable pair, but the classification is {verdict}")]
    ComparablePair { verdict: Verdict },
    /// The tail-ratio cap is undefined when the padded target floor is
    /// zero (target rank below the common length).
    #[error("no-boost gate requires the target's padded smallest coefficient to be positive")]
    Lemma4Inapplicable,
    /// Catalysts need at least two levels to carry any entanglement.
    #[error("catalyst dimension must be at least 2, got {dim}")]
    SearchDimension { dim: usize },
    /// Grid pitch outside the supported range.
    #[error("grid step must lie in (0, 0.01], got {step}")]
    GridStep { step: f64 },
}

/// True when the candidate catalyst is flat — all coefficients equal
/// within comparison slack (a rank-1 spectrum counts). Tensoring with a
/// flat spectrum scales every prefix block of the majorization check
/// uniformly, so a flat catalyst can never enable a forbidden conversion;
/// searches skip these candidates outright.
pub fn gate_lemma1<T: Coefficient>(catalyst: &Spectrum<T>) -> bool {
    // Sorted descending, so flatness is just first ≈ last.
    catalyst.largest().clone() - catalyst.smallest().clone() <= T::cmp_slack()
}

/// Necessary edge conditions for catalysed deterministic conversion on
/// zero-padded spectra: `x_1 ≤ y_1` and `x_n ≥ y_n`. Tensoring cannot
/// repair a violation of either (the extreme products `x_1 c_1` and
/// `x_n c_k` keep their order), so `false` means **no** catalyst makes
/// `x → y` deterministic. `true` is necessary, not sufficient.
pub fn gate_lemma3<T: Coefficient>(x: &Spectrum<T>, y: &Spectrum<T>) -> bool {
    let len = x.rank().max(y.rank());
    let slack = T::cmp_slack();
    let top_ok = x.largest().clone() - y.largest().clone() <= slack;
    let floor = |s: &Spectrum<T>| {
        if s.rank() == len {
            s.smallest().clone()
        } else {
            T::zero()
        }
    };
    let bottom_ok = floor(y) - floor(x) <= slack;
    top_ok && bottom_ok
}

/// For an incomparable pair of rank-3 spectra, certifies that no catalyst
/// of any dimension makes the conversion deterministic.
///
/// At equal rank 3 the majorization criterion collapses to exactly the two
/// edge conditions of [`gate_lemma3`] (the middle prefix sum is `1 − x_3`),
/// so an incomparable pair necessarily violates one of them in each
/// direction — the gate therefore returns `true` for every genuinely
/// incomparable rank-3 pair. It is computed rather than hard-wired so the
/// claim stays checkable.
pub fn gate_incomparable_3x3<T: Coefficient>(
    x: &Spectrum<T>,
    y: &Spectrum<T>,
) -> Result<bool, CatalysisError> {
    if x.rank() != 3 || y.rank() != 3 {
        return Err(CatalysisError::InvalidDimension {
            len_x: x.rank(),
            len_y: y.rank(),
        });
    }
    let verdict = classify_pair(x, y).verdict;
    if verdict != Verdict::Incomparable {
        return Err(CatalysisError::ComparablePair { verdict });
    }
    Ok(!gate_lemma3(x, y))
}

/// Tail-ratio cap: fires when the bare conversion probability already
/// equals `x_n / y_n` on padded spectra (ties with other tail ratios
/// included), in which case no catalyst of any dimension can raise the
/// conversion probability above it.
///
/// Requires the padded `y_n` to be positive — when the target has lower
/// rank than the source the ratio is undefined and the gate is
/// inapplicable. (A *higher*-rank target makes both sides zero and the
/// gate correctly fires: rank cannot be raised with any probability.)
pub fn gate_lemma4<T: Coefficient>(
    x: &Spectrum<T>,
    y: &Spectrum<T>,
) -> Result<bool, CatalysisError> {
    let len = x.rank().max(y.rank());
    if y.rank() < len {
        return Err(CatalysisError::Lemma4Inapplicable);
    }
    let x_floor = if x.rank() == len {
        x.smallest().clone()
    } else {
        T::zero()
    };
    // The last tail is the bare coefficient, so when the minimum of the
    // tail ratios sits at the final index this comparison is exact.
    let cap = x_floor / y.smallest().clone();
    let gap = p_max(x, y) - cap;
    Ok(gap.abs() <= T::cmp_slack())
}

/// True iff the two states convert into each other deterministically,
/// which happens exactly when the padded spectra are identical (within
/// comparison slack). Corollary used by the searches: when the *reverse*
/// direction is deterministic and the pair is not equivalent, no catalyst
/// can make the forward direction deterministic too.
pub fn check_interconvertible_elqcc<T: Coefficient>(x: &Spectrum<T>, y: &Spectrum<T>) -> bool {
    x.eq_padded(y)
}

fn validate_search_params(dim: usize, grid_step: f64) -> Result<usize, CatalysisError> {
    if dim < 2 {
        return Err(CatalysisError::SearchDimension { dim });
    }
    if !grid_step.is_finite() || grid_step <= 0.0 || grid_step > 0.01 {
        return Err(CatalysisError::GridStep { step: grid_step });
    }
    Ok((1.0 / grid_step).round() as usize)
}

/// Walks every sorted candidate catalyst on the simplex grid of pitch
/// `grid_step`: spectra `(k_1/N, …, k_dim/N)` with `N = round(1/grid_step)`
/// and integers `k_1 ≥ … ≥ k_dim ≥ 1` summing to `N`. Every candidate has
/// exactly `dim` strictly positive coefficients; the enumeration is
/// lexicographically ascending in `(k_1, k_2, …)`, so "first hit" is
/// well-defined and stable. The visitor may stop the walk early by
/// returning [`ControlFlow::Break`].
///
/// The flat (maximally entangled) point is included when it lies on the
/// grid; searches skip it via [`gate_lemma1`], but exhaustive callers may
/// want to see it.
pub fn simplex_grid<F>(dim: usize, grid_step: f64, mut visit: F) -> Result<(), CatalysisError>
where
    F: FnMut(&SchmidtSpectrum) -> ControlFlow<()>,
{
    let n = validate_search_params(dim, grid_step)?;
    let scale = 1.0 / n as f64;
    let mut parts: Vec<usize> = Vec::with_capacity(dim);

    fn walk<F>(
        remaining: usize,
        parts_left: usize,
        max_part: usize,
        parts: &mut Vec<usize>,
        scale: f64,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&SchmidtSpectrum) -> ControlFlow<()>,
    {
        if parts_left == 1 {
            if remaining >= 1 && remaining <= max_part {
                parts.push(remaining);
                let coeffs: Vec<f64> = parts.iter().map(|&k| k as f64 * scale).collect();
                let candidate = Spectrum::from_sorted_unchecked(coeffs);
                let flow = visit(&candidate);
                parts.pop();
                return flow;
            }
            return ControlFlow::Continue(());
        }
        // k must leave at least 1 per remaining part and at most k each,
        // hence the ceiling-division lower bound.
        let lo = remaining.div_ceil(parts_left);
        let hi = max_part.min(remaining.saturating_sub(parts_left - 1));
        for k in lo..=hi {
            parts.push(k);
            let flow = walk(remaining - k, parts_left - 1, k, parts, scale, visit);
            parts.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }

    let _ = walk(n, dim, n, &mut parts, scale, &mut visit);
    Ok(())
}

/// Exhaustively maps the feasible set: every grid candidate `c` (flat
/// point included) for which `x ⊗ c → y ⊗ c` passes the majorization
/// check, in grid order. Useful for charting how wide a feasibility
/// window is; [`find_deterministic_catalyst`] stops at the first hit
/// instead.
pub fn enumerate_deterministic_catalysts(
    x: &SchmidtSpectrum,
    y: &SchmidtSpectrum,
    dim: usize,
    grid_step: f64,
) -> Result<Vec<SchmidtSpectrum>, CatalysisError> {
    let mut feasible = Vec::new();
    simplex_grid(dim, grid_step, |c| {
        if check_majorization(&tensor_sorted(x, c), &tensor_sorted(y, c)) {
            feasible.push(c.clone());
        }
        ControlFlow::Continue(())
    })?;
    Ok(feasible)
}

/// Searches the simplex grid for a catalyst making `x → y` deterministic.
///
/// Order of business: parameter validation, then the gates, then the scan.
/// A pair whose forward conversion is already deterministic returns a
/// trivial success (the rank-1 "catalyst", which changes nothing); a pair
/// that is deterministic only in reverse is pruned — catalysed conversion
/// would force interconvertibility, hence identical spectra. Incomparable
/// pairs failing the edge conditions are pruned likewise. Only then does
/// the grid get scanned, skipping flat candidates, stopping at the first
/// verifying catalyst.
///
/// `found = false` with a `GridExhausted` note is inconclusive: the grid
/// is finite and says nothing about finer pitches or higher dimensions.
pub fn find_deterministic_catalyst(
    x: &SchmidtSpectrum,
    y: &SchmidtSpectrum,
    dim: usize,
    grid_step: f64,
) -> Result<CatalystSearchResult, CatalysisError> {
    validate_search_params(dim, grid_step)?;
    let baseline = p_max(x, y);

    match classify_pair(x, y).verdict {
        Verdict::Equivalent | Verdict::SourceToTarget => {
            return Ok(CatalystSearchResult {
                found: true,
                catalyst: Some(Spectrum::from_sorted_unchecked(vec![1.0])),
                achieved_probability: 1.0,
                baseline_probability: baseline,
                evaluations: 0,
                gate_report: vec![SearchNote::AlreadyDeterministic],
            });
        }
        Verdict::TargetToSource => {
            return Ok(CatalystSearchResult::pruned(PruneGate::Lemma2, baseline));
        }
        Verdict::Incomparable => {}
    }
    if !gate_lemma3(x, y) {
        return Ok(CatalystSearchResult::pruned(PruneGate::Lemma3, baseline));
    }

    let mut evaluations = 0u64;
    let mut hit: Option<SchmidtSpectrum> = None;
    simplex_grid(dim, grid_step, |c| {
        if gate_lemma1(c) {
            return ControlFlow::Continue(());
        }
        evaluations += 1;
        if check_majorization(&tensor_sorted(x, c), &tensor_sorted(y, c)) {
            hit = Some(c.clone());
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;

    Ok(match hit {
        Some(catalyst) => CatalystSearchResult {
            found: true,
            catalyst: Some(catalyst),
            achieved_probability: 1.0,
            baseline_probability: baseline,
            evaluations,
            gate_report: Vec::new(),
        },
        None => CatalystSearchResult {
            found: false,
            catalyst: None,
            achieved_probability: baseline,
            baseline_probability: baseline,
            evaluations,
            gate_report: vec![SearchNote::GridExhausted],
        },
    })
}

/// Searches the simplex grid for a catalyst maximizing the conversion
/// probability of `x → y`, optionally refining the best grid point.
///
/// The baseline is the bare `p_max(x, y)`; the protocol can always keep a
/// catalyst untouched and run the bare-optimal strategy, so every
/// candidate evaluates to at least the baseline. The tail-ratio cap
/// ([`gate_lemma4`]) is consulted first — when it fires, no catalyst can
/// improve on the baseline and the scan is skipped. When the gate is
/// inapplicable (lower-rank target) the search simply proceeds.
///
/// With `refine`, a derivative-free pattern search polishes the best grid
/// point: all pairwise coefficient transfers at a step starting from half
/// the grid pitch, halving on stagnation until the step drops below 1e-7.
/// The objective is piecewise smooth with kinks where the tensor-product
/// sort order changes, which is why no gradients are used.
pub fn find_boost_catalyst(
    x: &SchmidtSpectrum,
    y: &SchmidtSpectrum,
    dim: usize,
    grid_step: f64,
    refine: bool,
) -> Result<CatalystSearchResult, CatalysisError> {
    validate_search_params(dim, grid_step)?;
    let baseline = p_max(x, y);

    if baseline >= 1.0 - f64::cmp_slack() {
        return Ok(CatalystSearchResult {
            found: false,
            catalyst: None,
            achieved_probability: baseline,
            baseline_probability: baseline,
            evaluations: 0,
            gate_report: vec![SearchNote::AlreadyDeterministic],
        });
    }
    if let Ok(true) = gate_lemma4(x, y) {
        return Ok(CatalystSearchResult::pruned(PruneGate::Lemma4, baseline));
    }

    let mut evaluations = 0u64;
    let mut best: Option<(f64, SchmidtSpectrum)> = None;
    simplex_grid(dim, grid_step, |c| {
        if gate_lemma1(c) {
            return ControlFlow::Continue(());
        }
        evaluations += 1;
        let value = p_max(&tensor_sorted(x, c), &tensor_sorted(y, c));
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, c.clone()));
        }
        ControlFlow::Continue(())
    })?;

    if refine {
        if let Some((value, catalyst)) = best.take() {
            best = Some(refine_boost(x, y, catalyst, value, grid_step, &mut evaluations));
        }
    }

    Ok(match best {
        Some((value, catalyst)) if value > baseline + BOOST_MARGIN => CatalystSearchResult {
            found: true,
            catalyst: Some(catalyst),
            achieved_probability: value,
            baseline_probability: baseline,
            evaluations,
            gate_report: Vec::new(),
        },
        _ => CatalystSearchResult {
            found: false,
            catalyst: None,
            achieved_probability: baseline,
            baseline_probability: baseline,
            evaluations,
            gate_report: vec![SearchNote::GridExhausted],
        },
    })
}

/// Pattern search around `start`: poll all pairwise transfers
/// `β_i += δ, β_j −= δ`, move to the best improving neighbor, halve `δ`
/// when none improves, stop below [`REFINE_FLOOR`]. Transfers preserve the
/// unit sum exactly up to rounding; candidates are re-sorted, and moves
/// that would zero out a coefficient are skipped to stay inside the
/// simplex.
fn refine_boost(
    x: &SchmidtSpectrum,
    y: &SchmidtSpectrum,
    start: SchmidtSpectrum,
    start_value: f64,
    grid_step: f64,
    evaluations: &mut u64,
) -> (f64, SchmidtSpectrum) {
    let mut beta: Vec<f64> = start.coefficients().to_vec();
    let mut best_value = start_value;
    let dim = beta.len();
    let mut step = grid_step * 0.5;

    while step >= REFINE_FLOOR {
        let mut best_move: Option<(f64, Vec<f64>)> = None;
        for i in 0..dim {
            for j in 0..dim {
                if i == j || beta[j] - step <= 0.0 {
                    continue;
                }
                let mut candidate = beta.clone();
                candidate[i] += step;
                candidate[j] -= step;
                candidate.sort_by(|a, b| b.partial_cmp(a).expect("finite coefficients"));
                let c = Spectrum::from_sorted_unchecked(candidate.clone());
                *evaluations += 1;
                let value = p_max(&tensor_sorted(x, &c), &tensor_sorted(y, &c));
                if value > best_value
                    && best_move.as_ref().is_none_or(|(bv, _)| value > *bv)
                {
                    best_move = Some((value, candidate));
                }
            }
        }
        match best_move {
            Some((value, candidate)) => {
                best_value = value;
                beta = candidate;
            }
            None => step *= 0.5,
        }
    }
    (best_value, Spectrum::from_sorted_unchecked(beta))
}
