//! Entanglement concentration: converting one partially entangled state
//! into maximally entangled states of various sizes.
//!
//! A concentration protocol applied to a rank-`n` state produces the
//! `m`-level maximally entangled state with probability `p_m` (`m = 1` is
//! the total-loss outcome — everything entangled is gone, catalyst
//! included). The figure of merit is the expected yield
//! `⟨E⟩ = Σ p_m ln m`, reported in both nats and ebits.
//!
//! * [`optimal_uncatalysed`] — the closed-form optimum
//!   `p_m = m(α_m − α_{m+1})`, no auxiliary state involved.
//! * [`optimal_catalysed`] — the best distribution achievable when the
//!   parties also hold a catalyst spectrum: a linear program whose rows
//!   are the average-tail constraints `Σ_m p_m E_l(target_m) ≤ E_l(x ⊗ c)`
//!   for every tail index `l`, where outcome `m ≥ 2` keeps the catalyst
//!   (`target_m = φ_m ⊗ c`) and outcome 1 is a bare product state.
//! * [`bounds`] — two upper bounds on any catalysed yield: the cap
//!   `B = n·α_n·ln n + (1 − n·α_n)·ln(n−1)` forced by the tail-ratio
//!   no-boost rule, and the source entropy.
//! * [`landscape`] — ⟨E⟩ as a function of a two-level catalyst's largest
//!   coefficient, for charting where catalysts actually help.
//!
//! Everything here is float-only: the optimizer is numeric, and the LP
//! kernel re-verifies each solution against the original constraints.

use thiserror::Error;

use crate::lp::{solve, LinearProgram, LpStatus, EPS_FEAS};
use crate::majorization::tail_at;
use crate::numfmt::sig9;
use crate::spectra::{entropy, maximally_entangled, tensor_sorted, Coefficient, SchmidtSpectrum, Spectrum};

/// Which of the two concentration bounds is the smaller (binding) one.
/// Ties go to `BoundB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binding {
    BoundB,
    Entropy,
}

impl std::fmt::Display for Binding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Binding::BoundB => "B",
            Binding::Entropy => "entropy",
        })
    }
}

/// The two upper bounds on catalysed concentration yield, in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationBounds {
    /// `B = n·α_n·ln n + (1 − n·α_n)·ln(n−1)`.
    pub bound_b_nats: f64,
    /// Shannon entropy of the source spectrum.
    pub entropy_nats: f64,
    /// Which bound binds.
    pub binding: Binding,
}

/// An outcome distribution of a concentration protocol together with its
/// expected yield. `probabilities[m-1]` is the chance of ending in the
/// `m`-level maximally entangled state; the length equals the source rank.
#[derive(Debug, Clone, PartialEq)]
pub struct EcpDistribution {
    pub probabilities: Vec<f64>,
    pub expected_entanglement_nats: f64,
    pub expected_entanglement_ebits: f64,
}

/// One landscape sample: the best catalysed yield for the two-level
/// catalyst `(β_1, 1 − β_1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandscapeRow {
    pub beta1: f64,
    pub e_nats: f64,
    pub e_ebits: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConcentrationError {
    /// Rank-1 states have nothing to concentrate and make `ln(n−1)`
    /// meaningless.
    #[error("concentration bounds need rank at least 2")]
    RankTooSmall,
    /// A landscape needs at least two intervals to have an interior.
    #[error("landscape needs steps >= 2, got {steps}")]
    InvalidSteps { steps: usize },
    /// Propagated LP infeasibility. Cannot occur for valid spectra — the
    /// total-loss distribution is always feasible — but typed anyway.
    #[error("concentration program reported infeasible")]
    Infeasible,
    /// A landscape row failed the independent feasibility re-check.
    #[error("landscape row at beta1={beta1} failed the feasibility re-check")]
    FeasibilityCheck { beta1: f64 },
}

/// Closed-form optimal uncatalysed outcome probabilities,
/// `p_m = m·(α_m − α_{m+1})` with `α_{n+1} = 0`. Generic so the exact
/// mode can certify the arithmetic; [`optimal_uncatalysed`] is the f64
/// convenience wrapper.
pub fn uncatalysed_probabilities<T: Coefficient>(x: &Spectrum<T>) -> Vec<T> {
    let coeffs = x.coefficients();
    let n = coeffs.len();
    (1..=n)
        .map(|m| {
            let next = if m < n { coeffs[m].clone() } else { T::zero() };
            T::from_usize(m).expect("small integer fits any coefficient type")
                * (coeffs[m - 1].clone() - next)
        })
        .collect()
}

fn distribution_from(probabilities: Vec<f64>) -> EcpDistribution {
    // LP solutions may carry ±1e-16 noise on zero entries.
    let probabilities: Vec<f64> = probabilities.into_iter().map(|p| p.max(0.0)).collect();
    let nats: f64 = probabilities
        .iter()
        .enumerate()
        .map(|(i, p)| p * ((i + 1) as f64).ln())
        .sum();
    EcpDistribution {
        probabilities,
        expected_entanglement_nats: nats,
        expected_entanglement_ebits: nats / std::f64::consts::LN_2,
    }
}

/// The best uncatalysed concentration of `x`.
pub fn optimal_uncatalysed(x: &SchmidtSpectrum) -> EcpDistribution {
    distribution_from(uncatalysed_probabilities(x))
}

/// Builds the catalysed-concentration LP for `x` with `catalyst`:
/// maximize `Σ p_m ln m` subject to the average-tail constraint at every
/// `l` in `1..=rank(x)·rank(catalyst)`. Row `l = 1` reduces to `Σ p ≤ 1`
/// and many others repeat; the redundancy is harmless at this scale.
fn catalysed_program(x: &SchmidtSpectrum, catalyst: &SchmidtSpectrum) -> LinearProgram {
    let n = x.rank();
    let len = n * catalyst.rank();
    let source = tensor_sorted(x, catalyst);

    let targets: Vec<SchmidtSpectrum> = (1..=n)
        .map(|m| {
            if m == 1 {
                // Total loss: no entanglement survives, catalyst included.
                Spectrum::from_sorted_unchecked(vec![1.0])
            } else {
                tensor_sorted(
                    &maximally_entangled::<f64>(m).expect("m >= 2"),
                    catalyst,
                )
            }
        })
        .collect();

    let objective: Vec<f64> = (1..=n).map(|m| (m as f64).ln()).collect();
    let mut rows = Vec::with_capacity(len);
    let mut bounds = Vec::with_capacity(len);
    for l in 1..=len {
        rows.push(
            targets
                .iter()
                .map(|t| tail_at(t.coefficients(), l))
                .collect(),
        );
        bounds.push(tail_at(source.coefficients(), l));
    }
    LinearProgram::new(objective, rows, bounds).expect("constructed program is well-formed")
}

/// The best concentration of `x` in the presence of `catalyst` (returned
/// intact in every outcome except total loss). A rank-1 catalyst
/// reproduces [`optimal_uncatalysed`].
pub fn optimal_catalysed(
    x: &SchmidtSpectrum,
    catalyst: &SchmidtSpectrum,
) -> Result<EcpDistribution, ConcentrationError> {
    let solution = solve(&catalysed_program(x, catalyst));
    if solution.status == LpStatus::Infeasible {
        return Err(ConcentrationError::Infeasible);
    }
    Ok(distribution_from(solution.solution))
}

/// Upper bounds on any catalysed yield of `x`, in nats.
pub fn bounds(x: &SchmidtSpectrum) -> Result<ConcentrationBounds, ConcentrationError> {
    let n = x.rank();
    if n < 2 {
        return Err(ConcentrationError::RankTooSmall);
    }
    // The n-level outcome probability is capped at n·α_n; everything else
    // is at best (n−1)-level entanglement.
    let weight = n as f64 * x.smallest();
    let bound_b_nats = weight * (n as f64).ln() + (1.0 - weight) * ((n - 1) as f64).ln();
    let entropy_nats = entropy(x);
    let binding = if bound_b_nats <= entropy_nats {
        Binding::BoundB
    } else {
        Binding::Entropy
    };
    Ok(ConcentrationBounds {
        bound_b_nats,
        entropy_nats,
        binding,
    })
}

/// Sweeps two-level catalysts `(β_1, 1 − β_1)` over `steps + 1` evenly
/// spaced `β_1` values in `[0.5, 1.0]`, endpoints included (the flat and
/// product catalysts anchor the curve at the uncatalysed value). Each
/// row's distribution is re-checked against the row's own constraints
/// before the value is reported.
pub fn landscape(
    x: &SchmidtSpectrum,
    steps: usize,
) -> Result<Vec<LandscapeRow>, ConcentrationError> {
    if steps < 2 {
        return Err(ConcentrationError::InvalidSteps { steps });
    }
    let mut rows = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let beta1 = 0.5 + 0.5 * (i as f64 / steps as f64);
        let catalyst = Spectrum::new(vec![beta1, 1.0 - beta1])
            .expect("two-level catalyst coefficients are valid by construction");
        let program = catalysed_program(x, &catalyst);
        let solution = solve(&program);
        if solution.status == LpStatus::Infeasible {
            return Err(ConcentrationError::Infeasible);
        }
        if !program.is_feasible(&solution.solution, EPS_FEAS) {
            return Err(ConcentrationError::FeasibilityCheck { beta1 });
        }
        let dist = distribution_from(solution.solution);
        rows.push(LandscapeRow {
            beta1,
            e_nats: dist.expected_entanglement_nats,
            e_ebits: dist.expected_entanglement_ebits,
        });
    }
    Ok(rows)
}

/// Renders landscape rows as CSV with header `beta1,beta2,E_nats,E_ebits`
/// and 9-significant-digit values.
pub fn landscape_csv(rows: &[LandscapeRow]) -> String {
    let mut out = String::from("beta1,beta2,E_nats,E_ebits\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            sig9(row.beta1),
            sig9(1.0 - row.beta1),
            sig9(row.e_nats),
            sig9(row.e_ebits)
        ));
    }
    out
}
