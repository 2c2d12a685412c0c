//! Entanglement transformations of bipartite pure states under local
//! operations and classical communication, driven entirely by ordered
//! Schmidt coefficients.
//!
//! A pure state shared by two parties is captured, for every question this
//! library answers, by its [`Spectrum`]: the squared Schmidt coefficients
//! sorted in non-increasing order. On top of that representation:
//!
//! * [`majorization`] decides deterministic convertibility (`x → y` works
//!   with certainty iff `x` is majorized by `y`) and computes the optimal
//!   conversion probability [`p_max`] when it does not.
//! * [`catalysis`] asks whether borrowing an auxiliary entangled pair —
//!   returned intact — unlocks a forbidden conversion or raises its
//!   probability: quick impossibility gates plus grid searches that
//!   produce re-verifiable witness catalysts.
//! * [`concentration`] optimizes entanglement concentration protocols:
//!   the closed-form uncatalysed optimum, a linear program for the
//!   catalysed case, upper bounds, and a landscape scan over two-level
//!   catalysts.
//! * [`lp`] is the small dense simplex kernel behind the concentration
//!   optimizer, with an independent vertex-enumeration oracle for
//!   cross-checking.
//!
//! Spectra are generic over the coefficient type: `f64` for everyday use
//! and [`num_rational::BigRational`] when a boundary case must be decided
//! exactly (searches and the optimizer stay float-only).
//!
//! ```
//! use elqcc::{classify_pair, find_deterministic_catalyst, make_spectrum, p_max, Verdict};
//!
//! let x = make_spectrum(vec![0.4, 0.4, 0.1, 0.1])?;
//! let y = make_spectrum(vec![0.5, 0.25, 0.25])?;
//!
//! // Neither direction is deterministic, and the best odds are 80%…
//! assert_eq!(classify_pair(&x, &y).verdict, Verdict::Incomparable);
//! assert_eq!(p_max(&x, &y), 0.8);
//!
//! // …yet a two-level catalyst makes the conversion certain.
//! let search = find_deterministic_catalyst(&x, &y, 2, 0.005)?;
//! assert!(search.found);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod catalysis;
pub mod concentration;
pub mod lp;
pub mod majorization;
pub mod numfmt;
pub mod spectra;

pub use catalysis::{
    check_interconvertible_elqcc, enumerate_deterministic_catalysts, find_boost_catalyst,
    find_deterministic_catalyst, gate_incomparable_3x3, gate_lemma1, gate_lemma3, gate_lemma4,
    simplex_grid, CatalysisError, CatalystSearchResult, PruneGate, SearchNote,
};
pub use concentration::{
    bounds, landscape, landscape_csv, optimal_catalysed, optimal_uncatalysed,
    uncatalysed_probabilities, Binding, ConcentrationBounds, ConcentrationError, EcpDistribution,
    LandscapeRow,
};
pub use lp::{LinearProgram, LpError, LpSolution, LpStatus};
pub use majorization::{
    check_majorization, classify_pair, first_violation, p_max, tail, MajorizationError,
    PairClassification, Verdict,
};
pub use spectra::{
    entropy, entropy_ebits, make_spectrum, maximally_entangled, tensor_sorted, Coefficient,
    RationalSpectrum, SchmidtSpectrum, Spectrum, SpectrumError, EPS_CMP, EPS_NORM,
};
