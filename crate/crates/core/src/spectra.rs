//! Ordered Schmidt coefficient vectors and their algebra.
//!
//! Every bipartite pure state admits a Schmidt decomposition
//! `|ψ⟩ = Σ_i √α_i |i_A⟩|i_B⟩` with `α_1 ≥ α_2 ≥ … ≥ α_n > 0` and
//! `Σ α_i = 1`. For questions of local convertibility the basis labels are
//! irrelevant: the ordered spectrum `(α_1, …, α_n)` carries all the
//! information. This module provides the validated container for such
//! spectra, the sorted tensor product (the spectrum of a joint state
//! `|ψ⟩⊗|φ⟩`), the entanglement entropy, and maximally entangled reference
//! states.
//!
//! Two numeric modes are available through the [`Coefficient`] trait:
//! `f64` for everyday work, and arbitrary-precision rationals
//! ([`RationalSpectrum`]) for exact verification of boundary cases —
//! majorization verdicts at ties must not depend on rounding. Float
//! spectra must sum to 1 within [`EPS_NORM`] and are compared with
//! [`EPS_CMP`] slack; rational spectra use zero tolerance everywhere.
//!
//! Trailing zero coefficients are stripped at construction, so a stored
//! spectrum is always strictly positive. Comparisons between spectra of
//! different Schmidt rank re-introduce zeros by implicit padding at the
//! comparison site, never in the stored data.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};
use serde::de::{Deserialize, Deserializer, Error as DeError};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

/// Largest tolerated deviation of a float spectrum's sum from 1.
pub const EPS_NORM: f64 = 1e-9;
/// Slack used for element and prefix-sum comparisons in float mode.
pub const EPS_CMP: f64 = 1e-12;

/// Numeric field a spectrum can be built over.
///
/// Implemented for `f64` (with [`EPS_NORM`]/[`EPS_CMP`] tolerances) and for
/// [`BigRational`] (exact arithmetic, zero tolerances). The trait collects
/// just enough structure for the majorization and catalysis layers to be
/// written once for both modes.
pub trait Coefficient:
    Clone + PartialOrd + Num + Signed + FromPrimitive + fmt::Debug + fmt::Display
{
    /// Slack for individual comparisons (prefix sums, element equality).
    fn cmp_slack() -> Self;
    /// Slack for the Σ = 1 normalization check.
    fn norm_slack() -> Self;
    /// Finiteness guard; rationals are always finite.
    fn is_finite_value(&self) -> bool;
    /// Lossy view of the value, for entropy and diagnostics.
    fn to_f64_lossy(&self) -> f64;
}

impl Coefficient for f64 {
    fn cmp_slack() -> Self {
        EPS_CMP
    }
    fn norm_slack() -> Self {
        EPS_NORM
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Coefficient for BigRational {
    fn cmp_slack() -> Self {
        BigRational::zero()
    }
    fn norm_slack() -> Self {
        BigRational::zero()
    }
    fn is_finite_value(&self) -> bool {
        true
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// What can go wrong while building or parsing a spectrum.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    /// No coefficients were supplied at all.
    #[error("spectrum needs at least one coefficient")]
    EmptyInput,
    /// A coefficient was NaN or infinite.
    #[error("coefficient at position {index} is not finite")]
    NonFinite { index: usize },
    /// A coefficient was negative.
    #[error("coefficient at position {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },
    /// The coefficients do not sum to 1 within tolerance.
    #[error("coefficients sum to {sum} (off from 1 by {deviation:e})")]
    NotNormalized { sum: f64, deviation: f64 },
    /// A maximally entangled state of zero levels was requested.
    #[error("a maximally entangled state needs at least one level")]
    ZeroDimension,
    /// A string could not be read as a decimal or a ratio.
    #[error("cannot parse {text:?} as a rational coefficient")]
    ParseRational { text: String },
}

/// An ordered Schmidt spectrum: strictly positive coefficients in
/// non-increasing order, summing to 1 within the mode's tolerance.
///
/// The only way to obtain one is through a validating constructor
/// ([`Spectrum::new`], [`Spectrum::normalized`]) or an operation that
/// preserves the invariants ([`tensor_sorted`], [`maximally_entangled`]),
/// so every `Spectrum` in circulation is well-formed.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    coeffs: Vec<T>,
}

/// Double-precision spectrum — the default working mode.
pub type SchmidtSpectrum = Spectrum<f64>;
/// Exact-rational spectrum for boundary-case verification.
pub type RationalSpectrum = Spectrum<BigRational>;

impl<T: Coefficient> Spectrum<T> {
    /// Builds a spectrum from coefficients in any order.
    ///
    /// Sorts descending, strips trailing zeros, and validates: entries must
    /// be finite and non-negative with at least one positive, and the sum
    /// must equal 1 within [`Coefficient::norm_slack`]. There is no silent
    /// rescaling — use [`Spectrum::normalized`] when the input is a shape
    /// rather than a distribution.
    pub fn new(values: Vec<T>) -> Result<Self, SpectrumError> {
        validate_entries(&values)?;
        let spectrum = Self::finish(values);
        let sum = spectrum
            .coeffs
            .iter()
            .fold(T::zero(), |s, c| s + c.clone());
        let deviation = sum.clone() - T::one();
        if deviation.abs() > T::norm_slack() {
            return Err(SpectrumError::NotNormalized {
                sum: sum.to_f64_lossy(),
                deviation: deviation.to_f64_lossy(),
            });
        }
        Ok(spectrum)
    }

    /// Builds a spectrum from non-negative weights, rescaling them to sum
    /// to 1 first.
    pub fn normalized(values: Vec<T>) -> Result<Self, SpectrumError> {
        validate_entries(&values)?;
        let sum = values.iter().fold(T::zero(), |s, c| s + c.clone());
        if sum <= T::zero() {
            return Err(SpectrumError::NotNormalized {
                sum: 0.0,
                deviation: -1.0,
            });
        }
        let scaled = values.into_iter().map(|c| c / sum.clone()).collect();
        Ok(Self::finish(scaled))
    }

    /// Sorts descending and strips trailing zeros; entries must already be
    /// validated.
    fn finish(mut coeffs: Vec<T>) -> Self {
        coeffs.sort_by(|a, b| b.partial_cmp(a).expect("validated coefficients are ordered"));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Spectrum { coeffs }
    }

    /// Wraps coefficients that are already sorted descending, strictly
    /// positive, and normalized — for operations whose outputs satisfy the
    /// invariants by construction.
    pub(crate) fn from_sorted_unchecked(coeffs: Vec<T>) -> Self {
        debug_assert!(!coeffs.is_empty());
        debug_assert!(coeffs.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(coeffs.iter().all(|c| *c > T::zero()));
        Spectrum { coeffs }
    }

    /// The coefficients, largest first.
    pub fn coefficients(&self) -> &[T] {
        &self.coeffs
    }

    /// The Schmidt rank (number of strictly positive coefficients).
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// A rank-1 spectrum describes a product (disentangled) state.
    pub fn is_product(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// The largest coefficient.
    pub fn largest(&self) -> &T {
        &self.coeffs[0]
    }

    /// The smallest stored (strictly positive) coefficient.
    pub fn smallest(&self) -> &T {
        self.coeffs.last().expect("spectra are nonempty")
    }

    /// Element-wise equality after padding the shorter spectrum with zeros,
    /// within the mode's comparison slack.
    pub fn eq_padded(&self, other: &Self) -> bool {
        let len = self.rank().max(other.rank());
        let slack = T::cmp_slack();
        for i in 0..len {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(T::zero);
            if (a - b).abs() > slack {
                return false;
            }
        }
        true
    }

    /// Lossy conversion to the float mode (validates the result, since
    /// extreme values could round to zero).
    pub fn approx_f64(&self) -> Result<SchmidtSpectrum, SpectrumError> {
        SchmidtSpectrum::new(self.coeffs.iter().map(Coefficient::to_f64_lossy).collect())
    }
}

impl RationalSpectrum {
    /// Parses exact coefficients from decimal strings (`"0.5825"`),
    /// ratios (`"1/3"`), or integers (`"1"`), then validates as usual.
    ///
    /// This is the entry point for reproducing decimal fixtures without any
    /// rounding at all.
    pub fn from_decimal_strs(values: &[&str]) -> Result<Self, SpectrumError> {
        let parsed = values
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()?;
        Spectrum::new(parsed)
    }
}

fn parse_rational(text: &str) -> Result<BigRational, SpectrumError> {
    let err = || SpectrumError::ParseRational {
        text: text.to_string(),
    };
    let t = text.trim();
    if let Some((int, frac)) = t.split_once('.') {
        if frac.contains(['/', '.', '-', '+']) {
            return Err(err());
        }
        let digits = format!("{int}{frac}");
        let numer = BigInt::from_str(&digits).map_err(|_| err())?;
        let denom = BigInt::from(10u8).pow(frac.len() as u32);
        Ok(BigRational::new(numer, denom))
    } else {
        BigRational::from_str(t).map_err(|_| err())
    }
}

fn validate_entries<T: Coefficient>(values: &[T]) -> Result<(), SpectrumError> {
    if values.is_empty() {
        return Err(SpectrumError::EmptyInput);
    }
    for (index, v) in values.iter().enumerate() {
        if !v.is_finite_value() {
            return Err(SpectrumError::NonFinite { index });
        }
        if *v < T::zero() {
            return Err(SpectrumError::NegativeEntry {
                index,
                value: v.to_f64_lossy(),
            });
        }
    }
    Ok(())
}

impl<T: Coefficient> fmt::Display for Spectrum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Validating constructor in free-function form; see [`Spectrum::new`].
pub fn make_spectrum<T: Coefficient>(values: Vec<T>) -> Result<Spectrum<T>, SpectrumError> {
    Spectrum::new(values)
}

/// The spectrum of a joint state: all pairwise products `a_i·b_j`, sorted
/// in non-increasing order. Length is `rank(a)·rank(b)` and the sum is
/// again 1 (exactly in rational mode).
pub fn tensor_sorted<T: Coefficient>(a: &Spectrum<T>, b: &Spectrum<T>) -> Spectrum<T> {
    let mut products = Vec::with_capacity(a.rank() * b.rank());
    for ai in a.coefficients() {
        for bj in b.coefficients() {
            products.push(ai.clone() * bj.clone());
        }
    }
    products.sort_by(|p, q| q.partial_cmp(p).expect("products of finite coefficients"));
    Spectrum::from_sorted_unchecked(products)
}

/// The maximally entangled spectrum of `p` levels: `(1/p, …, 1/p)`.
pub fn maximally_entangled<T: Coefficient>(p: usize) -> Result<Spectrum<T>, SpectrumError> {
    if p == 0 {
        return Err(SpectrumError::ZeroDimension);
    }
    let value = T::one() / T::from_usize(p).expect("level count fits the coefficient type");
    Ok(Spectrum::from_sorted_unchecked(vec![value; p]))
}

/// Entanglement entropy −Σ α_i ln α_i in nats.
pub fn entropy<T: Coefficient>(x: &Spectrum<T>) -> f64 {
    -x.coefficients()
        .iter()
        .map(|c| {
            let p = c.to_f64_lossy();
            p * p.ln()
        })
        .sum::<f64>()
}

/// Entanglement entropy in ebits (nats divided by ln 2).
pub fn entropy_ebits<T: Coefficient>(x: &Spectrum<T>) -> f64 {
    entropy(x) / std::f64::consts::LN_2
}

// The on-disk shape is either {"coefficients": [...]} or a bare array;
// both deserialize through the validating constructor, so a parsed
// spectrum is as trustworthy as a constructed one.

impl Serialize for Spectrum<f64> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Spectrum", 1)?;
        s.serialize_field("coefficients", &self.coeffs)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for Spectrum<f64> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Wrapped { coefficients: Vec<f64> },
            Bare(Vec<f64>),
        }
        let values = match Repr::deserialize(deserializer)? {
            Repr::Wrapped { coefficients } => coefficients,
            Repr::Bare(values) => values,
        };
        Spectrum::new(values).map_err(DeError::custom)
    }
}
