//! Shared fixtures for the criterion benches.

use elqcc::{SchmidtSpectrum, Spectrum};

/// The incomparable 4×3 pair whose conversion probability is 4/5.
pub fn conversion_pair() -> (SchmidtSpectrum, SchmidtSpectrum) {
    let x = Spectrum::new(vec![0.4, 0.4, 0.1, 0.1]).unwrap();
    let y = Spectrum::new(vec![0.5, 0.25, 0.25]).unwrap();
    (x, y)
}

/// The rank-3 state used throughout the concentration benches.
pub fn concentration_state() -> SchmidtSpectrum {
    Spectrum::new(vec![0.5, 0.3, 0.2]).unwrap()
}

/// A two-level catalyst that improves the concentration rate of
/// [`concentration_state`].
pub fn two_level_catalyst() -> SchmidtSpectrum {
    Spectrum::new(vec![0.5825, 0.4175]).unwrap()
}
