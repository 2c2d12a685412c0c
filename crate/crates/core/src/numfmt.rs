//! Output rounding shared by the CLI and the CSV writer: everything the
//! tools print carries 9 significant decimal digits, so printed numbers
//! re-parse to exactly the rounded value (shortest round-trip rendering).

/// Rounds to 9 significant decimal digits. Zero and non-finite values
/// pass through unchanged.
pub fn round_sig9(value: f64) -> f64 {
    if value == 0.0 || !value.is_finite() {
        return value;
    }
    format!("{value:.8e}")
        .parse()
        .expect("scientific notation re-parses")
}

/// Renders with 9 significant digits, positional notation, no trailing
/// zeros (`0.5` stays `0.5`, not `0.500000000`).
pub fn sig9(value: f64) -> String {
    round_sig9(value).to_string()
}
