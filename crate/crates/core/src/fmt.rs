//! Shortest round-trip decimal rendering shared by every text export.

/// Shortest decimal string that parses back to exactly `x`.
///
/// Uses scientific notation outside `[1e-5, 1e16)` so large beat
/// frequencies stay readable.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Like [`num`] but renders `None` as an empty field.
pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
