//! Length values with unit suffixes on the command line.

/// Parse a length like `0.1mm`, `10um`, `10cm` or `1m` into metres.
/// A unit suffix is required; bare numbers are ambiguous and rejected.
pub fn parse_length(text: &str) -> Result<f64, String> {
    let trimmed = text.trim();
    let (number, factor) = if let Some(v) = trimmed.strip_suffix("um") {
        (v, 1e-6)
    } else if let Some(v) = trimmed.strip_suffix("µm") {
        (v, 1e-6)
    } else if let Some(v) = trimmed.strip_suffix("nm") {
        (v, 1e-9)
    } else if let Some(v) = trimmed.strip_suffix("mm") {
        (v, 1e-3)
    } else if let Some(v) = trimmed.strip_suffix("cm") {
        (v, 1e-2)
    } else if let Some(v) = trimmed.strip_suffix('m') {
        (v, 1.0)
    } else {
        return Err(format!(
            "'{trimmed}' needs a length unit suffix (um, mm, cm, m)"
        ));
    };
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| format!("'{number}' is not a number"))?;
    if !value.is_finite() {
        return Err(format!("'{trimmed}' is not finite"));
    }
    Ok(value * factor)
}

pub fn degrees_to_radians(deg: f64) -> f64 {
    deg * std::f64::consts::PI / 180.0
}
