/// Rounds to three significant digits, e.g. `0.0204`, `0.253`, `0.00617`.
pub fn sig3(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.2e}").parse().expect("scientific output parses");
    let exponent = rounded.abs().log10().floor() as i32;
    let decimals = (2 - exponent).max(0) as usize;
    format!("{rounded:.decimals$}")
}
