/// Rounds to 12 significant digits and prints the shortest decimal that
/// reads back as the rounded value, so trailing zeros are dropped. Values
/// outside `[1e-6, 1e15)` switch to exponent form; zero (either sign)
/// prints as `0`.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if (1e-6..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}
