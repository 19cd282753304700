//! Locale-free number formatting.

/// `%.9g`: nine significant digits, fixed notation for exponents in `[-5, 9)`, trailing zeros
/// removed.
pub fn sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let s = format!("{:.8e}", x.abs());
    let (mantissa, exp) = s.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if x < 0.0 { "-" } else { "" };

    if !(-4..9).contains(&exp) {
        let frac = digits[1..].trim_end_matches('0');
        let dot = if frac.is_empty() { "" } else { "." };
        let esign = if exp < 0 { '-' } else { '+' };
        return format!("{sign}{}{dot}{frac}e{esign}{:02}", &digits[..1], exp.abs());
    }
    let (int, frac) = if exp >= 0 {
        let split = exp as usize + 1;
        (digits[..split].to_string(), digits[split..].to_string())
    } else {
        (
            "0".to_string(),
            format!("{}{}", "0".repeat((-exp - 1) as usize), digits),
        )
    };
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// [`sig9`] or an empty field.
pub fn sig9_opt(x: Option<f64>) -> String {
    x.map(sig9).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig9(10.98324859), "10.9832486");
        assert_eq!(sig9(61.2854372), "61.2854372");
        assert_eq!(sig9(0.00000018), "1.8e-07");
        assert_eq!(sig9(0.0000123456789), "1.23456789e-05");
        assert_eq!(sig9(0.000123456789), "0.000123456789");
        assert_eq!(sig9(-2.5), "-2.5");
        assert_eq!(sig9(123456789.0), "123456789");
        assert_eq!(sig9(1234567890.0), "1.23456789e+09");
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(9.999999999), "10");
        assert_eq!(sig9(f64::NAN), "nan");
    }
}
