//! Locale-independent number formatting with a fixed count of significant
//! digits, used by every JSON and CSV writer in the crate.

use serde::Serializer;

/// Formats like C's `%.{digits}g`: shortest of fixed or scientific
/// notation, trailing zeros removed, `.` as decimal separator.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".to_string() } else { "-inf".to_string() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() {
        return x;
    }
    fmt_sig(x, digits).parse().unwrap_or(x)
}

pub fn ser_sig12<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x, 12))
}

pub fn ser_sig12_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&round_sig(*v, 12)),
        None => s.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(fmt_sig(0.950067184539123, 12), "0.950067184539");
        assert_eq!(fmt_sig(2.0, 12), "2");
        assert_eq!(fmt_sig(-1.0 / 3.0, 12), "-0.333333333333");
        assert_eq!(fmt_sig(1.5e-7, 12), "1.5e-7");
        assert_eq!(fmt_sig(123456789012345.0, 12), "1.23456789012e14");
        assert_eq!(fmt_sig(0.0001, 12), "0.0001");
        assert_eq!(fmt_sig(9.9999999999999e5, 12), "1000000");
        assert_eq!(fmt_sig(0.0, 12), "0");
    }

    #[test]
    fn rounding() {
        assert_eq!(round_sig(1.0 / 3.0, 3), 0.333);
        assert_eq!(round_sig(f64::INFINITY, 12), f64::INFINITY);
    }
}
