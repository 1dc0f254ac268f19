//! Decimal rendering used by reports and the CLI.

use rug::Float;

/// Decimal string of `x` carrying only the digits its error bound supports.
pub fn decimal(x: &Float, err: f64) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let full = (f64::from(x.prec()) * std::f64::consts::LOG10_2).floor() as i64;
    let digits = if err > 0.0 && err.is_finite() {
        let ratio = (x.to_f64().abs() / err).log10();
        if ratio.is_finite() {
            (ratio.floor() as i64 + 1).clamp(1, full.max(1))
        } else {
            full
        }
    } else if err.is_infinite() {
        1
    } else {
        full
    };
    tidy(&x.to_string_radix(10, Some(digits as usize)))
}

/// Shortest round-trip decimal for a double.
pub fn double(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

// rug prints "1.2340e-5"; normalise the mantissa and exponent.
fn tidy(s: &str) -> String {
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
    if exp == 0 {
        return mant.to_string();
    }
    // Shift small positive exponents into the mantissa for readability.
    if (1..=20).contains(&exp) {
        let neg = mant.starts_with('-');
        let body = mant.trim_start_matches('-');
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        let mut digits = format!("{int}{frac}");
        let point = int.len() + exp as usize;
        while digits.len() < point {
            digits.push('0');
        }
        let (a, b) = digits.split_at(point);
        let out = if b.is_empty() { a.to_string() } else { format!("{a}.{b}") };
        return if neg { format!("-{out}") } else { out };
    }
    format!("{mant}e{exp}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_follow_error_bound() {
        let x = Float::with_val(128, 1.25);
        assert_eq!(decimal(&x, 0.0), "1.25");
        let pi = crate::precision::pi(128);
        assert_eq!(decimal(&pi, 1e-6), "3.141593");
        let big = Float::with_val(128, 12345.5);
        assert_eq!(decimal(&big, 0.1), "12345.5");
        assert_eq!(double(0.5), "0.5");
        assert_eq!(double(1e-9), "1e-9");
    }
}
